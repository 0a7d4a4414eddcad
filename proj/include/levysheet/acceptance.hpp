#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "exponent.hpp"
#include "fdd.hpp"
#include "gauss.hpp"
#include "jumpsim.hpp"
#include "parallel.hpp"
#include "path.hpp"
#include "stationary.hpp"
#include "verify.hpp"

namespace levysheet::acceptance {

using verify::TestReport;

/// Default master seed of the acceptance suites and the CLI.
inline constexpr std::uint64_t kDefaultSeed = 1;

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<TestReport> checks;
  double seconds = 0.0;

  bool pass() const {
    if (checks.empty()) return false;
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }
};

namespace detail {

inline double uniform(Engine& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

/// Random closed-form path of the given family.
inline DecreasingPath random_path(PathClassTag tag, Engine& rng) {
  switch (tag) {
    case PathClassTag::Horizontal:
      return DecreasingPath::horizontal(uniform(rng, 0.5, 2), uniform(rng, 0, 1), uniform(rng, 0.5, 2), 0.0,
                                        uniform(rng, 1, 3));
    case PathClassTag::Vertical: {
      const double c = uniform(rng, 0.5, 2), hi = uniform(rng, 1, 3);
      return DecreasingPath::vertical(uniform(rng, 0.5, 2), c * hi + uniform(rng, 0.1, 1), c, 0.0, hi);
    }
    case PathClassTag::VThenH: {
      const double s = uniform(rng, 0.5, 1.5), b = uniform(rng, 0.5, 2), c = uniform(rng, 0.5, 2),
                   d = uniform(rng, 0.5, 2);
      return DecreasingPath::vthenh(s, b * d / c, b, c, d, 0.0, s + uniform(rng, 0.5, 1.5));
    }
    case PathClassTag::Linear: {
      const double hi = uniform(rng, 0.5, 2), d = uniform(rng, 0.5, 2);
      return DecreasingPath::linear(uniform(rng, 0, 1), uniform(rng, 0.5, 2), d * hi + uniform(rng, 0, 1), d, 0.0, hi);
    }
    case PathClassTag::Exponential:
      return DecreasingPath::exponential(uniform(rng, 0.5, 2), uniform(rng, 0.5, 2), uniform(rng, 0.2, 2),
                                         uniform(rng, -1, 0), uniform(rng, 0.5, 2));
    case PathClassTag::NonStationary: break;
  }
  throw std::invalid_argument("random_path: no closed form for this tag");
}

inline constexpr std::array<PathClassTag, 5> kClosedForms = {PathClassTag::Horizontal, PathClassTag::Vertical,
                                                             PathClassTag::VThenH, PathClassTag::Linear,
                                                             PathClassTag::Exponential};

inline DecreasingPath random_any_path(Engine& rng) {
  return random_path(kClosedForms[std::uniform_int_distribution<std::size_t>(0, 4)(rng)], rng);
}

/// n strictly increasing times in the domain.
inline std::vector<double> random_times(const Interval& d, std::size_t n, Engine& rng) {
  std::vector<double> t;
  while (t.size() < n) {
    t.clear();
    for (std::size_t k = 0; k < n; ++k) t.push_back(uniform(rng, d.lo, d.hi));
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
  }
  return t;
}

inline double max_xy(const DecreasingPath& p) {
  double m = 0.0;
  for (double t : linspace(p.domain().lo, p.domain().hi, 201)) {
    const auto q = p.eval(t);
    m = std::max(m, q.x * q.y);
  }
  return m;
}

inline std::string label(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

inline TestReport runtime_check(double seconds, double limit) {
  return {"runtime_seconds", seconds, limit, seconds < limit, 0, 0};
}

/// Area of [a0, a1] x [b0, b1] intersected with {u < v}.
inline double area_above_diagonal(double a0, double a1, double b0, double b1) {
  // integrand f(u) = clamp(b1 - max(b0, u), 0, b1 - b0) is piecewise linear with kinks at b0, b1
  auto f = [&](double u) { return std::clamp(b1 - std::max(b0, u), 0.0, b1 - b0); };
  std::vector<double> cuts = {a0, a1};
  for (double k : {b0, b1}) {
    if (k > a0 && k < a1) cuts.push_back(k);
  }
  std::sort(cuts.begin(), cuts.end());
  double s = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i) s += 0.5 * (f(cuts[i - 1]) + f(cuts[i])) * (cuts[i] - cuts[i - 1]);
  return s;
}

}  // namespace detail

// -----------------------------------------------------------------------------
// fdd suite
// -----------------------------------------------------------------------------

/// Classifier on random closed-form paths, functional equation residuals,
/// and rejection of perturbed non-solutions.
inline CriterionResult criterion_1(std::uint64_t seed) {
  CriterionResult r{1, "path classifier and functional equation", {}, 0.0};
  Engine rng(seed);
  std::size_t wrong_tag = 0;
  double worst = 0.0;
  // 4 classes x 20; class (i) split between both orientations
  const std::array<PathClassTag, 5> tags = detail::kClosedForms;
  const std::array<int, 5> counts = {10, 10, 20, 20, 20};
  for (std::size_t k = 0; k < tags.size(); ++k) {
    for (int i = 0; i < counts[k]; ++i) {
      const auto path = detail::random_path(tags[k], rng);
      const auto cls = classify(path);
      if (cls.tag != tags[k]) {
        ++wrong_tag;
        continue;
      }
      const auto& d = path.domain();
      const double scale = detail::max_xy(path);
      for (int j = 0; j < 1000; ++j) {
        double s = detail::uniform(rng, d.lo, d.hi), t = detail::uniform(rng, d.lo, d.hi);
        if (s > t) std::swap(s, t);
        worst = std::max(worst, std::abs(functional_lhs(path, s, t) - phi(cls, t - s)) / scale);
      }
    }
  }
  r.checks.push_back({"classify_tags_wrong", static_cast<double>(wrong_tag), 0.0, wrong_tag == 0, seed, 80});
  r.checks.push_back({"phi_relative_residual", worst, 1e-9, worst < 1e-9, seed, 80000});

  std::size_t accepted = 0;
  for (int i = 0; i < 10; ++i) {
    const double s = detail::uniform(rng, 0.5, 1.5), b = detail::uniform(rng, 0.5, 2), c = detail::uniform(rng, 0.5, 2),
                 d = detail::uniform(rng, 0.5, 2);
    const auto path = DecreasingPath::vthenh(s, 1.1 * b * d / c, b, c, d, 0.0, s + 1.0);
    if (classify(path).tag != PathClassTag::NonStationary) ++accepted;
  }
  for (int i = 0; i < 10; ++i) {
    const double a = detail::uniform(rng, 0.5, 2), b = detail::uniform(rng, 0.5, 2), c = detail::uniform(rng, 0.2, 2);
    std::vector<forms::Knot> knots;
    for (double t : linspace(0.0, 1.0, 40)) knots.push_back({t, a * std::exp(c * t) * (1.0 + 0.2 * t * t), b * std::exp(-c * t)});
    if (classify(DecreasingPath::tabulated(knots)).tag != PathClassTag::NonStationary) ++accepted;
  }
  r.checks.push_back({"perturbed_paths_accepted", static_cast<double>(accepted), 0.0, accepted == 0, seed, 20});
  return r;
}

/// General joint CF with a Brownian triplet against the Gaussian closed form.
inline CriterionResult criterion_2(std::uint64_t seed) {
  CriterionResult r{2, "joint CF of the Brownian sheet vs Gaussian form", {}, 0.0};
  Engine rng(seed);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto path = detail::random_any_path(rng);
    const auto n = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
    const auto d = std::uniform_int_distribution<Eigen::Index>(1, 3)(rng);
    const auto times = detail::random_times(path.domain(), n, rng);
    std::vector<Vec> zs;
    for (std::size_t k = 0; k < n; ++k) {
      Vec z(d);
      for (Eigen::Index c = 0; c < d; ++c) z[c] = detail::uniform(rng, -2, 2);
      zs.push_back(z);
    }
    const auto a = joint_cf(LevyTriplet::brownian(d), path, times, zs);
    const auto b = gauss::gaussian_joint_cf({path, d}, times, zs);
    worst = std::max(worst, std::abs(a - b));
  }
  r.checks.push_back({"max_abs_difference", worst, 1e-12, worst <= 1e-12, seed, 100});
  return r;
}

/// p-rescaling invariance of the joint CF, and the conditional-mean regression.
inline CriterionResult criterion_11(std::uint64_t seed) {
  CriterionResult r{11, "rescaling invariance and conditional mean", {}, 0.0};
  Engine rng(seed);
  const std::vector<LevyTriplet> triplets = {
      LevyTriplet::brownian(1),
      LevyTriplet::compound_poisson(FiniteJumpMeasure::scaled(3.0, JumpDistribution::point_mass(scalar_vec(1.0)))),
      LevyTriplet::from_drift(scalar_vec(0.4), Mat::Constant(1, 1, 0.5),
                              FiniteJumpMeasure::discrete({{scalar_vec(2.0), 1.0}, {scalar_vec(-0.5), 0.7}}))};
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto& tr = triplets[static_cast<std::size_t>(i) % triplets.size()];
    const auto path = detail::random_any_path(rng);
    const double p = detail::uniform(rng, 0.2, 5.0);
    const auto times = detail::random_times(path.domain(), std::uniform_int_distribution<std::size_t>(1, 5)(rng), rng);
    std::vector<double> zs;
    for (std::size_t k = 0; k < times.size(); ++k) zs.push_back(detail::uniform(rng, -2, 2));
    worst = std::max(worst, std::abs(joint_cf(tr, path, times, zs) - joint_cf(tr, path.rescaled(p), times, zs)));
  }
  r.checks.push_back({"rescaling_max_abs_difference", worst, 1e-12, worst <= 1e-12, seed, 100});

  const auto bridge = DecreasingPath::linear(0, 1, 1, 1);
  const std::vector<double> grid = {0.2, 0.5};
  for (std::size_t k = 0; k < 2; ++k) {
    const auto& tr = triplets[k];
    const auto draws = replicate(seed + 11 + k, 100000, [&](Engine& g) {
      const auto s = stationary::simulate_along_path(tr, bridge, grid, g);
      return std::array<double, 2>{s.values[0][0], s.values[1][0]};
    });
    std::vector<double> xs, xt;
    for (const auto& d : draws) {
      xs.push_back(d[0]);
      xt.push_back(d[1]);
    }
    r.checks.push_back(verify::conditional_mean_regression(xs, xt, bridge, 0.2, 0.5, (*tr.mean())[0], seed + 11 + k,
                                                           k == 0 ? "regression_brownian" : "regression_cpp"));
  }
  return r;
}

// -----------------------------------------------------------------------------
// gauss suite
// -----------------------------------------------------------------------------

/// Brownian bridge moments from the sheet on the linear path.
inline CriterionResult criterion_3(std::uint64_t seed) {
  CriterionResult r{3, "Brownian bridge via the sheet", {}, 0.0};
  const gauss::GaussPathLaw law{DecreasingPath::linear(0, 1, 1, 1), 1};
  const std::vector<double> grid = {0.0, 0.3, 0.5, 0.6, 1.0};
  const auto draws = replicate(seed, 100000, [&](Engine& g) {
    const auto s = gauss::simulate(law, grid, g);
    std::array<double, 5> v{};
    for (std::size_t k = 0; k < 5; ++k) v[k] = s.values[k][0];
    return v;
  });
  std::vector<double> v3, v5, v6;
  std::size_t nonzero_ends = 0;
  for (const auto& d : draws) {
    v3.push_back(d[1]);
    v5.push_back(d[2]);
    v6.push_back(d[3]);
    if (d[0] != 0.0 || d[4] != 0.0) ++nonzero_ends;
  }
  r.checks.push_back(verify::within("var_at_0.5", verify::moments(v5).variance, 0.25, 0.01, seed, draws.size()));
  r.checks.push_back(verify::within("cov_0.3_0.6", verify::covariance(v3, v6).value, 0.12, 0.01, seed, draws.size()));
  r.checks.push_back({"nonzero_endpoint_values", static_cast<double>(nonzero_ends), 0.0, nonzero_ends == 0, seed,
                      draws.size()});
  return r;
}

/// Zero-crossing frequency and the conditional zero probability against quadrature.
inline CriterionResult criterion_4(std::uint64_t seed) {
  CriterionResult r{4, "zero crossings of the bridge", {}, 0.0};
  const gauss::GaussPathLaw law{DecreasingPath::linear(0, 1, 1, 1), 1};
  const std::size_t n = 100000;
  const auto hits = run_chunks(seed, n, [&](std::size_t b, std::size_t e, Engine& g) {
    return gauss::count_sign_changes(law, 0.25, 0.75, 10000, e - b, g);
  });
  std::size_t total = 0;
  for (auto h : hits) total += h;
  const double freq = static_cast<double>(total) / static_cast<double>(n);
  const double target = 2.0 / std::numbers::pi * std::acos(1.0 / 3.0);
  r.checks.push_back(verify::within("sign_change_frequency", freq, target, 0.02, seed, n));
  r.checks.push_back(verify::within("zero_prob_closed_form", gauss::zero_prob(law, 0.25, 0.75), target, 1e-12));

  // |w|/sqrt(2 pi) int_0^{dr} u^{-3/2} exp(-w^2 / (2u)) du with w = z / y(s)
  double worst = 0.0;
  for (double s : {0.1, 0.25, 0.4}) {
    for (double t : {0.5, 0.75, 0.9}) {
      for (double z : {-1.5, -0.2, 0.05, 0.3, 1.0}) {
        const double w = z / law.path.y(s);
        const double dr = law.ratio(t) - law.ratio(s);
        auto f = [&](double u) { return u <= 0.0 ? 0.0 : std::pow(u, -1.5) * std::exp(-w * w / (2.0 * u)); };
        const double q = std::abs(w) / std::sqrt(2.0 * std::numbers::pi) *
                         boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, dr, 15, 1e-14);
        worst = std::max(worst, std::abs(q - gauss::zero_prob_conditional(law, s, t, z)));
      }
    }
  }
  r.checks.push_back({"conditional_vs_quadrature", worst, 1e-8, worst <= 1e-8, 0, 45});
  return r;
}

// -----------------------------------------------------------------------------
// jumps suite
// -----------------------------------------------------------------------------

/// Event streams against brute-force sums, and the jump-count law.
inline CriterionResult criterion_5(std::uint64_t seed) {
  CriterionResult r{5, "cancelling jumps along paths", {}, 0.0};
  Engine rng(seed);
  const auto nu1 = FiniteJumpMeasure::discrete({{scalar_vec(1.0), 1.0}, {scalar_vec(-3.0), 0.5}, {scalar_vec(2.0), 0.5}});
  Vec a(2), b(2);
  a << 1.0, -2.0;
  b << 3.0, 1.0;
  const auto nu2 = FiniteJumpMeasure::discrete({{a, 1.0}, {b, 2.0}});
  std::size_t mismatches = 0;
  for (int i = 0; i < 100; ++i) {
    const auto path = i % 2 == 0 ? detail::random_path(PathClassTag::Linear, rng)
                                 : detail::random_path(PathClassTag::Exponential, rng);
    const auto& d = path.domain();
    const jumpsim::Region reg = jumpsim::region::Rectangle{path.eval(d.hi).x, path.eval(d.lo).y};
    const double rate = 50.0 / jumpsim::area(reg);
    const auto& nu = i % 4 < 2 ? nu1 : nu2;
    const auto field = jumpsim::simulate_cpp_sheet(nu.scaled_by(rate / nu.total_rate()), reg, rng);
    const auto events = jumpsim::restrict_to_path(field, path);
    for (int j = 0; j < 100; ++j) {
      const double t = detail::uniform(rng, d.lo, d.hi);
      if (events.value(t) != jumpsim::brute_force_value(field, path, t)) ++mismatches;
    }
  }
  r.checks.push_back({"event_value_mismatches", static_cast<double>(mismatches), 0.0, mismatches == 0, seed, 10000});

  const auto check = jumpsim::jump_count_law_check(DecreasingPath::linear(0, 1, 1, 1), 4.0, 10000, seed + 5);
  r.checks.push_back({"event_counts_even", check.all_even ? 1.0 : 0.0, 1.0, check.all_even, seed + 5, 10000});
  r.checks.push_back(check.chi2);
  return r;
}

/// Uniform triangle points pushed to (tau_1, tau_2): joint density and tau_1 marginal.
inline CriterionResult criterion_6(std::uint64_t seed) {
  CriterionResult r{6, "triangle to order statistics", {}, 0.0};
  const double b = 2.0, c = 3.0, l = 1.5;
  const jumpsim::Region tri = jumpsim::region::Triangle{b * l, c};
  const auto pts = replicate(seed, 100000, [&](Engine& g) {
    const auto xi = jumpsim::detail::uniform_location(tri, g);
    const auto [t1, t2] = jumpsim::triangle_to_order_stats(xi, b, c, l);
    return Point2{t1, t2};
  });
  const verify::CellMass mass = [&](double a0, double a1, double b0, double b1) {
    return 2.0 / (l * l) * detail::area_above_diagonal(a0, a1, b0, b1);
  };
  r.checks.push_back(verify::chi2_binned(pts, mass, {0.0, l, 0.0, l, 10, 10}, "order_stats_chi2", seed));
  std::vector<double> t1;
  for (const auto& p : pts) t1.push_back(p.x);
  r.checks.push_back(verify::ks_1d(
      t1, [&](double t) { return 1.0 - std::pow(1.0 - std::clamp(t, 0.0, l) / l, 2); }, "tau1_ks", seed));
  return r;
}

/// Rearranged difference of a CPP against the symmetrized sheet on the linear path.
inline CriterionResult criterion_7(std::uint64_t seed) {
  CriterionResult r{7, "rearranged difference law", {}, 0.0};
  const auto f = JumpDistribution::two_point(scalar_vec(1.0));
  const std::size_t n = 100000;
  const auto draws = replicate(seed, n, [&](Engine& g) {
    const auto y = jumpsim::simulate_cpp_1d(2.0, f, 1.0, g);
    const auto z = jumpsim::rearranged_difference(y, g).z;
    Vec v(2);
    v << z.value(0.3)[0], z.value(0.7)[0];
    return v;
  });
  // nu = 2F, nu-hat = (nu + nu~) / (bc) with b = c = 1
  const auto sheet = LevyTriplet::compound_poisson(FiniteJumpMeasure::scaled(2.0, f).plus_dual());
  const auto path = DecreasingPath::linear(0, 1, 1, 1);
  const std::vector<std::array<double, 2>> probes = {{1.0, 0.0}, {0.0, 1.0}, {1.0, -0.5}, {0.7, 1.3}, {-2.0, 0.4}};
  for (const auto& p : probes) {
    Vec z(2);
    z << p[0], p[1];
    const auto emp = verify::empirical_cf(draws, z);
    const auto exact = joint_cf(sheet, path, {0.3, 0.7}, std::vector<double>{p[0], p[1]});
    r.checks.push_back(
        verify::cf_match(emp, exact, 4.0, "joint_cf(" + detail::label(p[0]) + "," + detail::label(p[1]) + ")", seed));
  }
  return r;
}

/// Normalized CPP difference at n = 1000 and the random-walk analogue.
inline CriterionResult criterion_8(std::uint64_t seed) {
  CriterionResult r{8, "bridge limit of the normalized difference", {}, 0.0};
  const auto f = JumpDistribution::two_point(scalar_vec(1.0));
  const std::size_t reps = 10000;
  const auto draws = replicate(seed, reps, [&](Engine& g) { return jumpsim::bridge_experiment(1000.0, f, 1.0, {0.5, 1.0}, g); });
  std::vector<double> z5, y1, yp1;
  for (const auto& d : draws) {
    z5.push_back(d.z[0]);
    y1.push_back(d.y[1]);
    yp1.push_back(d.y_prime[1]);
  }
  r.checks.push_back(verify::within("var_z_0.5", verify::moments(z5).variance, 0.25, 0.02, seed, reps));
  r.checks.push_back(verify::within("var_component_y", verify::moments(y1).variance, 0.5, 0.03, seed, reps));
  r.checks.push_back(verify::within("var_component_y_prime", verify::moments(yp1).variance, 0.5, 0.03, seed, reps));

  const auto walks = replicate(seed + 8, reps, [&](Engine& g) { return jumpsim::random_walk_bridge(1000, 1.0, f, {0.3, 0.6}, g); });
  std::vector<double> a, b;
  for (const auto& w : walks) {
    a.push_back(w.values[0][0]);
    b.push_back(w.values[1][0]);
  }
  const auto cov = verify::covariance(a, b);
  const double exact = jumpsim::rw_bridge_cov(1000, 1.0, 0.0, 1.0, 0.3, 0.6);
  const double gap = std::abs(cov.value - exact);
  r.checks.push_back({"rw_cov_0.3_0.6_in_se", gap / cov.se, 4.0, gap <= 4.0 * cov.se, seed + 8, reps});
  return r;
}

// -----------------------------------------------------------------------------
// stationary suite
// -----------------------------------------------------------------------------

/// Autocorrelation of the exponential-path Gaussian process and CF shift invariance.
inline CriterionResult criterion_9(std::uint64_t seed) {
  CriterionResult r{9, "stationarity along the exponential path", {}, 0.0};
  const stationary::StationaryLaw law(LevyTriplet::brownian(1), 1.0, 1.0, 1.0);
  const std::vector<double> grid = {0.2, 0.3, 0.7, 1.2};
  const auto draws = replicate(seed, 100000, [&](Engine& g) {
    const auto s = stationary::simulate_stationary(law, grid, g);
    return std::array<double, 4>{s.values[0][0], s.values[1][0], s.values[2][0], s.values[3][0]};
  });
  std::array<std::vector<double>, 4> cols;
  for (const auto& d : draws) {
    for (std::size_t k = 0; k < 4; ++k) cols[k].push_back(d[k]);
  }
  for (std::size_t k = 1; k < 4; ++k) {
    const double u = grid[k] - grid[0];
    r.checks.push_back(verify::within("autocorrelation_lag_" + detail::label(u), verify::correlation(cols[0], cols[k]),
                                      stationary::autocorrelation(law, u), 0.02, seed, draws.size()));
  }

  const auto path = DecreasingPath::exponential(1.0, 1.0, 1.0, 0.0, 3.0);
  const std::vector<LevyTriplet> triplets = {
      LevyTriplet::brownian(1),
      LevyTriplet::compound_poisson(FiniteJumpMeasure::scaled(1.0, JumpDistribution::point_mass(scalar_vec(1.0)))),
      LevyTriplet::from_drift(scalar_vec(-0.3), Mat::Constant(1, 1, 2.0),
                              FiniteJumpMeasure::discrete({{scalar_vec(0.5), 2.0}, {scalar_vec(-1.5), 0.3}}))};
  Engine rng(seed);
  double worst = 0.0;
  for (int i = 0; i < 60; ++i) {
    const auto& tr = triplets[static_cast<std::size_t>(i) % triplets.size()];
    const auto n = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    auto times = detail::random_times({0.0, 1.5}, n, rng);
    const double shift = detail::uniform(rng, 0.0, 1.5);
    std::vector<double> zs, shifted;
    for (std::size_t k = 0; k < n; ++k) {
      zs.push_back(detail::uniform(rng, -2, 2));
      shifted.push_back(times[k] + shift);
    }
    worst = std::max(worst, std::abs(joint_cf(tr, path, times, zs) - joint_cf(tr, path, shifted, zs)));
  }
  r.checks.push_back({"shift_invariance_max_abs", worst, 1e-12, worst <= 1e-12, seed, 60});
  return r;
}

/// The OU-type and exponential-path CFs differ for a one-atom CPP and agree for Brownian motion.
inline CriterionResult criterion_10(std::uint64_t) {
  CriterionResult r{10, "OU-type vs exponential-path process", {}, 0.0};
  const auto cpp = LevyTriplet::compound_poisson(FiniteJumpMeasure::discrete({{scalar_vec(1.0), 1.0}}));
  const auto a = stationary::distinguish_ou(cpp, 1.0);
  r.checks.push_back({"cpp_witness_gap", a.max_gap, stationary::kWitnessGap, a.witness.has_value(), 0, 0});
  const auto b = stationary::distinguish_ou(LevyTriplet::brownian(1), 1.0);
  r.checks.push_back({"gaussian_max_gap", b.max_gap, 1e-10, b.max_gap < 1e-10 && !b.witness, 0, 0});
  return r;
}

// -----------------------------------------------------------------------------
// Dispatch
// -----------------------------------------------------------------------------

/// Runtime limits in seconds; 0 when the criterion has none.
inline double time_limit(int id) {
  switch (id) {
    case 1: return 5.0;
    case 2: return 1.0;
    case 3: return 30.0;
    case 4: return 60.0;
    case 7: return 60.0;
    default: return 0.0;
  }
}

inline std::vector<int> suite_members(const std::string& suite) {
  if (suite == "fdd") return {1, 2, 11};
  if (suite == "gauss") return {3, 4};
  if (suite == "jumps") return {5, 6, 7, 8};
  if (suite == "stationary") return {9, 10};
  if (suite == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  throw std::invalid_argument("unknown suite '" + suite + "'");
}

inline CriterionResult run_criterion(int id, std::uint64_t seed) {
  using Fn = CriterionResult (*)(std::uint64_t);
  static constexpr std::array<Fn, 11> table = {criterion_1, criterion_2, criterion_3, criterion_4,
                                               criterion_5, criterion_6, criterion_7, criterion_8,
                                               criterion_9, criterion_10, criterion_11};
  require(id >= 1 && id <= 11, "run_criterion: id must be in 1..11");
  const auto start = std::chrono::steady_clock::now();
  auto r = table[static_cast<std::size_t>(id - 1)](seed);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (const double lim = time_limit(id); lim > 0.0) r.checks.push_back(detail::runtime_check(r.seconds, lim));
  return r;
}

}  // namespace levysheet::acceptance
