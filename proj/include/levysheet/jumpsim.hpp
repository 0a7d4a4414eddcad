#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <variant>
#include <vector>

#include "exponent.hpp"
#include "parallel.hpp"
#include "path.hpp"
#include "verify.hpp"

namespace levysheet::jumpsim {

namespace region {
/// (0, u_max] x (0, v_max]
struct Rectangle {
  double u_max, v_max;
};
/// Triangle with vertices (0,0), (u_max, 0), (0, v_max).
struct Triangle {
  double u_max, v_max;
};
}  // namespace region

using Region = std::variant<region::Rectangle, region::Triangle>;

inline double area(const Region& r) {
  return std::visit(
      [](const auto& g) {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, region::Rectangle>) return g.u_max * g.v_max;
        else return 0.5 * g.u_max * g.v_max;
      },
      r);
}

/// Closed-region membership with a relative slack on the hypotenuse.
inline bool covers(const Region& r, double u, double v, double slack = 0.0) {
  if (u < 0.0 || v < 0.0) return false;
  return std::visit(
      [&](const auto& g) {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, region::Rectangle>) {
          return u <= g.u_max * (1.0 + slack) && v <= g.v_max * (1.0 + slack);
        } else {
          return u / g.u_max + v / g.v_max <= 1.0 + slack;
        }
      },
      r);
}

inline void validate(const Region& r) {
  std::visit(
      [](const auto& g) {
        require(std::isfinite(g.u_max) && std::isfinite(g.v_max), "region: non-finite area");
        require(g.u_max >= 0.0 && g.v_max >= 0.0, "region: extents must be nonnegative");
      },
      r);
}

struct JumpPoint {
  double u, v;
  Vec j;
};

/// Jump locations and sizes of a compound Poisson sheet on a region.
struct JumpField {
  Region region;
  Eigen::Index dim = 1;
  std::vector<JumpPoint> points;
};

namespace detail {

template <class Rng>
Point2 uniform_location(const Region& r, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto open01 = [&] {
    double a;
    do a = unif(rng);
    while (a == 0.0);
    return a;
  };
  return std::visit(
      [&](const auto& g) -> Point2 {
        using G = std::decay_t<decltype(g)>;
        double a = open01(), b = open01();
        if constexpr (std::is_same_v<G, region::Triangle>) {
          // reflect the upper half of the unit square onto the lower
          while (a + b == 1.0) {
            a = open01();
            b = open01();
          }
          if (a + b > 1.0) {
            a = 1.0 - a;
            b = 1.0 - b;
          }
        }
        return {a * g.u_max, b * g.v_max};
      },
      r);
}

}  // namespace detail

/// Poisson(rate * area) points, uniform locations, i.i.d. jumps from `dist`.
template <class Rng>
JumpField simulate_cpp_sheet(double rate, const JumpDistribution& dist, const Region& r, Rng& rng) {
  require(std::isfinite(rate) && rate >= 0.0, "simulate_cpp_sheet: rate must be finite and nonnegative");
  validate(r);
  const double mean = rate * area(r);
  require(std::isfinite(mean), "simulate_cpp_sheet: non-finite area");
  JumpField f{r, dist.dim(), {}};
  if (mean == 0.0) return f;
  const auto count = std::poisson_distribution<std::uint64_t>(mean)(rng);
  f.points.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    const auto loc = detail::uniform_location(r, rng);
    Vec j;
    do j = dist.sample(rng);
    while (j.isZero(0.0));
    f.points.push_back({loc.x, loc.y, std::move(j)});
  }
  return f;
}

/// Sheet with finite Levy measure nu: rate |nu|, jumps nu / |nu|.
template <class Rng>
JumpField simulate_cpp_sheet(const FiniteJumpMeasure& nu, const Region& r, Rng& rng) {
  validate(r);
  JumpField f{r, nu.dim(), {}};
  const double mean = nu.total_rate() * area(r);
  require(std::isfinite(mean), "simulate_cpp_sheet: non-finite area");
  if (mean == 0.0) return f;
  const auto count = std::poisson_distribution<std::uint64_t>(mean)(rng);
  for (std::uint64_t k = 0; k < count; ++k) {
    const auto loc = detail::uniform_location(r, rng);
    Vec j;
    do j = nu.sample_jump(rng);
    while (j.isZero(0.0));
    f.points.push_back({loc.x, loc.y, std::move(j)});
  }
  return f;
}

struct Event {
  double tau;
  Vec j;
};

/// Piecewise-constant path given by its jump events. Events at equal times
/// keep their insertion order and are never merged.
struct EventPath {
  Interval domain;
  Eigen::Index dim = 1;
  std::vector<Event> events;

  /// sum of the increments with tau <= t
  Vec value(double t) const {
    Vec s = Vec::Zero(dim);
    for (const auto& e : events) {
      if (e.tau > t) break;
      s += e.j;
    }
    return s;
  }

  Vec total() const {
    Vec s = Vec::Zero(dim);
    for (const auto& e : events) s += e.j;
    return s;
  }

  void sort_stable() {
    std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.tau < b.tau; });
  }
};

inline SamplePathGrid on_grid(const EventPath& p, const std::vector<double>& grid) {
  require_increasing(grid, "on_grid");
  SamplePathGrid g;
  g.times = grid;
  Vec s = Vec::Zero(p.dim);
  std::size_t k = 0;
  for (double t : grid) {
    while (k < p.events.size() && p.events[k].tau <= t) s += p.events[k++].j;
    g.values.push_back(s);
  }
  return g;
}

/// X((0, x(t)] x (0, y(t)]) summed directly over the field.
inline Vec brute_force_value(const JumpField& f, const DecreasingPath& path, double t) {
  const auto p = path.eval(t);
  Vec s = Vec::Zero(f.dim);
  for (const auto& q : f.points) {
    if (q.u <= p.x && q.v <= p.y) s += q.j;
  }
  return s;
}

/// Whether the region holds every rectangle (0, x(t)] x (0, y(t)], t in T.
inline bool covers_sweep(const Region& r, const DecreasingPath& path) {
  const auto& d = path.domain();
  const auto corner = [&](double t) {
    const auto p = path.eval(t);
    return covers(r, p.x, p.y, 1e-12);
  };
  if (std::holds_alternative<region::Rectangle>(r)) {
    return covers(r, path.eval(d.hi).x, path.eval(d.lo).y, 1e-12);
  }
  for (double t : linspace(d.lo, d.hi, 1001)) {
    if (!corner(t)) return false;
  }
  return true;
}

/// Event stream of the sheet restricted to the path: +J when x(t) reaches u,
/// -J when y(t) drops below v. Jumps with v <= y(t_hi) never exit.
inline EventPath restrict_to_path(const JumpField& f, const DecreasingPath& path) {
  require(covers_sweep(f.region, path), "restrict_to_path: field region does not cover the path's sweep");
  const auto& d = path.domain();
  EventPath out{d, f.dim, {}};
  for (const auto& q : f.points) {
    const auto t1 = path.entry_time(q.u);
    if (!t1) continue;
    if (q.v > path.eval(*t1).y) continue;
    out.events.push_back({*t1, q.j});
    const auto t2 = path.exit_time(q.v);
    if (t2 && *t2 < d.hi) out.events.push_back({*t2, Vec(-q.j)});
  }
  out.sort_stable();
  return out;
}

/// Maps a point of the triangle (0,0), (0,c), (bl,0) to (tau_1, tau_2).
inline std::pair<double, double> triangle_to_order_stats(Point2 xi, double b, double c, double l) {
  require(b > 0.0 && c > 0.0 && l > 0.0, "triangle_to_order_stats: b, c, l must be positive");
  require(xi.x >= 0.0 && xi.y >= 0.0 && xi.x / (b * l) + xi.y / c <= 1.0 + 1e-12,
          "triangle_to_order_stats: point outside the triangle");
  const double t1 = xi.x / b;
  const double t2 = l * (1.0 - xi.y / c);
  return {t1, std::max(t1, t2)};
}

/// Compound Poisson process on [0, l] with rate and jump law.
template <class Rng>
EventPath simulate_cpp_1d(double rate, const JumpDistribution& dist, double l, Rng& rng) {
  require(rate >= 0.0 && std::isfinite(rate), "simulate_cpp_1d: rate must be finite and nonnegative");
  require(l > 0.0, "simulate_cpp_1d: l must be positive");
  EventPath p{{0.0, l}, dist.dim(), {}};
  const auto count = rate == 0.0 ? 0 : std::poisson_distribution<std::uint64_t>(rate * l)(rng);
  std::uniform_real_distribution<double> unif(0.0, l);
  for (std::uint64_t k = 0; k < count; ++k) {
    const double t = unif(rng);
    p.events.push_back({t, dist.sample(rng)});
  }
  p.sort_stable();
  return p;
}

struct Rearranged {
  EventPath y_prime;
  EventPath z;
};

/// Y' reuses the jumps of Y at fresh uniform times; Z = Y - Y'.
template <class Rng>
Rearranged rearranged_difference(const EventPath& y, Rng& rng) {
  const auto& d = y.domain;
  require(d.length() > 0.0, "rearranged_difference: empty domain");
  std::uniform_real_distribution<double> unif(d.lo, d.hi);
  EventPath yp{d, y.dim, {}};
  for (const auto& e : y.events) yp.events.push_back({unif(rng), e.j});
  yp.sort_stable();
  EventPath z{d, y.dim, y.events};
  for (const auto& e : yp.events) z.events.push_back({e.tau, Vec(-e.j)});
  z.sort_stable();
  return {std::move(yp), std::move(z)};
}

/// One draw of the normalized difference Z^n and its two components on a grid.
struct BridgeDraw {
  std::vector<double> z;
  std::vector<double> y;        // (Y_t - n mu1 t) / sqrt(2 mu2 n)
  std::vector<double> y_prime;  // (Y'_t - n mu1 t) / sqrt(2 mu2 n)
};

/// Real-valued CPP Y with rate n and jump law F on [0, l], its rearrangement
/// Y', and Z^n = (Y - Y') / sqrt(2 mu2' n) evaluated on the grid.
template <class Rng>
BridgeDraw bridge_experiment(double n, const JumpDistribution& dist, double l, const std::vector<double>& grid,
                             Rng& rng) {
  require(dist.dim() == 1, "bridge_experiment: real-valued jumps only");
  const auto mu2 = dist.second_moment();
  const auto mu1 = dist.mean();
  require(mu2 && *mu2 > 0.0 && std::isfinite(*mu2), "bridge_experiment: second moment must be positive and finite");
  require(mu1.has_value(), "bridge_experiment: jump law needs a finite mean");
  require(n > 0.0 && l > 0.0, "bridge_experiment: n and l must be positive");
  require_increasing(grid, "bridge_experiment");
  for (double t : grid) require(t >= 0.0 && t <= l, "bridge_experiment: grid outside [0, l]");
  const double m1 = (*mu1)[0];
  const double norm = std::sqrt(2.0 * *mu2 * n);

  const auto count = std::poisson_distribution<std::uint64_t>(n * l)(rng);
  std::uniform_real_distribution<double> unif(0.0, l);
  std::vector<double> tau(count), tau2(count), jump(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    tau[k] = unif(rng);
    jump[k] = dist.sample(rng)[0];
  }
  for (std::uint64_t k = 0; k < count; ++k) tau2[k] = unif(rng);

  BridgeDraw out;
  for (double t : grid) {
    double a = 0.0, b = 0.0;
    for (std::uint64_t k = 0; k < count; ++k) {
      if (tau[k] <= t) a += jump[k];
      if (tau2[k] <= t) b += jump[k];
    }
    out.z.push_back((a - b) / norm);
    out.y.push_back((a - n * m1 * t) / norm);
    out.y_prime.push_back((b - n * m1 * t) / norm);
  }
  return out;
}

/// One draw of the random-walk analogue
///   Zhat_t = (S_[nt] - S^pi_[nt]) / sqrt(2 mu2' n),
/// with pi a uniform permutation of 1..[nl].
template <class Rng>
SamplePathGrid random_walk_bridge(std::size_t n, double l, const JumpDistribution& xi, const std::vector<double>& grid,
                                  Rng& rng) {
  require(xi.dim() == 1, "random_walk_bridge: real-valued steps only");
  const auto mu2 = xi.second_moment();
  require(mu2 && *mu2 > 0.0, "random_walk_bridge: degenerate step law (mu2 = 0)");
  require(static_cast<double>(n) * l >= 1.0, "random_walk_bridge: need n l >= 1");
  require_increasing(grid, "random_walk_bridge");
  const auto m = static_cast<std::size_t>(std::floor(static_cast<double>(n) * l));
  std::vector<double> steps(m);
  for (auto& s : steps) s = xi.sample(rng)[0];
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  // Fisher-Yates with uniform_int_distribution (std::shuffle is implementation defined)
  for (std::size_t i = m; i > 1; --i) {
    const auto j = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
    std::swap(perm[i - 1], perm[j]);
  }
  const double norm = std::sqrt(2.0 * *mu2 * static_cast<double>(n));
  SamplePathGrid out;
  out.times = grid;
  double s = 0.0, sp = 0.0;
  std::size_t k = 0;
  for (double t : grid) {
    require(t >= 0.0 && t <= l, "random_walk_bridge: grid outside [0, l]");
    const auto upto = std::min(m, static_cast<std::size_t>(std::floor(static_cast<double>(n) * t)));
    for (; k < upto; ++k) {
      s += steps[k];
      sp += steps[perm[k]];
    }
    out.values.push_back(scalar_vec((s - sp) / norm));
  }
  return out;
}

/// Exact finite-n covariance (1 - mu1^2/mu2) ([ns]/n) (1 - [nt]/[nl]), s <= t.
inline double rw_bridge_cov(std::size_t n, double l, double mu1, double mu2, double s, double t) {
  require(mu2 > 0.0, "rw_bridge_cov: mu2 must be positive");
  require(static_cast<double>(n) * l >= 1.0, "rw_bridge_cov: need n l >= 1");
  const double nn = static_cast<double>(n);
  const double lo = std::min(s, t), hi = std::max(s, t);
  const double ks = std::floor(nn * lo), kt = std::floor(nn * hi), kl = std::floor(nn * l);
  return (1.0 - mu1 * mu1 / mu2) * (ks / nn) * (1.0 - kt / kl);
}

/// Result of the cancelling-jump count check.
struct JumpCountCheck {
  verify::TestReport chi2;
  bool all_even = true;
  double mean_half = 0.0;
  /// Poisson parameter: rate times the swept area outside the terminal rectangle.
  double p = 0.0;
};

/// Event count of one simulated sheet along the path, excluding the single
/// entries of jumps that never exit.
template <class Rng>
std::size_t cancelling_event_count(double rate, const DecreasingPath& path, Rng& rng) {
  const auto& d = path.domain();
  const auto end = path.eval(d.hi);
  const Region r = region::Rectangle{end.x, path.eval(d.lo).y};
  const auto field = simulate_cpp_sheet(rate, JumpDistribution::point_mass(scalar_vec(1.0)), r, rng);
  const auto events = restrict_to_path(field, path);
  std::size_t persistent = 0;
  for (const auto& q : field.points) {
    if (q.u <= end.x && q.v <= end.y) ++persistent;
  }
  return events.events.size() - persistent;
}

/// Over N sheets, counts of cancelling events are even and half-counts are
/// Poisson(rate * (sweep area - terminal rectangle)).
inline JumpCountCheck jump_count_law_check(const DecreasingPath& path, double rate, std::size_t n,
                                           std::uint64_t seed) {
  require(!path.is_tabulated() && std::holds_alternative<forms::Linear>(path.form()),
          "jump_count_law_check: linear path required");
  const auto end = path.eval(path.domain().hi);
  JumpCountCheck out;
  out.p = rate * (path.sweep_area() - end.x * end.y);
  const auto counts = replicate(seed, n, [&](Engine& rng) { return cancelling_event_count(rate, path, rng); });
  std::size_t max_half = 0;
  double sum = 0.0;
  for (auto c : counts) {
    if (c % 2 != 0) out.all_even = false;
    max_half = std::max(max_half, c / 2);
    sum += static_cast<double>(c / 2);
  }
  out.mean_half = sum / static_cast<double>(n);
  if (out.p == 0.0) {
    out.chi2 = {"jump_count_poisson", max_half == 0 ? 1.0 : 0.0, verify::kSignificance, max_half == 0, seed, n};
    return out;
  }
  // categories 0..K-1 plus the tail {>= K}
  const std::size_t k_max = std::max<std::size_t>(max_half + 1, 2);
  std::vector<double> obs(k_max + 1, 0.0), prob(k_max + 1, 0.0);
  for (auto c : counts) obs[std::min(c / 2, k_max)] += 1.0;
  double pk = std::exp(-out.p), acc = 0.0;
  for (std::size_t k = 0; k < k_max; ++k) {
    prob[k] = pk;
    acc += pk;
    pk *= out.p / static_cast<double>(k + 1);
  }
  prob[k_max] = std::max(0.0, 1.0 - acc);
  out.chi2 = verify::chi2_categorical(obs, prob, "jump_count_poisson", seed);
  out.chi2.pass = out.chi2.pass && out.all_even;
  return out;
}

}  // namespace levysheet::jumpsim
