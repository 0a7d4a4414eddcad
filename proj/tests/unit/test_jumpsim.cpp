#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "levysheet/fdd.hpp"
#include "levysheet/jumpsim.hpp"

using namespace levysheet;
using namespace levysheet::jumpsim;

namespace {

const auto kBridge = DecreasingPath::linear(0.0, 1.0, 1.0, 1.0);
const auto kPm1 = JumpDistribution::two_point(scalar_vec(1.0));

std::vector<DecreasingPath> paths() {
  return {kBridge,
          DecreasingPath::linear(0.5, 2.0, 3.0, 0.5, 0.0, 4.0),
          DecreasingPath::exponential(0.5, 3.0, 2.0, -1.0, 1.5),
          DecreasingPath::vthenh(1.0, 2.0, 1.5, 3.0, 4.0, 0.0, 2.0),
          DecreasingPath::horizontal(2.0, 0.5, 1.5, 0.0, 2.0),
          DecreasingPath::vertical(1.5, 3.0, 1.0, 0.0, 2.0),
          DecreasingPath::sampled(DecreasingPath::exponential(1.0, 1.0, 0.7), 12)};
}

Region sweep_box(const DecreasingPath& p) {
  return region::Rectangle{p.eval(p.domain().hi).x * 1.1, p.eval(p.domain().lo).y * 1.1};
}

// Area of [a0,a1] x [b0,b1] below the line v = h (1 - u / w). The clipped
// height is piecewise linear in u, so the trapezoid rule between its kinks is exact.
double clipped_cell_area(double a0, double a1, double b0, double b1, double w, double h) {
  const auto height = [&](double u) { return std::clamp(h * (1.0 - u / w), b0, b1) - b0; };
  std::vector<double> knots{a0, a1};
  for (double level : {b0, b1}) {
    const double u = w * (1.0 - level / h);
    if (u > a0 && u < a1) knots.push_back(u);
  }
  std::sort(knots.begin(), knots.end());
  double s = 0.0;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    s += 0.5 * (height(knots[i - 1]) + height(knots[i])) * (knots[i] - knots[i - 1]);
  }
  return s;
}

// Cell mass of the density 2 / l^2 on {t1 < t2} for a square grid on [0, l]^2:
// cells are above, below or bisected by the diagonal.
double order_stats_mass(double a0, double a1, double b0, double b1, double l) {
  const double eps = 1e-12 * l;
  const double full = 2.0 * (a1 - a0) * (b1 - b0) / (l * l);
  if (a1 <= b0 + eps) return full;
  if (a0 >= b1 - eps) return 0.0;
  return 0.5 * full;
}

}  // namespace

TEST(JumpSim, EmptyWhenMeanIsZero) {
  Engine rng(1);
  EXPECT_TRUE(simulate_cpp_sheet(0.0, kPm1, region::Rectangle{1.0, 1.0}, rng).points.empty());
  EXPECT_TRUE(simulate_cpp_sheet(3.0, kPm1, region::Rectangle{0.0, 1.0}, rng).points.empty());
  EXPECT_THROW(simulate_cpp_sheet(1.0, kPm1, region::Rectangle{INFINITY, 1.0}, rng), std::invalid_argument);
}

TEST(JumpSim, PointCountMean) {
  const double rate = 2.5;
  const Region r = region::Rectangle{2.0, 1.5};
  const std::size_t n = 10000;
  const auto counts = replicate(113, n, [&](Engine& rng) {
    return static_cast<double>(simulate_cpp_sheet(rate, kPm1, r, rng).points.size());
  });
  const double m = rate * area(r);
  EXPECT_NEAR(verify::moments(counts).mean, m, 4.0 * std::sqrt(m / n));
}

TEST(JumpSim, LocationsAreUniformAndInside) {
  for (const Region r : {Region{region::Rectangle{2.0, 1.5}}, Region{region::Triangle{2.0, 1.5}}}) {
    const auto fields = replicate(127, 2000, [&](Engine& rng) { return simulate_cpp_sheet(20.0, kPm1, r, rng); });
    std::vector<Point2> locs;
    for (const auto& f : fields) {
      for (const auto& q : f.points) {
        ASSERT_GT(q.u, 0.0);
        ASSERT_GT(q.v, 0.0);
        ASSERT_TRUE(covers(r, q.u, q.v));
        ASSERT_FALSE(q.j.isZero(0.0));
        locs.push_back({q.u, q.v});
      }
    }
    const double a = area(r);
    const bool tri = std::holds_alternative<region::Triangle>(r);
    // Exact cell masses: the cell area inside the region over the region area.
    const verify::CellMass mass = [&](double a0, double a1, double b0, double b1) {
      if (!tri) return (a1 - a0) * (b1 - b0) / a;
      return clipped_cell_area(a0, a1, b0, b1, 2.0, 1.5) / a;
    };
    const auto rep = verify::chi2_binned(locs, mass, {0.0, 2.0, 0.0, 1.5});
    EXPECT_TRUE(rep.pass) << (tri ? "triangle" : "rectangle") << " p=" << rep.statistic;
  }
}

TEST(JumpSim, FiniteMeasureOverload) {
  Engine rng(131);
  const auto nu = FiniteJumpMeasure::discrete({{scalar_vec(1.0), 2.0}, {scalar_vec(-3.0), 1.0}});
  const auto f = simulate_cpp_sheet(nu, region::Rectangle{1.0, 1.0}, rng);
  for (const auto& q : f.points) EXPECT_TRUE(q.j[0] == 1.0 || q.j[0] == -3.0);
  EXPECT_EQ(f.dim, 1);
}

TEST(JumpSim, RestrictEmptyField) {
  const JumpField f{region::Rectangle{1.0, 1.0}, 1, {}};
  const auto e = restrict_to_path(f, kBridge);
  EXPECT_TRUE(e.events.empty());
  EXPECT_EQ(e.value(0.5)[0], 0.0);
}

TEST(JumpSim, RestrictSingleJump) {
  const JumpField f{region::Rectangle{1.0, 1.0}, 1, {{0.3, 0.4, scalar_vec(2.5)}}};
  const auto e = restrict_to_path(f, kBridge);
  ASSERT_EQ(e.events.size(), 2u);
  EXPECT_NEAR(e.events[0].tau, 0.3, 1e-15);
  EXPECT_EQ(e.events[0].j[0], 2.5);
  EXPECT_NEAR(e.events[1].tau, 0.6, 1e-15);
  EXPECT_EQ(e.events[1].j[0], -2.5);
  EXPECT_EQ(e.value(0.2)[0], 0.0);
  EXPECT_EQ(e.value(0.45)[0], 2.5);
  EXPECT_EQ(e.value(0.7)[0], 0.0);
}

TEST(JumpSim, RestrictRequiresCoverage) {
  const JumpField f{region::Rectangle{0.5, 1.0}, 1, {}};
  EXPECT_THROW(restrict_to_path(f, kBridge), std::invalid_argument);
}

TEST(JumpSim, EventsReproduceBruteForceSum) {
  Engine rng(137);
  for (const auto& p : paths()) {
    for (int rep = 0; rep < 20; ++rep) {
      // Integer jumps keep the sums exact.
      const auto f = simulate_cpp_sheet(6.0, JumpDistribution::point_mass(scalar_vec(1.0)), sweep_box(p), rng);
      JumpField g = f;
      std::uniform_int_distribution<int> pick(-3, 3);
      for (auto& q : g.points) {
        int v = 0;
        while (v == 0) v = pick(rng);
        q.j = scalar_vec(v);
      }
      const auto e = restrict_to_path(g, p);
      std::uniform_real_distribution<double> u(p.domain().lo, p.domain().hi);
      for (int k = 0; k < 100; ++k) {
        const double t = u(rng);
        EXPECT_EQ(e.value(t)[0], brute_force_value(g, p, t)[0]);
      }
      EXPECT_EQ(e.value(p.domain().hi)[0], brute_force_value(g, p, p.domain().hi)[0]);
      EXPECT_EQ(e.value(p.domain().lo)[0], brute_force_value(g, p, p.domain().lo)[0]);
    }
  }
}

TEST(JumpSim, CancellingPairs) {
  Engine rng(139);
  for (const auto& p : paths()) {
    const auto f = simulate_cpp_sheet(8.0, kPm1, sweep_box(p), rng);
    const auto e = restrict_to_path(f, p);
    const auto end = p.eval(p.domain().hi);
    std::size_t persistent = 0, touched = 0;
    for (const auto& q : f.points) {
      const auto t1 = p.entry_time(q.u);
      if (!t1 || q.v > p.eval(*t1).y) continue;
      ++touched;
      if (q.u <= end.x && q.v <= end.y) ++persistent;
    }
    EXPECT_EQ(e.events.size(), 2 * touched - persistent);
    for (std::size_t k = 1; k < e.events.size(); ++k) EXPECT_LE(e.events[k - 1].tau, e.events[k].tau);
  }
}

TEST(JumpSim, OnGridMatchesValue) {
  const JumpField f{region::Rectangle{1.0, 1.0}, 1, {{0.3, 0.4, scalar_vec(2.5)}, {0.1, 0.95, scalar_vec(-1.0)}}};
  const auto e = restrict_to_path(f, kBridge);
  const auto grid = linspace(0.0, 1.0, 21);
  const auto g = on_grid(e, grid);
  for (std::size_t k = 0; k < grid.size(); ++k) EXPECT_EQ(g.values[k][0], e.value(grid[k])[0]);
}

TEST(JumpSim, TriangleMapExamples) {
  const auto [a, b] = triangle_to_order_stats({0.0, 0.0}, 1.0, 1.0, 1.0);
  EXPECT_EQ(a, 0.0);
  EXPECT_EQ(b, 1.0);
  EXPECT_THROW(triangle_to_order_stats({0.8, 0.8}, 1.0, 1.0, 1.0), std::invalid_argument);
}

TEST(JumpSim, TriangleMapGivesOrderStatistics) {
  const double b = 2.0, c = 3.0, l = 1.5;
  const Region tri = region::Triangle{b * l, c};
  Engine rng(149);
  std::vector<Point2> taus;
  std::vector<double> first;
  for (int k = 0; k < 100000; ++k) {
    const auto xi = jumpsim::detail::uniform_location(tri, rng);
    const auto [t1, t2] = triangle_to_order_stats(xi, b, c, l);
    ASSERT_LE(t1, t2);
    taus.push_back({t1, t2});
    first.push_back(t1);
  }
  const auto mass = [l](double a0, double a1, double b0, double b1) { return order_stats_mass(a0, a1, b0, b1, l); };
  const auto rep = verify::chi2_binned(taus, mass, {0.0, l, 0.0, l});
  EXPECT_TRUE(rep.pass) << rep.statistic;
  const auto ks = verify::ks_1d(first, [l](double t) { return 1.0 - (1.0 - t / l) * (1.0 - t / l); });
  EXPECT_TRUE(ks.pass) << ks.statistic;
}

TEST(JumpSim, OrderStatisticTestsHavePower) {
  // Independent uniforms (not sorted) must fail the same chi-square.
  const double l = 1.5;
  Engine rng(151);
  std::uniform_real_distribution<double> u(0.0, l);
  std::vector<Point2> pts;
  for (int k = 0; k < 100000; ++k) pts.push_back({u(rng), u(rng)});
  const auto mass = [l](double a0, double a1, double b0, double b1) { return order_stats_mass(a0, a1, b0, b1, l); };
  EXPECT_FALSE(verify::chi2_binned(pts, mass, {0.0, l, 0.0, l}).pass);
}

TEST(JumpSim, RearrangementNoJumps) {
  Engine rng(157);
  const EventPath y{{0.0, 1.0}, 1, {}};
  const auto r = rearranged_difference(y, rng);
  EXPECT_TRUE(r.z.events.empty());
  EXPECT_EQ(r.z.value(0.5)[0], 0.0);
}

TEST(JumpSim, RearrangementTelescopes) {
  Engine rng(163);
  for (int k = 0; k < 50; ++k) {
    auto y = simulate_cpp_1d(5.0, JumpDistribution::point_mass(scalar_vec(1.0)), 1.0, rng);
    const auto r = rearranged_difference(y, rng);
    EXPECT_EQ(r.z.total()[0], 0.0);
    EXPECT_EQ(r.y_prime.events.size(), y.events.size());
    for (double t : {0.2, 0.5, 0.9}) EXPECT_EQ(r.z.value(t)[0], y.value(t)[0] - r.y_prime.value(t)[0]);
  }
}

TEST(JumpSim, RearrangedDifferenceMatchesSheetLaw) {
  // Z along [0,1] vs the sheet with jump measure nu + nu~ on the linear bridge path.
  const double rate = 2.0;
  const std::size_t n = 100000;
  const std::vector<double> times{0.3, 0.7};
  const auto draws = replicate(167, n, [&](Engine& rng) {
    const auto y = simulate_cpp_1d(rate, kPm1, 1.0, rng);
    const auto r = rearranged_difference(y, rng);
    return std::array<double, 3>{r.z.value(0.3)[0], r.z.value(0.7)[0], r.y_prime.value(0.5)[0]};
  });
  const auto nu = FiniteJumpMeasure::scaled(rate, kPm1);
  const auto hat = LevyTriplet::compound_poisson(nu.plus_dual());
  for (auto [z1, z2] : {std::pair{1.0, 0.0}, std::pair{0.0, 1.0}, std::pair{0.8, -0.5}, std::pair{1.3, 0.6}}) {
    std::vector<double> proj;
    for (const auto& d : draws) proj.push_back(z1 * d[0] + z2 * d[1]);
    const auto rep =
        verify::cf_match(verify::empirical_cf(proj, 1.0), joint_cf(hat, kBridge, times, std::vector<double>{z1, z2}));
    EXPECT_TRUE(rep.pass) << z1 << "," << z2 << " gap " << rep.statistic;
  }
  // Y' has the law of Y.
  std::vector<double> yp;
  for (const auto& d : draws) yp.push_back(d[2]);
  const auto y_law = LevyTriplet::compound_poisson(nu);
  EXPECT_TRUE(verify::cf_match(verify::empirical_cf(yp, 0.9), std::exp(0.5 * eval_psi(y_law, 0.9))).pass);
}

TEST(JumpSim, BridgeExperimentVariance) {
  const std::size_t reps = 10000;
  const auto draws = replicate(173, reps, [](Engine& rng) {
    return bridge_experiment(1000.0, kPm1, 1.0, {0.5, 1.0}, rng);
  });
  std::vector<double> z, comp;
  for (const auto& d : draws) {
    z.push_back(d.z[0]);
    comp.push_back(d.y[1]);
    EXPECT_EQ(d.z[1], 0.0);
  }
  EXPECT_NEAR(verify::moments(z).variance, 0.25, 0.02);
  EXPECT_NEAR(verify::moments(comp).variance, 0.5, 4.0 * verify::moments(comp).se_variance);
}

TEST(JumpSim, BridgeExperimentRejectsDegenerateLaw) {
  Engine rng(1);
  jumps::Custom c;
  c.dim = 1;
  c.finite_mean = true;
  c.truncated_mean = Vec::Zero(1);
  c.mean = Vec::Zero(1);
  c.second_moment = 0.0;
  c.sampler = [](Engine&) { return scalar_vec(1.0); };
  EXPECT_THROW(bridge_experiment(10.0, JumpDistribution(c), 1.0, {0.5}, rng), std::invalid_argument);
}

TEST(JumpSim, RandomWalkCovarianceFormula) {
  EXPECT_NEAR(rw_bridge_cov(1000, 1.0, 0.0, 1.0, 0.3, 0.6), 0.3 * 0.4, 1e-15);
  EXPECT_EQ(rw_bridge_cov(1000, 1.0, 0.0, 1.0, 0.0, 0.6), 0.0);
  // mu1 = 1, mu2 = 2: factor 1/2; n = 7, l = 1: [2.1]/7 (1 - [4.2]/7).
  EXPECT_NEAR(rw_bridge_cov(7, 1.0, 1.0, 2.0, 0.3, 0.6), 0.5 * (2.0 / 7.0) * (1.0 - 4.0 / 7.0), 1e-15);
}

TEST(JumpSim, RandomWalkCovarianceByEnumeration) {
  // Exact covariance by enumerating all sign vectors and permutations for n = 4.
  const std::size_t n = 4;
  const double s = 0.5, t = 0.75;
  std::vector<std::size_t> perm{0, 1, 2, 3};
  double sum = 0.0, count = 0.0;
  do {
    for (int mask = 0; mask < 16; ++mask) {
      double xi[4];
      for (int i = 0; i < 4; ++i) xi[i] = (mask >> i) & 1 ? 1.0 : -1.0;
      auto z = [&](double u) {
        const auto k = static_cast<std::size_t>(std::floor(n * u));
        double a = 0.0;
        for (std::size_t i = 0; i < k; ++i) a += xi[i] - xi[perm[i]];
        return a / std::sqrt(2.0 * n);
      };
      sum += z(s) * z(t);
      count += 1.0;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  EXPECT_NEAR(sum / count, rw_bridge_cov(n, 1.0, 0.0, 1.0, s, t), 1e-14);
}

TEST(JumpSim, RandomWalkBridgeMonteCarlo) {
  const std::size_t reps = 10000;
  const auto draws = replicate(179, reps, [](Engine& rng) {
    return random_walk_bridge(1000, 1.0, kPm1, {0.3, 0.6, 1.0}, rng);
  });
  std::vector<double> a, b;
  for (const auto& d : draws) {
    a.push_back(d.values[0][0]);
    b.push_back(d.values[1][0]);
    EXPECT_NEAR(d.values[2][0], 0.0, 1e-12);
  }
  const auto c = verify::covariance(a, b);
  EXPECT_NEAR(c.value, rw_bridge_cov(1000, 1.0, 0.0, 1.0, 0.3, 0.6), 4.0 * c.se);
}

TEST(JumpSim, JumpCountLaw) {
  const auto r = jump_count_law_check(kBridge, 4.0, 10000, 181);
  EXPECT_NEAR(r.p, 2.0, 1e-15);
  EXPECT_TRUE(r.all_even);
  EXPECT_NEAR(r.mean_half, 2.0, 4.0 * std::sqrt(2.0 / 10000));
  EXPECT_TRUE(r.chi2.pass) << r.chi2.statistic;
}

TEST(JumpSim, JumpCountZeroRate) {
  const auto r = jump_count_law_check(kBridge, 0.0, 100, 1);
  EXPECT_EQ(r.p, 0.0);
  EXPECT_EQ(r.mean_half, 0.0);
  EXPECT_TRUE(r.chi2.pass);
}

TEST(JumpSim, JumpCountRequiresLinearPath) {
  EXPECT_THROW(jump_count_law_check(DecreasingPath::exponential(1, 1, 1), 1.0, 10, 1), std::invalid_argument);
}
