#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "levysheet/path.hpp"

using namespace levysheet;

namespace {

std::vector<DecreasingPath> closed_forms() {
  return {DecreasingPath::horizontal(2.0, 0.5, 1.5, 0.0, 2.0),
          DecreasingPath::vertical(1.5, 3.0, 1.0, 0.0, 2.0),
          DecreasingPath::vthenh(1.0, 2.0, 1.5, 3.0, 4.0, 0.0, 2.0),  // ac = bd = 6
          DecreasingPath::linear(0.0, 1.0, 1.0, 1.0),
          DecreasingPath::linear(0.5, 2.0, 3.0, 0.5, 0.0, 4.0),
          DecreasingPath::exponential(1.0, 1.0, 1.0),
          DecreasingPath::exponential(0.5, 3.0, 2.0, -1.0, 1.5)};
}

std::pair<double, double> random_pair(Engine& rng, const Interval& d) {
  std::uniform_real_distribution<double> u(d.lo, d.hi);
  double s = u(rng), t = u(rng);
  if (s > t) std::swap(s, t);
  return {s, t};
}

}  // namespace

TEST(Path, EvalExamples) {
  const auto lin = DecreasingPath::linear(0.0, 1.0, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(lin.eval(0.25).x, 0.25);
  EXPECT_DOUBLE_EQ(lin.eval(0.25).y, 0.75);
  const auto ex = DecreasingPath::exponential(1.0, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(ex.eval(0.0).x, 1.0);
  EXPECT_DOUBLE_EQ(ex.eval(0.0).y, 1.0);
  const auto tab = DecreasingPath::tabulated({{0.0, 1.0, 2.0}, {1.0, 3.0, 1.0}});
  EXPECT_DOUBLE_EQ(tab.eval(0.5).x, 2.0);
  EXPECT_DOUBLE_EQ(tab.eval(0.5).y, 1.5);
}

TEST(Path, VThenHCorner) {
  const auto p = DecreasingPath::vthenh(1.0, 2.0, 1.5, 3.0, 4.0, 0.0, 2.0);
  EXPECT_DOUBLE_EQ(p.eval(0.0).x, 2.0);
  EXPECT_DOUBLE_EQ(p.eval(0.0).y, 4.5);
  EXPECT_DOUBLE_EQ(p.eval(1.0).x, 2.0);
  EXPECT_DOUBLE_EQ(p.eval(1.0).y, 1.5);
  EXPECT_DOUBLE_EQ(p.eval(2.0).x, 6.0);
  EXPECT_DOUBLE_EQ(p.eval(2.0).y, 1.5);
}

TEST(Path, EvalOutsideDomainThrows) {
  const auto lin = DecreasingPath::linear(0.0, 1.0, 1.0, 1.0);
  EXPECT_THROW(lin.eval(1.5), std::out_of_range);
  EXPECT_THROW(lin.eval(-0.1), std::out_of_range);
}

TEST(Path, RejectsInvalidPaths) {
  // y increasing
  EXPECT_THROW(DecreasingPath::tabulated({{0.0, 1.0, 1.0}, {1.0, 2.0, 2.0}}), std::invalid_argument);
  // x decreasing
  EXPECT_THROW(DecreasingPath::tabulated({{0.0, 2.0, 2.0}, {1.0, 1.0, 1.0}}), std::invalid_argument);
  // times not increasing
  EXPECT_THROW(DecreasingPath::tabulated({{0.0, 1.0, 2.0}, {0.0, 2.0, 1.0}}), std::invalid_argument);
  // y hits zero inside the domain
  EXPECT_THROW(DecreasingPath::linear(0.0, 1.0, 1.0, 1.0, 0.0, 2.0), std::invalid_argument);
  // both coordinates constant
  EXPECT_THROW(DecreasingPath::tabulated({{0.0, 1.0, 1.0}, {1.0, 1.0, 1.0}}), std::invalid_argument);
}

TEST(Path, ClassifyExamples) {
  const auto lin = classify(DecreasingPath::linear(0.0, 1.0, 1.0, 1.0));
  EXPECT_EQ(lin.tag, PathClassTag::Linear);
  for (double u : {0.1, 0.3, 0.5, 0.9, 1.0}) EXPECT_NEAR(phi(lin, u), u - u * u, 1e-15);

  const auto ex = classify(DecreasingPath::exponential(1.0, 1.0, 1.0));
  EXPECT_EQ(ex.tag, PathClassTag::Exponential);
  for (double u : {0.1, 0.5, 1.0}) EXPECT_NEAR(phi(ex, u), 2.0 * (1.0 - std::exp(-u)), 1e-15);

  std::vector<forms::Knot> knots;
  for (double t : linspace(0.1, 0.9, 64)) knots.push_back({t, t * t, 1.0 - t});
  const auto ns = classify(DecreasingPath::tabulated(knots));
  EXPECT_EQ(ns.tag, PathClassTag::NonStationary);
  EXPECT_GT(ns.residual, 1e-6);
}

TEST(Path, PhiExamples) {
  PathClass iv{PathClassTag::Exponential, {1.0, 1.0, 1.0, 0.0, 0.0}, 0.0};
  EXPECT_NEAR(phi(iv, std::log(2.0)), 1.0, 1e-15);
  PathClass iii{PathClassTag::Linear, {0.0, 1.0, 1.0, 1.0, 0.0}, 0.0};
  EXPECT_NEAR(phi(iii, 1.0), 0.0, 1e-15);
  for (const auto& p : closed_forms()) EXPECT_EQ(phi(classify(p), 0.0), 0.0);
  EXPECT_THROW(phi(PathClass{}, 0.5), std::invalid_argument);
  EXPECT_THROW(phi(iv, -0.1), std::invalid_argument);
}

TEST(Path, PhiNonnegativeOnLags) {
  for (const auto& p : closed_forms()) {
    const auto cls = classify(p);
    for (double u : linspace(0.0, p.domain().length(), 50)) EXPECT_GE(phi(cls, u), 0.0);
  }
}

TEST(Path, FunctionalEquationOnClosedForms) {
  Engine rng(21);
  for (const auto& p : closed_forms()) {
    const auto cls = classify(p);
    ASSERT_TRUE(cls.stationary());
    for (int k = 0; k < 1000; ++k) {
      const auto [s, t] = random_pair(rng, p.domain());
      const double f = phi(cls, t - s);
      EXPECT_LT(std::abs(functional_lhs(p, s, t) - f), 1e-9 * std::max(1.0, f)) << to_string(cls.tag);
    }
  }
}

TEST(Path, ClassIIConstraintViolationIsNonStationary) {
  const auto bad = DecreasingPath::vthenh(1.0, 2.0, 1.5, 3.0, 4.4, 0.0, 2.0);
  EXPECT_EQ(classify(bad).tag, PathClassTag::NonStationary);
  Engine rng(23);
  double worst = 0.0;
  const PathClass guess{PathClassTag::VThenH, {2.0, 1.5, 3.0, 4.4, 1.0}, 0.0};
  for (int k = 0; k < 200; ++k) {
    const auto [s, t] = random_pair(rng, bad.domain());
    worst = std::max(worst, std::abs(functional_lhs(bad, s, t) - phi(guess, t - s)));
  }
  EXPECT_GT(worst, 1e-3);
}

TEST(Path, ClassifyInvariantUnderRescaling) {
  for (const auto& p : closed_forms()) {
    const auto a = classify(p);
    const auto b = classify(p.rescaled(2.7));
    EXPECT_EQ(a.tag, b.tag);
    for (double u : linspace(0.0, p.domain().length(), 20)) EXPECT_NEAR(phi(a, u), phi(b, u), 1e-9);
  }
}

TEST(Path, TabulatedCornerCutIsNotStationary) {
  // Without a knot on the corner the interpolant has a diagonal segment.
  const auto p = DecreasingPath::vthenh(1.0, 2.0, 1.5, 3.0, 4.0, 0.0, 2.0);
  EXPECT_EQ(classify(DecreasingPath::sampled(p, 16)).tag, PathClassTag::NonStationary);
}

TEST(Path, TabulatedRecoversClosedFormTag) {
  for (const auto& p : closed_forms()) {
    const auto want = classify(p);
    // Odd knot counts put a knot on the vthenh corner at t = 1.
    for (std::size_t n : {17u, 41u}) {
      const auto got = classify(DecreasingPath::sampled(p, n));
      EXPECT_EQ(got.tag, want.tag) << to_string(want.tag) << " n=" << n;
      if (got.stationary()) {
        for (double u : linspace(0.0, p.domain().length(), 11)) {
          EXPECT_NEAR(phi(got, u), phi(want, u), 1e-6 * std::max(1.0, phi(want, u)));
        }
      }
    }
  }
}

TEST(Path, PhiMatchesDirectEvaluation) {
  Engine rng(29);
  for (const auto& p : closed_forms()) {
    const auto tab = DecreasingPath::sampled(p, 32);
    const auto cls = classify(tab);
    if (!cls.stationary()) continue;
    // On knot pairs the interpolant is exact.
    const auto& knots = std::get<forms::Tabulated>(tab.form()).knots;
    std::uniform_int_distribution<std::size_t> pick(0, knots.size() - 1);
    for (int k = 0; k < 100; ++k) {
      std::size_t i = pick(rng), j = pick(rng);
      if (i == j) continue;
      if (i > j) std::swap(i, j);
      const double s = knots[i].t, t = knots[j].t;
      EXPECT_NEAR(functional_lhs(tab, s, t), phi(cls, t - s), 1e-6 * std::max(1.0, phi(cls, t - s)));
    }
  }
}

TEST(Path, ClassifyRejectsTwoKnots) {
  EXPECT_THROW(classify(DecreasingPath::tabulated({{0.0, 1.0, 2.0}, {1.0, 3.0, 1.0}})), std::invalid_argument);
}

TEST(Path, EquivalentExamples) {
  const auto p1 = DecreasingPath::linear(0.0, 1.0, 1.0, 1.0);
  const auto p2 = DecreasingPath::linear(0.0, 2.0, 0.5, 0.5);
  ASSERT_TRUE(equivalent(p1, p2).has_value());
  EXPECT_NEAR(*equivalent(p1, p2), 2.0, 1e-12);
  EXPECT_NEAR(equivalent(p1, p1).value(), 1.0, 1e-15);
  EXPECT_FALSE(equivalent(p1, DecreasingPath::exponential(1.0, 1.0, 1.0)).has_value());
  EXPECT_THROW(equivalent(p1, DecreasingPath::linear(0.0, 1.0, 2.0, 1.0, 0.0, 1.5)), std::invalid_argument);
}

TEST(Path, EquivalentFindsRescaling) {
  for (const auto& p : closed_forms()) EXPECT_NEAR(equivalent(p, p.rescaled(0.3)).value(), 0.3, 1e-12);
}

TEST(Path, EntryAndExitTimes) {
  const auto p = DecreasingPath::linear(0.0, 1.0, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(p.entry_time(0.3).value(), 0.3);
  EXPECT_DOUBLE_EQ(p.exit_time(0.4).value(), 0.6);
  EXPECT_FALSE(p.entry_time(1.5).has_value());
  EXPECT_FALSE(p.exit_time(1.5).has_value());
  const auto tab = DecreasingPath::sampled(DecreasingPath::exponential(1.0, 1.0, 1.0), 9);
  EXPECT_NEAR(tab.x(tab.entry_time(1.7).value()), 1.7, 1e-12);
  EXPECT_NEAR(tab.y(tab.exit_time(0.6).value()), 0.6, 1e-12);
}

TEST(Path, SweepArea) {
  // Triangle under y = 1 - x.
  EXPECT_NEAR(DecreasingPath::linear(0.0, 1.0, 1.0, 1.0).sweep_area(), 0.5, 1e-15);
  // (0,e] x (0,1] plus int_1^e (1/x) dx with start rectangle 1 x 1: 1 + 1.
  EXPECT_NEAR(DecreasingPath::exponential(1.0, 1.0, 1.0).sweep_area(), 2.0, 1e-15);
  const auto ex = DecreasingPath::exponential(1.0, 1.0, 1.0);
  EXPECT_NEAR(DecreasingPath::sampled(ex, 2001).sweep_area(), 2.0, 1e-6);
}

TEST(Path, TwoPieceGuard) {
  const auto up = CurvePiece::linear(0.0, 1.0, 0.0, 1.0, 0.0, 1.0);     // (t, t)
  const auto down = CurvePiece::linear(1.0, 1.0, 1.0, -0.5, 0.0, 1.0);  // (1 + t, 1 - t/2)
  EXPECT_EQ(check_two_piece_nonstationary(up, down, 0.5, 0.5), TwoPieceVerdict::NonStationary);
  EXPECT_EQ(check_two_piece_nonstationary(up, down, 1.0, 0.5), TwoPieceVerdict::Inconclusive);
  const auto mismatched = CurvePiece::linear(1.0, 1.0, 2.0, -1.0, 0.0, 1.0);  // starts at (1, 2)
  EXPECT_THROW(check_two_piece_nonstationary(up, mismatched, 0.5, 0.5), std::invalid_argument);
  const auto down2 = CurvePiece::linear(0.0, 1.0, 2.0, -1.0, 0.0, 1.0);  // ends at (1, 1)
  EXPECT_THROW(check_two_piece_nonstationary(down2, down, 0.5, 0.5), std::invalid_argument);
}
