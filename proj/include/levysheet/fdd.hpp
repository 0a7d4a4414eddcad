#pragma once

#include <vector>

#include "exponent.hpp"
#include "path.hpp"

namespace levysheet {

/// Areas of the disjoint rectangles
///   B_ij = (x(t_{i-1}), x(t_i)] x (y(t_{i+j}), y(t_{i+j-1})],
/// i = 1..n, j = 1..n-i+1, with x(t_0) = y(t_{n+1}) = 0.
class RectangleGrid {
 public:
  RectangleGrid(const DecreasingPath& path, const std::vector<double>& times) : n_(times.size()) {
    require(n_ >= 1, "rectangle grid: need at least one time");
    require_increasing(times, "rectangle grid");
    xs_.resize(n_ + 2, 0.0);
    ys_.resize(n_ + 2, 0.0);
    for (std::size_t k = 0; k < n_; ++k) {
      const auto p = path.eval(times[k]);
      xs_[k + 1] = p.x;
      ys_[k + 1] = p.y;
    }
    // xs_[0] = x(t_0) = 0, ys_[n+1] = y(t_{n+1}) = 0
  }

  std::size_t size() const { return n_; }

  /// m(B_ij), 1-based as in the definition.
  double area(std::size_t i, std::size_t j) const {
    return (xs_[i] - xs_[i - 1]) * (ys_[i + j - 1] - ys_[i + j]);
  }

  /// Sum of the B_ij that make up (0, x(t_k)] x (0, y(t_k)].
  double covered_area(std::size_t k) const {
    double s = 0.0;
    for (std::size_t i = 1; i <= k; ++i) {
      for (std::size_t j = k - i + 1; j <= n_ - i + 1; ++j) s += area(i, j);
    }
    return s;
  }

  double x(std::size_t k) const { return xs_[k]; }
  double y(std::size_t k) const { return ys_[k]; }

 private:
  std::size_t n_;
  std::vector<double> xs_, ys_;
};

/// Joint characteristic function of (X^alpha_{t_1}, ..., X^alpha_{t_n}).
inline Complex joint_cf(const LevyTriplet& triplet, const DecreasingPath& path, const std::vector<double>& times,
                        const std::vector<Vec>& zs) {
  require(times.size() == zs.size(), "joint_cf: need one z per time");
  for (const auto& z : zs) require(z.size() == triplet.dim(), "joint_cf: z has wrong dimension");
  const RectangleGrid grid(path, times);
  const std::size_t n = times.size();
  // prefix[k] = z_1 + ... + z_k
  std::vector<Vec> prefix(n + 1, Vec::Zero(triplet.dim()));
  for (std::size_t k = 1; k <= n; ++k) prefix[k] = prefix[k - 1] + zs[k - 1];
  Complex exponent{0.0, 0.0};
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= n - i + 1; ++j) {
      const double m = grid.area(i, j);
      if (m == 0.0) continue;
      exponent += m * eval_psi(triplet, Vec(prefix[i + j - 1] - prefix[i - 1]));
    }
  }
  return std::exp(exponent);
}

inline Complex joint_cf(const LevyTriplet& triplet, const DecreasingPath& path, const std::vector<double>& times,
                        const std::vector<double>& zs) {
  std::vector<Vec> v;
  for (double z : zs) v.push_back(scalar_vec(z));
  return joint_cf(triplet, path, times, v);
}

/// Areas of the lower and upper rectangles of the increment over (s, t].
struct IncrementAreas {
  double lower;  // (x(t) - x(s)) y(t)
  double upper;  // x(s) (y(s) - y(t))
};

inline IncrementAreas increment_areas(const DecreasingPath& path, double s, double t) {
  require(s < t, "increment: need s < t");
  const auto ps = path.eval(s);
  const auto pt = path.eval(t);
  return {(pt.x - ps.x) * pt.y, ps.x * (ps.y - pt.y)};
}

/// E exp(i<z, X_t - X_s>) = exp[m(B^l) psi(z) + m(B^u) psi(-z)].
inline Complex increment_cf(const LevyTriplet& triplet, const DecreasingPath& path, double s, double t, const Vec& z) {
  const auto m = increment_areas(path, s, t);
  Complex e{0.0, 0.0};
  if (m.lower != 0.0) e += m.lower * eval_psi(triplet, z);
  if (m.upper != 0.0) e += m.upper * eval_psi(triplet, Vec(-z));
  return std::exp(e);
}

/// Stationary increment CF over a lag u for a classified path.
/// Non-symmetric triplets only have stationary increments along class (i)
/// and class (iv) paths; classes (ii) and (iii) are rejected for them.
inline Complex stationary_increment_cf(const LevyTriplet& triplet, const PathClass& cls, double u, const Vec& z) {
  require(cls.stationary(), "stationary_increment_cf: path class has no stationary increments");
  require(u > 0.0, "stationary_increment_cf: lag must be positive");
  const double f = phi(cls, u);
  if (is_symmetric(triplet)) return std::exp(f * eval_psi(triplet, z));
  switch (cls.tag) {
    case PathClassTag::Horizontal: return std::exp(f * eval_psi(triplet, z));
    case PathClassTag::Vertical: return std::exp(f * eval_psi(triplet, Vec(-z)));
    case PathClassTag::Exponential:
      return std::exp(0.5 * f * (eval_psi(triplet, z) + eval_psi(triplet, Vec(-z))));
    default:
      throw std::invalid_argument(
          "stationary_increment_cf: a non-symmetric sheet has no stationary increments along class (ii)/(iii) paths");
  }
}

/// E[X_t | X_s = x_s] = (y(t)/y(s)) x_s + (x(t) - x(s)) y(t) E[X_{1,1}], real-valued sheets.
inline double conditional_mean(double mean11, const DecreasingPath& path, double s, double t, double x_s) {
  require(s < t, "conditional_mean: need s < t");
  const auto ps = path.eval(s);
  const auto pt = path.eval(t);
  require(ps.y > 0.0, "conditional_mean: y(s) must be positive");
  return pt.y / ps.y * x_s + (pt.x - ps.x) * pt.y * mean11;
}

}  // namespace levysheet
