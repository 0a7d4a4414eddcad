#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace levysheet {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Complex = std::complex<double>;

/// Default random engine. Every simulation routine is templated on the
/// engine, this is only what the CLI and the verification suites use.
using Engine = std::mt19937_64;

/// Closed interval [lo, hi] of the real line.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  bool contains(double t, double slack = 0.0) const {
    return t >= lo - slack && t <= hi + slack;
  }
  double length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

/// Point (x(t), y(t)) of the first quadrant.
struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Values of a d-dimensional process on a strictly increasing time grid.
struct SamplePathGrid {
  std::vector<double> times;
  std::vector<Vec> values;

  std::size_t size() const { return times.size(); }
  Eigen::Index dim() const { return values.empty() ? 0 : values.front().size(); }
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

inline bool all_finite(const Vec& v) { return v.allFinite(); }

inline bool close_rel(double a, double b, double rel, double abs_floor = 0.0) {
  return std::abs(a - b) <= std::max(abs_floor, rel * std::max(std::abs(a), std::abs(b)));
}

/// Evenly spaced grid with n >= 2 points on [lo, hi], endpoints exact.
inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  require(n >= 2, "linspace: need at least two points");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  g.back() = hi;
  return g;
}

inline void require_increasing(const std::vector<double>& times, const std::string& what) {
  for (std::size_t i = 1; i < times.size(); ++i) {
    require(times[i] > times[i - 1], what + ": times must be strictly increasing");
  }
}

inline Vec scalar_vec(double v) {
  Vec z(1);
  z[0] = v;
  return z;
}

}  // namespace levysheet
