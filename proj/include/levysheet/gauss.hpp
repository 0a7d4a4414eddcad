#pragma once

#include <algorithm>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "fdd.hpp"

namespace levysheet::gauss {

/// Standard d-dimensional Brownian sheet W restricted to a decreasing path.
struct GaussPathLaw {
  DecreasingPath path;
  Eigen::Index dim = 1;

  /// r(t) = x(t) / y(t); +infinity where y vanishes.
  double ratio(double t) const {
    const auto p = path.eval(t);
    if (p.y == 0.0) return std::numeric_limits<double>::infinity();
    return p.x / p.y;
  }
};

/// E[W^i_s W^i_t] = x(s ^ t) y(s v t); components are independent.
inline double covariance(const GaussPathLaw& law, double s, double t) {
  const double lo = std::min(s, t), hi = std::max(s, t);
  return law.path.eval(lo).x * law.path.eval(hi).y;
}

/// Covariance matrix of one component over the given times.
inline Mat covariance_matrix(const GaussPathLaw& law, const std::vector<double>& times) {
  const auto n = static_cast<Eigen::Index>(times.size());
  Mat c(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) c(i, j) = covariance(law, times[i], times[j]);
  }
  return c;
}

/// exp[-1/2 (sum x(t_i)y(t_i)|z_i|^2 + 2 sum_{i<j} x(t_i) y(t_j) <z_i, z_j>)]
inline Complex gaussian_joint_cf(const GaussPathLaw& law, const std::vector<double>& times, const std::vector<Vec>& zs) {
  require(times.size() == zs.size(), "gaussian_joint_cf: need one z per time");
  require_increasing(times, "gaussian_joint_cf");
  std::vector<Point2> p;
  for (double t : times) p.push_back(law.path.eval(t));
  double q = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    require(zs[i].size() == law.dim, "gaussian_joint_cf: z has wrong dimension");
    q += p[i].x * p[i].y * zs[i].squaredNorm();
    for (std::size_t j = i + 1; j < times.size(); ++j) q += 2.0 * p[i].x * p[j].y * zs[i].dot(zs[j]);
  }
  return {std::exp(-0.5 * q), 0.0};
}

/// The four time-changed Brownian motions equal in law to W along the path.
enum class Representation {
  ScaledRatio,        // y(t) B_{x(t)/y(t)}
  ScaledInverse,      // x(t) B_{y(t)/x(t)}
  BridgeForward,      // (x+y) B_{x/(x+y)} - x B_1
  BridgeBackward,     // (x+y) B_{y/(x+y)} - y B_1
};

namespace detail {

// value_k = scale_k * B_{time_k} - sub_k * B_1; entries with zero[k] are pinned to 0.
struct TimeChange {
  std::vector<double> scale, time, sub;
  std::vector<bool> zero;
};

inline TimeChange time_change(const GaussPathLaw& law, const std::vector<double>& grid, Representation rep) {
  TimeChange tc;
  for (double t : grid) {
    const auto p = law.path.eval(t);
    const bool z = p.x * p.y == 0.0;
    double sc = 0.0, tm = 0.0, sb = 0.0;
    if (!z) {
      switch (rep) {
        case Representation::ScaledRatio: sc = p.y; tm = p.x / p.y; break;
        case Representation::ScaledInverse: sc = p.x; tm = p.y / p.x; break;
        case Representation::BridgeForward: sc = p.x + p.y; tm = p.x / (p.x + p.y); sb = p.x; break;
        case Representation::BridgeBackward: sc = p.x + p.y; tm = p.y / (p.x + p.y); sb = p.y; break;
      }
    }
    tc.scale.push_back(sc);
    tc.time.push_back(tm);
    tc.sub.push_back(sb);
    tc.zero.push_back(z);
  }
  return tc;
}

/// Standard BM in R^d sampled at the given (unsorted, nonnegative) times.
template <class Rng>
std::vector<Vec> brownian_at(const std::vector<double>& times, Eigen::Index dim, Rng& rng) {
  std::vector<std::size_t> order(times.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return times[a] < times[b]; });
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Vec> out(times.size());
  Vec b = Vec::Zero(dim);
  double prev = 0.0;
  for (std::size_t idx : order) {
    const double dt = times[idx] - prev;
    if (dt > 0.0) {
      const double sd = std::sqrt(dt);
      for (Eigen::Index i = 0; i < dim; ++i) b[i] += sd * normal(rng);
      prev = times[idx];
    }
    out[idx] = b;
  }
  return out;
}

}  // namespace detail

/// The representation `simulate` picks: the ratio form, or the bridge form
/// when y vanishes at the last grid time.
inline Representation default_representation(const GaussPathLaw& law, const std::vector<double>& grid) {
  return law.path.eval(grid.back()).y == 0.0 ? Representation::BridgeForward : Representation::ScaledRatio;
}

/// Exact-in-law sample of W^alpha on the grid, via a time-changed BM.
template <class Rng>
SamplePathGrid simulate(const GaussPathLaw& law, const std::vector<double>& grid, Rng& rng,
                        std::optional<Representation> rep = std::nullopt) {
  require(!grid.empty(), "gauss::simulate: empty grid");
  require_increasing(grid, "gauss::simulate");
  const Representation r = rep.value_or(default_representation(law, grid));
  const auto tc = detail::time_change(law, grid, r);
  std::vector<double> bm_times;
  double prev = -1.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (tc.zero[k]) continue;
    if (r == Representation::ScaledRatio || r == Representation::BridgeForward) {
      require(tc.time[k] >= prev, "gauss::simulate: BM clock is not monotone on the grid");
    }
    prev = tc.time[k];
    bm_times.push_back(tc.time[k]);
  }
  const bool needs_b1 = r == Representation::BridgeForward || r == Representation::BridgeBackward;
  if (needs_b1) bm_times.push_back(1.0);
  const auto bm = detail::brownian_at(bm_times, law.dim, rng);

  SamplePathGrid out;
  out.times = grid;
  std::size_t j = 0;
  const Vec* b1 = needs_b1 ? &bm.back() : nullptr;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (tc.zero[k]) {
      out.values.push_back(Vec::Zero(law.dim));
      continue;
    }
    Vec v = tc.scale[k] * bm[j++];
    if (b1) v -= tc.sub[k] * *b1;
    out.values.push_back(std::move(v));
  }
  return out;
}

/// Gaussian law of W_t given W_s = from (real-valued sheet).
struct Transition {
  double mean;
  double variance;
  /// y(t) = 0: the law is the point mass at 0.
  bool degenerate;
};

inline Transition transition(const GaussPathLaw& law, double s, double t, double from) {
  require(law.dim == 1, "transition: real-valued sheets only");
  require(s < t, "transition: need s < t");
  const auto ps = law.path.eval(s);
  const auto pt = law.path.eval(t);
  require(ps.y > 0.0, "transition: y(s) must be positive");
  const double k = pt.y / ps.y;
  double var = pt.y * (pt.x - k * ps.x);
  const double scale = pt.x * pt.y + ps.x * ps.y;
  if (var < 0.0 && var > -1e-14 * scale) var = 0.0;
  if (var < 0.0) throw std::domain_error("transition: negative conditional variance (invalid path data)");
  return {k * from, var, pt.y == 0.0};
}

/// Transition density f(to, t | from, s); nullopt when the law is a point mass.
inline std::optional<double> transition_density(const GaussPathLaw& law, double s, double t, double from, double to) {
  const auto tr = transition(law, s, t, from);
  if (tr.degenerate || tr.variance == 0.0) return std::nullopt;
  const double d = to - tr.mean;
  return std::exp(-0.5 * d * d / tr.variance) / std::sqrt(2.0 * std::numbers::pi * tr.variance);
}

/// P(W^alpha has a zero in (s, t) | W_s = z), z != 0.
/// Evaluated as the BM hitting probability 2(1 - Phi(|z/y(s)| / sqrt(r(t) - r(s)))).
inline double zero_prob_conditional(const GaussPathLaw& law, double s, double t, double z) {
  require(law.dim == 1, "zero_prob_conditional: real-valued sheets only");
  require(z != 0.0 && std::isfinite(z), "zero_prob_conditional: z must be nonzero");
  require(s < t, "zero_prob_conditional: need s < t");
  const double ys = law.path.eval(s).y;
  require(ys > 0.0, "zero_prob_conditional: y(s) must be positive");
  const double rs = law.ratio(s), rt = law.ratio(t);
  if (std::isinf(rt)) return 1.0;
  const double gap = rt - rs;
  require(gap >= 0.0, "zero_prob_conditional: r must be increasing");
  if (gap == 0.0) return 0.0;
  return std::erfc(std::abs(z / ys) / std::sqrt(2.0 * gap));
}

/// P(W^alpha has a zero in (s, t)) = (2/pi) arccos sqrt(r(s)/r(t)).
inline double zero_prob(const GaussPathLaw& law, double s, double t) {
  require(law.dim == 1, "zero_prob: real-valued sheets only");
  require(s <= t, "zero_prob: need s <= t");
  if (s == t) return 0.0;
  const double rs = law.ratio(s), rt = law.ratio(t);
  if (std::isinf(rt)) return 1.0;
  require(rt > 0.0, "zero_prob: r(t) must be positive");
  const double q = std::clamp(rs / rt, 0.0, 1.0);
  return 2.0 / std::numbers::pi * std::acos(std::sqrt(q));
}

/// Monte Carlo frequency of at least one sign change of W^alpha over a
/// uniform grid of `points` times on [s, t]. Paths stop at the first change.
template <class Rng>
std::size_t count_sign_changes(const GaussPathLaw& law, double s, double t, std::size_t points, std::size_t paths,
                               Rng& rng) {
  require(law.dim == 1, "count_sign_changes: real-valued sheets only");
  require(points >= 2 && s < t, "count_sign_changes: need s < t and at least two points");
  const auto grid = linspace(s, t, points);
  std::vector<double> sd(points, 0.0);
  std::vector<double> r(points);
  for (std::size_t k = 0; k < points; ++k) r[k] = law.ratio(grid[k]);
  require(std::isfinite(r.back()), "count_sign_changes: y must be positive on [s, t]");
  for (std::size_t k = 1; k < points; ++k) {
    require(r[k] >= r[k - 1], "count_sign_changes: r must be increasing");
    sd[k] = std::sqrt(r[k] - r[k - 1]);
  }
  // sign(W_t) = sign(B_{r(t)}) because y > 0 on the interior
  std::normal_distribution<double> normal(0.0, 1.0);
  std::size_t hits = 0;
  for (std::size_t p = 0; p < paths; ++p) {
    double b = std::sqrt(r[0]) * normal(rng);
    const bool positive = b > 0.0;
    for (std::size_t k = 1; k < points; ++k) {
      b += sd[k] * normal(rng);
      if ((b > 0.0) != positive || b == 0.0) {
        ++hits;
        break;
      }
    }
  }
  return hits;
}

struct BridgeParams {
  double l;
  double p;
};

/// Matches alpha(t) = (p t, (1 - t/l) / p) on [0, l].
inline std::optional<BridgeParams> identify_bridge(const DecreasingPath& path, double tol = 1e-9) {
  const auto& d = path.domain();
  if (std::abs(d.lo) > tol) return std::nullopt;
  const double l = d.hi;
  const double p = path.eval(l).x / l;
  if (!(p > 0.0)) return std::nullopt;
  const double scale = std::max(p * l, 1.0 / p);
  for (double t : linspace(d.lo, d.hi, 65)) {
    const auto q = path.eval(t);
    if (std::abs(q.x - p * t) > tol * scale) return std::nullopt;
    if (std::abs(q.y - (1.0 - t / l) / p) > tol * scale) return std::nullopt;
  }
  return BridgeParams{l, p};
}

struct OuParams {
  double a, b, c;
  /// Stationary variance ab.
  double r;
};

/// Matches alpha(t) = (a e^{ct}, b e^{-ct}).
inline std::optional<OuParams> identify_ou(const DecreasingPath& path, double tol = 1e-9) {
  const auto& d = path.domain();
  const auto p0 = path.eval(d.lo);
  const auto p1 = path.eval(d.hi);
  if (!(p0.x > 0.0 && p1.y > 0.0)) return std::nullopt;
  const double c = std::log(p1.x / p0.x) / d.length();
  if (!(c > 0.0)) return std::nullopt;
  const double a = p0.x * std::exp(-c * d.lo);
  const double b = p0.y * std::exp(c * d.lo);
  for (double t : linspace(d.lo, d.hi, 65)) {
    const auto q = path.eval(t);
    if (!close_rel(q.x, a * std::exp(c * t), tol)) return std::nullopt;
    if (!close_rel(q.y, b * std::exp(-c * t), tol)) return std::nullopt;
  }
  return OuParams{a, b, c, a * b};
}

}  // namespace levysheet::gauss
