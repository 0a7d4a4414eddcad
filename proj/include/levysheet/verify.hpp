#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "path.hpp"

namespace levysheet::verify {

/// Outcome of one statistical check.
struct TestReport {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::uint64_t seed = 0;
  std::size_t n = 0;
};

/// Sample mean of (cos<z,X>, sin<z,X>) with standard errors.
struct EmpiricalCF {
  Vec z;
  std::size_t n = 0;
  double re = 0.0, im = 0.0;
  double se_re = 0.0, se_im = 0.0;

  Complex value() const { return {re, im}; }
};

/// Running sums for an empirical CF; chunks merge by addition.
class CfAccumulator {
 public:
  explicit CfAccumulator(Vec z) : z_(std::move(z)) {}

  void add(const Vec& x) {
    require(x.size() == z_.size(), "empirical cf: sample has wrong dimension");
    const double a = z_.dot(x);
    const double c = std::cos(a), s = std::sin(a);
    ++n_;
    sc_ += c;
    ss_ += s;
    sc2_ += c * c;
    ss2_ += s * s;
  }
  void add(double x) { add(scalar_vec(x)); }

  void merge(const CfAccumulator& o) {
    require(o.z_.size() == z_.size() && o.z_ == z_, "empirical cf: merging different probes");
    n_ += o.n_;
    sc_ += o.sc_;
    ss_ += o.ss_;
    sc2_ += o.sc2_;
    ss2_ += o.ss2_;
  }

  EmpiricalCF result() const {
    require(n_ > 0, "empirical cf: no samples");
    const double n = static_cast<double>(n_);
    EmpiricalCF e{z_, n_, sc_ / n, ss_ / n, 0.0, 0.0};
    // population variance; clamp rounding below zero
    e.se_re = std::sqrt(std::max(0.0, sc2_ / n - e.re * e.re) / n);
    e.se_im = std::sqrt(std::max(0.0, ss2_ / n - e.im * e.im) / n);
    return e;
  }

 private:
  Vec z_;
  std::size_t n_ = 0;
  double sc_ = 0.0, ss_ = 0.0, sc2_ = 0.0, ss2_ = 0.0;
};

inline EmpiricalCF empirical_cf(const std::vector<Vec>& samples, const Vec& z) {
  require(samples.size() >= 100, "empirical_cf: need at least 100 samples");
  CfAccumulator acc(z);
  for (const auto& x : samples) acc.add(x);
  return acc.result();
}

inline EmpiricalCF empirical_cf(const std::vector<double>& samples, double z) {
  require(samples.size() >= 100, "empirical_cf: need at least 100 samples");
  CfAccumulator acc(scalar_vec(z));
  for (double x : samples) acc.add(x);
  return acc.result();
}

/// Pass iff both the real and imaginary gaps are at most k / sqrt(N).
inline TestReport cf_match(const EmpiricalCF& emp, Complex analytic, double k = 4.0, std::string name = "cf_match",
                           std::uint64_t seed = 0) {
  require(k >= 3.0, "cf_match: band width k must be at least 3");
  const double band = k / std::sqrt(static_cast<double>(emp.n));
  const double gap = std::max(std::abs(emp.re - analytic.real()), std::abs(emp.im - analytic.imag()));
  return {std::move(name), gap, band, gap <= band, seed, emp.n};
}

/// Mean and variance of a sample, with the standard error of each.
struct MomentEstimate {
  double mean = 0.0;
  double variance = 0.0;
  double se_mean = 0.0;
  double se_variance = 0.0;
};

inline MomentEstimate moments(const std::vector<double>& xs) {
  require(xs.size() >= 2, "moments: need at least two samples");
  const double n = static_cast<double>(xs.size());
  double m = 0.0;
  for (double x : xs) m += x;
  m /= n;
  double m2 = 0.0, m4 = 0.0;
  for (double x : xs) {
    const double d = (x - m) * (x - m);
    m2 += d;
    m4 += d * d;
  }
  m2 /= n;
  m4 /= n;
  return {m, m2, std::sqrt(m2 / n), std::sqrt(std::max(0.0, m4 - m2 * m2) / n)};
}

/// Sample covariance with the standard error of the product mean.
struct CovarianceEstimate {
  double value = 0.0;
  double se = 0.0;
};

inline CovarianceEstimate covariance(const std::vector<double>& xs, const std::vector<double>& ys) {
  require(xs.size() == ys.size() && xs.size() >= 2, "covariance: need matching samples");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double c = 0.0, c2 = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double p = (xs[i] - mx) * (ys[i] - my);
    c += p;
    c2 += p * p;
  }
  c /= n;
  c2 /= n;
  return {c, std::sqrt(std::max(0.0, c2 - c * c) / n)};
}

inline double correlation(const std::vector<double>& xs, const std::vector<double>& ys) {
  const auto c = covariance(xs, ys);
  return c.value / std::sqrt(moments(xs).variance * moments(ys).variance);
}

/// Least-squares fit of X_t on X_s, checked against the conditional-mean line
/// slope y(t)/y(s), intercept (x(t) - x(s)) y(t) mean11. Uses
/// heteroskedasticity-robust (HC0) standard errors and a 4 SE band.
inline TestReport conditional_mean_regression(const std::vector<double>& xs, const std::vector<double>& xt,
                                              const DecreasingPath& path, double s, double t, double mean11,
                                              std::uint64_t seed = 0,
                                              std::string name = "conditional_mean_regression") {
  require(xs.size() == xt.size(), "conditional_mean_regression: need paired samples");
  require(xs.size() >= 10000, "conditional_mean_regression: need at least 10^4 pairs");
  require(s < t, "conditional_mean_regression: need s < t");
  const auto ps = path.eval(s);
  const auto pt = path.eval(t);
  require(ps.y > 0.0, "conditional_mean_regression: y(s) must be positive");
  const double slope0 = pt.y / ps.y;
  const double icept0 = (pt.x - ps.x) * pt.y * mean11;
  const std::size_t count = xs.size();
  const double n = static_cast<double>(count);

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    mx += xs[i];
    my += xt[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (xt[i] - my);
  }
  const double scale = std::max({1.0, std::abs(mx), std::abs(my)});

  if (sxx <= 1e-24 * n * scale * scale) {
    // X_s is constant: only the point on the line can be checked
    double worst = 0.0;
    for (std::size_t i = 0; i < count; ++i) worst = std::max(worst, std::abs(xt[i] - (slope0 * xs[i] + icept0)));
    const double tol = 1e-12 * scale;
    return {std::move(name), worst, tol, worst <= tol, seed, count};
  }

  const double b1 = sxy / sxx;
  const double b0 = my - b1 * mx;
  // HC0 sandwich for (b0, b1)
  double m00 = 0.0, m01 = 0.0, m11 = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double e = xt[i] - b0 - b1 * xs[i];
    const double e2 = e * e;
    m00 += e2;
    m01 += e2 * xs[i];
    m11 += e2 * xs[i] * xs[i];
  }
  Eigen::Matrix2d xtx;
  xtx << n, n * mx, n * mx, sxx + n * mx * mx;
  Eigen::Matrix2d meat;
  meat << m00, m01, m01, m11;
  const Eigen::Matrix2d inv = xtx.inverse();
  const Eigen::Matrix2d cov = inv * meat * inv;
  const double se0 = std::sqrt(std::max(0.0, cov(0, 0)));
  const double se1 = std::sqrt(std::max(0.0, cov(1, 1)));
  const double floor = 1e-12 * scale;
  const double z1 = std::abs(b1 - slope0) / std::max(se1, floor);
  const double z0 = std::abs(b0 - icept0) / std::max(se0, floor);
  const double stat = std::max(z0, z1);
  return {std::move(name), stat, 4.0, stat <= 4.0, seed, count};
}

// -----------------------------------------------------------------------------
// chi-square and Kolmogorov-Smirnov
// -----------------------------------------------------------------------------

inline constexpr double kSignificance = 1e-3;

/// Pearson chi-square on categories; categories with expected count below 5
/// are merged with their successors (the last group absorbs any remainder).
/// Returns the p-value as the statistic.
inline TestReport chi2_categorical(const std::vector<double>& observed, const std::vector<double>& expected_prob,
                                   std::string name = "chi2", std::uint64_t seed = 0) {
  require(observed.size() == expected_prob.size() && !observed.empty(), "chi2: mismatched categories");
  double n = 0.0;
  for (double o : observed) n += o;
  require(n > 0.0, "chi2: no samples");
  std::vector<double> go, ge;
  double ao = 0.0, ae = 0.0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    ao += observed[k];
    ae += n * expected_prob[k];
    if (ae >= 5.0) {
      go.push_back(ao);
      ge.push_back(ae);
      ao = ae = 0.0;
    }
  }
  if (ao > 0.0 || ae > 0.0) {
    if (ge.empty() || ae >= 5.0) {
      go.push_back(ao);
      ge.push_back(ae);
    } else {
      go.back() += ao;
      ge.back() += ae;
    }
  }
  require(ge.size() >= 2, "chi2: fewer than two categories after merging");
  double stat = 0.0;
  for (std::size_t k = 0; k < ge.size(); ++k) {
    if (ge[k] <= 0.0) {
      if (go[k] > 0.0) return {std::move(name), 0.0, kSignificance, false, seed, static_cast<std::size_t>(n)};
      continue;
    }
    const double d = go[k] - ge[k];
    stat += d * d / ge[k];
  }
  const double df = static_cast<double>(ge.size() - 1);
  const double p = boost::math::gamma_q(df / 2.0, stat / 2.0);
  return {std::move(name), p, kSignificance, p > kSignificance, seed, static_cast<std::size_t>(n)};
}

/// Axis-aligned box [x0, x1] x [y0, y1] split into nx x ny bins.
struct BinBox {
  double x0, x1, y0, y1;
  std::size_t nx = 10, ny = 10;
};

/// Probability of the cell [a0, a1] x [b0, b1].
using CellMass = std::function<double(double, double, double, double)>;

/// Cell masses from a density by 2-D Gauss-Legendre quadrature (smooth densities).
inline CellMass mass_from_density(std::function<double(double, double)> density) {
  return [density = std::move(density)](double a0, double a1, double b0, double b1) {
    using Q = boost::math::quadrature::gauss<double, 20>;
    return Q::integrate([&](double u) { return Q::integrate([&](double v) { return density(u, v); }, b0, b1); },
                        a0, a1);
  };
}

/// Binned chi-square of 2-D samples against exact cell masses; samples
/// outside the box form one extra category.
inline TestReport chi2_binned(const std::vector<Point2>& samples, const CellMass& mass, const BinBox& box,
                              std::string name = "chi2_binned", std::uint64_t seed = 0) {
  require(samples.size() >= 10000, "chi2_binned: need at least 10^4 samples");
  require(box.x1 > box.x0 && box.y1 > box.y0 && box.nx >= 1 && box.ny >= 1, "chi2_binned: bad box");
  const std::size_t cells = box.nx * box.ny;
  std::vector<double> obs(cells + 1, 0.0), prob(cells + 1, 0.0);
  const double wx = (box.x1 - box.x0) / static_cast<double>(box.nx);
  const double wy = (box.y1 - box.y0) / static_cast<double>(box.ny);
  for (const auto& p : samples) {
    if (p.x < box.x0 || p.x > box.x1 || p.y < box.y0 || p.y > box.y1) {
      obs[cells] += 1.0;
      continue;
    }
    const auto i = std::min(box.nx - 1, static_cast<std::size_t>((p.x - box.x0) / wx));
    const auto j = std::min(box.ny - 1, static_cast<std::size_t>((p.y - box.y0) / wy));
    obs[i * box.ny + j] += 1.0;
  }
  double inside = 0.0;
  for (std::size_t i = 0; i < box.nx; ++i) {
    for (std::size_t j = 0; j < box.ny; ++j) {
      const double a0 = box.x0 + wx * static_cast<double>(i);
      const double b0 = box.y0 + wy * static_cast<double>(j);
      const double m = mass(a0, a0 + wx, b0, b0 + wy);
      prob[i * box.ny + j] = m;
      inside += m;
    }
  }
  prob[cells] = std::max(0.0, 1.0 - inside);
  return chi2_categorical(obs, prob, std::move(name), seed);
}

/// Kolmogorov distribution tail Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
inline double kolmogorov_q(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

/// One-sample KS test against a continuous CDF; the p-value is the statistic.
inline TestReport ks_1d(std::vector<double> samples, const std::function<double(double)>& cdf,
                        std::string name = "ks_1d", std::uint64_t seed = 0) {
  require(samples.size() >= 10000, "ks_1d: need at least 10^4 samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  const double sn = std::sqrt(n);
  const double p = kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
  return {std::move(name), p, kSignificance, p > kSignificance, seed, samples.size()};
}

/// Report for |estimate - target| <= tol.
inline TestReport within(std::string name, double estimate, double target, double tol, std::uint64_t seed = 0,
                         std::size_t n = 0) {
  const double gap = std::abs(estimate - target);
  return {std::move(name), gap, tol, gap <= tol, seed, n};
}

}  // namespace levysheet::verify
