#pragma once

#include <optional>
#include <vector>

#include "exponent.hpp"
#include "gauss.hpp"
#include "jumpsim.hpp"
#include "path.hpp"

namespace levysheet::stationary {

/// Sheet restricted to the exponential path (a e^{ct}, b e^{-ct}).
struct StationaryLaw {
  LevyTriplet triplet;
  double a = 1.0, b = 1.0, c = 1.0;

  StationaryLaw(LevyTriplet t, double a_, double b_, double c_) : triplet(std::move(t)), a(a_), b(b_), c(c_) {
    require(a > 0.0 && b > 0.0 && c > 0.0, "stationary law: a, b, c must be positive");
  }

  /// Exponent of the one-dimensional marginal, ab psi(z).
  Complex marginal_psi(const Vec& z) const { return a * b * eval_psi(triplet, z); }

  DecreasingPath path(double t_max) const {
    require(t_max > 0.0, "stationary law: horizon must be positive");
    return DecreasingPath::exponential(a, b, c, 0.0, t_max);
  }
};

/// Y_t = X_{t + t0} - X_{t0} along a vertical-then-horizontal path.
struct Rebased {
  /// Y has exponent scale * psi.
  double scale;
  LevyTriplet exponent;
  /// [0, sup T - t0)
  Interval domain;
};

inline Rebased rebase(const LevyTriplet& triplet, const DecreasingPath& path, double t0) {
  const auto cls = classify(path);
  require(cls.tag == PathClassTag::VThenH, "rebase: path is not vertical-then-horizontal");
  require(is_symmetric(triplet), "rebase: sheet must be symmetric");
  const auto& d = path.domain();
  require(d.contains(t0), "rebase: t0 outside T");
  require(t0 < d.hi, "rebase: t0 = sup T leaves an empty domain");
  const double k = phi(cls, 1.0);
  return {k, scale_exponent(triplet, k), {0.0, d.hi - t0}};
}

/// rho(u) = e^{-c|u|}
inline double autocorrelation(const StationaryLaw& law, double u) {
  const auto v = law.triplet.variance_trace();
  require(v.has_value() && *v > 0.0, "autocorrelation: triplet is not square integrable");
  return std::exp(-law.c * std::abs(u));
}

namespace detail {

/// L with L L^T = A, from the symmetric eigendecomposition.
inline Mat gaussian_factor(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  const Vec root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal();
}

}  // namespace detail

/// One draw of X^alpha on the grid for a general finite-activity triplet:
/// drift x y gamma_0, Gaussian part L W^alpha, and the jump field summed over
/// (0, x(t_max)] x (0, y(t_min)].
template <class Rng>
SamplePathGrid simulate_along_path(const LevyTriplet& triplet, const DecreasingPath& path,
                                   const std::vector<double>& grid, Rng& rng) {
  require(!grid.empty(), "simulate_along_path: empty grid");
  require_increasing(grid, "simulate_along_path");
  const auto d = triplet.dim();
  const Vec drift = triplet.drift();
  SamplePathGrid out;
  out.times = grid;
  for (double t : grid) {
    const auto p = path.eval(t);
    out.values.push_back(p.x * p.y * drift);
  }
  if (!triplet.gaussian().isZero(0.0)) {
    const Mat l = detail::gaussian_factor(triplet.gaussian());
    const auto w = gauss::simulate(gauss::GaussPathLaw{path, d}, grid, rng);
    for (std::size_t k = 0; k < grid.size(); ++k) out.values[k] += l * w.values[k];
  }
  if (!triplet.jumps().is_zero()) {
    const auto lo = path.eval(grid.front());
    const auto hi = path.eval(grid.back());
    const auto field = jumpsim::simulate_cpp_sheet(triplet.jumps(), jumpsim::region::Rectangle{hi.x, lo.y}, rng);
    for (std::size_t k = 0; k < grid.size(); ++k) out.values[k] += jumpsim::brute_force_value(field, path, grid[k]);
  }
  return out;
}

/// One draw of the stationary process on a grid in [0, t_max], t_max = last grid time.
template <class Rng>
SamplePathGrid simulate_stationary(const StationaryLaw& law, const std::vector<double>& grid, Rng& rng) {
  require(!grid.empty() && grid.front() >= 0.0, "simulate_stationary: grid must lie in [0, t_max]");
  const double t_max = std::max(grid.back(), 1e-300);
  return simulate_along_path(law.triplet, law.path(t_max), grid, rng);
}

/// exp[psi(e^{ct} z) - psi(z)]
inline Complex ou_cf(const LevyTriplet& triplet, double c, double t, const Vec& z) {
  require(c > 0.0 && t > 0.0, "ou_cf: c and t must be positive");
  const double e = std::exp(c * t);
  return std::exp(eval_psi(triplet, Vec(e * z)) - eval_psi(triplet, z));
}

/// exp[e^{-ct} psi((e^{ct} - 1) z) + (1 - e^{-ct})(psi(e^{ct} z) + psi(-z))]
inline Complex exp_path_cf(const LevyTriplet& triplet, double c, double t, const Vec& z) {
  require(c > 0.0 && t > 0.0, "exp_path_cf: c and t must be positive");
  const double e = std::exp(c * t);
  const double ie = std::exp(-c * t);
  return std::exp(ie * eval_psi(triplet, Vec((e - 1.0) * z)) +
                  (1.0 - ie) * (eval_psi(triplet, Vec(e * z)) + eval_psi(triplet, Vec(-z))));
}

struct Probe {
  double t;
  Vec z;
};

/// t in {ln 2, ln 3, 1}; z on 16 log-spaced magnitudes in [1e-2, 1e2] along +-e_k.
inline std::vector<Probe> default_probes(Eigen::Index dim) {
  std::vector<Probe> out;
  const double ts[] = {std::log(2.0), std::log(3.0), 1.0};
  for (double t : ts) {
    for (int m = 0; m < 16; ++m) {
      const double mag = std::pow(10.0, -2.0 + 4.0 * m / 15.0);
      for (Eigen::Index k = 0; k < dim; ++k) {
        for (double sign : {1.0, -1.0}) {
          Vec z = Vec::Zero(dim);
          z[k] = sign * mag;
          out.push_back({t, z});
        }
      }
    }
  }
  return out;
}

inline constexpr double kWitnessGap = 1e-3;

struct Witness {
  double t;
  Vec z;
  double gap;
};

struct OuReport {
  /// Largest |ou_cf - exp_path_cf| over the probes, when it exceeds 1e-3.
  std::optional<Witness> witness;
  double max_gap = 0.0;
};

/// Searches the probes for a point where the OU-type CF and the
/// exponential-path CF differ.
inline OuReport distinguish_ou(const LevyTriplet& triplet, double c, std::optional<std::vector<Probe>> probes = {}) {
  const auto grid = probes ? *probes : default_probes(triplet.dim());
  OuReport r;
  std::optional<Witness> best;
  for (const auto& p : grid) {
    const double gap = std::abs(ou_cf(triplet, c, p.t, p.z) - exp_path_cf(triplet, c, p.t, p.z));
    if (gap > r.max_gap || !best) {
      r.max_gap = std::max(r.max_gap, gap);
      best = Witness{p.t, p.z, gap};
    }
  }
  if (best && best->gap > kWitnessGap) r.witness = best;
  return r;
}

}  // namespace levysheet::stationary
