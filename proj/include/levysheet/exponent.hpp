#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "core.hpp"

namespace levysheet {

// =============================================================================
// Jump distributions
// =============================================================================

namespace jumps {

/// Dirac mass at a nonzero point.
struct PointMass {
  Vec x;
};

/// Equal mass at +x and -x.
struct TwoPoint {
  Vec x;
};

/// Independent uniform components on [-a, a].
struct Uniform {
  double a = 1.0;
  Eigen::Index dim = 1;
};

/// Centered isotropic Gaussian, N(0, sigma^2 I).
struct Gaussian {
  double sigma = 1.0;
  Eigen::Index dim = 1;
};

/// User supplied law. The truncated first moment has to be given
/// analytically; a missing characteristic function makes eval_psi throw.
struct Custom {
  std::string name = "custom";
  Eigen::Index dim = 1;
  std::function<Complex(const Vec&)> cf;
  std::function<Vec(Engine&)> sampler;
  Vec truncated_mean;               // int_{|x|<=1} x F(dx)
  std::optional<Vec> mean;          // int x F(dx)
  std::optional<double> second_moment;  // int |x|^2 F(dx)
  bool symmetric = false;
  bool finite_mean = false;
};

}  // namespace jumps

/// Sampleable jump law F with an evaluable characteristic function.
class JumpDistribution {
 public:
  using Kind = std::variant<jumps::PointMass, jumps::TwoPoint, jumps::Uniform, jumps::Gaussian,
                            jumps::Custom>;

  JumpDistribution(Kind k) : kind_(std::move(k)) { validate(); }

  static JumpDistribution point_mass(Vec x) { return {jumps::PointMass{std::move(x)}}; }
  static JumpDistribution two_point(Vec x) { return {jumps::TwoPoint{std::move(x)}}; }
  static JumpDistribution uniform(double a, Eigen::Index dim = 1) { return {jumps::Uniform{a, dim}}; }
  static JumpDistribution gaussian(double sigma, Eigen::Index dim = 1) {
    return {jumps::Gaussian{sigma, dim}};
  }

  const Kind& kind() const { return kind_; }

  std::string name() const {
    return std::visit(
        [](const auto& k) -> std::string {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, jumps::PointMass>) return "point_mass";
          else if constexpr (std::is_same_v<T, jumps::TwoPoint>) return "two_point";
          else if constexpr (std::is_same_v<T, jumps::Uniform>) return "uniform";
          else if constexpr (std::is_same_v<T, jumps::Gaussian>) return "gaussian";
          else return k.name;
        },
        kind_);
  }

  Eigen::Index dim() const {
    return std::visit(
        [](const auto& k) -> Eigen::Index {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, jumps::PointMass> || std::is_same_v<T, jumps::TwoPoint>)
            return k.x.size();
          else return k.dim;
        },
        kind_);
  }

  bool has_cf() const {
    if (auto c = std::get_if<jumps::Custom>(&kind_)) return static_cast<bool>(c->cf);
    return true;
  }

  Complex cf(const Vec& z) const {
    return std::visit(
        [&](const auto& k) -> Complex {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, jumps::PointMass>) {
            const double p = z.dot(k.x);
            return {std::cos(p), std::sin(p)};
          } else if constexpr (std::is_same_v<T, jumps::TwoPoint>) {
            return {std::cos(z.dot(k.x)), 0.0};
          } else if constexpr (std::is_same_v<T, jumps::Uniform>) {
            double r = 1.0;
            for (Eigen::Index i = 0; i < z.size(); ++i) {
              const double w = k.a * z[i];
              r *= (w == 0.0) ? 1.0 : std::sin(w) / w;
            }
            return {r, 0.0};
          } else if constexpr (std::is_same_v<T, jumps::Gaussian>) {
            return {std::exp(-0.5 * k.sigma * k.sigma * z.squaredNorm()), 0.0};
          } else {
            if (!k.cf) throw std::invalid_argument("jump distribution '" + k.name + "' has no characteristic function");
            return k.cf(z);
          }
        },
        kind_);
  }

  /// int_{|x| <= 1} x F(dx)
  Vec truncated_mean() const {
    return std::visit(
        [&](const auto& k) -> Vec {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, jumps::PointMass>) {
            return k.x.norm() <= 1.0 ? Vec(k.x) : Vec(Vec::Zero(k.x.size()));
          } else if constexpr (std::is_same_v<T, jumps::Custom>) {
            return k.truncated_mean;
          } else {
            return Vec::Zero(dim());
          }
        },
        kind_);
  }

  std::optional<Vec> mean() const {
    return std::visit(
        [&](const auto& k) -> std::optional<Vec> {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, jumps::PointMass>) return k.x;
          else if constexpr (std::is_same_v<T, jumps::Custom>) return k.mean;
          else return Vec(Vec::Zero(dim()));
        },
        kind_);
  }

  /// E|J|^2, when known.
  std::optional<double> second_moment() const {
    return std::visit(
        [&](const auto& k) -> std::optional<double> {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, jumps::PointMass> || std::is_same_v<T, jumps::TwoPoint>)
            return k.x.squaredNorm();
          else if constexpr (std::is_same_v<T, jumps::Uniform>)
            return static_cast<double>(k.dim) * k.a * k.a / 3.0;
          else if constexpr (std::is_same_v<T, jumps::Gaussian>)
            return static_cast<double>(k.dim) * k.sigma * k.sigma;
          else return k.second_moment;
        },
        kind_);
  }

  bool is_symmetric() const {
    return std::visit(
        [](const auto& k) -> bool {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, jumps::PointMass>) return false;
          else if constexpr (std::is_same_v<T, jumps::Custom>) return k.symmetric;
          else return true;
        },
        kind_);
  }

  /// (F + F~) / 2
  JumpDistribution symmetrized() const {
    if (is_symmetric()) return *this;
    if (auto p = std::get_if<jumps::PointMass>(&kind_)) return two_point(p->x);
    auto c = std::get<jumps::Custom>(kind_);
    jumps::Custom s;
    s.name = "symmetrized_" + c.name;
    s.dim = c.dim;
    if (c.cf) {
      auto f = c.cf;
      s.cf = [f](const Vec& z) { return Complex{f(z).real(), 0.0}; };
    }
    if (c.sampler) {
      auto g = c.sampler;
      s.sampler = [g](Engine& rng) {
        Vec j = g(rng);
        return std::bernoulli_distribution(0.5)(rng) ? j : Vec(-j);
      };
    }
    s.truncated_mean = Vec::Zero(c.dim);
    if (c.mean) s.mean = Vec(Vec::Zero(c.dim));
    s.second_moment = c.second_moment;
    s.symmetric = true;
    s.finite_mean = c.finite_mean;
    return {std::move(s)};
  }

  template <class Rng>
  Vec sample(Rng& rng) const {
    return std::visit(
        [&](const auto& k) -> Vec {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, jumps::PointMass>) {
            return k.x;
          } else if constexpr (std::is_same_v<T, jumps::TwoPoint>) {
            return std::bernoulli_distribution(0.5)(rng) ? Vec(k.x) : Vec(-k.x);
          } else if constexpr (std::is_same_v<T, jumps::Uniform>) {
            std::uniform_real_distribution<double> u(-k.a, k.a);
            Vec j(k.dim);
            for (Eigen::Index i = 0; i < k.dim; ++i) j[i] = u(rng);
            return j;
          } else if constexpr (std::is_same_v<T, jumps::Gaussian>) {
            std::normal_distribution<double> n(0.0, k.sigma);
            Vec j(k.dim);
            for (Eigen::Index i = 0; i < k.dim; ++i) j[i] = n(rng);
            return j;
          } else {
            if constexpr (std::is_same_v<Rng, Engine>) {
              if (!k.sampler) throw std::invalid_argument("jump distribution '" + k.name + "' has no sampler");
              return k.sampler(rng);
            } else {
              throw std::invalid_argument("custom jump samplers require levysheet::Engine");
            }
          }
        },
        kind_);
  }

 private:
  void validate() const {
    std::visit(
        [](const auto& k) {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, jumps::PointMass> || std::is_same_v<T, jumps::TwoPoint>) {
            require(k.x.size() >= 1 && k.x.allFinite(), "jump point must be a finite vector");
            require(k.x.norm() > 0.0, "jump point must be nonzero (no atom at 0)");
          } else if constexpr (std::is_same_v<T, jumps::Uniform>) {
            require(k.dim >= 1 && std::isfinite(k.a) && k.a > 0.0, "uniform jumps: need a > 0");
          } else if constexpr (std::is_same_v<T, jumps::Gaussian>) {
            require(k.dim >= 1 && std::isfinite(k.sigma) && k.sigma > 0.0, "gaussian jumps: need sigma > 0");
          } else {
            require(k.dim >= 1, "custom jumps: dim must be positive");
            require(k.finite_mean, "custom jumps: finite mean must be declared");
            require(k.truncated_mean.size() == k.dim, "custom jumps: truncated mean has wrong dimension");
          }
        },
        kind_);
  }

  Kind kind_;
};

// =============================================================================
// Finite jump measures
// =============================================================================

struct Atom {
  Vec x;
  double mass = 0.0;
};

/// Finite Levy measure nu: either a finite list of atoms or rate * F.
class FiniteJumpMeasure {
 public:
  struct Discrete {
    std::vector<Atom> atoms;
  };
  struct Scaled {
    double rate = 0.0;
    JumpDistribution dist;
  };

  /// nu = 0 in dimension d.
  static FiniteJumpMeasure none(Eigen::Index d) { return FiniteJumpMeasure(Discrete{}, d); }

  static FiniteJumpMeasure discrete(std::vector<Atom> atoms, std::optional<Eigen::Index> d = {}) {
    const Eigen::Index dim = d ? *d : (atoms.empty() ? 1 : atoms.front().x.size());
    return FiniteJumpMeasure(Discrete{std::move(atoms)}, dim);
  }

  static FiniteJumpMeasure scaled(double rate, JumpDistribution dist) {
    const auto d = dist.dim();
    return FiniteJumpMeasure(Scaled{rate, std::move(dist)}, d);
  }

  Eigen::Index dim() const { return dim_; }
  bool is_discrete() const { return std::holds_alternative<Discrete>(rep_); }
  const Discrete* as_discrete() const { return std::get_if<Discrete>(&rep_); }
  const Scaled* as_scaled() const { return std::get_if<Scaled>(&rep_); }

  double total_rate() const {
    if (auto d = as_discrete()) {
      double s = 0.0;
      for (const auto& a : d->atoms) s += a.mass;
      return s;
    }
    return as_scaled()->rate;
  }

  bool is_zero() const { return total_rate() == 0.0; }

  /// int_{|x|<=1} x nu(dx)
  Vec truncated_first_moment() const {
    Vec m = Vec::Zero(dim_);
    if (auto d = as_discrete()) {
      for (const auto& a : d->atoms) {
        if (a.x.norm() <= 1.0) m += a.mass * a.x;
      }
      return m;
    }
    const auto& s = *as_scaled();
    return s.rate * s.dist.truncated_mean();
  }

  /// int x nu(dx), when finite and known.
  std::optional<Vec> first_moment() const {
    if (auto d = as_discrete()) {
      Vec m = Vec::Zero(dim_);
      for (const auto& a : d->atoms) m += a.mass * a.x;
      return m;
    }
    const auto& s = *as_scaled();
    auto mu = s.dist.mean();
    if (!mu) return std::nullopt;
    return Vec(s.rate * *mu);
  }

  /// int |x|^2 nu(dx), when known.
  std::optional<double> second_moment() const {
    if (auto d = as_discrete()) {
      double m = 0.0;
      for (const auto& a : d->atoms) m += a.mass * a.x.squaredNorm();
      return m;
    }
    const auto& s = *as_scaled();
    auto m2 = s.dist.second_moment();
    if (!m2) return std::nullopt;
    return s.rate * *m2;
  }

  /// int (e^{i<z,x>} - 1 - i<z,x> 1{|x|<=1}) nu(dx)
  Complex compensated_integral(const Vec& z) const {
    if (auto d = as_discrete()) {
      Complex acc{0.0, 0.0};
      for (const auto& a : d->atoms) {
        const double p = z.dot(a.x);
        const double comp = a.x.norm() <= 1.0 ? p : 0.0;
        acc += a.mass * Complex{std::cos(p) - 1.0, std::sin(p) - comp};
      }
      return acc;
    }
    const auto& s = *as_scaled();
    const Complex f = s.dist.cf(z);
    const double comp = z.dot(s.rate * s.dist.truncated_mean());
    return s.rate * (f - 1.0) - Complex{0.0, comp};
  }

  bool has_cf() const {
    if (auto s = as_scaled()) return s->dist.has_cf();
    return true;
  }

  /// Draw one jump from nu / |nu|.
  template <class Rng>
  Vec sample_jump(Rng& rng) const {
    if (auto d = as_discrete()) {
      require(!d->atoms.empty(), "cannot sample from the zero measure");
      if (d->atoms.size() == 1) return d->atoms.front().x;
      const double total = total_rate();
      double u = std::uniform_real_distribution<double>(0.0, total)(rng);
      for (const auto& a : d->atoms) {
        if (u < a.mass) return a.x;
        u -= a.mass;
      }
      return d->atoms.back().x;
    }
    return as_scaled()->dist.sample(rng);
  }

  /// nu = nu~ up to tol, atom-wise for discrete measures.
  bool is_symmetric(double tol = 1e-12) const {
    if (auto s = as_scaled()) return s->dist.is_symmetric();
    const auto atoms = merged(as_discrete()->atoms, tol);
    for (const auto& a : atoms) {
      bool matched = false;
      for (const auto& b : atoms) {
        if ((a.x + b.x).cwiseAbs().maxCoeff() <= tol && close_rel(a.mass, b.mass, tol, tol)) {
          matched = true;
          break;
        }
      }
      if (!matched) return false;
    }
    return true;
  }

  /// nu + nu~
  FiniteJumpMeasure plus_dual() const {
    if (auto d = as_discrete()) {
      std::vector<Atom> out = d->atoms;
      for (const auto& a : d->atoms) out.push_back({Vec(-a.x), a.mass});
      return FiniteJumpMeasure(Discrete{merged(out, 0.0)}, dim_);
    }
    const auto& s = *as_scaled();
    return scaled(2.0 * s.rate, s.dist.symmetrized());
  }

  FiniteJumpMeasure scaled_by(double k) const {
    require(std::isfinite(k) && k >= 0.0, "measure scale must be finite and nonnegative");
    if (auto d = as_discrete()) {
      std::vector<Atom> out;
      if (k > 0.0) {
        for (const auto& a : d->atoms) out.push_back({a.x, k * a.mass});
      }
      return FiniteJumpMeasure(Discrete{std::move(out)}, dim_);
    }
    const auto& s = *as_scaled();
    if (k == 0.0) return none(dim_);
    return scaled(k * s.rate, s.dist);
  }

 private:
  FiniteJumpMeasure(std::variant<Discrete, Scaled> rep, Eigen::Index d) : rep_(std::move(rep)), dim_(d) {
    validate();
  }

  static std::vector<Atom> merged(const std::vector<Atom>& in, double tol) {
    std::vector<Atom> out;
    for (const auto& a : in) {
      auto it = std::find_if(out.begin(), out.end(), [&](const Atom& b) {
        return (a.x - b.x).cwiseAbs().maxCoeff() <= tol;
      });
      if (it == out.end()) out.push_back(a);
      else it->mass += a.mass;
    }
    return out;
  }

  void validate() const {
    require(dim_ >= 1, "jump measure dimension must be positive");
    if (auto d = as_discrete()) {
      for (const auto& a : d->atoms) {
        require(a.x.size() == dim_, "jump atom has wrong dimension");
        require(a.x.allFinite(), "jump atom must be finite");
        require(a.x.norm() > 0.0, "jump measure may not charge the origin");
        require(std::isfinite(a.mass) && a.mass > 0.0, "jump atom mass must be positive and finite");
      }
    } else {
      const auto& s = *as_scaled();
      require(std::isfinite(s.rate) && s.rate > 0.0, "scaled jump measure needs a positive finite rate");
    }
  }

  std::variant<Discrete, Scaled> rep_;
  Eigen::Index dim_ = 1;
};

// =============================================================================
// Levy triplet
// =============================================================================

/// Levy-Khintchine triplet (gamma, A, nu) restricted to finite jump measures.
class LevyTriplet {
 public:
  LevyTriplet(Vec gamma, Mat gaussian, FiniteJumpMeasure jumps)
      : gamma_(std::move(gamma)), gaussian_(std::move(gaussian)), jumps_(std::move(jumps)) {
    validate();
  }

  /// Standard Brownian sheet exponent -|z|^2/2.
  static LevyTriplet brownian(Eigen::Index d = 1) {
    return {Vec::Zero(d), Mat::Identity(d, d), FiniteJumpMeasure::none(d)};
  }

  static LevyTriplet deterministic(Vec drift) {
    const auto d = drift.size();
    return {std::move(drift), Mat::Zero(d, d), FiniteJumpMeasure::none(d)};
  }

  /// Builds the triplet from the drift gamma_0 rather than gamma.
  static LevyTriplet from_drift(const Vec& drift, Mat gaussian, FiniteJumpMeasure jumps) {
    Vec gamma = drift + jumps.truncated_first_moment();
    return {std::move(gamma), std::move(gaussian), std::move(jumps)};
  }

  /// Compound Poisson with zero drift.
  static LevyTriplet compound_poisson(FiniteJumpMeasure jumps) {
    const auto d = jumps.dim();
    return from_drift(Vec::Zero(d), Mat::Zero(d, d), std::move(jumps));
  }

  Eigen::Index dim() const { return gamma_.size(); }
  const Vec& gamma() const { return gamma_; }
  const Mat& gaussian() const { return gaussian_; }
  const FiniteJumpMeasure& jumps() const { return jumps_; }

  /// gamma_0 = gamma - int_{|x|<=1} x nu(dx)
  Vec drift() const { return gamma_ - jumps_.truncated_first_moment(); }

  /// E[X_{1,1}], when the jump measure has a known first moment.
  std::optional<Vec> mean() const {
    auto m = jumps_.first_moment();
    if (!m) return std::nullopt;
    return Vec(drift() + *m);
  }

  /// Trace of Cov[X_{1,1}], when known.
  std::optional<double> variance_trace() const {
    auto m2 = jumps_.second_moment();
    if (!m2) return std::nullopt;
    return gaussian_.trace() + *m2;
  }

  bool is_gaussian() const { return jumps_.is_zero(); }

 private:
  void validate() const {
    const auto d = gamma_.size();
    require(d >= 1, "triplet dimension must be positive");
    require(gamma_.allFinite(), "gamma must be finite");
    require(gaussian_.rows() == d && gaussian_.cols() == d, "gaussian matrix must be d x d");
    require(gaussian_.allFinite(), "gaussian matrix must be finite");
    require(jumps_.dim() == d, "jump measure dimension does not match gamma");
    const double scale = std::max(1.0, gaussian_.cwiseAbs().maxCoeff());
    require((gaussian_ - gaussian_.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale,
            "gaussian matrix must be symmetric");
    const Mat sym = 0.5 * (gaussian_ + gaussian_.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(sym, Eigen::EigenvaluesOnly);
    require(es.eigenvalues().minCoeff() >= -1e-12, "gaussian matrix must be nonnegative definite");
  }

  Vec gamma_;
  Mat gaussian_;
  FiniteJumpMeasure jumps_;
};

// =============================================================================
// Exponent and predicates
// =============================================================================

/// Characteristic exponent psi(z) of the triplet; psi(0) = 0 exactly.
inline Complex eval_psi(const LevyTriplet& t, const Vec& z) {
  require(z.size() == t.dim(), "eval_psi: dimension mismatch");
  require(z.allFinite(), "eval_psi: z must be finite");
  require(t.jumps().has_cf(), "eval_psi: jump distribution has no characteristic function");
  if (z.isZero(0.0)) return {0.0, 0.0};
  const double quad = z.dot(t.gaussian() * z);
  return Complex{-0.5 * quad, t.gamma().dot(z)} + t.jumps().compensated_integral(z);
}

inline Complex eval_psi(const LevyTriplet& t, double z) { return eval_psi(t, scalar_vec(z)); }

inline bool is_symmetric(const LevyTriplet& t, double tol = 1e-12) {
  return t.drift().cwiseAbs().maxCoeff() <= tol && t.jumps().is_symmetric(tol);
}

/// A = 0 and nu = 0, i.e. psi(z) = -psi(-z).
inline bool is_deterministic(const LevyTriplet& t) {
  return t.gaussian().isZero(0.0) && t.jumps().is_zero();
}

/// Triplet with exponent psi(z) + psi(-z): jumps nu + nu~, Gaussian part 2A, zero drift.
inline LevyTriplet symmetrize(const LevyTriplet& t) {
  auto j = t.jumps().plus_dual();
  Vec gamma = j.truncated_first_moment();
  return {std::move(gamma), 2.0 * t.gaussian(), std::move(j)};
}

/// Triplet whose exponent is k * psi (k >= 0).
inline LevyTriplet scale_exponent(const LevyTriplet& t, double k) {
  require(std::isfinite(k) && k >= 0.0, "scale_exponent: k must be nonnegative");
  auto j = t.jumps().scaled_by(k);
  return LevyTriplet::from_drift(k * t.drift(), k * t.gaussian(), std::move(j));
}

}  // namespace levysheet
