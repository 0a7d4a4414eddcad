#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "core.hpp"

namespace levysheet {

// =============================================================================
// Path forms
// =============================================================================

namespace forms {

/// x(t) = b + c t, y(t) = a.
struct Horizontal {
  double a, b, c;
};

/// x(t) = a, y(t) = b - c t.
struct Vertical {
  double a, b, c;
};

/// First vertical, then horizontal, with the corner at s_star:
/// x(t) = a + d (t - s*) 1{t > s*},  y(t) = b - c (t - s*) 1{t <= s*}.
struct VThenH {
  double s_star, a, b, c, d;
};

/// x(t) = a + b t, y(t) = c - d t.
struct Linear {
  double a, b, c, d;
};

/// x(t) = a e^{ct}, y(t) = b e^{-ct}.
struct Exponential {
  double a, b, c;
};

struct Knot {
  double t, x, y;
};

/// Piecewise linear interpolation of knots with strictly increasing times.
struct Tabulated {
  std::vector<Knot> knots;
};

}  // namespace forms

/// A decreasing path alpha(t) = (x(t), y(t)) on a closed interval: x
/// nondecreasing, y nonincreasing, both positive on the interior.
class DecreasingPath {
 public:
  using Form = std::variant<forms::Horizontal, forms::Vertical, forms::VThenH, forms::Linear,
                            forms::Exponential, forms::Tabulated>;

  DecreasingPath(Interval domain, Form form) : domain_(domain), form_(std::move(form)) {
    if (auto tab = std::get_if<forms::Tabulated>(&form_)) {
      require(tab->knots.size() >= 2, "tabulated path needs at least two knots");
      domain_ = {tab->knots.front().t, tab->knots.back().t};
    }
    validate();
  }

  static DecreasingPath horizontal(double a, double b, double c, double lo, double hi) {
    return {{lo, hi}, forms::Horizontal{a, b, c}};
  }
  static DecreasingPath vertical(double a, double b, double c, double lo, double hi) {
    return {{lo, hi}, forms::Vertical{a, b, c}};
  }
  static DecreasingPath vthenh(double s_star, double a, double b, double c, double d, double lo, double hi) {
    return {{lo, hi}, forms::VThenH{s_star, a, b, c, d}};
  }
  static DecreasingPath linear(double a, double b, double c, double d, double lo = 0.0, double hi = 1.0) {
    return {{lo, hi}, forms::Linear{a, b, c, d}};
  }
  static DecreasingPath exponential(double a, double b, double c, double lo = 0.0, double hi = 1.0) {
    return {{lo, hi}, forms::Exponential{a, b, c}};
  }
  static DecreasingPath tabulated(std::vector<forms::Knot> knots) {
    return {{}, forms::Tabulated{std::move(knots)}};
  }

  /// Samples `other` at n evenly spaced knots.
  static DecreasingPath sampled(const DecreasingPath& other, std::size_t n) {
    std::vector<forms::Knot> knots;
    for (double t : linspace(other.domain().lo, other.domain().hi, n)) {
      const auto p = other.eval(t);
      knots.push_back({t, p.x, p.y});
    }
    return tabulated(std::move(knots));
  }

  const Interval& domain() const { return domain_; }
  const Form& form() const { return form_; }
  bool is_tabulated() const { return std::holds_alternative<forms::Tabulated>(form_); }

  Point2 eval(double t) const {
    if (!domain_.contains(t)) {
      throw std::out_of_range("path eval: t=" + std::to_string(t) + " outside [" +
                              std::to_string(domain_.lo) + ", " + std::to_string(domain_.hi) + "]");
    }
    return eval_unchecked(t);
  }
  double x(double t) const { return eval(t).x; }
  double y(double t) const { return eval(t).y; }

  /// inf{t in T : x(t) >= u}, or nullopt when x never reaches u.
  std::optional<double> entry_time(double u) const {
    const double lo = domain_.lo, hi = domain_.hi;
    if (eval_unchecked(lo).x >= u) return lo;
    if (eval_unchecked(hi).x < u) return std::nullopt;
    const double t = std::visit(
        [&](const auto& f) -> double {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, forms::Horizontal>) return (u - f.b) / f.c;
          else if constexpr (std::is_same_v<F, forms::Vertical>) return lo;  // unreachable
          else if constexpr (std::is_same_v<F, forms::VThenH>) return f.s_star + (u - f.a) / f.d;
          else if constexpr (std::is_same_v<F, forms::Linear>) return (u - f.a) / f.b;
          else if constexpr (std::is_same_v<F, forms::Exponential>) return std::log(u / f.a) / f.c;
          else return tabulated_inverse(f, u, true);
        },
        form_);
    return std::clamp(t, lo, hi);
  }

  /// sup{t in T : y(t) >= v}, or nullopt when y is below v on all of T.
  std::optional<double> exit_time(double v) const {
    const double lo = domain_.lo, hi = domain_.hi;
    if (eval_unchecked(hi).y >= v) return hi;
    if (eval_unchecked(lo).y < v) return std::nullopt;
    const double t = std::visit(
        [&](const auto& f) -> double {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, forms::Horizontal>) return hi;  // unreachable
          else if constexpr (std::is_same_v<F, forms::Vertical>) return (f.b - v) / f.c;
          else if constexpr (std::is_same_v<F, forms::VThenH>) return f.s_star - (v - f.b) / f.c;
          else if constexpr (std::is_same_v<F, forms::Linear>) return (f.c - v) / f.d;
          else if constexpr (std::is_same_v<F, forms::Exponential>) return std::log(f.b / v) / f.c;
          else return tabulated_inverse(f, v, false);
        },
        form_);
    return std::clamp(t, lo, hi);
  }

  /// Area of the union of the rectangles (0, x(t)] x (0, y(t)], t in T.
  double sweep_area() const {
    const double lo = domain_.lo, hi = domain_.hi;
    const auto p0 = eval_unchecked(lo);
    const auto p1 = eval_unchecked(hi);
    const double base = p0.x * p0.y;
    return base + std::visit(
                      [&](const auto& f) -> double {
                        using F = std::decay_t<decltype(f)>;
                        if constexpr (std::is_same_v<F, forms::Horizontal>) return f.a * (p1.x - p0.x);
                        else if constexpr (std::is_same_v<F, forms::Vertical>) return 0.0;
                        else if constexpr (std::is_same_v<F, forms::VThenH>) return f.b * (p1.x - p0.x);
                        else if constexpr (std::is_same_v<F, forms::Linear>) {
                          // int y dx = b * int (c - d t) dt
                          return f.b * (f.c * (hi - lo) - 0.5 * f.d * (hi * hi - lo * lo));
                        } else if constexpr (std::is_same_v<F, forms::Exponential>) {
                          return f.a * f.b * f.c * (hi - lo);
                        } else {
                          double s = 0.0;
                          for (std::size_t i = 1; i < f.knots.size(); ++i) {
                            s += (f.knots[i].x - f.knots[i - 1].x) * 0.5 * (f.knots[i].y + f.knots[i - 1].y);
                          }
                          return s;
                        }
                      },
                      form_);
  }

  /// Path (p x, y / p), equal in law for every Levy sheet.
  DecreasingPath rescaled(double p) const {
    require(std::isfinite(p) && p > 0.0, "rescale: p must be positive");
    const Form f2 = std::visit(
        [&](const auto& f) -> Form {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, forms::Horizontal>) return forms::Horizontal{f.a / p, p * f.b, p * f.c};
          else if constexpr (std::is_same_v<F, forms::Vertical>) return forms::Vertical{p * f.a, f.b / p, f.c / p};
          else if constexpr (std::is_same_v<F, forms::VThenH>)
            return forms::VThenH{f.s_star, p * f.a, f.b / p, f.c / p, p * f.d};
          else if constexpr (std::is_same_v<F, forms::Linear>)
            return forms::Linear{p * f.a, p * f.b, f.c / p, f.d / p};
          else if constexpr (std::is_same_v<F, forms::Exponential>)
            return forms::Exponential{p * f.a, f.b / p, f.c};
          else {
            forms::Tabulated t = f;
            for (auto& k : t.knots) {
              k.x *= p;
              k.y /= p;
            }
            return t;
          }
        },
        form_);
    return {domain_, f2};
  }

 private:
  Point2 eval_unchecked(double t) const {
    return std::visit(
        [&](const auto& f) -> Point2 {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, forms::Horizontal>) return {f.b + f.c * t, f.a};
          else if constexpr (std::is_same_v<F, forms::Vertical>) return {f.a, f.b - f.c * t};
          else if constexpr (std::is_same_v<F, forms::VThenH>) {
            if (t <= f.s_star) return {f.a, f.b - f.c * (t - f.s_star)};
            return {f.a + f.d * (t - f.s_star), f.b};
          } else if constexpr (std::is_same_v<F, forms::Linear>) {
            return {f.a + f.b * t, f.c - f.d * t};
          } else if constexpr (std::is_same_v<F, forms::Exponential>) {
            return {f.a * std::exp(f.c * t), f.b * std::exp(-f.c * t)};
          } else {
            const auto& k = f.knots;
            auto it = std::upper_bound(k.begin(), k.end(), t, [](double v, const forms::Knot& kn) { return v < kn.t; });
            if (it == k.begin()) return {k.front().x, k.front().y};
            if (it == k.end()) return {k.back().x, k.back().y};
            const auto& k1 = *it;
            const auto& k0 = *(it - 1);
            const double w = (t - k0.t) / (k1.t - k0.t);
            return {k0.x + w * (k1.x - k0.x), k0.y + w * (k1.y - k0.y)};
          }
        },
        form_);
  }

  // Inverts the monotone interpolant: locate the segment by binary search on
  // the knots, then solve the linear piece exactly.
  static double tabulated_inverse(const forms::Tabulated& f, double level, bool along_x) {
    const auto& k = f.knots;
    if (along_x) {
      // first knot with x >= level; x(lo) < level so index >= 1
      auto it = std::lower_bound(k.begin(), k.end(), level, [](const forms::Knot& kn, double v) { return kn.x < v; });
      const auto& k1 = *it;
      const auto& k0 = *(it - 1);
      return k0.t + (level - k0.x) / (k1.x - k0.x) * (k1.t - k0.t);
    }
    // last knot with y >= level; y(hi) < level so it is not the final knot
    auto it = std::partition_point(k.begin(), k.end(), [&](const forms::Knot& kn) { return kn.y >= level; });
    const auto& k1 = *it;
    const auto& k0 = *(it - 1);
    return k0.t + (k0.y - level) / (k0.y - k1.y) * (k1.t - k0.t);
  }

  void validate() const {
    require(std::isfinite(domain_.lo) && std::isfinite(domain_.hi) && domain_.lo < domain_.hi,
            "path domain must be a nondegenerate finite interval");
    std::visit(
        [&](const auto& f) {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, forms::Horizontal>) {
            require(f.a > 0.0 && f.c > 0.0, "horizontal path needs a > 0, c > 0");
          } else if constexpr (std::is_same_v<F, forms::Vertical>) {
            require(f.a > 0.0 && f.c > 0.0, "vertical path needs a > 0, c > 0");
          } else if constexpr (std::is_same_v<F, forms::VThenH>) {
            require(f.a > 0.0 && f.b > 0.0 && f.c > 0.0 && f.d > 0.0, "vthenh path needs a, b, c, d > 0");
            require(f.s_star > domain_.lo && f.s_star < domain_.hi, "vthenh corner s* must be interior");
          } else if constexpr (std::is_same_v<F, forms::Linear>) {
            require(f.b > 0.0 && f.d > 0.0, "linear path needs b > 0, d > 0");
          } else if constexpr (std::is_same_v<F, forms::Exponential>) {
            require(f.a > 0.0 && f.b > 0.0 && f.c > 0.0, "exponential path needs a, b, c > 0");
          } else {
            const auto& k = f.knots;
            for (std::size_t i = 0; i < k.size(); ++i) {
              require(std::isfinite(k[i].t) && std::isfinite(k[i].x) && std::isfinite(k[i].y),
                      "tabulated knots must be finite");
              require(k[i].x >= 0.0 && k[i].y >= 0.0, "tabulated knots must lie in the closed quadrant");
              if (i > 0) {
                require(k[i].t > k[i - 1].t, "tabulated knot times must be strictly increasing");
                require(k[i].x >= k[i - 1].x, "tabulated x must be nondecreasing");
                require(k[i].y <= k[i - 1].y, "tabulated y must be nonincreasing");
              }
              if (i > 0 && i + 1 < k.size()) {
                require(k[i].x > 0.0 && k[i].y > 0.0, "tabulated path must be positive on the interior");
              }
            }
            require(k.back().x > 0.0 && k.front().y > 0.0, "tabulated path must be positive on the interior");
            require(k.back().x > k.front().x || k.front().y > k.back().y,
                    "path may not have both coordinates constant");
          }
        },
        form_);
    // Endpoints may touch the axes; the interior may not.
    const auto p0 = eval_unchecked(domain_.lo);
    const auto p1 = eval_unchecked(domain_.hi);
    require(std::isfinite(p0.x) && std::isfinite(p0.y) && std::isfinite(p1.x) && std::isfinite(p1.y),
            "path values must be finite");
    require(p0.x >= 0.0 && p1.y >= 0.0, "path must stay in the closed first quadrant");
    const double mid = 0.5 * (domain_.lo + domain_.hi);
    const auto pm = eval_unchecked(mid);
    require(pm.x > 0.0 && pm.y > 0.0, "path must be positive on the interior");
  }

  Interval domain_;
  Form form_;
};

// =============================================================================
// Classification of stationary-increment paths
// =============================================================================

enum class PathClassTag { Horizontal, Vertical, VThenH, Linear, Exponential, NonStationary };

inline std::string to_string(PathClassTag t) {
  switch (t) {
    case PathClassTag::Horizontal: return "horizontal";
    case PathClassTag::Vertical: return "vertical";
    case PathClassTag::VThenH: return "vthenh";
    case PathClassTag::Linear: return "linear";
    case PathClassTag::Exponential: return "exponential";
    case PathClassTag::NonStationary: return "nonstationary";
  }
  return "nonstationary";
}

/// Constants of the path family; which ones are meaningful depends on the tag
/// and follows the parameterization of the matching `forms::` struct.
struct PhiParams {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0, s_star = 0.0;
};

/// Outcome of classify. phi(u) is defined for every tag but NonStationary.
struct PathClass {
  PathClassTag tag = PathClassTag::NonStationary;
  PhiParams params;
  /// Largest functional-equation residual seen while validating a tabulated fit.
  double residual = 0.0;

  bool stationary() const { return tag != PathClassTag::NonStationary; }
  /// Class (i) of either orientation.
  bool is_class_i() const { return tag == PathClassTag::Horizontal || tag == PathClassTag::Vertical; }
};

/// The phi of x(s)y(s) + x(t)y(t) - 2x(s)y(t) = phi(t - s).
inline double phi(const PathClass& cls, double u) {
  require(u >= 0.0, "phi: u must be nonnegative");
  const auto& p = cls.params;
  switch (cls.tag) {
    case PathClassTag::Horizontal:
    case PathClassTag::Vertical:
    case PathClassTag::VThenH: return p.a * p.c * u;
    case PathClassTag::Linear: return (p.a * p.d + p.b * p.c) * u - p.b * p.d * u * u;
    case PathClassTag::Exponential: return 2.0 * p.a * p.b * (-std::expm1(-p.c * u));
    case PathClassTag::NonStationary: break;
  }
  throw std::invalid_argument("phi: path has no stationary increments");
}

/// Left side of the functional equation.
inline double functional_lhs(const DecreasingPath& path, double s, double t) {
  const auto ps = path.eval(s);
  const auto pt = path.eval(t);
  return ps.x * ps.y + pt.x * pt.y - 2.0 * ps.x * pt.y;
}

namespace detail {

struct LineFit {
  double intercept, slope, sse;
};

inline LineFit fit_line(const std::vector<double>& t, const std::vector<double>& v) {
  const double n = static_cast<double>(t.size());
  double tm = 0.0, vm = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    tm += t[i];
    vm += v[i];
  }
  tm /= n;
  vm /= n;
  double stt = 0.0, stv = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    stt += (t[i] - tm) * (t[i] - tm);
    stv += (t[i] - tm) * (v[i] - vm);
  }
  const double slope = stv / stt;
  const double icpt = vm - slope * tm;
  double sse = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = v[i] - icpt - slope * t[i];
    sse += r * r;
  }
  return {icpt, slope, sse};
}

inline double mean_of(const std::vector<double>& v, std::size_t b, std::size_t e) {
  double s = 0.0;
  for (std::size_t i = b; i < e; ++i) s += v[i];
  return s / static_cast<double>(e - b);
}

// Functional-equation residual over knot pairs; the knots are the data, so the
// interpolant between them is never trusted.
inline double knot_residual(const forms::Tabulated& tab, const PathClass& cls) {
  const auto& k = tab.knots;
  std::vector<std::size_t> idx;
  if (k.size() <= 50) {
    for (std::size_t i = 0; i < k.size(); ++i) idx.push_back(i);
  } else {
    for (std::size_t i = 0; i < 50; ++i) {
      idx.push_back(static_cast<std::size_t>(std::llround(static_cast<double>(i) * static_cast<double>(k.size() - 1) / 49.0)));
    }
  }
  double worst = 0.0;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      const auto& ks = k[idx[a]];
      const auto& kt = k[idx[b]];
      const double lhs = ks.x * ks.y + kt.x * kt.y - 2.0 * ks.x * kt.y;
      worst = std::max(worst, std::abs(lhs - phi(cls, kt.t - ks.t)));
    }
  }
  return worst;
}

inline std::vector<PathClass> fit_families(const forms::Tabulated& tab) {
  const auto& k = tab.knots;
  const std::size_t n = k.size();
  std::vector<double> t(n), x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = k[i].t;
    x[i] = k[i].x;
    y[i] = k[i].y;
  }
  std::vector<PathClass> out;

  // (i) horizontal and vertical
  {
    const auto fx = fit_line(t, x);
    const double a = mean_of(y, 0, n);
    if (fx.slope > 0.0 && a > 0.0) {
      PathClass c{PathClassTag::Horizontal, {}};
      c.params.a = a;
      c.params.b = fx.intercept;
      c.params.c = fx.slope;
      out.push_back(c);
    }
    const auto fy = fit_line(t, y);
    const double ax = mean_of(x, 0, n);
    if (-fy.slope > 0.0 && ax > 0.0) {
      PathClass c{PathClassTag::Vertical, {}};
      c.params.a = ax;
      c.params.b = fy.intercept;
      c.params.c = -fy.slope;
      out.push_back(c);
    }
  }
  // (ii) corner at one of the interior knots
  {
    double best_sse = std::numeric_limits<double>::infinity();
    std::optional<PathClass> best;
    for (std::size_t m = 1; m + 1 < n; ++m) {
      const double s = t[m];
      const double a = mean_of(x, 0, m + 1);
      const double b = mean_of(y, m, n);
      double num_c = 0.0, den_c = 0.0, num_d = 0.0, den_d = 0.0;
      for (std::size_t i = 0; i <= m; ++i) {
        num_c += -(y[i] - b) * (t[i] - s);
        den_c += (t[i] - s) * (t[i] - s);
      }
      for (std::size_t i = m; i < n; ++i) {
        num_d += (x[i] - a) * (t[i] - s);
        den_d += (t[i] - s) * (t[i] - s);
      }
      const double c = num_c / den_c;
      const double d = num_d / den_d;
      if (!(c > 0.0 && d > 0.0)) continue;
      double sse = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double xf = t[i] > s ? a + d * (t[i] - s) : a;
        const double yf = t[i] <= s ? b - c * (t[i] - s) : b;
        sse += (x[i] - xf) * (x[i] - xf) + (y[i] - yf) * (y[i] - yf);
      }
      if (sse < best_sse) {
        best_sse = sse;
        PathClass pc{PathClassTag::VThenH, {}};
        pc.params = {a, b, c, d, s};
        best = pc;
      }
    }
    if (best) out.push_back(*best);
  }
  // (iii)
  {
    const auto fx = fit_line(t, x);
    const auto fy = fit_line(t, y);
    if (fx.slope > 0.0 && fy.slope < 0.0) {
      PathClass c{PathClassTag::Linear, {}};
      c.params = {fx.intercept, fx.slope, fy.intercept, -fy.slope, 0.0};
      out.push_back(c);
    }
  }
  // (iv) log-linear with a shared rate
  {
    const bool positive = std::all_of(k.begin(), k.end(), [](const forms::Knot& kn) { return kn.x > 0.0 && kn.y > 0.0; });
    if (positive) {
      std::vector<double> lx(n), ly(n);
      for (std::size_t i = 0; i < n; ++i) {
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
      }
      const double tm = mean_of(t, 0, n), lxm = mean_of(lx, 0, n), lym = mean_of(ly, 0, n);
      double stt = 0.0, sx = 0.0, sy = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        stt += (t[i] - tm) * (t[i] - tm);
        sx += (t[i] - tm) * (lx[i] - lxm);
        sy += (t[i] - tm) * (ly[i] - lym);
      }
      const double c = (sx - sy) / (2.0 * stt);
      if (c > 0.0) {
        PathClass pc{PathClassTag::Exponential, {}};
        pc.params.a = std::exp(lxm - c * tm);
        pc.params.b = std::exp(lym + c * tm);
        pc.params.c = c;
        out.push_back(pc);
      }
    }
  }
  return out;
}

}  // namespace detail

/// Classifies a path against the four stationary-increment families.
/// Closed forms are read off structurally; tabulated paths are fitted family
/// by family and the first fit (in the order i, ii, iii, iv) whose knot
/// residual stays below tol * max x(t)y(t) is accepted.
/// Default tol: 1e-9 for closed forms, 1e-6 for tabulated paths.
inline PathClass classify(const DecreasingPath& path, std::optional<double> tol = std::nullopt) {
  if (tol) require(*tol > 0.0, "classify: tol must be positive");
  return std::visit(
      [&](const auto& f) -> PathClass {
        using F = std::decay_t<decltype(f)>;
        PathClass c;
        if constexpr (std::is_same_v<F, forms::Horizontal>) {
          c.tag = PathClassTag::Horizontal;
          c.params.a = f.a;
          c.params.b = f.b;
          c.params.c = f.c;
        } else if constexpr (std::is_same_v<F, forms::Vertical>) {
          c.tag = PathClassTag::Vertical;
          c.params.a = f.a;
          c.params.b = f.b;
          c.params.c = f.c;
        } else if constexpr (std::is_same_v<F, forms::VThenH>) {
          const double rel = tol.value_or(1e-9);
          c.params = {f.a, f.b, f.c, f.d, f.s_star};
          c.tag = close_rel(f.a * f.c, f.b * f.d, rel) ? PathClassTag::VThenH : PathClassTag::NonStationary;
        } else if constexpr (std::is_same_v<F, forms::Linear>) {
          c.tag = PathClassTag::Linear;
          c.params = {f.a, f.b, f.c, f.d, 0.0};
        } else if constexpr (std::is_same_v<F, forms::Exponential>) {
          c.tag = PathClassTag::Exponential;
          c.params.a = f.a;
          c.params.b = f.b;
          c.params.c = f.c;
        } else {
          require(f.knots.size() >= 3, "classify: tabulated path needs at least 3 knots");
          const double rel = tol.value_or(1e-6);
          double scale = 0.0;
          for (const auto& k : f.knots) scale = std::max(scale, k.x * k.y);
          scale = std::max(scale, std::numeric_limits<double>::min());
          double best_residual = std::numeric_limits<double>::infinity();
          for (auto cand : detail::fit_families(f)) {
            if (cand.tag == PathClassTag::VThenH && !close_rel(cand.params.a * cand.params.c, cand.params.b * cand.params.d, rel)) {
              continue;
            }
            cand.residual = detail::knot_residual(f, cand);
            best_residual = std::min(best_residual, cand.residual);
            if (cand.residual < rel * scale) return cand;
          }
          c.tag = PathClassTag::NonStationary;
          c.residual = best_residual;
        }
        return c;
      },
      path.form());
}

/// Returns p with x2 = p x1 and y2 = y1 / p on a probe grid, if one exists.
inline std::optional<double> equivalent(const DecreasingPath& p1, const DecreasingPath& p2, double tol = 1e-9) {
  const auto& d = p1.domain();
  if (!(d == p2.domain())) throw std::invalid_argument("equivalent: paths have different domains");
  const auto grid = linspace(d.lo, d.hi, 101);
  double best_x = 0.0, p = 0.0;
  for (double t : grid) {
    const auto a = p1.eval(t);
    if (a.x > best_x) {
      best_x = a.x;
      p = p2.eval(t).x / a.x;
    }
  }
  if (!(p > 0.0) || !std::isfinite(p)) return std::nullopt;
  for (double t : grid) {
    const auto a = p1.eval(t);
    const auto b = p2.eval(t);
    if (std::abs(b.x - p * a.x) > tol * std::max(std::abs(b.x), p * std::abs(a.x))) return std::nullopt;
    if (std::abs(b.y - a.y / p) > tol * std::max(std::abs(b.y), std::abs(a.y) / p)) return std::nullopt;
  }
  return p;
}

// =============================================================================
// Two-piece monotone paths
// =============================================================================

/// A monotone curve piece on its own parameter interval. Used only by the
/// two-piece guard, where one piece is increasing (y nondecreasing).
struct CurvePiece {
  Interval domain;
  std::function<Point2(double)> eval;

  static CurvePiece from(const DecreasingPath& p) {
    return {p.domain(), [p](double t) { return p.eval(t); }};
  }
  /// (a + b t, c + d t) on [lo, hi].
  static CurvePiece linear(double a, double b, double c, double d, double lo, double hi) {
    return {{lo, hi}, [=](double t) { return Point2{a + b * t, c + d * t}; }};
  }
};

enum class TwoPieceVerdict { NonStationary, Inconclusive };

namespace detail {

enum class Direction { Up, Down, Flat };

inline Direction direction_of(const CurvePiece& c) {
  const auto grid = linspace(c.domain.lo, c.domain.hi, 129);
  bool up = true, down = true;
  Point2 prev = c.eval(grid.front());
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const Point2 cur = c.eval(grid[i]);
    require(cur.x >= prev.x, "two-piece path: x must be nondecreasing on each piece");
    if (cur.y > prev.y) down = false;
    if (cur.y < prev.y) up = false;
    prev = cur;
  }
  if (up && down) return Direction::Flat;
  require(up || down, "two-piece path: y must be monotone on each piece");
  return up ? Direction::Up : Direction::Down;
}

}  // namespace detail

/// Guard for concatenations of an increasing and a decreasing piece (either
/// order) sharing a junction point a = max T1 = min T2. `s` is a time on the
/// first piece and `t` a time on the second, each in its own parameter.
/// When y(a) differs from both y(s) and y(t) the concatenation cannot have
/// stationary increments for any nonzero sheet.
inline TwoPieceVerdict check_two_piece_nonstationary(const CurvePiece& first, const CurvePiece& second,
                                                     double s, double t) {
  const auto d1 = detail::direction_of(first);
  const auto d2 = detail::direction_of(second);
  const bool opposite = (d1 == detail::Direction::Up && d2 != detail::Direction::Up) ||
                        (d1 == detail::Direction::Down && d2 != detail::Direction::Down) ||
                        (d1 == detail::Direction::Flat && d2 != detail::Direction::Flat);
  require(opposite, "two-piece path: pieces must be one increasing and one decreasing");
  const Point2 end1 = first.eval(first.domain.hi);
  const Point2 start2 = second.eval(second.domain.lo);
  const double scale = std::max({1.0, std::abs(end1.x), std::abs(end1.y)});
  require(std::abs(end1.x - start2.x) <= 1e-12 * scale && std::abs(end1.y - start2.y) <= 1e-12 * scale,
          "two-piece path: junction mismatch");
  require(first.domain.contains(s) && second.domain.contains(t), "two-piece path: s or t outside its piece");
  const double ya = end1.y;
  const double ys = first.eval(s).y;
  const double yt = second.eval(t).y;
  const double eps = 1e-12 * std::max({1.0, std::abs(ya)});
  if (std::abs(ya - ys) <= eps || std::abs(ya - yt) <= eps) return TwoPieceVerdict::Inconclusive;
  return TwoPieceVerdict::NonStationary;
}

}  // namespace levysheet
