#pragma once

#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "exponent.hpp"
#include "jumpsim.hpp"
#include "path.hpp"
#include "verify.hpp"

namespace levysheet::io {

using nlohmann::json;

/// Malformed input; the message starts with the offending field.
struct ParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline const json& field(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + "." + key + ": missing");
  return *it;
}

inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  return j.get<double>();
}

inline double number_at(const json& j, const std::string& key, const std::string& where) {
  return number(field(j, key, where), where + "." + key);
}

inline std::string string_at(const json& j, const std::string& key, const std::string& where) {
  const auto& v = field(j, key, where);
  if (!v.is_string()) throw ParseError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

inline Eigen::Index index_at(const json& j, const std::string& key, const std::string& where, Eigen::Index dflt) {
  if (!j.contains(key)) return dflt;
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1) throw ParseError(where + "." + key + ": expected a positive integer");
  return static_cast<Eigen::Index>(v.get<long long>());
}

inline Vec vec(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ParseError(where + ": expected a non-empty array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = number(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

inline Mat mat(const json& j, const std::string& where, Eigen::Index d) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != d) {
    throw ParseError(where + ": expected a " + std::to_string(d) + "x" + std::to_string(d) + " array");
  }
  Mat m(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    const auto row = vec(j[static_cast<std::size_t>(r)], where + "[" + std::to_string(r) + "]");
    if (row.size() != d) throw ParseError(where + "[" + std::to_string(r) + "]: expected " + std::to_string(d) + " entries");
    m.row(r) = row.transpose();
  }
  return m;
}

inline json to_array(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

template <class F>
auto guarded(const std::string& where, F f) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
}

}  // namespace detail

// -----------------------------------------------------------------------------
// Triplets
// -----------------------------------------------------------------------------

/// {"name": ..., "params": {...}}
inline JumpDistribution distribution_from_json(const json& j, const std::string& where = "dist") {
  using namespace detail;
  const auto name = string_at(j, "name", where);
  const std::string wp = where + ".params";
  const auto& p = field(j, "params", where);
  return guarded(where, [&]() -> JumpDistribution {
    if (name == "point_mass") return JumpDistribution::point_mass(vec(field(p, "x", wp), wp + ".x"));
    if (name == "two_point") return JumpDistribution::two_point(vec(field(p, "x", wp), wp + ".x"));
    if (name == "uniform") return JumpDistribution::uniform(number_at(p, "a", wp), index_at(p, "dim", wp, 1));
    if (name == "gaussian") return JumpDistribution::gaussian(number_at(p, "sigma", wp), index_at(p, "dim", wp, 1));
    throw ParseError(where + ".name: unknown distribution '" + name + "'");
  });
}

inline json to_json(const JumpDistribution& d) {
  const json params = std::visit(
      [&](const auto& k) -> json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, jumps::PointMass> || std::is_same_v<K, jumps::TwoPoint>) {
          return {{"x", detail::to_array(k.x)}};
        } else if constexpr (std::is_same_v<K, jumps::Uniform>) {
          return {{"a", k.a}, {"dim", k.dim}};
        } else if constexpr (std::is_same_v<K, jumps::Gaussian>) {
          return {{"sigma", k.sigma}, {"dim", k.dim}};
        } else {
          throw std::invalid_argument("custom jump distributions cannot be serialized");
        }
      },
      d.kind());
  return {{"name", d.name()}, {"params", params}};
}

inline FiniteJumpMeasure measure_from_json(const json& j, Eigen::Index d, const std::string& where = "jumps") {
  using namespace detail;
  const auto kind = string_at(j, "kind", where);
  FiniteJumpMeasure m = FiniteJumpMeasure::none(d);
  if (kind == "none") {
    return m;
  } else if (kind == "discrete") {
    const auto& atoms = field(j, "atoms", where);
    if (!atoms.is_array()) throw ParseError(where + ".atoms: expected an array");
    std::vector<Atom> out;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const std::string w = where + ".atoms[" + std::to_string(i) + "]";
      out.push_back({vec(field(atoms[i], "x", w), w + ".x"), number_at(atoms[i], "mass", w)});
    }
    m = guarded(where, [&] { return FiniteJumpMeasure::discrete(std::move(out), d); });
  } else if (kind == "scaled") {
    const double rate = number_at(j, "rate", where);
    auto dist = distribution_from_json(field(j, "dist", where), where + ".dist");
    m = guarded(where, [&] { return FiniteJumpMeasure::scaled(rate, std::move(dist)); });
  } else {
    throw ParseError(where + ".kind: expected none, discrete or scaled");
  }
  if (m.dim() != d) throw ParseError(where + ": dimension does not match gamma");
  return m;
}

inline json to_json(const FiniteJumpMeasure& m) {
  if (auto d = m.as_discrete()) {
    if (d->atoms.empty()) return {{"kind", "none"}};
    json atoms = json::array();
    for (const auto& a : d->atoms) atoms.push_back({{"x", detail::to_array(a.x)}, {"mass", a.mass}});
    return {{"kind", "discrete"}, {"atoms", atoms}};
  }
  const auto& s = *m.as_scaled();
  return {{"kind", "scaled"}, {"rate", s.rate}, {"dist", to_json(s.dist)}};
}

/// {"gamma": [...], "gaussian": [[...]], "jumps": {...}}; "drift" may replace
/// "gamma" to give gamma_0 instead. Missing gaussian/jumps mean zero.
inline LevyTriplet triplet_from_json(const json& j) {
  using namespace detail;
  if (!j.is_object()) throw ParseError("triplet: expected an object");
  const bool by_drift = j.contains("drift");
  const Vec g = vec(field(j, by_drift ? "drift" : "gamma", "triplet"), by_drift ? "triplet.drift" : "triplet.gamma");
  const auto d = g.size();
  const Mat a = j.contains("gaussian") ? mat(j.at("gaussian"), "triplet.gaussian", d) : Mat::Zero(d, d);
  auto nu = j.contains("jumps") ? measure_from_json(j.at("jumps"), d, "triplet.jumps") : FiniteJumpMeasure::none(d);
  return guarded("triplet", [&] {
    return by_drift ? LevyTriplet::from_drift(g, a, std::move(nu)) : LevyTriplet(g, a, std::move(nu));
  });
}

inline json to_json(const LevyTriplet& t) {
  json g = json::array();
  for (Eigen::Index r = 0; r < t.dim(); ++r) g.push_back(detail::to_array(t.gaussian().row(r).transpose()));
  return {{"gamma", detail::to_array(t.gamma())}, {"gaussian", g}, {"jumps", to_json(t.jumps())}};
}

// -----------------------------------------------------------------------------
// Paths
// -----------------------------------------------------------------------------

inline DecreasingPath path_from_json(const json& j) {
  using namespace detail;
  const std::string w = "path";
  const auto form = string_at(j, "form", w);
  if (form == "tabulated") {
    const auto& ks = field(j, "knots", w);
    if (!ks.is_array()) throw ParseError("path.knots: expected an array");
    std::vector<forms::Knot> knots;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const std::string wk = "path.knots[" + std::to_string(i) + "]";
      const Vec k = vec(ks[i], wk);
      if (k.size() != 3) throw ParseError(wk + ": expected [t, x, y]");
      knots.push_back({k[0], k[1], k[2]});
    }
    return guarded(w, [&] { return DecreasingPath::tabulated(std::move(knots)); });
  }
  const Interval dom{number_at(j, "t_lo", w), number_at(j, "t_hi", w)};
  auto p = [&](const char* k) { return number_at(j, k, w); };
  return guarded(w, [&]() -> DecreasingPath {
    if (form == "horizontal") return {dom, forms::Horizontal{p("a"), p("b"), p("c")}};
    if (form == "vertical") return {dom, forms::Vertical{p("a"), p("b"), p("c")}};
    if (form == "vthenh") return {dom, forms::VThenH{p("s_star"), p("a"), p("b"), p("c"), p("d")}};
    if (form == "linear") return {dom, forms::Linear{p("a"), p("b"), p("c"), p("d")}};
    if (form == "exponential") return {dom, forms::Exponential{p("a"), p("b"), p("c")}};
    throw ParseError("path.form: unknown form '" + form + "'");
  });
}

inline json to_json(const DecreasingPath& path) {
  const auto& d = path.domain();
  return std::visit(
      [&](const auto& f) -> json {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, forms::Tabulated>) {
          json ks = json::array();
          for (const auto& k : f.knots) ks.push_back({k.t, k.x, k.y});
          return {{"form", "tabulated"}, {"knots", ks}};
        } else {
          json j;
          if constexpr (std::is_same_v<F, forms::Horizontal>) j = {{"form", "horizontal"}, {"a", f.a}, {"b", f.b}, {"c", f.c}};
          else if constexpr (std::is_same_v<F, forms::Vertical>) j = {{"form", "vertical"}, {"a", f.a}, {"b", f.b}, {"c", f.c}};
          else if constexpr (std::is_same_v<F, forms::VThenH>)
            j = {{"form", "vthenh"}, {"s_star", f.s_star}, {"a", f.a}, {"b", f.b}, {"c", f.c}, {"d", f.d}};
          else if constexpr (std::is_same_v<F, forms::Linear>)
            j = {{"form", "linear"}, {"a", f.a}, {"b", f.b}, {"c", f.c}, {"d", f.d}};
          else j = {{"form", "exponential"}, {"a", f.a}, {"b", f.b}, {"c", f.c}};
          j["t_lo"] = d.lo;
          j["t_hi"] = d.hi;
          return j;
        }
      },
      path.form());
}

/// {"class": tag, "phi": {family constants} | null}
inline json to_json(const PathClass& c) {
  const auto& p = c.params;
  json phi;
  switch (c.tag) {
    case PathClassTag::Horizontal:
    case PathClassTag::Vertical:
    case PathClassTag::Exponential: phi = {{"a", p.a}, {"b", p.b}, {"c", p.c}}; break;
    case PathClassTag::VThenH: phi = {{"s_star", p.s_star}, {"a", p.a}, {"b", p.b}, {"c", p.c}, {"d", p.d}}; break;
    case PathClassTag::Linear: phi = {{"a", p.a}, {"b", p.b}, {"c", p.c}, {"d", p.d}}; break;
    case PathClassTag::NonStationary: phi = nullptr; break;
  }
  return {{"class", to_string(c.tag)}, {"phi", phi}};
}

// -----------------------------------------------------------------------------
// Fields, reports, CSV
// -----------------------------------------------------------------------------

inline json to_json(const jumpsim::JumpField& f) {
  json region = std::visit(
      [](const auto& g) -> json {
        using G = std::decay_t<decltype(g)>;
        const char* shape = std::is_same_v<G, jumpsim::region::Rectangle> ? "rectangle" : "triangle";
        return {{"shape", shape}, {"u_max", g.u_max}, {"v_max", g.v_max}};
      },
      f.region);
  json pts = json::array();
  for (const auto& q : f.points) pts.push_back({{"u", q.u}, {"v", q.v}, {"j", detail::to_array(q.j)}});
  return {{"region", region}, {"dim", f.dim}, {"points", pts}};
}

inline jumpsim::JumpField field_from_json(const json& j) {
  using namespace detail;
  const auto& r = field(j, "region", "field");
  const auto shape = string_at(r, "shape", "field.region");
  const double u = number_at(r, "u_max", "field.region"), v = number_at(r, "v_max", "field.region");
  jumpsim::JumpField f{jumpsim::region::Rectangle{u, v}, index_at(j, "dim", "field", 1), {}};
  if (shape == "triangle") f.region = jumpsim::region::Triangle{u, v};
  else if (shape != "rectangle") throw ParseError("field.region.shape: expected rectangle or triangle");
  const auto& pts = field(j, "points", "field");
  if (!pts.is_array()) throw ParseError("field.points: expected an array");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string w = "field.points[" + std::to_string(i) + "]";
    jumpsim::JumpPoint q{number_at(pts[i], "u", w), number_at(pts[i], "v", w), vec(field(pts[i], "j", w), w + ".j")};
    if (q.j.size() != f.dim) throw ParseError(w + ".j: dimension does not match field.dim");
    if (q.j.isZero(0.0)) throw ParseError(w + ".j: zero jump");
    if (!(q.u > 0.0 && q.v > 0.0) || !jumpsim::covers(f.region, q.u, q.v)) throw ParseError(w + ": outside region");
    f.points.push_back(std::move(q));
  }
  return f;
}

inline json to_json(const verify::TestReport& r) {
  return {{"name", r.name}, {"statistic", r.statistic}, {"threshold", r.threshold},
          {"pass", r.pass},  {"seed", r.seed},           {"n", r.n}};
}

inline json to_json(Complex c) { return {{"re", c.real()}, {"im", c.imag()}}; }

inline std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

/// tau,dj1[,dj2,...]
inline std::string to_csv(const jumpsim::EventPath& p) {
  std::ostringstream os;
  os << "tau";
  for (Eigen::Index k = 0; k < p.dim; ++k) os << ",dj" << k + 1;
  os << '\n';
  for (const auto& e : p.events) {
    os << fmt(e.tau);
    for (Eigen::Index k = 0; k < p.dim; ++k) os << ',' << fmt(e.j[k]);
    os << '\n';
  }
  return os.str();
}

/// t,v1[,v2,...]; with replicates: rep,t,v1,...
inline std::string to_csv(const std::vector<SamplePathGrid>& draws) {
  std::ostringstream os;
  const bool reps = draws.size() > 1;
  const Eigen::Index d = draws.empty() ? 1 : std::max<Eigen::Index>(draws.front().dim(), 1);
  if (reps) os << "rep,";
  os << 't';
  for (Eigen::Index k = 0; k < d; ++k) os << ",v" << k + 1;
  os << '\n';
  for (std::size_t r = 0; r < draws.size(); ++r) {
    const auto& g = draws[r];
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (reps) os << r << ',';
      os << fmt(g.times[i]);
      for (Eigen::Index k = 0; k < d; ++k) os << ',' << fmt(g.values[i][k]);
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace levysheet::io
