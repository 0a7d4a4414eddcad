#include "cli.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <levysheet/levysheet.hpp>

namespace levysheet::cli {
namespace {

using io::json;

struct RunConfig {
  std::string triplet_file, path_file, path2_file, dist_file;
  std::string times, grid;
  std::vector<std::string> z;
  std::uint64_t seed = acceptance::kDefaultSeed;
  std::size_t n = 1;
  std::string out;
  std::string format;

  std::string law = "gauss";
  std::string experiment;
  std::string suite = "all";
  std::string representation = "auto";
  std::optional<double> tol;
  double s = 0.0, t = 0.0;
  double a = 1.0, b = 1.0, c = 1.0;
  double rate = 1000.0, l = 1.0;
  std::size_t steps = 1000, points = 10000;
  int dim = 1;
};

json read_json(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw io::ParseError(file + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw io::ParseError(file + ": malformed JSON (" + e.what() + ")");
  }
}

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(x)) throw io::ParseError(flag + ": bad number '" + item + "'");
    v.push_back(x);
  }
  if (v.empty()) throw io::ParseError(flag + ": empty list");
  return v;
}

std::vector<double> grid_of(const RunConfig& cfg) {
  if (!cfg.times.empty()) return parse_list(cfg.times, "--times");
  if (cfg.grid.empty()) throw io::ParseError("--grid: give --grid lo,hi,n or --times");
  const auto g = parse_list(cfg.grid, "--grid");
  if (g.size() != 3 || g[2] < 2 || g[2] != std::floor(g[2])) throw io::ParseError("--grid: expected lo,hi,n with n >= 2");
  return linspace(g[0], g[1], static_cast<std::size_t>(g[2]));
}

std::string format_or(const RunConfig& cfg, const std::string& dflt) {
  const auto f = cfg.format.empty() ? dflt : cfg.format;
  if (f != "csv" && f != "json") throw io::ParseError("--format: expected csv or json");
  return f;
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw io::ParseError("--out: cannot write '" + cfg.out + "'");
  f << text;
}

std::string line(const json& j) { return j.dump() + "\n"; }

LevyTriplet load_triplet(const RunConfig& cfg) {
  if (cfg.triplet_file.empty()) throw io::ParseError("--triplet: required");
  return io::triplet_from_json(read_json(cfg.triplet_file));
}

DecreasingPath load_path(const std::string& file, const char* flag) {
  if (file.empty()) throw io::ParseError(std::string(flag) + ": required");
  return io::path_from_json(read_json(file));
}

Vec vector_arg(const std::string& text, Eigen::Index d) {
  const auto v = parse_list(text, "--z");
  if (static_cast<Eigen::Index>(v.size()) != d) {
    throw io::ParseError("--z: expected " + std::to_string(d) + " components, got " + std::to_string(v.size()));
  }
  return Eigen::Map<const Vec>(v.data(), d);
}

// ---------------------------------------------------------------------------

int cmd_classify(const RunConfig& cfg, std::ostream& out) {
  const auto path = load_path(cfg.path_file, "--path");
  emit(cfg, line(io::to_json(classify(path, cfg.tol))), out);
  return kOk;
}

int cmd_equivalent(const RunConfig& cfg, std::ostream& out) {
  const auto p1 = load_path(cfg.path_file, "--path");
  const auto p2 = load_path(cfg.path2_file, "--path2");
  const auto p = equivalent(p1, p2, cfg.tol.value_or(1e-9));
  json j = {{"equivalent", p.has_value()}, {"p", p ? json(*p) : json(nullptr)}};
  emit(cfg, line(j), out);
  return kOk;
}

int cmd_cf(const RunConfig& cfg, std::ostream& out) {
  const auto triplet = load_triplet(cfg);
  const auto path = load_path(cfg.path_file, "--path");
  const auto times = parse_list(cfg.times, "--times");
  const auto d = triplet.dim();
  std::vector<Vec> zs;
  if (cfg.z.size() == times.size()) {
    for (const auto& s : cfg.z) zs.push_back(vector_arg(s, d));
  } else if (d == 1 && cfg.z.size() == 1) {
    for (double v : parse_list(cfg.z.front(), "--z")) zs.push_back(scalar_vec(v));
  }
  if (zs.size() != times.size()) throw io::ParseError("--z: need one probe per time");
  emit(cfg, line(io::to_json(joint_cf(triplet, path, times, zs))), out);
  return kOk;
}

int cmd_increment_cf(const RunConfig& cfg, std::ostream& out) {
  const auto triplet = load_triplet(cfg);
  const auto path = load_path(cfg.path_file, "--path");
  if (cfg.z.size() != 1) throw io::ParseError("--z: need exactly one probe");
  emit(cfg, line(io::to_json(increment_cf(triplet, path, cfg.s, cfg.t, vector_arg(cfg.z.front(), triplet.dim())))),
       out);
  return kOk;
}

json grids_json(const std::vector<SamplePathGrid>& draws) {
  json arr = json::array();
  for (const auto& g : draws) {
    json vals = json::array();
    for (const auto& v : g.values) vals.push_back(io::detail::to_array(v));
    arr.push_back({{"t", g.times}, {"v", vals}});
  }
  return {{"draws", arr}};
}

std::optional<gauss::Representation> representation_of(const std::string& name) {
  if (name == "auto") return std::nullopt;
  if (name == "idl1") return gauss::Representation::ScaledRatio;
  if (name == "idl2") return gauss::Representation::ScaledInverse;
  if (name == "idl3") return gauss::Representation::BridgeForward;
  if (name == "idl4") return gauss::Representation::BridgeBackward;
  throw io::ParseError("--representation: expected auto, idl1, idl2, idl3 or idl4");
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const auto fmt = format_or(cfg, "csv");
  if (cfg.n < 1) throw io::ParseError("--n: need at least one replicate");
  if (cfg.law == "gauss") {
    const auto path = load_path(cfg.path_file, "--path");
    if (cfg.dim < 1) throw io::ParseError("--dim: must be positive");
    const gauss::GaussPathLaw law{path, cfg.dim};
    const auto grid = grid_of(cfg);
    const auto rep = representation_of(cfg.representation);
    const auto draws = replicate(cfg.seed, cfg.n, [&](Engine& g) { return gauss::simulate(law, grid, g, rep); });
    emit(cfg, fmt == "csv" ? io::to_csv(draws) : line(grids_json(draws)), out);
  } else if (cfg.law == "stationary") {
    const stationary::StationaryLaw law(load_triplet(cfg), cfg.a, cfg.b, cfg.c);
    const auto grid = grid_of(cfg);
    const auto draws = replicate(cfg.seed, cfg.n, [&](Engine& g) { return stationary::simulate_stationary(law, grid, g); });
    emit(cfg, fmt == "csv" ? io::to_csv(draws) : line(grids_json(draws)), out);
  } else if (cfg.law == "cpp") {
    const auto triplet = load_triplet(cfg);
    if (!triplet.gaussian().isZero(0.0) || !triplet.drift().isZero(0.0)) {
      throw io::ParseError("triplet: the cpp law needs a pure-jump triplet with zero drift");
    }
    const auto path = load_path(cfg.path_file, "--path");
    const auto& d = path.domain();
    const jumpsim::Region reg = jumpsim::region::Rectangle{path.eval(d.hi).x, path.eval(d.lo).y};
    struct Draw {
      jumpsim::JumpField field;
      jumpsim::EventPath events;
    };
    const auto draws = replicate(cfg.seed, cfg.n, [&](Engine& g) {
      auto f = jumpsim::simulate_cpp_sheet(triplet.jumps(), reg, g);
      auto e = jumpsim::restrict_to_path(f, path);
      return Draw{std::move(f), std::move(e)};
    });
    if (fmt == "csv") {
      if (draws.size() == 1) {
        emit(cfg, io::to_csv(draws.front().events), out);
      } else {
        std::ostringstream os;
        for (std::size_t r = 0; r < draws.size(); ++r) {
          std::istringstream body(io::to_csv(draws[r].events));
          std::string row;
          bool header = true;
          while (std::getline(body, row)) {
            if (header) {
              if (r == 0) os << "rep," << row << '\n';
              header = false;
            } else {
              os << r << ',' << row << '\n';
            }
          }
        }
        emit(cfg, os.str(), out);
      }
    } else {
      json arr = json::array();
      for (const auto& dr : draws) {
        json ev = json::array();
        for (const auto& e : dr.events.events) ev.push_back({{"tau", e.tau}, {"j", io::detail::to_array(e.j)}});
        arr.push_back({{"field", io::to_json(dr.field)}, {"events", ev}});
      }
      emit(cfg, line({{"draws", arr}}), out);
    }
  } else {
    throw io::ParseError("--law: expected gauss, cpp or stationary");
  }
  return kOk;
}

int cmd_experiment(const RunConfig& cfg, std::ostream& out) {
  const auto& e = cfg.experiment;
  if (e == "ou") {
    const auto triplet = load_triplet(cfg);
    const auto r = stationary::distinguish_ou(triplet, cfg.c);
    json w = nullptr;
    if (r.witness) w = {{"t", r.witness->t}, {"z", io::detail::to_array(r.witness->z)}, {"gap", r.witness->gap}};
    emit(cfg, line({{"witness", w}, {"max_gap", r.max_gap}}), out);
    return kOk;
  }
  if (e == "zerocross") {
    if (cfg.n < 1) throw io::ParseError("--n: need at least one replicate");
    const gauss::GaussPathLaw law{load_path(cfg.path_file, "--path"), 1};
    const auto hits = run_chunks(cfg.seed, cfg.n, [&](std::size_t b, std::size_t end, Engine& g) {
      return gauss::count_sign_changes(law, cfg.s, cfg.t, cfg.points, end - b, g);
    });
    std::size_t total = 0;
    for (auto h : hits) total += h;
    json j = {{"frequency", static_cast<double>(total) / static_cast<double>(cfg.n)},
              {"exact", gauss::zero_prob(law, cfg.s, cfg.t)},
              {"n", cfg.n},
              {"points", cfg.points}};
    emit(cfg, line(j), out);
    return kOk;
  }
  const auto fmt = format_or(cfg, "csv");
  const auto dist = cfg.dist_file.empty() ? JumpDistribution::two_point(scalar_vec(1.0))
                                          : io::distribution_from_json(read_json(cfg.dist_file));
  const auto grid = cfg.grid.empty() && cfg.times.empty() ? linspace(0.0, cfg.l, 11) : grid_of(cfg);
  if (e == "bridge") {
    const auto draws = replicate(cfg.seed, cfg.n, [&](Engine& g) { return jumpsim::bridge_experiment(cfg.rate, dist, cfg.l, grid, g); });
    if (fmt == "csv") {
      std::ostringstream os;
      os << "rep,t,z,y,y_prime\n";
      for (std::size_t r = 0; r < draws.size(); ++r) {
        for (std::size_t k = 0; k < grid.size(); ++k) {
          os << r << ',' << io::fmt(grid[k]) << ',' << io::fmt(draws[r].z[k]) << ',' << io::fmt(draws[r].y[k]) << ','
             << io::fmt(draws[r].y_prime[k]) << '\n';
        }
      }
      emit(cfg, os.str(), out);
    } else {
      if (cfg.n < 2) throw io::ParseError("--n: the json summary needs at least two replicates");
      json var = json::array(), limit = json::array();
      for (std::size_t k = 0; k < grid.size(); ++k) {
        std::vector<double> col;
        for (const auto& d : draws) col.push_back(d.z[k]);
        var.push_back(verify::moments(col).variance);
        limit.push_back(grid[k] / cfg.l * (1.0 - grid[k] / cfg.l));
      }
      emit(cfg, line({{"t", grid}, {"var_z", var}, {"bridge_var", limit}}), out);
    }
    return kOk;
  }
  if (e == "rwbridge") {
    const auto draws = replicate(cfg.seed, cfg.n, [&](Engine& g) { return jumpsim::random_walk_bridge(cfg.steps, cfg.l, dist, grid, g); });
    if (fmt == "csv") {
      emit(cfg, io::to_csv(draws), out);
    } else {
      if (cfg.n < 2) throw io::ParseError("--n: the json summary needs at least two replicates");
      const double mu1 = (*dist.mean())[0], mu2 = *dist.second_moment();
      json var = json::array(), exact = json::array();
      for (std::size_t k = 0; k < grid.size(); ++k) {
        std::vector<double> col;
        for (const auto& d : draws) col.push_back(d.values[k][0]);
        var.push_back(verify::moments(col).variance);
        exact.push_back(jumpsim::rw_bridge_cov(cfg.steps, cfg.l, mu1, mu2, grid[k], grid[k]));
      }
      emit(cfg, line({{"t", grid}, {"var", var}, {"exact", exact}}), out);
    }
    return kOk;
  }
  throw io::ParseError("experiment: expected bridge, rwbridge, ou or zerocross");
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const auto ids = acceptance::suite_members(cfg.suite);
  std::ostringstream os;
  bool ok = true;
  for (int id : ids) {
    const auto r = acceptance::run_criterion(id, cfg.seed);
    for (const auto& c : r.checks) {
      auto j = io::to_json(c);
      j["criterion"] = id;
      os << line(j);
    }
    ok = ok && r.pass();
  }
  emit(cfg, os.str(), out);
  return ok ? kOk : kSuiteFailed;
}

void common_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--seed", cfg.seed, "Master seed (default 1)");
  sub->add_option("--n", cfg.n, "Replicate count");
  sub->add_option("--out", cfg.out, "Output file (default stdout)");
  sub->add_option("--format", cfg.format, "csv or json");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Restrict a Levy sheet to a monotone path: classify, evaluate, simulate, verify"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto* classify_cmd = app.add_subcommand("classify", "Classify a path and print its phi constants");
  classify_cmd->add_option("--path", cfg.path_file, "Path JSON")->required();
  classify_cmd->add_option("--tol", cfg.tol, "Relative tolerance for tabulated paths");

  auto* equiv_cmd = app.add_subcommand("equivalent", "Check whether two paths give the same law");
  equiv_cmd->add_option("--path", cfg.path_file, "First path JSON")->required();
  equiv_cmd->add_option("--path2", cfg.path2_file, "Second path JSON")->required();
  equiv_cmd->add_option("--tol", cfg.tol, "Relative tolerance");

  auto* cf_cmd = app.add_subcommand("cf", "Joint characteristic function");
  cf_cmd->add_option("--triplet", cfg.triplet_file, "Triplet JSON")->required();
  cf_cmd->add_option("--path", cfg.path_file, "Path JSON")->required();
  cf_cmd->add_option("--times", cfg.times, "Comma separated increasing times")->required();
  cf_cmd->add_option("--z", cfg.z, "Probe per time (comma separated components)")->required();

  auto* inc_cmd = app.add_subcommand("increment-cf", "Characteristic function of X_t - X_s");
  inc_cmd->add_option("--triplet", cfg.triplet_file, "Triplet JSON")->required();
  inc_cmd->add_option("--path", cfg.path_file, "Path JSON")->required();
  inc_cmd->add_option("--s", cfg.s, "Start time")->required();
  inc_cmd->add_option("--t", cfg.t, "End time")->required();
  inc_cmd->add_option("--z", cfg.z, "Probe (comma separated components)")->required();

  auto* sim_cmd = app.add_subcommand("simulate", "Simulate the restricted process");
  sim_cmd->add_option("--law", cfg.law, "gauss, cpp or stationary")->required();
  sim_cmd->add_option("--triplet", cfg.triplet_file, "Triplet JSON (cpp, stationary)");
  sim_cmd->add_option("--path", cfg.path_file, "Path JSON (gauss, cpp)");
  sim_cmd->add_option("--grid", cfg.grid, "lo,hi,n");
  sim_cmd->add_option("--times", cfg.times, "Comma separated times");
  sim_cmd->add_option("--dim", cfg.dim, "Dimension of the Brownian sheet (gauss)");
  sim_cmd->add_option("--representation", cfg.representation, "auto, idl1, idl2, idl3 or idl4 (gauss)");
  sim_cmd->add_option("--a", cfg.a, "Exponential path a (stationary)");
  sim_cmd->add_option("--b", cfg.b, "Exponential path b (stationary)");
  sim_cmd->add_option("--c", cfg.c, "Exponential path c (stationary)");

  auto* exp_cmd = app.add_subcommand("experiment", "Run an experiment");
  exp_cmd->add_option("name", cfg.experiment, "bridge, rwbridge, ou or zerocross")->required();
  exp_cmd->add_option("--triplet", cfg.triplet_file, "Triplet JSON (ou)");
  exp_cmd->add_option("--path", cfg.path_file, "Path JSON (zerocross)");
  exp_cmd->add_option("--dist", cfg.dist_file, "Jump/step distribution JSON (bridge, rwbridge); default +-1");
  exp_cmd->add_option("--c", cfg.c, "Rate c (ou)");
  exp_cmd->add_option("--rate", cfg.rate, "Jump rate n (bridge)");
  exp_cmd->add_option("--steps", cfg.steps, "Steps per unit time n (rwbridge)");
  exp_cmd->add_option("--l", cfg.l, "Horizon l (bridge, rwbridge)");
  exp_cmd->add_option("--grid", cfg.grid, "lo,hi,n");
  exp_cmd->add_option("--times", cfg.times, "Comma separated times");
  exp_cmd->add_option("--s", cfg.s, "Window start (zerocross)");
  exp_cmd->add_option("--t", cfg.t, "Window end (zerocross)");
  exp_cmd->add_option("--points", cfg.points, "Grid points in the window (zerocross)");

  auto* verify_cmd = app.add_subcommand("verify", "Run acceptance suites");
  verify_cmd->add_option("--suite", cfg.suite, "fdd, gauss, jumps, stationary or all");

  for (auto* sub : {classify_cmd, equiv_cmd, cf_cmd, inc_cmd, sim_cmd, exp_cmd, verify_cmd}) common_flags(sub, cfg);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*classify_cmd) return cmd_classify(cfg, out);
    if (*equiv_cmd) return cmd_equivalent(cfg, out);
    if (*cf_cmd) return cmd_cf(cfg, out);
    if (*inc_cmd) return cmd_increment_cf(cfg, out);
    if (*sim_cmd) return cmd_simulate(cfg, out);
    if (*exp_cmd) return cmd_experiment(cfg, out);
    if (*verify_cmd) return cmd_verify(cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kInvalid;
}

}  // namespace levysheet::cli
