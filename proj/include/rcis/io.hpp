#pragma once
// Run configuration files, result persistence, plotting, and the command
// entry points behind the CLI. A result directory is self-describing:
// result.json embeds the effective configuration and every certificate, so
// `verify` can rebuild the model and replay containment from the directory
// alone.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "models.hpp"
#include "solver.hpp"

namespace rcis {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// configuration files: [section] headers, key = value lines, # comments;
// values are numbers, booleans, bare or quoted strings, or comma-separated
// tuples; repeated keys are allowed where the consumer accepts lists

struct ConfigEntry {
  std::string section, key, value;
  std::size_t line = 0;
};

struct ConfigFile {
  std::string path;
  std::vector<ConfigEntry> entries;

  static ConfigFile load(const std::string& file_path) {
    std::ifstream is(file_path);
    if (!is) throw std::runtime_error("cannot open config file: " + file_path);
    ConfigFile cf;
    cf.path = file_path;
    std::string line, section;
    std::size_t ln = 0;
    while (std::getline(is, line)) {
      ++ln;
      std::string s = strip(line);
      if (s.empty() || s[0] == '#' || s[0] == ';') continue;
      if (s.front() == '[') {
        if (s.back() != ']')
          throw std::runtime_error(cf.where(ln) + "unterminated section header");
        section = strip(s.substr(1, s.size() - 2));
        if (section.empty())
          throw std::runtime_error(cf.where(ln) + "empty section name");
        continue;
      }
      auto eq = s.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error(cf.where(ln) + "expected key = value");
      std::string key = strip(s.substr(0, eq));
      std::string value = strip(s.substr(eq + 1));
      if (auto hash = value.find(" #"); hash != std::string::npos)
        value = strip(value.substr(0, hash));
      if (key.empty()) throw std::runtime_error(cf.where(ln) + "empty key");
      if (value.empty()) throw std::runtime_error(cf.where(ln) + "empty value for '" + key + "'");
      cf.entries.push_back({section, key, value, ln});
    }
    return cf;
  }

  std::string where(std::size_t line_no) const {
    return path + ":" + std::to_string(line_no) + ": ";
  }

  static std::string strip(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }
};

namespace detail {

inline std::string unquote(const std::string& v) {
  if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') ||
                        (v.front() == '\'' && v.back() == '\'')))
    return v.substr(1, v.size() - 2);
  return v;
}

inline double parse_double(const ConfigFile& cf, const ConfigEntry& e) {
  try {
    std::size_t used = 0;
    double v = std::stod(e.value, &used);
    if (used != e.value.size())
      throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(cf.where(e.line) + "'" + e.key +
                             "' expects a number, got '" + e.value + "'");
  }
}

inline std::size_t parse_size(const ConfigFile& cf, const ConfigEntry& e) {
  double v = parse_double(cf, e);
  if (v < 0 || v != std::floor(v))
    throw std::runtime_error(cf.where(e.line) + "'" + e.key +
                             "' expects a non-negative integer");
  return static_cast<std::size_t>(v);
}

inline bool parse_bool(const ConfigFile& cf, const ConfigEntry& e) {
  std::string v = unquote(e.value);
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw std::runtime_error(cf.where(e.line) + "'" + e.key +
                           "' expects true/false, got '" + e.value + "'");
}

inline Vec parse_vec(const ConfigFile& cf, const ConfigEntry& e) {
  Vec v;
  std::stringstream ss(e.value);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part = ConfigFile::strip(part);
    try {
      std::size_t used = 0;
      double x = std::stod(part, &used);
      if (used != part.size()) throw std::invalid_argument("trailing characters");
      v.push_back(x);
    } catch (const std::exception&) {
      throw std::runtime_error(cf.where(e.line) + "'" + e.key +
                               "' expects comma-separated numbers, got '" +
                               e.value + "'");
    }
  }
  if (v.empty())
    throw std::runtime_error(cf.where(e.line) + "'" + e.key + "' is empty");
  return v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// run configuration

struct RunConfig {
  std::string model = "coupled_tanks";  // coupled_tanks | linear_decay | constant_drift
  TankParameters tank;
  std::string monotone = "trust";  // trust the model annotation | "check" at solve time
  std::vector<Vec> generators;     // safety-set antichain; default depends on model
  std::optional<Vec> ambient_upper;
  SolverConfig solver;
  std::string out_dir = "out";
  bool export_csv = true;
  bool export_svg = true;
  bool export_trajectories = true;

  static RunConfig from_file(const std::string& path) {
    return from_config(ConfigFile::load(path));
  }

  static RunConfig from_config(const ConfigFile& cf) {
    RunConfig rc;
    std::string strategy = "csm_min";
    std::size_t grid_points = 2;
    for (const ConfigEntry& e : cf.entries) {
      auto bad_key = [&]() -> std::runtime_error {
        return std::runtime_error(cf.where(e.line) + "unknown key '" + e.key +
                                  "' in section [" + e.section + "]");
      };
      if (e.section == "model") {
        if (e.key == "name") rc.model = detail::unquote(e.value);
        else if (e.key == "monotone_class") rc.monotone = detail::unquote(e.value);
        else if (e.key == "A") rc.tank.A = detail::parse_double(cf, e);
        else if (e.key == "a") rc.tank.a = detail::parse_double(cf, e);
        else if (e.key == "K1") rc.tank.K1 = detail::parse_double(cf, e);
        else if (e.key == "K2") rc.tank.K2 = detail::parse_double(cf, e);
        else if (e.key == "g") rc.tank.g = detail::parse_double(cf, e);
        else if (e.key == "u_min") rc.tank.u_min = detail::parse_double(cf, e);
        else if (e.key == "u_max") rc.tank.u_max = detail::parse_double(cf, e);
        else if (e.key == "d_min") rc.tank.d_min = detail::parse_double(cf, e);
        else if (e.key == "d_max") rc.tank.d_max = detail::parse_double(cf, e);
        else throw bad_key();
      } else if (e.section == "safety") {
        if (e.key == "generator") rc.generators.push_back(detail::parse_vec(cf, e));
        else if (e.key == "ambient_upper") rc.ambient_upper = detail::parse_vec(cf, e);
        else throw bad_key();
      } else if (e.section == "solver") {
        if (e.key == "epsilon") rc.solver.epsilon = detail::parse_double(cf, e);
        else if (e.key == "T_max") rc.solver.T_max = detail::parse_double(cf, e);
        else if (e.key == "h") rc.solver.h = detail::parse_double(cf, e);
        else if (e.key == "margin") rc.solver.margin = detail::parse_double(cf, e);
        else if (e.key == "tau") rc.solver.tau = detail::parse_double(cf, e);
        else if (e.key == "strategy") strategy = detail::unquote(e.value);
        else if (e.key == "grid_points") grid_points = detail::parse_size(cf, e);
        else if (e.key == "use_beta") rc.solver.use_beta = detail::parse_bool(cf, e);
        else if (e.key == "lipschitz") rc.solver.lipschitz = detail::parse_double(cf, e);
        else if (e.key == "max_iterations") rc.solver.max_iterations = detail::parse_size(cf, e);
        else if (e.key == "grid_resolution") rc.solver.grid_resolution = detail::parse_double(cf, e);
        else if (e.key == "seed") rc.solver.seeds.push_back(detail::parse_vec(cf, e));
        else if (e.key == "threads") rc.solver.threads = detail::parse_size(cf, e);
        else throw bad_key();
      } else if (e.section == "output") {
        if (e.key == "directory") rc.out_dir = detail::unquote(e.value);
        else if (e.key == "csv") rc.export_csv = detail::parse_bool(cf, e);
        else if (e.key == "svg") rc.export_svg = detail::parse_bool(cf, e);
        else if (e.key == "trajectories") rc.export_trajectories = detail::parse_bool(cf, e);
        else throw bad_key();
      } else {
        throw std::runtime_error(cf.where(e.line) + "unknown section [" +
                                 e.section + "]");
      }
    }
    if (strategy == "csm_min") rc.solver.strategy = ControlStrategy::csm_min();
    else if (strategy == "grid") rc.solver.strategy = ControlStrategy::grid(grid_points);
    else throw std::runtime_error(cf.path + ": unknown strategy '" + strategy +
                                  "' (expected csm_min or grid)");
    if (rc.monotone != "trust" && rc.monotone != "check")
      throw std::runtime_error(cf.path + ": monotone_class must be trust or check");
    rc.solver.validate();
    return rc;
  }
};

inline SystemModel build_model(const RunConfig& rc) {
  SystemModel m;
  if (rc.model == "coupled_tanks") m = coupled_tanks(rc.tank);
  else if (rc.model == "linear_decay") m = linear_decay();
  else if (rc.model == "constant_drift") m = constant_drift();
  else throw std::runtime_error("unknown model '" + rc.model + "'");
  if (rc.monotone == "check") m.monotone_class = MonotoneClass::Unknown;
  return m;
}

inline LowerSet build_safety(const RunConfig& rc, const SystemModel& model) {
  if (rc.generators.empty()) {
    if (rc.model == "coupled_tanks" && !rc.ambient_upper) return tank_safety_set();
    throw std::runtime_error("config declares no [safety] generator for model '" +
                             rc.model + "'");
  }
  LowerSet X;
  for (const Vec& g : rc.generators) {
    if (g.size() != model.n)
      throw std::runtime_error("safety generator dimension does not match model");
    insert_maximal(X.generators, g);
  }
  Vec up(model.n, 0.0);
  for (const Vec& g : X.generators.points)
    for (std::size_t i = 0; i < model.n; ++i) up[i] = std::max(up[i], g[i]);
  if (rc.ambient_upper) {
    if (rc.ambient_upper->size() != model.n)
      throw std::runtime_error("ambient_upper dimension does not match model");
    for (std::size_t i = 0; i < model.n; ++i)
      if ((*rc.ambient_upper)[i] < up[i])
        throw std::runtime_error("ambient_upper falls below a safety generator");
    up = *rc.ambient_upper;
  }
  X.ambient = Box(Vec(model.n, 0.0), up);
  return X;
}

// ---------------------------------------------------------------------------
// serialization

inline json to_json(const ControlSignal& s) {
  json j;
  switch (s.kind) {
    case ControlSignal::Kind::Constant:
      j["kind"] = "constant";
      j["value"] = s.constant;
      break;
    case ControlSignal::Kind::Piecewise:
      j["kind"] = "piecewise";
      j["times"] = s.piecewise.times;
      j["values"] = s.piecewise.values;
      break;
    case ControlSignal::Kind::Periodic:
      j["kind"] = "periodic";
      j["times"] = s.piecewise.times;
      j["values"] = s.piecewise.values;
      j["T"] = s.period_T;
      j["delta"] = s.period_delta;
      break;
  }
  if (s.offset != 0) j["offset"] = s.offset;
  return j;
}

inline ControlSignal control_from_json(const json& j) {
  std::string kind = j.at("kind");
  ControlSignal s;
  if (kind == "constant") {
    s = constant_signal(j.at("value").get<Vec>());
  } else if (kind == "piecewise") {
    s = piecewise_signal(j.at("times").get<std::vector<double>>(),
                         j.at("values").get<std::vector<Vec>>());
  } else if (kind == "periodic") {
    ControlSignal base = piecewise_signal(j.at("times").get<std::vector<double>>(),
                                          j.at("values").get<std::vector<Vec>>());
    s = periodic_signal(base.piecewise, j.at("T").get<double>(),
                        j.at("delta").get<double>());
  } else {
    throw std::runtime_error("result.json: unknown control kind '" + kind + "'");
  }
  if (j.contains("offset")) s.offset = j.at("offset").get<double>();
  return s;
}

inline json to_json(const FeasibilityCertificate& c) {
  return json{{"x0", c.x0},      {"T", c.T},         {"t_dom", c.t_dom},
              {"delta", c.delta}, {"eps_T", c.eps_T}, {"gamma", c.gamma},
              {"beta", c.beta},   {"control", to_json(c.control)}};
}

inline FeasibilityCertificate certificate_from_json(const json& j) {
  FeasibilityCertificate c;
  c.x0 = j.at("x0").get<Vec>();
  c.T = j.at("T").get<double>();
  c.t_dom = j.at("t_dom").get<double>();
  c.delta = j.at("delta").get<double>();
  c.eps_T = j.at("eps_T").get<double>();
  c.gamma = j.at("gamma").get<double>();
  c.beta = j.at("beta").get<double>();
  c.control = control_from_json(j.at("control"));
  return c;
}

inline json to_json(const RunConfig& rc, const LowerSet& X) {
  json model{{"name", rc.model}, {"monotone", rc.monotone}};
  if (rc.model == "coupled_tanks") {
    const TankParameters& p = rc.tank;
    model["parameters"] = json{{"A", p.A},         {"a", p.a},
                               {"K1", p.K1},       {"K2", p.K2},
                               {"u_min", p.u_min}, {"u_max", p.u_max},
                               {"d_min", p.d_min}, {"d_max", p.d_max},
                               {"g", p.g}};
  }
  const SolverConfig& s = rc.solver;
  json solver{{"epsilon", s.epsilon},
              {"T_max", s.T_max},
              {"h", s.h},
              {"margin", s.margin},
              {"tau", s.tau},
              {"strategy", s.strategy.kind == ControlStrategy::Kind::Grid ? "grid" : "csm_min"},
              {"grid_points", s.strategy.grid_points_per_axis},
              {"use_beta", s.use_beta},
              {"max_iterations", s.max_iterations},
              {"grid_resolution", s.resolved_resolution()},
              {"seeds", s.seeds}};
  if (s.lipschitz) solver["lipschitz"] = *s.lipschitz;
  json safety{{"generators", X.generators.points},
              {"ambient_lower", X.ambient.lower},
              {"ambient_upper", X.ambient.upper}};
  return json{{"model", model}, {"safety", safety}, {"solver", solver}};
}

inline RunConfig runconfig_from_json(const json& j) {
  RunConfig rc;
  const json& model = j.at("model");
  rc.model = model.at("name");
  rc.monotone = model.value("monotone", "trust");
  if (model.contains("parameters")) {
    const json& p = model.at("parameters");
    rc.tank.A = p.at("A");
    rc.tank.a = p.at("a");
    rc.tank.K1 = p.at("K1");
    rc.tank.K2 = p.at("K2");
    rc.tank.u_min = p.at("u_min");
    rc.tank.u_max = p.at("u_max");
    rc.tank.d_min = p.at("d_min");
    rc.tank.d_max = p.at("d_max");
    rc.tank.g = p.at("g");
  }
  const json& safety = j.at("safety");
  rc.generators = safety.at("generators").get<std::vector<Vec>>();
  rc.ambient_upper = safety.at("ambient_upper").get<Vec>();
  const json& s = j.at("solver");
  rc.solver.epsilon = s.at("epsilon");
  rc.solver.T_max = s.at("T_max");
  rc.solver.h = s.at("h");
  rc.solver.margin = s.at("margin");
  rc.solver.tau = s.at("tau");
  rc.solver.strategy = s.at("strategy") == "grid"
                           ? ControlStrategy::grid(s.at("grid_points").get<std::size_t>())
                           : ControlStrategy::csm_min();
  rc.solver.use_beta = s.at("use_beta");
  if (s.contains("lipschitz")) rc.solver.lipschitz = s.at("lipschitz").get<double>();
  rc.solver.max_iterations = s.at("max_iterations");
  rc.solver.grid_resolution = s.at("grid_resolution");
  rc.solver.seeds = s.at("seeds").get<std::vector<Vec>>();
  return rc;
}

inline void write_trajectory_csv(std::ostream& os, const SystemModel& model,
                                 const Trajectory& tr) {
  os << "t";
  for (std::size_t i = 0; i < model.n; ++i) os << ",x" << (i + 1);
  for (std::size_t i = 0; i < model.m; ++i) os << ",u" << (i + 1);
  for (std::size_t i = 0; i < model.p; ++i) os << ",d" << (i + 1);
  os << "\n";
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    os << format_double(tr.times[k]);
    for (double v : tr.states[k]) os << "," << format_double(v);
    for (double v : eval_signal(tr.control, tr.times[k])) os << "," << format_double(v);
    for (double v : eval_signal(tr.disturbance, tr.times[k])) os << "," << format_double(v);
    os << "\n";
  }
}

// ---------------------------------------------------------------------------
// SVG rendering (planar models): feasible region brown, certified-unsafe teal,
// unresolved band yellow, certificate orbits as dark polylines

namespace detail {

struct SvgMap {
  double x0, y0, sx, sy, height;
  double X(double x) const { return x0 + sx * x; }
  double Y(double y) const { return height - (y0 + sy * y); }
};

}  // namespace detail

inline void render_svg(std::ostream& os, const SystemModel& model, const LowerSet& X,
                       const SolverResult& result,
                       const std::vector<Trajectory>& orbits, double slack,
                       std::size_t width = 640) {
  if (model.n != 2)
    throw std::invalid_argument("render_svg: only planar state spaces are drawn");
  const Box& amb = X.ambient;
  const double wx = amb.upper[0] - amb.lower[0], wy = amb.upper[1] - amb.lower[1];
  const double margin = 40;
  const double plot_w = static_cast<double>(width) - 2 * margin;
  const double plot_h = plot_w * (wy / wx);
  const double height = plot_h + 2 * margin;
  detail::SvgMap mp{margin - amb.lower[0] * (plot_w / wx),
                    margin - amb.lower[1] * (plot_h / wy), plot_w / wx,
                    plot_h / wy, height};

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
     << "\">\n";
  os << "<rect width=\"" << width << "\" height=\"" << height
     << "\" fill=\"white\"/>\n";

  // raster the three regions with horizontal run-length merging
  const std::size_t cols = 220;
  const std::size_t rows = std::max<std::size_t>(1, static_cast<std::size_t>(
                                                        cols * (wy / wx)));
  const double cw = wx / cols, ch = wy / rows;
  static const char* const palette[] = {"#9c6b30", "#3fa8a8", "#f3d95c"};
  auto region_at = [&](double x, double y) -> int {
    Vec p{x, y};
    if (!member_lower(X, p, slack)) return -1;
    if (member_lower(result.F1, p, slack)) return 0;  // feasible
    if (member_upper(result.F2, p)) return 1;         // unsafe
    return 2;                                         // unresolved
  };
  for (std::size_t r = 0; r < rows; ++r) {
    const double y = amb.lower[1] + (r + 0.5) * ch;
    std::size_t c = 0;
    while (c < cols) {
      const double x = amb.lower[0] + (c + 0.5) * cw;
      const int reg = region_at(x, y);
      std::size_t run = c + 1;
      while (run < cols &&
             region_at(amb.lower[0] + (run + 0.5) * cw, y) == reg)
        ++run;
      if (reg >= 0) {
        const double px = mp.X(amb.lower[0] + c * cw);
        const double py = mp.Y(amb.lower[1] + (r + 1) * ch);
        os << "<rect x=\"" << px << "\" y=\"" << py << "\" width=\""
           << (run - c) * cw * mp.sx << "\" height=\"" << ch * mp.sy
           << "\" fill=\"" << palette[reg] << "\"/>\n";
      }
      c = run;
    }
  }

  // ambient frame
  os << "<rect x=\"" << mp.X(amb.lower[0]) << "\" y=\"" << mp.Y(amb.upper[1])
     << "\" width=\"" << plot_w << "\" height=\"" << plot_h
     << "\" fill=\"none\" stroke=\"#222\" stroke-width=\"1\"/>\n";

  for (const Trajectory& tr : orbits) {
    os << "<polyline fill=\"none\" stroke=\"#222\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < tr.states.size(); ++k)
      os << mp.X(tr.states[k][0]) << "," << mp.Y(tr.states[k][1]) << " ";
    os << "\"/>\n";
    if (!tr.states.empty())
      os << "<circle cx=\"" << mp.X(tr.states[0][0]) << "\" cy=\""
         << mp.Y(tr.states[0][1]) << "\" r=\"3\" fill=\"#222\"/>\n";
  }

  for (const Vec& g : result.F1.generators.points)
    os << "<circle cx=\"" << mp.X(g[0]) << "\" cy=\"" << mp.Y(g[1])
       << "\" r=\"1.5\" fill=\"#4a2d10\"/>\n";

  // corner labels
  os << "<text x=\"" << mp.X(amb.lower[0]) << "\" y=\"" << height - margin / 3
     << "\" font-size=\"12\" fill=\"#222\">" << format_double(amb.lower[0])
     << "</text>\n";
  os << "<text x=\"" << mp.X(amb.upper[0]) - 18 << "\" y=\"" << height - margin / 3
     << "\" font-size=\"12\" fill=\"#222\">" << format_double(amb.upper[0])
     << "</text>\n";
  os << "<text x=\"" << margin / 4 << "\" y=\"" << mp.Y(amb.upper[1]) + 4
     << "\" font-size=\"12\" fill=\"#222\">" << format_double(amb.upper[1])
     << "</text>\n";
  os << "</svg>\n";
}

// ---------------------------------------------------------------------------
// commands

inline int exit_code_for(Termination t) {
  switch (t) {
    case Termination::GapConverged:
    case Termination::EmptySet:
      return 0;
    default:
      return 2;  // band not resolved to epsilon
  }
}

namespace detail {

inline void write_result_dir(const RunConfig& rc, const SystemModel& model,
                             const LowerSet& X, const SolverResult& res) {
  namespace fs = std::filesystem;
  const fs::path dir(rc.out_dir);
  fs::create_directories(dir);

  if (rc.export_csv) {
    std::ofstream f1(dir / "F1.csv");
    write_antichain_csv(f1, res.F1.generators, model.n);
    std::ofstream f2(dir / "F2.csv");
    write_antichain_csv(f2, res.F2.generators, model.n);
  }

  json j;
  j["config"] = to_json(rc, X);
  j["termination"] = to_string(res.termination);
  j["gap"] = res.gap;
  j["stats"] = json{{"classifications", res.stats.classifications},
                    {"simulations", res.stats.simulations},
                    {"iterations", res.stats.iterations},
                    {"wall_ms", res.stats.wall_ms}};
  j["f1_generators"] = res.F1.generators.size();
  j["f2_generators"] = res.F2.generators.size();
  j["unknown_points"] = res.unknown_points;
  json certs = json::array();
  for (const auto& c : res.certificates) certs.push_back(to_json(c));
  j["certificates"] = certs;
  j["generator_certificate"] = res.generator_certificate;
  j["generator_time"] = res.generator_time;
  std::ofstream jf(dir / "result.json");
  jf << j.dump(2) << "\n";

  std::vector<Trajectory> orbits;
  if (rc.export_trajectories || (rc.export_svg && model.n == 2)) {
    for (const auto& c : res.certificates)
      orbits.push_back(simulate(model, c.x0, c.control,
                                constant_signal(model.D.upper), c.T, rc.solver.h));
  }
  if (rc.export_trajectories) {
    fs::create_directories(dir / "trajectories");
    for (std::size_t i = 0; i < orbits.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "cert_%03zu.csv", i);
      std::ofstream tf(dir / "trajectories" / name);
      write_trajectory_csv(tf, model, orbits[i]);
    }
  }
  if (rc.export_svg && model.n == 2) {
    std::ofstream sf(dir / "plot.svg");
    render_svg(sf, model, X, res, orbits, rc.solver.tau);
  }
}

}  // namespace detail

struct ComputeOverrides {
  std::optional<double> epsilon;
  std::optional<std::string> out_dir;
  std::optional<std::size_t> threads;
};

inline int cmd_compute(const std::string& config_path,
                       const ComputeOverrides& ov = {}) {
  try {
    RunConfig rc = RunConfig::from_file(config_path);
    if (ov.epsilon) rc.solver.epsilon = *ov.epsilon;
    if (ov.out_dir) rc.out_dir = *ov.out_dir;
    if (ov.threads) rc.solver.threads = *ov.threads;
    rc.solver.validate();

    SystemModel model = build_model(rc);
    LowerSet X = build_safety(rc, model);
    SolverResult res = compute_invariant(model, X, rc.solver);
    detail::write_result_dir(rc, model, X, res);

    std::cout << "model: " << model.name << " (n=" << model.n << ", m=" << model.m
              << ", p=" << model.p << ")\n"
              << "termination: " << to_string(res.termination) << "\n"
              << "gap: " << format_double(res.gap) << " (epsilon "
              << format_double(rc.solver.epsilon) << ")\n"
              << "F1 generators: " << res.F1.generators.size()
              << "  F2 generators: " << res.F2.generators.size()
              << "  unknown points: " << res.unknown_points.size() << "\n"
              << "classifications: " << res.stats.classifications
              << "  simulations: " << res.stats.simulations
              << "  refinements: " << res.stats.iterations << "\n"
              << "wall: " << res.stats.wall_ms << " ms\n"
              << "wrote " << rc.out_dir << "/\n";
    return exit_code_for(res.termination);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

inline Vec parse_point(const std::string& s) {
  Vec v;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part = ConfigFile::strip(part);
    try {
      std::size_t used = 0;
      double x = std::stod(part, &used);
      if (used != part.size()) throw std::invalid_argument("trailing characters");
      v.push_back(x);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad point component '" + part +
                                  "' (expected \"x1,x2,...\")");
    }
  }
  if (v.empty()) throw std::invalid_argument("empty point");
  return v;
}

inline int cmd_classify(const std::string& config_path, const std::string& point) {
  try {
    RunConfig rc = RunConfig::from_file(config_path);
    SystemModel model = build_model(rc);
    LowerSet X = build_safety(rc, model);
    Vec x0 = parse_point(point);
    if (x0.size() != model.n) {
      std::cerr << "error: point has dimension " << x0.size() << ", model has "
                << model.n << "\n";
      return 1;
    }
    if (!member_lower(X, x0, rc.solver.tau)) {
      std::cerr << "error: point lies outside the safety set\n";
      return 1;
    }

    ClassifyOptions opt;
    opt.T_max = rc.solver.T_max;
    opt.h = rc.solver.h;
    opt.margin = rc.solver.margin;
    opt.tau = rc.solver.tau;
    Classification cl = classify_point(model, X, x0, rc.solver.strategy, opt);

    std::cout << "classification: " << to_string(cl.kind) << "\n";
    Trajectory tr;
    switch (cl.kind) {
      case Feasibility::Feasible: {
        FeasibilityCertificate cert = *cl.certificate;
        if (rc.solver.use_beta) {
          double lambda = rc.solver.lipschitz
                              ? *rc.solver.lipschitz
                              : (model.lipschitz_x
                                     ? *model.lipschitz_x
                                     : estimate_lipschitz(model, X.ambient.inset(1e-3)));
          cert.beta = beta_radius(cert, lambda);
        }
        std::cout << "T: " << format_double(cert.T) << "\n"
                  << "t_dom: " << format_double(cert.t_dom) << "\n"
                  << "delta: " << format_double(cert.delta) << "\n"
                  << "eps_T: " << format_double(cert.eps_T) << "\n"
                  << "gamma: " << format_double(cert.gamma) << "\n"
                  << "beta: " << format_double(cert.beta) << "\n";
        tr = simulate(model, cert.x0, cert.control, constant_signal(model.D.upper),
                      cert.T, rc.solver.h);
        break;
      }
      case Feasibility::Unsafe:
        std::cout << "exit_time: " << format_double(cl.exit_time) << "\n";
        tr = simulate(model, x0, constant_signal(model.U.lower),
                      constant_signal(model.D.upper), cl.exit_time, rc.solver.h);
        break;
      case Feasibility::Unknown:
        std::cout << "horizon: " << format_double(cl.horizon) << "\n";
        tr = simulate(model, x0, constant_signal(model.U.lower),
                      constant_signal(model.D.upper), cl.horizon, rc.solver.h);
        break;
    }
    namespace fs = std::filesystem;
    fs::create_directories(rc.out_dir);
    const fs::path csv = fs::path(rc.out_dir) / "classify_trajectory.csv";
    std::ofstream tf(csv);
    write_trajectory_csv(tf, model, tr);
    std::cout << "trajectory: " << csv.string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

inline int cmd_verify(const std::string& dir_path) {
  try {
    namespace fs = std::filesystem;
    const fs::path dir(dir_path);
    std::ifstream jf(dir / "result.json");
    if (!jf) {
      std::cerr << "error: missing " << (dir / "result.json").string() << "\n";
      return 1;
    }
    json j = json::parse(jf);
    RunConfig rc = runconfig_from_json(j.at("config"));
    SystemModel model = build_model(rc);
    LowerSet X = build_safety(rc, model);

    SolverResult res;
    res.F1.ambient = X.ambient;
    res.F2.ambient = X.ambient;
    {
      std::ifstream f1(dir / "F1.csv");
      if (!f1) {
        std::cerr << "error: missing " << (dir / "F1.csv").string() << "\n";
        return 1;
      }
      res.F1.generators = read_antichain_csv(f1);
      std::ifstream f2(dir / "F2.csv");
      if (!f2) {
        std::cerr << "error: missing " << (dir / "F2.csv").string() << "\n";
        return 1;
      }
      res.F2.generators = read_antichain_csv(f2);
    }
    for (const auto& cj : j.at("certificates"))
      res.certificates.push_back(certificate_from_json(cj));
    res.generator_certificate =
        j.at("generator_certificate").get<std::vector<std::size_t>>();
    res.generator_time = j.at("generator_time").get<std::vector<double>>();
    res.gap = j.at("gap");

    // structural integrity before any replay
    for (const Vec& g : res.F1.generators.points) {
      if (g.size() != model.n) {
        std::cerr << "error: F1.csv row dimension does not match model\n";
        return 1;
      }
      if (!member_lower(X, g, rc.solver.tau)) {
        std::string s;
        for (std::size_t i = 0; i < g.size(); ++i)
          s += (i ? "," : "") + format_double(g[i]);
        std::cerr << "error: F1 generator (" << s
                  << ") lies outside the safety set\n";
        return 1;
      }
    }
    const std::size_t count = res.F1.generators.size();
    if (res.generator_certificate.size() != count ||
        res.generator_time.size() != count) {
      std::cerr << "error: generator bookkeeping does not match F1.csv ("
                << res.generator_certificate.size() << " records, " << count
                << " rows)\n";
      return 1;
    }
    for (std::size_t ci : res.generator_certificate)
      if (ci >= res.certificates.size()) {
        std::cerr << "error: generator references certificate " << ci
                  << " of " << res.certificates.size() << "\n";
        return 1;
      }

    VerifyReport rep = verify_result(model, X, res, rc.solver, 20, 1e-3,
                                     /*check_lemma=*/false, rc.solver.threads);
    std::cout << "generators: " << count << "\n"
              << "replays: " << rep.replays << "\n"
              << "violations: " << rep.violations << "\n";
    for (const std::string& f : rep.failures) std::cout << "  " << f << "\n";
    std::cout << (rep.passed ? "verified: containment holds\n"
                             : "verification FAILED\n");
    return rep.passed ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace rcis
