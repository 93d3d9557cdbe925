#include "aquifer/config.hpp"

#include "aquifer/error.hpp"
#include "format.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

namespace aquifer {

using detail::format_number;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<double> to_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<int> to_int(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || errno == ERANGE || v < INT32_MIN || v > INT32_MAX) return std::nullopt;
  return static_cast<int>(v);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

struct Entry {
  std::string value;
  int line;
};

}  // namespace

FieldSpec FieldSpec::parse(const std::string& raw) {
  const std::string text = trim(raw);
  if (auto v = to_double(text)) return {Kind::constant, {*v}};
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InvalidArgument("field '" + text + "': expected <kind>:<args> or a number");
  const std::string kind = text.substr(0, colon);
  std::vector<double> args;
  for (const auto& a : split(text.substr(colon + 1), ',')) {
    auto v = to_double(a);
    if (!v) throw InvalidArgument("field '" + text + "': '" + a + "' is not a number");
    args.push_back(*v);
  }
  static const std::map<std::string, std::pair<Kind, std::size_t>> kinds{
      {"const", {Kind::constant, 1}}, {"linear", {Kind::linear, 3}}, {"sinsin", {Kind::sinsin, 1}},
      {"gauss", {Kind::gauss, 4}},    {"box", {Kind::box, 5}},
  };
  const auto it = kinds.find(kind);
  if (it == kinds.end()) throw InvalidArgument("field '" + text + "': unknown kind '" + kind + "'");
  if (args.size() != it->second.second) {
    throw InvalidArgument("field '" + text + "': " + kind + " takes " + std::to_string(it->second.second) +
                          " argument(s)");
  }
  if (it->second.first == Kind::gauss && !(args[3] > 0.0)) {
    throw InvalidArgument("field '" + text + "': gauss width must be > 0");
  }
  return {it->second.first, std::move(args)};
}

std::string FieldSpec::to_string() const {
  static const char* names[] = {"const", "linear", "sinsin", "gauss", "box"};
  std::string s = names[static_cast<int>(kind)];
  s += ':';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) s += ',';
    s += format_number(args[i]);
  }
  return s;
}

ScalarFunction FieldSpec::function(const Rectangle& d) const {
  const auto a = args;
  switch (kind) {
    case Kind::constant: return [v = a[0]](const Point&) { return v; };
    case Kind::linear: return [a](const Point& x) { return a[0] + a[1] * x.x() + a[2] * x.y(); };
    case Kind::sinsin:
      return [a, d](const Point& x) {
        using std::numbers::pi;
        const double xi = (x.x() - d.x0) / (d.x1 - d.x0);
        const double eta = (x.y() - d.y0) / (d.y1 - d.y0);
        return a[0] * std::sin(pi * xi) * std::sin(pi * eta);
      };
    case Kind::gauss:
      return [a](const Point& x) {
        const double r2 = std::pow(x.x() - a[1], 2) + std::pow(x.y() - a[2], 2);
        return a[0] * std::exp(-r2 / (2.0 * a[3] * a[3]));
      };
    case Kind::box:
      return [a](const Point& x) {
        return (x.x() >= a[1] && x.x() <= a[2] && x.y() >= a[3] && x.y() <= a[4]) ? a[0] : 0.0;
      };
  }
  return {};
}

ScenarioConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
  std::map<std::string, Entry> entries;
  {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError("", "expected key=value", lineno);
      const std::string key = trim(line.substr(0, eq));
      if (key.empty()) throw ConfigError("", "empty key", lineno);
      if (entries.count(key)) throw ConfigError(key, "duplicated key (first on line " +
                                                         std::to_string(entries[key].line) + ")", lineno);
      entries[key] = {trim(line.substr(eq + 1)), lineno};
    }
  }

  ScenarioConfig cfg;
  std::map<std::string, std::function<void(const Entry&)>> handlers;
  auto line_of = [&](const std::string& key) { return entries.count(key) ? entries.at(key).line : 0; };

  auto number = [](const std::string& key, double& out) {
    return [&out, key](const Entry& e) {
      auto v = to_double(e.value);
      if (!v) throw ConfigError(key, "expected a number, got '" + e.value + "'", e.line);
      out = *v;
    };
  };
  auto field = [](const std::string& key, FieldSpec& out) {
    return [&out, key](const Entry& e) {
      try {
        out = FieldSpec::parse(e.value);
      } catch (const InvalidArgument& ex) {
        throw ConfigError(key, ex.what(), e.line);
      }
    };
  };
  auto mode = [](const std::string& key, BoundaryMode& out) {
    return [&out, key](const Entry& e) {
      if (e.value == "dirichlet") out = BoundaryMode::dirichlet;
      else if (e.value == "neumann") out = BoundaryMode::neumann;
      else throw ConfigError(key, "expected 'dirichlet' or 'neumann', got '" + e.value + "'", e.line);
    };
  };

  handlers["mesh.n"] = [&](const Entry& e) {
    auto v = to_int(e.value);
    if (!v) throw ConfigError("mesh.n", "expected an integer, got '" + e.value + "'", e.line);
    if (*v < 1) throw ConfigError("mesh.n", "must be >= 1", e.line);
    cfg.mesh_n = *v;
  };
  handlers["mesh.file"] = [&](const Entry& e) {
    std::filesystem::path p(e.value);
    if (p.is_relative()) p = base_dir / p;
    p = p.lexically_normal();
    if (!std::filesystem::exists(p)) throw ConfigError("mesh.file", "file not found: " + p.string(), e.line);
    cfg.mesh_file = p;
  };
  handlers["mesh.x0"] = number("mesh.x0", cfg.domain.x0);
  handlers["mesh.x1"] = number("mesh.x1", cfg.domain.x1);
  handlers["mesh.y0"] = number("mesh.y0", cfg.domain.y0);
  handlers["mesh.y1"] = number("mesh.y1", cfg.domain.y1);

  handlers["darcy.bc"] = mode("darcy.bc", cfg.darcy_bc);
  handlers["darcy.kappa_xx"] = number("darcy.kappa_xx", cfg.kappa_xx);
  handlers["darcy.kappa_xy"] = number("darcy.kappa_xy", cfg.kappa_xy);
  handlers["darcy.kappa_yy"] = number("darcy.kappa_yy", cfg.kappa_yy);
  handlers["darcy.g"] = field("darcy.g", cfg.darcy_g);
  handlers["darcy.head"] = field("darcy.head", cfg.darcy_head);

  handlers["transport.R"] = number("transport.R", cfg.retardation);
  handlers["transport.psi"] = field("transport.psi", cfg.porosity);
  handlers["transport.Sm"] = number("transport.Sm", cfg.molecular);
  handlers["transport.alpha_L"] = number("transport.alpha_L", cfg.alpha_l);
  handlers["transport.alpha_T"] = number("transport.alpha_T", cfg.alpha_t);
  handlers["transport.isotherm"] = [&](const Entry& e) {
    if (e.value == "linear") cfg.isotherm = Isotherm::Kind::linear;
    else if (e.value == "freundlich") cfg.isotherm = Isotherm::Kind::freundlich;
    else if (e.value == "langmuir") cfg.isotherm = Isotherm::Kind::langmuir;
    else throw ConfigError("transport.isotherm", "expected linear, freundlich or langmuir", e.line);
  };
  handlers["transport.k"] = number("transport.k", cfg.k);
  handlers["transport.k2"] = number("transport.k2", cfg.k2);
  handlers["transport.p"] = field("transport.p", cfg.source);
  handlers["transport.bc"] = mode("transport.bc", cfg.transport_bc);
  handlers["transport.c0"] = field("transport.c0", cfg.initial);

  double tau = 0.0;
  CflCondition cfl;
  bool cfl_flag = false;
  handlers["time.tau"] = number("time.tau", tau);
  handlers["time.cfl"] = [&](const Entry& e) {
    if (e.value == "true" || e.value == "on" || e.value == "1") cfl_flag = true;
    else if (e.value == "false" || e.value == "off" || e.value == "0") cfl_flag = false;
    else throw ConfigError("time.cfl", "expected true or false, got '" + e.value + "'", e.line);
  };
  handlers["time.cfl.epsilon"] = number("time.cfl.epsilon", cfl.epsilon);
  handlers["time.cfl.C"] = number("time.cfl.C", cfl.c_cfl);
  handlers["time.T_final"] = number("time.T_final", cfg.t_final);

  handlers["output.dir"] = [&](const Entry& e) {
    if (e.value.empty()) throw ConfigError("output.dir", "must not be empty", e.line);
    cfg.output_dir = e.value;
  };
  handlers["output.cadence"] = [&](const Entry& e) {
    auto v = to_int(e.value);
    if (!v) throw ConfigError("output.cadence", "expected an integer, got '" + e.value + "'", e.line);
    if (*v < 1) throw ConfigError("output.cadence", "must be >= 1", e.line);
    cfg.cadence = *v;
  };
  handlers["output.formats"] = [&](const Entry& e) {
    cfg.write_csv = cfg.write_vtk = false;
    for (const auto& f : split(e.value, ',')) {
      if (f == "csv") cfg.write_csv = true;
      else if (f == "vtk") cfg.write_vtk = true;
      else if (f == "none") continue;
      else throw ConfigError("output.formats", "unknown format '" + f + "'", e.line);
    }
  };

  handlers["study.meshes"] = [&](const Entry& e) {
    cfg.study_meshes.clear();
    for (const auto& s : split(e.value, ',')) {
      auto v = to_int(s);
      if (!v || *v < 1) throw ConfigError("study.meshes", "expected positive integers, got '" + s + "'", e.line);
      if (!cfg.study_meshes.empty() && *v <= cfg.study_meshes.back()) {
        throw ConfigError("study.meshes", "must be strictly increasing", e.line);
      }
      cfg.study_meshes.push_back(*v);
    }
    if (cfg.study_meshes.size() < 3) throw ConfigError("study.meshes", "need at least 3 meshes", e.line);
  };
  handlers["study.case"] = [&](const Entry& e) {
    if (e.value != "sinsin" && e.value != "linear") {
      throw ConfigError("study.case", "expected 'sinsin' or 'linear'", e.line);
    }
    cfg.study_case = e.value;
  };

  for (const auto& [key, entry] : entries) {
    const auto h = handlers.find(key);
    if (h == handlers.end()) throw ConfigError(key, "unknown key", entry.line);
    h->second(entry);
  }

  // cross-key constraints
  if (cfg.mesh_n && cfg.mesh_file) {
    throw ConfigError("mesh.n", "mesh.n and mesh.file are mutually exclusive", line_of("mesh.file"));
  }
  if (!cfg.mesh_n && !cfg.mesh_file) throw ConfigError("mesh.n", "one of mesh.n or mesh.file is required");
  if (!(cfg.domain.x1 > cfg.domain.x0)) throw ConfigError("mesh.x1", "must exceed mesh.x0", line_of("mesh.x1"));
  if (!(cfg.domain.y1 > cfg.domain.y0)) throw ConfigError("mesh.y1", "must exceed mesh.y0", line_of("mesh.y1"));
  if (!(cfg.kappa_xx > 0.0) || !(cfg.kappa_xx * cfg.kappa_yy - cfg.kappa_xy * cfg.kappa_xy > 0.0)) {
    throw ConfigError("darcy.kappa_xx", "permeability tensor must be positive definite", line_of("darcy.kappa_xx"));
  }
  if (!(cfg.retardation > 0.0)) {
    throw ConfigError("transport.R", "retardation factor must be > 0", line_of("transport.R"));
  }
  try {
    DispersionParams(cfg.molecular, cfg.alpha_l, cfg.alpha_t);
  } catch (const InvalidArgument& ex) {
    const std::string key = cfg.molecular > 0.0 ? "transport.alpha_T" : "transport.Sm";
    throw ConfigError(key, std::string(ex.what()) + " (assumption S_m > 0, alpha_L > alpha_T >= 0)",
                      line_of(key));
  }
  if (!(cfg.k >= 0.0)) throw ConfigError("transport.k", "must be >= 0", line_of("transport.k"));
  if (!(cfg.k2 >= 0.0)) throw ConfigError("transport.k2", "must be >= 0", line_of("transport.k2"));
  if (cfg.porosity.kind == FieldSpec::Kind::constant && !(cfg.porosity.args[0] > 0.0)) {
    throw ConfigError("transport.psi", "porosity must be > 0", line_of("transport.psi"));
  }

  const bool has_tau = entries.count("time.tau") > 0;
  const bool has_cfl = entries.count("time.cfl") || entries.count("time.cfl.epsilon") || entries.count("time.cfl.C");
  if (has_tau && has_cfl) {
    throw ConfigError("time.tau", "time.tau and time.cfl are mutually exclusive; give exactly one",
                      line_of("time.tau"));
  }
  if (!has_tau && !has_cfl) throw ConfigError("time.tau", "one of time.tau or time.cfl is required");
  if (has_cfl && entries.count("time.cfl") && !cfl_flag) {
    throw ConfigError("time.cfl", "time.cfl=false given without time.tau", line_of("time.cfl"));
  }
  if (has_tau) {
    if (!(tau > 0.0)) throw ConfigError("time.tau", "must be > 0", line_of("time.tau"));
    cfg.tau = tau;
  } else {
    if (!(cfl.epsilon > 0.0 && cfl.epsilon < 1.0)) {
      throw ConfigError("time.cfl.epsilon", "must lie in (0, 1)", line_of("time.cfl.epsilon"));
    }
    if (!(cfl.c_cfl > 0.0)) throw ConfigError("time.cfl.C", "must be > 0", line_of("time.cfl.C"));
    cfg.cfl = cfl;
  }
  if (!(cfg.t_final >= 0.0)) throw ConfigError("time.T_final", "must be >= 0", line_of("time.T_final"));
  return cfg;
}

ScenarioConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.has_parent_path() ? path.parent_path() : std::filesystem::current_path());
}

std::string echo_config(const ScenarioConfig& c) {
  std::ostringstream o;
  auto num = [](double x) { return format_number(x); };
  if (c.mesh_n) o << "mesh.n=" << *c.mesh_n << "\n";
  if (c.mesh_file) o << "mesh.file=" << c.mesh_file->string() << "\n";
  o << "mesh.x0=" << num(c.domain.x0) << "\n"
    << "mesh.x1=" << num(c.domain.x1) << "\n"
    << "mesh.y0=" << num(c.domain.y0) << "\n"
    << "mesh.y1=" << num(c.domain.y1) << "\n";
  o << "darcy.bc=" << to_string(c.darcy_bc) << "\n"
    << "darcy.kappa_xx=" << num(c.kappa_xx) << "\n"
    << "darcy.kappa_xy=" << num(c.kappa_xy) << "\n"
    << "darcy.kappa_yy=" << num(c.kappa_yy) << "\n"
    << "darcy.g=" << c.darcy_g.to_string() << "\n"
    << "darcy.head=" << c.darcy_head.to_string() << "\n";
  o << "transport.R=" << num(c.retardation) << "\n"
    << "transport.psi=" << c.porosity.to_string() << "\n"
    << "transport.Sm=" << num(c.molecular) << "\n"
    << "transport.alpha_L=" << num(c.alpha_l) << "\n"
    << "transport.alpha_T=" << num(c.alpha_t) << "\n"
    << "transport.isotherm=" << to_string(c.isotherm) << "\n"
    << "transport.k=" << num(c.k) << "\n"
    << "transport.k2=" << num(c.k2) << "\n"
    << "transport.p=" << c.source.to_string() << "\n"
    << "transport.bc=" << to_string(c.transport_bc) << "\n"
    << "transport.c0=" << c.initial.to_string() << "\n";
  if (c.tau) o << "time.tau=" << num(*c.tau) << "\n";
  if (c.cfl) {
    o << "time.cfl=true\n"
      << "time.cfl.epsilon=" << num(c.cfl->epsilon) << "\n"
      << "time.cfl.C=" << num(c.cfl->c_cfl) << "\n";
  }
  o << "time.T_final=" << num(c.t_final) << "\n";
  o << "output.dir=" << c.output_dir.string() << "\n"
    << "output.cadence=" << c.cadence << "\n";
  std::string formats;
  if (c.write_csv) formats = "csv";
  if (c.write_vtk) formats += formats.empty() ? "vtk" : ",vtk";
  o << "output.formats=" << (formats.empty() ? "none" : formats) << "\n";
  o << "study.meshes=";
  for (std::size_t i = 0; i < c.study_meshes.size(); ++i) o << (i ? "," : "") << c.study_meshes[i];
  o << "\nstudy.case=" << c.study_case << "\n";
  return o.str();
}

Mesh make_mesh(const ScenarioConfig& config) {
  if (config.mesh_file) return load_mesh(*config.mesh_file);
  return build_structured_mesh(*config.mesh_n, config.domain);
}

DarcyProblem make_darcy_problem(const ScenarioConfig& config, const Mesh& mesh) {
  Tensor2 kappa;
  kappa(0, 0) = config.kappa_xx;
  kappa(0, 1) = config.kappa_xy;
  kappa(1, 1) = config.kappa_yy;
  DarcyProblem p = DarcyProblem::uniform(mesh, kappa, config.darcy_g.function(config.domain), config.darcy_bc);
  if (config.darcy_bc == BoundaryMode::dirichlet) p.boundary_head = config.darcy_head.function(config.domain);
  return p;
}

TransportParams make_transport_params(const ScenarioConfig& config, const Mesh& mesh) {
  TransportParams p;
  p.retardation = config.retardation;
  p.porosity = project_P_h(mesh, config.porosity.function(config.domain));
  p.dispersion = DispersionParams(config.molecular, config.alpha_l, config.alpha_t);
  p.isotherm = Isotherm{config.isotherm, config.k, config.k2};
  p.source = project_P_h(mesh, config.source.function(config.domain));
  p.mode = config.transport_bc;
  p.initial = project_P_h(mesh, config.initial.function(config.domain));
  p.validate(mesh);
  return p;
}

double resolve_timestep(const ScenarioConfig& config, const Mesh& mesh) {
  if (config.tau) return *config.tau;
  return cfl_timestep(mesh.metrics().h, 2, config.cfl->epsilon, config.cfl->c_cfl);
}

}  // namespace aquifer
