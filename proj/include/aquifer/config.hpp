#pragma once

#include "aquifer/darcy.hpp"
#include "aquifer/mesh.hpp"
#include "aquifer/transport.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace aquifer {

/// Closed-form scalar field used for sources, porosity and initial data.
/// Text forms (x, y scaled to the unit box of the domain for sinsin):
///   <v> | const:<v> | linear:<a>,<b>,<c> | sinsin:<amp> |
///   gauss:<amp>,<x0>,<y0>,<width> | box:<value>,<xmin>,<xmax>,<ymin>,<ymax>
struct FieldSpec {
  enum class Kind { constant, linear, sinsin, gauss, box };
  Kind kind = Kind::constant;
  std::vector<double> args{0.0};

  /// Throws InvalidArgument on malformed text.
  static FieldSpec parse(const std::string& text);
  std::string to_string() const;
  ScalarFunction function(const Rectangle& domain) const;

  bool operator==(const FieldSpec&) const = default;
};

struct ScenarioConfig {
  // mesh
  std::optional<int> mesh_n;
  std::optional<std::filesystem::path> mesh_file;
  Rectangle domain;

  // darcy
  BoundaryMode darcy_bc = BoundaryMode::dirichlet;
  double kappa_xx = 1.0, kappa_xy = 0.0, kappa_yy = 1.0;
  FieldSpec darcy_g;
  FieldSpec darcy_head;

  // transport
  double retardation = 1.0;
  FieldSpec porosity{FieldSpec::Kind::constant, {1.0}};
  double molecular = 0.01, alpha_l = 0.1, alpha_t = 0.01;
  Isotherm::Kind isotherm = Isotherm::Kind::linear;
  double k = 0.0, k2 = 0.0;
  FieldSpec source;
  BoundaryMode transport_bc = BoundaryMode::neumann;
  FieldSpec initial;

  // time: exactly one of tau / cfl
  std::optional<double> tau;
  std::optional<CflCondition> cfl;
  double t_final = 0.0;

  // output
  std::filesystem::path output_dir = "out";
  int cadence = 1;
  bool write_csv = true;
  bool write_vtk = true;

  // darcy-study
  std::vector<int> study_meshes{8, 16, 32, 64};
  std::string study_case = "sinsin";

  bool operator==(const ScenarioConfig&) const = default;
};

/// Parses flat `section.key=value` text; `#` starts a comment. Relative
/// mesh paths resolve against `base_dir`. Throws ConfigError with the key
/// and line on unknown keys, bad values and violated constraints.
ScenarioConfig parse_config_text(const std::string& text,
                                 const std::filesystem::path& base_dir = std::filesystem::current_path());
ScenarioConfig parse_config(const std::filesystem::path& path);

/// Canonical text of a config with defaults filled in; parses back to an
/// equal ScenarioConfig.
std::string echo_config(const ScenarioConfig& config);

/// Scenario objects built from a config.
Mesh make_mesh(const ScenarioConfig& config);
DarcyProblem make_darcy_problem(const ScenarioConfig& config, const Mesh& mesh);
TransportParams make_transport_params(const ScenarioConfig& config, const Mesh& mesh);
/// tau from the config, or from the CFL rule on the mesh.
double resolve_timestep(const ScenarioConfig& config, const Mesh& mesh);

}  // namespace aquifer
