#include "aquifer/config.hpp"
#include "aquifer/error.hpp"

#include <doctest.h>

#include <random>

using namespace aquifer;

namespace {

ConfigError parse_error(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected a ConfigError");
  return ConfigError("", "");
}

const char* kMinimal =
    "# minimal\n"
    "mesh.n=8\n"
    "transport.isotherm=linear\n"
    "transport.k=0.5\n"
    "time.tau=0.01\n"
    "time.T_final=0.1\n";

}  // namespace

TEST_CASE("minimal config parses with defaults") {
  const auto c = parse_config_text(kMinimal);
  CHECK(c.mesh_n == 8);
  CHECK_FALSE(c.mesh_file.has_value());
  CHECK(c.isotherm == Isotherm::Kind::linear);
  CHECK(c.k == 0.5);
  CHECK(c.tau == 0.01);
  CHECK_FALSE(c.cfl.has_value());
  CHECK(c.cadence == 1);
  CHECK(c.output_dir == "out");
  CHECK(c.transport_bc == BoundaryMode::neumann);
  CHECK(c.darcy_bc == BoundaryMode::dirichlet);
  const std::string echo = echo_config(c);
  CHECK(echo.find("output.cadence=1\n") != std::string::npos);
  CHECK(echo.find("transport.Sm=0.01\n") != std::string::npos);
  CHECK(echo.find("time.tau=0.01\n") != std::string::npos);
}

TEST_CASE("CFL defaults are applied and echoed") {
  const auto c = parse_config_text("mesh.n=4\ntime.cfl=true\ntime.T_final=1\n");
  REQUIRE(c.cfl.has_value());
  CHECK(c.cfl->epsilon == 0.1);
  CHECK(c.cfl->c_cfl == 1.0);
  const std::string echo = echo_config(c);
  CHECK(echo.find("time.cfl.epsilon=0.10000000000000001\n") != std::string::npos);
  CHECK(echo.find("time.cfl.C=1\n") != std::string::npos);
  CHECK(echo.find("time.tau") == std::string::npos);
}

TEST_CASE("tau and cfl together are rejected naming both keys") {
  const auto e = parse_error("mesh.n=4\ntime.tau=0.1\ntime.cfl=true\n");
  const std::string msg = e.what();
  CHECK(msg.find("time.tau") != std::string::npos);
  CHECK(msg.find("time.cfl") != std::string::npos);
  CHECK(e.line() == 2);
  CHECK(parse_error("mesh.n=4\n").key() == "time.tau");
}

TEST_CASE("dispersivity ordering violation is rejected") {
  const auto e = parse_error("mesh.n=4\ntime.tau=0.1\ntransport.alpha_L=0.1\ntransport.alpha_T=0.2\n");
  CHECK(e.key() == "transport.alpha_T");
  CHECK(e.line() == 4);
  CHECK(std::string(e.what()).find("alpha_L > alpha_T") != std::string::npos);
  CHECK(parse_error("mesh.n=4\ntime.tau=0.1\ntransport.alpha_L=0.1\ntransport.alpha_T=0.1\n").key() ==
        "transport.alpha_T");
  CHECK(parse_error("mesh.n=4\ntime.tau=0.1\ntransport.Sm=0\n").key() == "transport.Sm");
}

TEST_CASE("unknown keys, type mismatches and constraint violations carry key and line") {
  auto e = parse_error("mesh.n=4\ntime.tau=0.1\n\ntransport.color=red\n");
  CHECK(e.key() == "transport.color");
  CHECK(e.line() == 4);
  e = parse_error("mesh.n=four\ntime.tau=0.1\n");
  CHECK(e.key() == "mesh.n");
  CHECK(e.line() == 1);
  e = parse_error("mesh.n=4\ntime.tau=fast\n");
  CHECK(e.key() == "time.tau");
  CHECK(e.line() == 2);
  e = parse_error("mesh.n=4\ntime.tau=0.1\noutput.cadence=0\n");
  CHECK(e.key() == "output.cadence");
  CHECK(e.line() == 3);
  e = parse_error("mesh.n=4\ntime.tau=-0.1\n");
  CHECK(e.key() == "time.tau");
  e = parse_error("mesh.n=4\ntime.tau=0.1\ntransport.R=0\n");
  CHECK(e.key() == "transport.R");
  e = parse_error("mesh.n=4\ntime.tau=0.1\ntransport.psi=0\n");
  CHECK(e.key() == "transport.psi");
  e = parse_error("mesh.n=4\ntime.tau=0.1\ntransport.c0=wave:1\n");
  CHECK(e.key() == "transport.c0");
  e = parse_error("mesh.n=4\ntime.tau=0.1\ndarcy.bc=robin\n");
  CHECK(e.key() == "darcy.bc");
  e = parse_error("mesh.n=4\ntime.tau=0.1\ndarcy.kappa_xy=2\n");
  CHECK(e.key() == "darcy.kappa_xx");
  e = parse_error("mesh.n=4\ntime.tau=0.1\nstudy.meshes=8,4,16\n");
  CHECK(e.key() == "study.meshes");
  e = parse_error("mesh.n=4\ntime.tau=0.1\nmesh.n=5\n");
  CHECK(e.key() == "mesh.n");
  CHECK(e.line() == 3);
  e = parse_error("mesh.n=4\ntime.tau=0.1\njust text\n");
  CHECK(e.line() == 3);
  e = parse_error("mesh.n=4\ntime.tau=0.1\ntime.cfl.epsilon=1.5\n");
  CHECK(e.what() == std::string("line 2: time.tau: time.tau and time.cfl are mutually exclusive; give exactly one"));
}

TEST_CASE("referenced mesh files must exist") {
  const std::string dir = AQUIFER_TEST_DATA;
  const auto c = parse_config_text("mesh.file=unit_square_n1.mesh\ntime.tau=0.1\n", dir);
  REQUIRE(c.mesh_file.has_value());
  CHECK(std::filesystem::exists(*c.mesh_file));
  CHECK(make_mesh(c).num_cells() == 2);
  const auto e = parse_error("mesh.file=/nonexistent/x.mesh\ntime.tau=0.1\n");
  CHECK(e.key() == "mesh.file");
  CHECK(e.line() == 1);
  CHECK(parse_error("mesh.n=2\nmesh.file=" + dir + "/unit_square_n1.mesh\ntime.tau=0.1\n").key() == "mesh.n");
}

TEST_CASE("field spec text round trip") {
  for (const std::string text : {"const:0.25", "linear:1,2,3", "sinsin:1.5", "gauss:1,0.5,0.5,0.1", "box:1,0,0.5,0,0.5"}) {
    const auto f = FieldSpec::parse(text);
    CHECK(FieldSpec::parse(f.to_string()) == f);
  }
  CHECK(FieldSpec::parse("0.7").kind == FieldSpec::Kind::constant);
  CHECK_THROWS_AS(FieldSpec::parse("linear:1,2"), InvalidArgument);
  CHECK_THROWS_AS(FieldSpec::parse("gauss:1,0,0,0"), InvalidArgument);
  const Rectangle d{0.0, 2.0, 0.0, 1.0};
  CHECK(FieldSpec::parse("linear:1,2,3").function(d)(Point(1, 1)) == 6.0);
  CHECK(FieldSpec::parse("sinsin:2").function(d)(Point(1, 0.5)) == doctest::Approx(2.0));
  CHECK(FieldSpec::parse("box:3,0,1,0,1").function(d)(Point(1.5, 0.5)) == 0.0);
  CHECK(FieldSpec::parse("gauss:1,0,0,1").function(d)(Point(0, 0)) == 1.0);
}

TEST_CASE("echo is lossless on random configurations") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto num = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };
  for (int trial = 0; trial < 200; ++trial) {
    ScenarioConfig c;
    c.mesh_n = 1 + static_cast<int>(20 * u(rng));
    c.domain = {num(-1, 0), num(1, 2), num(-1, 0), num(1, 2)};
    c.darcy_bc = u(rng) < 0.5 ? BoundaryMode::dirichlet : BoundaryMode::neumann;
    c.kappa_xx = num(1, 2);
    c.kappa_xy = num(-0.5, 0.5);
    c.kappa_yy = num(1, 2);
    c.darcy_g = {FieldSpec::Kind::sinsin, {num(0, 3)}};
    c.darcy_head = {FieldSpec::Kind::linear, {num(-1, 1), num(-1, 1), num(-1, 1)}};
    c.retardation = num(0.5, 3);
    c.porosity = {FieldSpec::Kind::constant, {num(0.1, 1)}};
    c.alpha_t = num(0, 0.5);
    c.alpha_l = c.alpha_t + num(0.01, 0.5);
    c.molecular = num(1e-3, 1);
    c.isotherm = static_cast<Isotherm::Kind>(static_cast<int>(3 * u(rng)));
    c.k = num(0, 2);
    c.k2 = num(0, 2);
    c.source = {FieldSpec::Kind::box, {num(0, 1), 0.1, 0.2, 0.3, 0.4}};
    c.transport_bc = u(rng) < 0.5 ? BoundaryMode::dirichlet : BoundaryMode::neumann;
    c.initial = {FieldSpec::Kind::gauss, {num(0, 1), num(0, 1), num(0, 1), num(0.05, 0.3)}};
    if (u(rng) < 0.5) {
      c.tau = num(1e-4, 0.1);
    } else {
      c.cfl = CflCondition{num(0.01, 0.9), num(0.1, 5)};
    }
    c.t_final = num(0, 2);
    c.output_dir = "results/run" + std::to_string(trial);
    c.cadence = 1 + static_cast<int>(10 * u(rng));
    c.write_csv = u(rng) < 0.7;
    c.write_vtk = u(rng) < 0.7;
    c.study_meshes = {4, 8, 16 + static_cast<int>(10 * u(rng))};
    c.study_case = u(rng) < 0.5 ? "sinsin" : "linear";
    const auto back = parse_config_text(echo_config(c));
    CHECK(back == c);
    CHECK(echo_config(back) == echo_config(c));
  }
}

TEST_CASE("config builds the scenario objects") {
  const auto c = parse_config_text(
      "mesh.n=4\nmesh.x1=2\ntransport.psi=0.4\ntransport.c0=const:0.5\ntime.cfl=true\ntime.cfl.epsilon=0.2\n");
  const Mesh m = make_mesh(c);
  CHECK(m.total_area() == doctest::Approx(2.0));
  const auto p = make_transport_params(c, m);
  CHECK(p.porosity[0] == doctest::Approx(0.4));
  CHECK(p.initial[3] == doctest::Approx(0.5));
  const double tau = resolve_timestep(c, m);
  CHECK(cfl_satisfied(tau, m.metrics().h, 2, 0.2, 1.0));
  const auto bad = parse_config_text("mesh.n=4\ntransport.c0=const:2\ntime.tau=0.1\n");
  CHECK_THROWS_AS(make_transport_params(bad, make_mesh(bad)), InvalidArgument);
}

TEST_CASE("shipped configs parse") {
  const std::string dir = AQUIFER_CONFIG_DIR;
  for (const char* name : {"minimal.cfg", "plume.cfg", "darcy_study.cfg"}) {
    CHECK_NOTHROW(parse_config(dir + "/" + name));
  }
  CHECK_THROWS_AS(parse_config(dir + "/missing.cfg"), ConfigError);
}
