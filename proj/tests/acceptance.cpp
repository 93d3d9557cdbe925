// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "aquifer/analysis.hpp"
#include "aquifer/assembly.hpp"
#include "aquifer/cli.hpp"
#include "aquifer/config.hpp"
#include "aquifer/darcy.hpp"
#include "aquifer/dispersion.hpp"
#include "aquifer/error.hpp"
#include "aquifer/transport.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace aquifer;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

using Rng = std::mt19937_64;

double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

// ---------------------------------------------------------------- 1

template <int N>
void dispersion_trials(Rng& rng, int trials, int xi_per_trial, double& identity_err, double& margin,
                       double& inv_v_excess) {
  using Vec = Eigen::Matrix<double, N, 1>;
  using Mat = Eigen::Matrix<double, N, N>;
  for (int t = 0; t < trials; ++t) {
    const double at = uniform(rng, 0.0, 0.5);
    const double al = std::max(uniform(rng, at, 1.0), std::nextafter(at, 2.0));
    const DispersionParams p(uniform(rng, 1e-3, 1.0), al, at);
    Vec v;
    for (int i = 0; i < N; ++i) v[i] = uniform(rng, -10.0, 10.0);
    const Mat s = dispersion_tensor(p, v).matrix();
    const Mat root = dispersion_sqrt(p, v).matrix();
    const Mat inv = dispersion_inv(p, v).matrix();
    identity_err = std::max(identity_err, (root * root - s).cwiseAbs().maxCoeff());
    identity_err = std::max(identity_err, (s * inv - Mat::Identity()).cwiseAbs().maxCoeff());

    const double speed = v.norm();
    const double low = p.molecular() + p.alpha_t() * speed;
    const double high = p.molecular() + p.alpha_l() * speed;
    for (int k = 0; k < xi_per_trial; ++k) {
      Vec xi;
      for (int i = 0; i < N; ++i) xi[i] = uniform(rng, -1.0, 1.0);
      margin = std::min(margin, xi.dot(s * xi) - low * xi.squaredNorm());
      margin = std::min(margin, high * xi.norm() - (s * xi).norm());
    }
    inv_v_excess = std::max(inv_v_excess, dispersion_inv_times_v(p, v).norm() - 1.0 / p.alpha_l());
  }
}

Outcome criterion_dispersion() {
  Rng rng(20240601);
  double identity_err = 0.0, margin = 1.0, excess = -1.0;
  dispersion_trials<2>(rng, 1000, 10, identity_err, margin, excess);
  dispersion_trials<3>(rng, 1000, 10, identity_err, margin, excess);
  const bool ok = identity_err <= 1e-12 && margin >= -1e-12 && excess <= 1e-12;
  return {ok, "identity err " + num(identity_err) + ", min margin " + num(margin) + ", |S^-1 v| - 1/alpha_L <= " +
                  num(excess)};
}

// ---------------------------------------------------------------- 2

const std::vector<int> kMeshes{8, 16, 32, 64};

Outcome criterion_darcy() {
  const Tensor2 kappa = Tensor2::identity();
  const auto lin = manufactured_linear(kappa, 1.0, 0.5, -0.25);
  const Mesh m = build_structured_mesh(4);
  DarcyProblem prob = DarcyProblem::uniform(m, lin.kappa, lin.source, lin.mode);
  prob.boundary_head = lin.boundary_head;
  const DarcySolution sol = solve_darcy(m, prob);
  const double v_err = l2_error(m, sol.v, lin.velocity);
  const double phi_err = (sol.phi.values - project_P_h(m, lin.phi).values).cwiseAbs().maxCoeff();

  const auto study = darcy_convergence_study(manufactured_sinsin(kappa), kMeshes);
  const double order = min_of(study.table.orders(study.table.norm_index("v_exact")));
  const bool ok = v_err <= 1e-10 && phi_err <= 1e-10 && order >= 0.9;
  return {ok, "patch v err " + num(v_err) + ", head err " + num(phi_err) + ", sinsin velocity order " + num(order)};
}

// ---------------------------------------------------------------- 3

Outcome criterion_projections() {
  const ScalarFunction w = [](const Point& x) { return std::exp(x.x()) * std::cos(2.0 * x.y()); };
  const VectorFunction u = [](const Point& x) {
    return Point(std::sin(pi * x.y()) + x.x() * x.x(), std::cos(pi * x.x()) * x.y());
  };
  std::vector<double> h, ep, ei;
  for (int n : kMeshes) {
    const Mesh m = build_structured_mesh(n);
    h.push_back(mesh_metrics(m).h);
    ep.push_back(l2_error(m, project_P_h(m, w), w));
    ei.push_back(l2_error(m, project_Pi_h(m, u), u));
  }
  const double op = min_of(observed_orders(h, ep));
  const double oi = min_of(observed_orders(h, ei));
  return {op >= 0.9 && oi >= 0.9, "P_h order " + num(op) + ", Pi_h order " + num(oi)};
}

// ---------------------------------------------------------------- shared scenario

DarcySolution slow_flow(const Mesh& m) {
  return solve_darcy(m, DarcyProblem::uniform(m, Tensor2::identity(), [](const Point& x) {
    return 0.2 * pi * pi * std::sin(pi * x.x()) * std::sin(pi * x.y());
  }));
}

TransportParams plume(const Mesh& m) {
  TransportParams p;
  p.retardation = 1.5;
  p.porosity = project_P_h(m, [](const Point& x) { return 0.4 + 0.1 * x.x(); });
  p.dispersion = DispersionParams(0.01, 0.1, 0.01);
  p.isotherm = Isotherm::langmuir(0.3, 1.0);
  p.source = project_P_h(m, [](const Point& x) {
    return (x.x() > 0.2 && x.x() < 0.35 && x.y() > 0.2 && x.y() < 0.35) ? 0.5 : 0.0;
  });
  p.mode = BoundaryMode::neumann;
  p.initial = project_P_h(m, [](const Point& x) { return 0.9 * std::exp(-30.0 * (x - Point(0.4, 0.5)).squaredNorm()); });
  return p;
}

// ---------------------------------------------------------------- 4

Outcome criterion_mass_balance() {
  const Mesh m = build_structured_mesh(16);
  const DarcySolution darcy = slow_flow(m);
  const double tau = 0.001;
  const TransportStepper stepper(m, plume(m), darcy, tau);
  const RunResult r = run(stepper, 200 * tau);
  const int steps = static_cast<int>(r.trajectory.size()) - 1;

  double repeat = 0.0;
  const TransportStepper again(m, plume(m), darcy, tau);
  for (int n : {1, 100, 200}) {
    const auto& prev = r.trajectory[n - 1];
    const TransportState a = stepper.step(prev);
    const TransportState b = stepper.step(prev);
    const TransportState c = again.step(prev);
    for (const auto* s : {&b, &c}) {
      repeat = std::max(repeat, (a.c.values - s->c.values).cwiseAbs().maxCoeff());
      repeat = std::max(repeat, (a.vc.values - s->vc.values).cwiseAbs().maxCoeff());
    }
  }
  const double mass = r.summary.max_mass_residual;
  const bool ok = steps == 200 && mass <= 1e-10 && repeat <= 1e-12;
  return {ok, std::to_string(steps) + " steps, max mass residual " + num(mass) + ", repeat diff " + num(repeat)};
}

// ---------------------------------------------------------------- 5

Outcome criterion_ode() {
  const Mesh m = build_structured_mesh(8);
  const DarcySolution darcy = solve_darcy(m, DarcyProblem::uniform(m, Tensor2::identity(), [](const Point&) { return 0.0; }));
  const double R = 1.3, psi = 0.45, k = 0.8, c0 = 0.7, tau = 0.01;
  TransportParams p;
  p.retardation = R;
  p.porosity = P0Field::constant(m, psi);
  p.dispersion = DispersionParams(0.05, 0.2, 0.02);
  p.isotherm = Isotherm::linear(k);
  p.source = P0Field::constant(m, 0.0);
  p.mode = BoundaryMode::neumann;
  p.initial = P0Field::constant(m, c0);
  const TransportStepper stepper(m, p, darcy, tau);

  TransportState s = stepper.initial_state();
  double expected = c0;
  double err = 0.0;
  for (int n = 1; n <= 100; ++n) {
    s = stepper.step(s);
    expected *= 1.0 - tau * k / (R * psi);
    err = std::max(err, (s.c.values.array() - expected).abs().maxCoeff());
  }
  return {err <= 1e-12, "max deviation from recurrence " + num(err) + " over 100 steps"};
}

// ---------------------------------------------------------------- 6

Outcome criterion_ledger() {
  const Mesh m = build_structured_mesh(16);
  const DarcySolution darcy = slow_flow(m);
  const double t_final = 0.2;
  std::vector<StabilityLedger> ledgers;
  std::vector<double> taus;
  for (double tau : {0.01, 0.005, 0.0025}) {
    ledgers.push_back(run(TransportStepper(m, plume(m), darcy, tau), t_final, false).summary.ledger);
    taus.push_back(tau);
  }
  const std::vector<std::pair<std::string, std::function<double(const StabilityLedger&, double)>>> quantities{
      {"sum_dc2_over_tau", [](const StabilityLedger& l, double) { return l.sum_dc2_over_tau; }},
      {"sup_vc2", [](const StabilityLedger& l, double) { return l.sup_vc2; }},
      {"sum_dvc2", [](const StabilityLedger& l, double) { return l.sum_dvc2; }},
      {"tau_sum_div2", [](const StabilityLedger& l, double) { return l.tau_sum_div2; }},
      {"tau_sum_c2", [](const StabilityLedger& l, double) { return l.tau_sum_c2; }},
      {"tau_sum_vc2", [](const StabilityLedger& l, double) { return l.tau_sum_vc2; }},
      {"energy", [](const StabilityLedger& l, double tau) { return l.discrete_energy(tau); }},
  };
  double worst = 0.0;
  std::string worst_name;
  for (const auto& [name, get] : quantities) {
    for (std::size_t i = 1; i < ledgers.size(); ++i) {
      const double prev = get(ledgers[i - 1], taus[i - 1]);
      const double next = get(ledgers[i], taus[i]);
      const double ratio = prev > 0.0 ? next / prev : (next > 0.0 ? INFINITY : 0.0);
      if (ratio > worst) {
        worst = ratio;
        worst_name = name;
      }
    }
  }
  return {worst <= 1.5, "max ratio " + num(worst) + " (" + worst_name + ")"};
}

// ---------------------------------------------------------------- 7

std::vector<ScenarioConfig> scenario_suite() {
  std::vector<ScenarioConfig> out;
  for (const char* name : {"minimal.cfg", "plume.cfg"}) out.push_back(parse_config(fs::path(AQUIFER_CONFIG_DIR) / name));
  ScenarioConfig base = out.back();
  base.mesh_n = 8;
  base.tau.reset();
  base.cfl = CflCondition{0.1, 1.0};
  for (auto kind : {Isotherm::Kind::linear, Isotherm::Kind::freundlich, Isotherm::Kind::langmuir}) {
    for (auto bc : {BoundaryMode::neumann, BoundaryMode::dirichlet}) {
      ScenarioConfig c = base;
      c.isotherm = kind;
      c.k = 0.5;
      c.k2 = 2.0;
      c.transport_bc = bc;
      out.push_back(c);
    }
  }
  return out;
}

Outcome criterion_cfl_guard() {
  int cfl_bad = 0, cfl_cases = 0;
  for (int dim : {2, 3}) {
    for (double h : {0.5, 0.177, 0.0884, 0.0442, 0.0221, 0.003}) {
      for (double eps : {0.01, 0.1, 0.5, 0.9}) {
        for (double c : {0.1, 1.0, 7.0}) {
          const double tau = cfl_timestep(h, dim, eps, c);
          ++cfl_cases;
          if (!(tau > 0.0 && std::pow(tau, 1.0 - eps) / std::pow(h, dim) <= c)) ++cfl_bad;
        }
      }
    }
  }

  int built = 0, refused = 0, scenarios = 0;
  std::string failure;
  for (const ScenarioConfig& cfg : scenario_suite()) {
    ++scenarios;
    const Mesh m = make_mesh(cfg);
    const DarcySolution darcy = solve_darcy(m, make_darcy_problem(cfg, m));
    const TransportParams params = make_transport_params(cfg, m);
    try {
      const TransportStepper s(m, params, darcy, resolve_timestep(cfg, m), cfg.cfl);
      const TransportState next = s.step(s.initial_state());
      if (next.c.values.allFinite() && next.vc.values.allFinite()) ++built;
    } catch (const Error& e) {
      if (failure.empty()) failure = e.what();
    }
    const double over = 1.01 * solvability_threshold(params, darcy.vmax);
    const GuardReport report = check_step_admissible(m, params, darcy, over, std::nullopt);
    try {
      const TransportStepper s(m, params, darcy, over);
    } catch (const StepRefused&) {
      if (!report.admissible) ++refused;
    }
  }
  const bool ok = cfl_bad == 0 && built == scenarios && refused == scenarios;
  std::string detail = std::to_string(cfl_cases - cfl_bad) + "/" + std::to_string(cfl_cases) + " CFL steps exact, " +
                       std::to_string(built) + "/" + std::to_string(scenarios) + " scenarios factored, " +
                       std::to_string(refused) + "/" + std::to_string(scenarios) + " refused above threshold";
  if (!failure.empty()) detail += "; " + failure;
  return {ok, detail};
}

// ---------------------------------------------------------------- 8

Outcome criterion_self_convergence() {
  ScenarioConfig cfg = parse_config(fs::path(AQUIFER_CONFIG_DIR) / "plume.cfg");
  const double t_final = cfg.t_final;
  struct Level {
    Mesh mesh;
    std::vector<TransportState> traj;
    double h;
  };
  auto solve_level = [&](int n) {
    cfg.mesh_n = n;
    Mesh m = make_mesh(cfg);
    const DarcySolution darcy = solve_darcy(m, make_darcy_problem(cfg, m));
    const TransportStepper s(m, make_transport_params(cfg, m), darcy, resolve_timestep(cfg, m), cfg.cfl);
    auto traj = run(s, t_final).trajectory;
    const double h = mesh_metrics(m).h;
    return Level{std::move(m), std::move(traj), h};
  };
  const Level ref = solve_level(64);
  std::vector<double> h, err;
  for (int n : {8, 16, 32}) {
    const Level l = solve_level(n);
    h.push_back(l.h);
    err.push_back(space_time_l2_difference(l.mesh, l.traj, ref.mesh, ref.traj, t_final));
  }
  const auto orders = observed_orders(h, err);
  const double order = min_of(orders);
  return {order >= 0.5, "errors " + num(err[0]) + ", " + num(err[1]) + ", " + num(err[2]) + "; orders " +
                            num(orders[0]) + ", " + num(orders[1])};
}

// ---------------------------------------------------------------- 9

std::map<std::string, std::string> csv_files(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".csv") continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    out[entry.path().filename().string()] = s.str();
  }
  return out;
}

Outcome criterion_determinism() {
  const fs::path root = fs::temp_directory_path() / "aquifer_acceptance_determinism";
  fs::remove_all(root);
  int files = 0, differing = 0;
  for (const char* name : {"minimal.cfg", "plume.cfg"}) {
    ScenarioConfig cfg = parse_config(fs::path(AQUIFER_CONFIG_DIR) / name);
    std::vector<std::map<std::string, std::string>> runs;
    for (const char* run_dir : {"a", "b"}) {
      cfg.output_dir = root / name / run_dir;
      cmd_run(cfg);
      runs.push_back(csv_files(cfg.output_dir));
    }
    if (runs[0].size() != runs[1].size()) ++differing;
    for (const auto& [file, bytes] : runs[0]) {
      ++files;
      const auto it = runs[1].find(file);
      if (it == runs[1].end() || it->second != bytes) ++differing;
    }
  }
  fs::remove_all(root);
  return {files > 0 && differing == 0,
          std::to_string(files) + " CSV files compared, " + std::to_string(differing) + " differ"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double time_limit;  // seconds, 0 for none
    Outcome (*check)();
  };
  const Criterion criteria[] = {
      {1, "dispersion algebra", 5.0, criterion_dispersion},
      {2, "darcy patch and convergence", 60.0, criterion_darcy},
      {3, "projection rates", 30.0, criterion_projections},
      {4, "mass balance and uniqueness", 0.0, criterion_mass_balance},
      {5, "ODE recurrence", 0.0, criterion_ode},
      {6, "stability ledger", 120.0, criterion_ledger},
      {7, "CFL guard", 0.0, criterion_cfl_guard},
      {8, "self-convergence", 600.0, criterion_self_convergence},
      {9, "determinism", 0.0, criterion_determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0.0 && secs > c.time_limit) {
      o.pass = false;
      o.detail += "; over time limit " + num(c.time_limit) + " s";
    }
    if (!o.pass) ++failed;
    std::printf("%s %d %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
