#include "aquifer/cli.hpp"

#include "aquifer/darcy.hpp"
#include "aquifer/error.hpp"
#include "format.hpp"

#include <chrono>
#include <sstream>

namespace aquifer {

using detail::format_number;

namespace {

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

}  // namespace

RunReport cmd_run(const ScenarioConfig& config) {
  RunReport report;
  prepare_output_dir(config.output_dir);
  Stopwatch clock;

  const Mesh mesh = make_mesh(config);
  report.timings.push_back({"mesh", clock.lap()});

  const DarcySolution darcy = solve_darcy(mesh, make_darcy_problem(config, mesh));
  report.timings.push_back({"darcy", clock.lap()});

  const TransportParams params = make_transport_params(config, mesh);
  report.tau = resolve_timestep(config, mesh);
  const TransportStepper stepper(mesh, params, darcy, report.tau, config.cfl);
  report.threshold = stepper.threshold();
  report.timings.push_back({"assembly", clock.lap()});

  const int steps_total = static_cast<int>(std::ceil(config.t_final / report.tau - 1e-12));
  auto write_state = [&](const TransportState& s) {
    const auto label = step_label(s.n);
    if (config.write_csv) {
      auto c_path = config.output_dir / ("c_" + label + ".csv");
      write_file_atomic(c_path, concentration_csv(mesh, s.c));
      auto f_path = config.output_dir / ("flux_" + label + ".csv");
      write_file_atomic(f_path, flux_csv(s.vc));
      report.written.push_back(c_path.filename().string());
      report.written.push_back(f_path.filename().string());
    }
    if (config.write_vtk) {
      auto v_path = config.output_dir / ("fields_" + label + ".vtk");
      write_file_atomic(v_path, fields_vtk(mesh, s.c, s.vc, "aquifer step " + std::to_string(s.n)));
      report.written.push_back(v_path.filename().string());
    }
  };

  int last_step = 0;
  const StateObserver observer = [&](const TransportState& s, const StepDiagnostics& d) {
    last_step = s.n;
    if (s.n > 0) {
      report.rows.push_back({d.n, d.t, d.ledger, d.min_c, d.mass_residual});
      if (d.min_c < 0.0) ++report.negative_steps;
    }
    if (s.n % config.cadence == 0 || s.n == steps_total) write_state(s);
  };

  try {
    RunResult result = run(stepper, config.t_final, false, observer);
    report.summary = result.summary;
  } catch (const IoError&) {
    throw;
  } catch (const SolverError& ex) {
    throw SolverError("step " + std::to_string(last_step + 1) + ": " + ex.what());
  }
  report.timings.push_back({"transport", clock.lap()});

  write_file_atomic(config.output_dir / "ledger.csv", ledger_csv(report.rows));
  report.written.push_back("ledger.csv");
  report.timings.push_back({"output", clock.lap()});
  write_file_atomic(config.output_dir / "report.txt", format_report(config, report));
  report.written.push_back("report.txt");
  return report;
}

DarcyStudy cmd_darcy_study(const ScenarioConfig& config) {
  prepare_output_dir(config.output_dir);
  Tensor2 kappa;
  kappa(0, 0) = config.kappa_xx;
  kappa(0, 1) = config.kappa_xy;
  kappa(1, 1) = config.kappa_yy;
  const ManufacturedDarcy mcase =
      config.study_case == "linear" ? manufactured_linear(kappa, 1.0, 0.5, -0.25) : manufactured_sinsin(kappa);
  DarcyStudy study = darcy_convergence_study(mcase, config.study_meshes);
  write_file_atomic(config.output_dir / "convergence.csv", study.table.to_csv());
  return study;
}

bool cmd_verify(std::uint64_t seed, const std::string& filter, std::ostream& out) {
  const auto results = run_suites(seed, filter);
  bool ok = !results.empty();
  for (const auto& r : results) {
    out << format_result(r) << '\n';
    ok = ok && r.passed;
  }
  if (results.empty()) out << "no suite matches '" << filter << "'\n";
  return ok;
}

std::string format_report(const ScenarioConfig& config, const RunReport& report) {
  std::ostringstream o;
  o << "# configuration\n" << echo_config(config) << "\n# summary\n";
  const auto& s = report.summary;
  const auto& l = s.ledger;
  o << "steps=" << report.rows.size() << "\n"
    << "tau=" << format_number(report.tau) << "\n"
    << "solvability_threshold=" << format_number(report.threshold) << "\n"
    << "vmax=" << format_number(s.vmax) << "\n"
    << "bound_factor=" << format_number(s.bound_factor) << "\n"
    << "sum_dc2_over_tau=" << format_number(l.sum_dc2_over_tau) << "\n"
    << "sup_vc2=" << format_number(l.sup_vc2) << "\n"
    << "sum_dvc2=" << format_number(l.sum_dvc2) << "\n"
    << "tau_sum_div2=" << format_number(l.tau_sum_div2) << "\n"
    << "tau_sum_c2=" << format_number(l.tau_sum_c2) << "\n"
    << "tau_sum_vc2=" << format_number(l.tau_sum_vc2) << "\n"
    << "max_mass_residual=" << format_number(s.max_mass_residual) << "\n"
    << "\n# negativity\n"
    << "min_c=" << format_number(s.min_c) << "\n"
    << "negative_steps=" << report.negative_steps << "\n"
    << "\n# timings (s)\n";
  for (const auto& t : report.timings) o << t.phase << "=" << format_number(t.seconds) << "\n";
  return o.str();
}

}  // namespace aquifer
