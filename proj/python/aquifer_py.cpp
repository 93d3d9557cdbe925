#include "aquifer/analysis.hpp"
#include "aquifer/cli.hpp"
#include "aquifer/darcy.hpp"
#include "aquifer/dispersion.hpp"
#include "aquifer/error.hpp"
#include "aquifer/mesh.hpp"
#include "aquifer/norms.hpp"
#include "aquifer/transport.hpp"
#include "aquifer/verify.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace aquifer;

namespace {

Tensor2 tensor_from(const Eigen::Matrix2d& m) { return Tensor2::from_matrix(m); }

py::dict ledger_dict(const StabilityLedger& l) {
  py::dict d;
  d["steps"] = l.steps;
  d["sum_dc2_over_tau"] = l.sum_dc2_over_tau;
  d["sup_vc2"] = l.sup_vc2;
  d["sum_dvc2"] = l.sum_dvc2;
  d["tau_sum_div2"] = l.tau_sum_div2;
  d["tau_sum_c2"] = l.tau_sum_c2;
  d["tau_sum_vc2"] = l.tau_sum_vc2;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "aquifer: RT0 mixed finite elements for Darcy flow and solute transport";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<MeshError>(m, "MeshError", PyExc_ValueError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<StepRefused>(m, "StepRefused", PyExc_RuntimeError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  py::enum_<BoundaryMode>(m, "BoundaryMode")
      .value("dirichlet", BoundaryMode::dirichlet)
      .value("neumann", BoundaryMode::neumann);

  py::class_<Mesh>(m, "Mesh")
      .def_property_readonly("num_vertices", &Mesh::num_vertices)
      .def_property_readonly("num_cells", &Mesh::num_cells)
      .def_property_readonly("num_edges", &Mesh::num_edges)
      .def_property_readonly("num_boundary_edges", &Mesh::num_boundary_edges)
      .def_property_readonly("h", [](const Mesh& self) { return self.metrics().h; })
      .def("total_area", &Mesh::total_area)
      .def("centroids", [](const Mesh& self) {
        Eigen::MatrixX2d out(self.num_cells(), 2);
        for (int t = 0; t < self.num_cells(); ++t) out.row(t) = self.cell(t).centroid.transpose();
        return out;
      })
      .def("areas", [](const Mesh& self) {
        Eigen::VectorXd out(self.num_cells());
        for (int t = 0; t < self.num_cells(); ++t) out[t] = self.cell(t).area;
        return out;
      })
      .def("locate", [](const Mesh& self, double x, double y) { return self.locate(Point(x, y)); });

  m.def("build_structured_mesh",
        [](int n, double x0, double x1, double y0, double y1) {
          return build_structured_mesh(n, Rectangle{x0, x1, y0, y1});
        },
        py::arg("n"), py::arg("x0") = 0.0, py::arg("x1") = 1.0, py::arg("y0") = 0.0, py::arg("y1") = 1.0);
  m.def("parse_mesh", &parse_mesh, py::arg("text"));
  m.def("load_mesh", &load_mesh, py::arg("path"));

  py::class_<DispersionParams>(m, "DispersionParams")
      .def(py::init<double, double, double>(), py::arg("molecular"), py::arg("alpha_L"), py::arg("alpha_T"))
      .def_property_readonly("molecular", &DispersionParams::molecular)
      .def_property_readonly("alpha_L", &DispersionParams::alpha_l)
      .def_property_readonly("alpha_T", &DispersionParams::alpha_t);

  m.def("dispersion_tensor", [](const DispersionParams& p, const Eigen::Vector2d& v) {
    return dispersion_tensor<2>(p, v).matrix();
  });
  m.def("dispersion_sqrt", [](const DispersionParams& p, const Eigen::Vector2d& v) {
    return dispersion_sqrt<2>(p, v).matrix();
  });
  m.def("dispersion_inv", [](const DispersionParams& p, const Eigen::Vector2d& v) {
    return dispersion_inv<2>(p, v).matrix();
  });
  m.def("bound_constants", [](const DispersionParams& p, double vmax) {
    const auto b = bound_constants(p, vmax);
    py::dict d;
    d["lambda_min"] = b.lambda_min;
    d["lambda_max"] = b.lambda_max;
    d["M_minus"] = b.m_minus;
    d["M_plus"] = b.m_plus;
    d["C"] = b.sqrt_growth;
    d["C_disp"] = b.c_disp;
    return d;
  });

  m.def("project_P_h", [](const Mesh& mesh, const std::function<double(double, double)>& f) {
    return project_P_h(mesh, [&](const Point& x) { return f(x.x(), x.y()); }).values;
  });
  m.def("discrete_h1_norm", [](const Mesh& mesh, const Eigen::VectorXd& c, BoundaryMode mode) {
    return discrete_h1_norm(mesh, P0Field(c), mode);
  });

  py::class_<DarcySolution>(m, "DarcySolution")
      .def_property_readonly("phi", [](const DarcySolution& s) { return s.phi.values; })
      .def_property_readonly("v", [](const DarcySolution& s) { return s.v.values; })
      .def_readonly("vmax", &DarcySolution::vmax);

  m.def("solve_darcy",
        [](const Mesh& mesh, const Eigen::Matrix2d& kappa, const std::function<double(double, double)>& g,
           BoundaryMode mode) {
          return solve_darcy(mesh, DarcyProblem::uniform(mesh, tensor_from(kappa),
                                                         [&](const Point& x) { return g(x.x(), x.y()); }, mode));
        },
        py::arg("mesh"), py::arg("kappa"), py::arg("g"), py::arg("mode") = BoundaryMode::dirichlet);

  py::class_<Isotherm>(m, "Isotherm")
      .def_static("linear", &Isotherm::linear, py::arg("k"))
      .def_static("freundlich", &Isotherm::freundlich, py::arg("k"), py::arg("exponent"))
      .def_static("langmuir", &Isotherm::langmuir, py::arg("k"), py::arg("saturation"))
      .def("eval", &Isotherm::eval)
      .def("lipschitz", &Isotherm::lipschitz);

  py::class_<TransportParams>(m, "TransportParams")
      .def(py::init([](const Mesh& mesh, double retardation, const Eigen::VectorXd& porosity,
                       const DispersionParams& dispersion, const Isotherm& isotherm, const Eigen::VectorXd& source,
                       BoundaryMode mode, const Eigen::VectorXd& initial) {
             TransportParams p;
             p.retardation = retardation;
             p.porosity = P0Field(porosity);
             p.dispersion = dispersion;
             p.isotherm = isotherm;
             p.source = P0Field(source);
             p.mode = mode;
             p.initial = P0Field(initial);
             p.validate(mesh);
             return p;
           }),
           py::arg("mesh"), py::arg("R"), py::arg("psi"), py::arg("dispersion"), py::arg("isotherm"),
           py::arg("p"), py::arg("mode"), py::arg("c0"));

  m.def("cfl_timestep", &cfl_timestep, py::arg("h"), py::arg("dim"), py::arg("epsilon"), py::arg("c_cfl"));
  m.def("solvability_threshold", &solvability_threshold, py::arg("params"), py::arg("vmax"));

  m.def("run_transport",
        [](const Mesh& mesh, const TransportParams& params, const DarcySolution& darcy, double tau,
           double t_final) {
          const TransportStepper stepper(mesh, params, darcy, tau);
          const RunResult r = run(stepper, t_final, true);
          py::list c, vc, t;
          for (const auto& s : r.trajectory) {
            c.append(s.c.values);
            vc.append(s.vc.values);
            t.append(s.t);
          }
          py::dict out;
          out["t"] = t;
          out["c"] = c;
          out["vc"] = vc;
          out["ledger"] = ledger_dict(r.summary.ledger);
          out["min_c"] = r.summary.min_c;
          out["max_mass_residual"] = r.summary.max_mass_residual;
          return out;
        },
        py::arg("mesh"), py::arg("params"), py::arg("darcy"), py::arg("tau"), py::arg("t_final"));

  m.def("run_scenario",
        [](const std::string& path, const std::optional<std::filesystem::path>& output_dir) {
          auto config = parse_config(path);
          if (output_dir) config.output_dir = *output_dir;
          const RunReport report = cmd_run(config);
          py::dict out;
          out["steps"] = report.rows.size();
          out["tau"] = report.tau;
          out["ledger"] = ledger_dict(report.summary.ledger);
          out["written"] = report.written;
          return out;
        },
        py::arg("config"), py::arg("output_dir") = py::none());

  m.def("run_suites",
        [](std::uint64_t seed, const std::string& filter) {
          std::vector<std::pair<std::string, bool>> out;
          for (const auto& r : run_suites(seed, filter)) out.emplace_back(r.name, r.passed);
          return out;
        },
        py::arg("seed") = 1, py::arg("filter") = "");
}
