#include "aquifer/darcy.hpp"

#include "aquifer/error.hpp"
#include "aquifer/quadrature.hpp"
#include "format.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include <cmath>
#include <numbers>

namespace aquifer {

namespace {

using std::numbers::pi;

Tensor2 inverse(const Tensor2& a) {
  const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(0, 1);
  Tensor2 inv;
  inv(0, 0) = a(1, 1) / det;
  inv(1, 1) = a(0, 0) / det;
  inv(0, 1) = -a(0, 1) / det;
  return inv;
}

}  // namespace

DarcyProblem DarcyProblem::uniform(const Mesh& mesh, const Tensor2& kappa, const ScalarFunction& g,
                                   BoundaryMode mode) {
  DarcyProblem p;
  p.permeability.assign(mesh.num_cells(), kappa);
  p.source = g ? project_P_h(mesh, g) : P0Field::constant(mesh, 0.0);
  p.mode = mode;
  return p;
}

PermeabilityBounds permeability_bounds(const CellTensors& permeability) {
  PermeabilityBounds b{std::numeric_limits<double>::infinity(), 0.0};
  for (const auto& k : permeability) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(k.matrix(), Eigen::EigenvaluesOnly);
    b.lower = std::min(b.lower, es.eigenvalues()[0]);
    b.upper = std::max(b.upper, es.eigenvalues()[1]);
  }
  return b;
}

DarcySolution solve_darcy(const Mesh& mesh, const DarcyProblem& problem) {
  const int nc = mesh.num_cells();
  if (static_cast<int>(problem.permeability.size()) != nc || problem.source.size() != nc) {
    throw InvalidArgument("solve_darcy: data size does not match the mesh");
  }
  const auto kb = permeability_bounds(problem.permeability);
  if (!(kb.lower > 0.0)) throw InvalidArgument("solve_darcy: permeability is not positive definite");

  const bool neumann = problem.mode == BoundaryMode::neumann;
  if (neumann) {
    double total = 0.0, scale = 0.0;
    for (int c = 0; c < nc; ++c) {
      total += problem.source[c] * mesh.cell(c).area;
      scale += std::abs(problem.source[c]) * mesh.cell(c).area;
    }
    if (std::abs(total) > 1e-10 * std::max(1.0, scale)) {
      throw InvalidArgument("solve_darcy: Neumann mode requires integral of g = 0 (got " +
                            detail::format_number(total) + ")");
    }
  }

  CellTensors kinv;
  kinv.reserve(nc);
  for (const auto& k : problem.permeability) kinv.push_back(inverse(k));

  const FluxSpace space(mesh, neumann);
  const SparseMatrix& prol = space.prolongation();
  const SparseMatrix a = prol.transpose() * assemble_rt0_weighted_mass(mesh, kinv) * prol;
  const SparseMatrix b = assemble_div(mesh) * prol;
  const int nf = space.size();
  const int n = nf + nc + (neumann ? 1 : 0);

  std::vector<Triplet> t;
  t.reserve(a.nonZeros() + 2 * b.nonZeros() + 2 * nc);
  for (int k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
  for (int k = 0; k < b.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(b, k); it; ++it) {
      t.emplace_back(nf + it.row(), it.col(), it.value());
      t.emplace_back(it.col(), nf + it.row(), -it.value());
    }
  }
  if (neumann) {
    for (int c = 0; c < nc; ++c) {
      const double area = mesh.cell(c).area;
      t.emplace_back(nf + c, nf + nc, -area);
      t.emplace_back(nf + nc, nf + c, area);
    }
  }
  SparseMatrix system(n, n);
  system.setFromTriplets(t.begin(), t.end());
  system.makeCompressed();

  Vector rhs = Vector::Zero(n);
  for (int c = 0; c < nc; ++c) rhs[nf + c] = problem.source[c] * mesh.cell(c).area;
  if (!neumann && problem.boundary_head) {
    for (int e = 0; e < mesh.num_edges(); ++e) {
      const Edge& edge = mesh.edge(e);
      if (!edge.boundary) continue;
      const Point& p = mesh.vertex(edge.vertices[0]);
      const Point& q = mesh.vertex(edge.vertices[1]);
      double mean = 0.0;
      for (const auto& g : quadrature::gauss3_line()) mean += g.weight * problem.boundary_head(p + g.s * (q - p));
      rhs[space.dof(e)] -= mean * edge.length;
    }
  }

  Eigen::SparseLU<SparseMatrix> lu;
  lu.analyzePattern(system);
  lu.factorize(system);
  if (lu.info() != Eigen::Success) {
    throw SolverError("solve_darcy: singular saddle-point system (" + lu.lastErrorMessage() + ")");
  }
  const Vector x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite()) throw SolverError("solve_darcy: solve failed");

  DarcySolution sol;
  sol.v = space.expand(x.head(nf), mesh.num_edges());
  sol.phi = P0Field(x.segment(nf, nc));
  sol.phi_vertex = p0_to_p1(mesh, sol.phi);
  sol.vmax = rt0_max_norm(mesh, sol.v);
  return sol;
}

ManufacturedDarcy manufactured_sinsin(const Tensor2& kappa) {
  ManufacturedDarcy m;
  m.name = "sinsin";
  m.kappa = kappa;
  m.phi = [](const Point& x) { return std::sin(pi * x.x()) * std::sin(pi * x.y()); };
  m.velocity = [kappa](const Point& x) {
    const Point grad(pi * std::cos(pi * x.x()) * std::sin(pi * x.y()),
                     pi * std::sin(pi * x.x()) * std::cos(pi * x.y()));
    return Point(-(kappa * grad));
  };
  m.source = [kappa](const Point& x) {
    const double ss = std::sin(pi * x.x()) * std::sin(pi * x.y());
    const double cc = std::cos(pi * x.x()) * std::cos(pi * x.y());
    return pi * pi * (kappa(0, 0) + kappa(1, 1)) * ss - 2.0 * pi * pi * kappa(0, 1) * cc;
  };
  return m;
}

ManufacturedDarcy manufactured_linear(const Tensor2& kappa, double a, double b, double c) {
  ManufacturedDarcy m;
  m.name = "linear";
  m.kappa = kappa;
  m.phi = [a, b, c](const Point& x) { return a + b * x.x() + c * x.y(); };
  const Point v = -(kappa * Point(b, c));
  m.velocity = [v](const Point&) { return v; };
  m.source = [](const Point&) { return 0.0; };
  m.boundary_head = m.phi;
  return m;
}

DarcyStudy darcy_convergence_study(const ManufacturedDarcy& mcase, const std::vector<int>& subdivisions) {
  if (subdivisions.size() < 3) throw InvalidArgument("darcy_convergence_study: need at least 3 meshes");
  DarcyStudy study{ConvergenceTable({"v_exact", "v_interp", "phi_exact", "phi_interp"}), {}, {}};
  for (std::size_t k = 0; k < subdivisions.size(); ++k) {
    if (k > 0 && subdivisions[k] <= subdivisions[k - 1]) {
      throw InvalidArgument("darcy_convergence_study: subdivisions must increase");
    }
    const Mesh mesh = build_structured_mesh(subdivisions[k]);
    DarcyProblem problem = DarcyProblem::uniform(mesh, mcase.kappa, mcase.source, mcase.mode);
    problem.boundary_head = mcase.boundary_head;
    const DarcySolution sol = solve_darcy(mesh, problem);

    const RT0Field v_interp = project_Pi_h(mesh, mcase.velocity);
    const P0Field phi_interp = project_P_h(mesh, mcase.phi);
    std::vector<double> errs{
        l2_error(mesh, sol.v, mcase.velocity),
        l2_norm(mesh, RT0Field(sol.v.values - v_interp.values)),
        l2_error(mesh, sol.phi, mcase.phi),
        l2_norm(mesh, P0Field(sol.phi.values - phi_interp.values)),
    };
    study.table.add_row(mesh.metrics().h, 0.0, std::move(errs));
    study.vmax.push_back(sol.vmax);
  }
  for (std::size_t norm = 0; norm < study.table.norm_names().size(); ++norm) {
    const auto e = study.table.errors(norm);
    for (std::size_t k = 0; k + 1 < e.size(); ++k) {
      if (e[k + 1] > e[k]) {
        study.warnings.push_back("non-monotone error sequence for " + study.table.norm_names()[norm]);
        break;
      }
    }
  }
  return study;
}

}  // namespace aquifer
