#pragma once

#include "aquifer/assembly.hpp"
#include "aquifer/fields.hpp"
#include "aquifer/mesh.hpp"
#include "aquifer/norms.hpp"

#include <optional>
#include <string>
#include <vector>

namespace aquifer {

/// Stationary head/velocity problem div v = g, v = -kappa grad phi.
struct DarcyProblem {
  CellTensors permeability;  // SPD per cell
  P0Field source;            // g
  BoundaryMode mode = BoundaryMode::dirichlet;
  /// Dirichlet head data on the boundary; absent means phi = 0.
  ScalarFunction boundary_head;

  /// Uniform permeability and source sampled by cell averages.
  static DarcyProblem uniform(const Mesh& mesh, const Tensor2& kappa, const ScalarFunction& g,
                              BoundaryMode mode = BoundaryMode::dirichlet);
};

/// Spectral bounds kappa_- |xi|^2 <= kappa xi.xi, |kappa xi| <= kappa_+ |xi| over all cells.
struct PermeabilityBounds {
  double lower;
  double upper;
};
PermeabilityBounds permeability_bounds(const CellTensors& permeability);

struct DarcySolution {
  P0Field phi;
  RT0Field v;
  P1Field phi_vertex;  // vertex-averaged head, output only
  double vmax = 0.0;   // max |v_h| over the mesh
};

/// Solves the RT0-P0 dual mixed system
///   <kappa^{-1} v, u> - <phi, div u> = -<phi_D, u.n>_boundary
///   <div v, w> = <g, w>
/// Neumann mode uses the zero-trace flux space and a zero-mean head
/// constraint. Throws InvalidArgument for incompatible Neumann data and
/// SolverError if the factorization fails.
DarcySolution solve_darcy(const Mesh& mesh, const DarcyProblem& problem);

/// Exact solution with its source, for convergence studies.
struct ManufacturedDarcy {
  std::string name;
  Tensor2 kappa;
  ScalarFunction phi;
  VectorFunction velocity;  // -kappa grad phi
  ScalarFunction source;    // div velocity
  BoundaryMode mode = BoundaryMode::dirichlet;
  ScalarFunction boundary_head;
};

/// phi = sin(pi x) sin(pi y) on the unit square, homogeneous Dirichlet.
ManufacturedDarcy manufactured_sinsin(const Tensor2& kappa);
/// phi = a + b x + c y, so v is constant and the discrete solution is exact.
ManufacturedDarcy manufactured_linear(const Tensor2& kappa, double a, double b, double c);

struct DarcyStudy {
  ConvergenceTable table;  // norms: v_exact, v_interp, phi_exact, phi_interp
  std::vector<double> vmax;
  std::vector<std::string> warnings;
};

/// Solves on structured meshes of the unit square with the given
/// subdivisions (at least three, strictly increasing).
DarcyStudy darcy_convergence_study(const ManufacturedDarcy& mcase, const std::vector<int>& subdivisions);

}  // namespace aquifer
