#pragma once

#include "aquifer/dispersion.hpp"
#include "aquifer/fields.hpp"
#include "aquifer/mesh.hpp"

#include <array>
#include <vector>

namespace aquifer {

using Tensor2 = SymTensor<2>;
using CellTensors = std::vector<Tensor2>;

/// RT0 shape function of local edge k on a cell:
/// u(x) = scale * (x - apex), with scale = sign * |l_k| / (2 |T|).
struct RT0Shape {
  Point apex;
  double scale;

  Point operator()(const Point& x) const { return scale * (x - apex); }
  double divergence() const { return 2.0 * scale; }
};

std::array<RT0Shape, 3> rt0_local_basis(const Mesh& mesh, int cell);

/// Value of an RT0 field at x inside `cell`.
Point rt0_value(const Mesh& mesh, const RT0Field& field, int cell, const Point& x);
/// Value at the cell centroid, which is also the cell average.
Point rt0_cell_average(const Mesh& mesh, const RT0Field& field, int cell);
/// max over cells and cell vertices of |u|; the exact L-infinity norm.
double rt0_max_norm(const Mesh& mesh, const RT0Field& field);

/// Diagonal matrix with entries weight_T |T|. Throws InvalidArgument on
/// nonpositive weights.
SparseMatrix assemble_p0_mass(const Mesh& mesh, const P0Field& weight);

/// Entries int_T (A_T u_e) . u_f with the edge-midpoint rule. Throws
/// InvalidArgument if a cell tensor is not positive definite.
SparseMatrix assemble_rt0_weighted_mass(const Mesh& mesh, const CellTensors& tensors);
/// Unweighted RT0 mass (A_T = Id), the L2 Gram matrix of the flux space.
SparseMatrix assemble_rt0_mass(const Mesh& mesh);

/// cells x edges, entry int_T div u_e.
SparseMatrix assemble_div(const Mesh& mesh);

/// cells x edges, entry int_T div(A_T u_e) = sign |l_e| tr(A_T) / 2.
SparseMatrix assemble_weighted_div(const Mesh& mesh, const CellTensors& tensors);

/// edges x cells, entry int_T q_T . u_e.
SparseMatrix assemble_vector_coupling(const Mesh& mesh, const std::vector<Point>& q);

/// Cell averages by the 7-point rule.
P0Field project_P_h(const Mesh& mesh, const ScalarFunction& f);
/// Mean normal component per edge by 3-point Gauss.
RT0Field project_Pi_h(const Mesh& mesh, const VectorFunction& f);

/// Area-weighted vertex average of a P0 field (output only).
P1Field p0_to_p1(const Mesh& mesh, const P0Field& field);

/// Degrees of freedom of the flux space: all edges, or interior edges only
/// for the zero-normal-trace subspace.
class FluxSpace {
 public:
  FluxSpace(const Mesh& mesh, bool zero_trace);

  int size() const { return static_cast<int>(edge_of_dof_.size()); }
  bool zero_trace() const { return zero_trace_; }
  /// dof index of an edge, or -1 if the edge is constrained to zero.
  int dof(int edge) const { return dof_of_edge_[edge]; }
  int edge(int dof) const { return edge_of_dof_[dof]; }
  /// edges x dofs selection matrix.
  const SparseMatrix& prolongation() const { return prolongation_; }

  RT0Field expand(const Vector& dofs, int num_edges) const;
  Vector restrict(const RT0Field& field) const;

 private:
  bool zero_trace_;
  std::vector<int> dof_of_edge_;
  std::vector<int> edge_of_dof_;
  SparseMatrix prolongation_;
};

}  // namespace aquifer
