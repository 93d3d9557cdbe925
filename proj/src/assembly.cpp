#include "aquifer/assembly.hpp"

#include "aquifer/error.hpp"
#include "aquifer/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace aquifer {

const char* to_string(BoundaryMode mode) {
  return mode == BoundaryMode::dirichlet ? "dirichlet" : "neumann";
}

namespace {

void check_tensor_count(const Mesh& mesh, const CellTensors& tensors, const char* who) {
  if (static_cast<int>(tensors.size()) != mesh.num_cells()) {
    throw InvalidArgument(std::string(who) + ": expected one tensor per cell");
  }
}

bool is_spd(const Tensor2& a) {
  const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(0, 1);
  return a(0, 0) > 0.0 && det > 0.0 && std::isfinite(det);
}

SparseMatrix from_triplets(int rows, int cols, const std::vector<Triplet>& t) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

}  // namespace

std::array<RT0Shape, 3> rt0_local_basis(const Mesh& mesh, int cell) {
  const Cell& c = mesh.cell(cell);
  std::array<RT0Shape, 3> basis;
  for (int k = 0; k < 3; ++k) {
    const Edge& e = mesh.edge(c.edges[k]);
    basis[k].apex = mesh.vertex(c.vertices[k]);
    basis[k].scale = c.edge_signs[k] * e.length / (2.0 * c.area);
  }
  return basis;
}

Point rt0_value(const Mesh& mesh, const RT0Field& field, int cell, const Point& x) {
  const auto basis = rt0_local_basis(mesh, cell);
  const Cell& c = mesh.cell(cell);
  Point u = Point::Zero();
  for (int k = 0; k < 3; ++k) u += field.values[c.edges[k]] * basis[k](x);
  return u;
}

Point rt0_cell_average(const Mesh& mesh, const RT0Field& field, int cell) {
  return rt0_value(mesh, field, cell, mesh.cell(cell).centroid);
}

double rt0_max_norm(const Mesh& mesh, const RT0Field& field) {
  double m = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    for (int v : mesh.cell(c).vertices) m = std::max(m, rt0_value(mesh, field, c, mesh.vertex(v)).norm());
  }
  return m;
}

SparseMatrix assemble_p0_mass(const Mesh& mesh, const P0Field& weight) {
  if (weight.size() != mesh.num_cells()) throw InvalidArgument("assemble_p0_mass: weight size mismatch");
  std::vector<Triplet> t;
  t.reserve(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    if (!(weight[c] > 0.0)) {
      throw InvalidArgument("assemble_p0_mass: nonpositive weight in cell " + std::to_string(c));
    }
    t.emplace_back(c, c, weight[c] * mesh.cell(c).area);
  }
  return from_triplets(mesh.num_cells(), mesh.num_cells(), t);
}

SparseMatrix assemble_rt0_weighted_mass(const Mesh& mesh, const CellTensors& tensors) {
  check_tensor_count(mesh, tensors, "assemble_rt0_weighted_mass");
  const auto rule = quadrature::edge_midpoint_rule();
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(9) * mesh.num_cells());
  for (int ci = 0; ci < mesh.num_cells(); ++ci) {
    const Tensor2& a = tensors[ci];
    if (!is_spd(a)) throw InvalidArgument("assemble_rt0_weighted_mass: tensor not SPD in cell " + std::to_string(ci));
    const Cell& c = mesh.cell(ci);
    const auto basis = rt0_local_basis(mesh, ci);
    const Eigen::Matrix2d am = a.matrix();
    const Point& p0 = mesh.vertex(c.vertices[0]);
    const Point& p1 = mesh.vertex(c.vertices[1]);
    const Point& p2 = mesh.vertex(c.vertices[2]);
    Eigen::Matrix3d local = Eigen::Matrix3d::Zero();
    for (const auto& q : rule) {
      const Point x = quadrature::map(p0, p1, p2, q);
      std::array<Point, 3> u{basis[0](x), basis[1](x), basis[2](x)};
      for (int i = 0; i < 3; ++i) {
        const Point au = am * u[i];
        for (int j = i; j < 3; ++j) local(i, j) += q.weight * au.dot(u[j]);
      }
    }
    local *= c.area;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < i; ++j) local(i, j) = local(j, i);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) t.emplace_back(c.edges[i], c.edges[j], local(i, j));
  }
  return from_triplets(mesh.num_edges(), mesh.num_edges(), t);
}

SparseMatrix assemble_rt0_mass(const Mesh& mesh) {
  return assemble_rt0_weighted_mass(mesh, CellTensors(mesh.num_cells(), Tensor2::identity()));
}

SparseMatrix assemble_div(const Mesh& mesh) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(3) * mesh.num_cells());
  for (int ci = 0; ci < mesh.num_cells(); ++ci) {
    const Cell& c = mesh.cell(ci);
    for (int k = 0; k < 3; ++k) t.emplace_back(ci, c.edges[k], c.edge_signs[k] * mesh.edge(c.edges[k]).length);
  }
  return from_triplets(mesh.num_cells(), mesh.num_edges(), t);
}

SparseMatrix assemble_weighted_div(const Mesh& mesh, const CellTensors& tensors) {
  check_tensor_count(mesh, tensors, "assemble_weighted_div");
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(3) * mesh.num_cells());
  for (int ci = 0; ci < mesh.num_cells(); ++ci) {
    const Cell& c = mesh.cell(ci);
    const double tr = tensors[ci].trace();
    for (int k = 0; k < 3; ++k) {
      t.emplace_back(ci, c.edges[k], c.edge_signs[k] * 0.5 * mesh.edge(c.edges[k]).length * tr);
    }
  }
  return from_triplets(mesh.num_cells(), mesh.num_edges(), t);
}

SparseMatrix assemble_vector_coupling(const Mesh& mesh, const std::vector<Point>& q) {
  if (static_cast<int>(q.size()) != mesh.num_cells()) {
    throw InvalidArgument("assemble_vector_coupling: expected one vector per cell");
  }
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(3) * mesh.num_cells());
  for (int ci = 0; ci < mesh.num_cells(); ++ci) {
    if (q[ci].isZero(0.0)) continue;
    const Cell& c = mesh.cell(ci);
    const auto basis = rt0_local_basis(mesh, ci);
    for (int k = 0; k < 3; ++k) {
      // affine integrand: area times the centroid value
      t.emplace_back(c.edges[k], ci, c.area * q[ci].dot(basis[k](c.centroid)));
    }
  }
  return from_triplets(mesh.num_edges(), mesh.num_cells(), t);
}

P0Field project_P_h(const Mesh& mesh, const ScalarFunction& f) {
  Vector out(mesh.num_cells());
  const auto rule = quadrature::seven_point_rule();
  for (int ci = 0; ci < mesh.num_cells(); ++ci) {
    const Cell& c = mesh.cell(ci);
    const double integral = quadrature::integrate(mesh.vertex(c.vertices[0]), mesh.vertex(c.vertices[1]),
                                                  mesh.vertex(c.vertices[2]), c.area, rule, f);
    out[ci] = integral / c.area;
  }
  return P0Field(std::move(out));
}

RT0Field project_Pi_h(const Mesh& mesh, const VectorFunction& f) {
  Vector out(mesh.num_edges());
  for (int ei = 0; ei < mesh.num_edges(); ++ei) {
    const Edge& e = mesh.edge(ei);
    const Point& a = mesh.vertex(e.vertices[0]);
    const Point& b = mesh.vertex(e.vertices[1]);
    double mean = 0.0;
    for (const auto& q : quadrature::gauss3_line()) mean += q.weight * f(a + q.s * (b - a)).dot(e.normal);
    out[ei] = mean;
  }
  return RT0Field(std::move(out));
}

P1Field p0_to_p1(const Mesh& mesh, const P0Field& field) {
  Vector sum = Vector::Zero(mesh.num_vertices());
  Vector weight = Vector::Zero(mesh.num_vertices());
  for (int ci = 0; ci < mesh.num_cells(); ++ci) {
    const Cell& c = mesh.cell(ci);
    for (int v : c.vertices) {
      sum[v] += c.area * field[ci];
      weight[v] += c.area;
    }
  }
  return P1Field{sum.cwiseQuotient(weight.cwiseMax(1e-300))};
}

FluxSpace::FluxSpace(const Mesh& mesh, bool zero_trace)
    : zero_trace_(zero_trace), dof_of_edge_(mesh.num_edges(), -1) {
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (zero_trace && mesh.edge(e).boundary) continue;
    dof_of_edge_[e] = static_cast<int>(edge_of_dof_.size());
    edge_of_dof_.push_back(e);
  }
  std::vector<Triplet> t;
  t.reserve(edge_of_dof_.size());
  for (int d = 0; d < size(); ++d) t.emplace_back(edge_of_dof_[d], d, 1.0);
  prolongation_ = from_triplets(mesh.num_edges(), size(), t);
}

RT0Field FluxSpace::expand(const Vector& dofs, int num_edges) const {
  Vector out = Vector::Zero(num_edges);
  for (int d = 0; d < size(); ++d) out[edge_of_dof_[d]] = dofs[d];
  return RT0Field(std::move(out));
}

Vector FluxSpace::restrict(const RT0Field& field) const {
  Vector out(size());
  for (int d = 0; d < size(); ++d) out[d] = field.values[edge_of_dof_[d]];
  return out;
}

}  // namespace aquifer
