#pragma once

#include "aquifer/mesh.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <functional>

namespace aquifer {

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// One value per cell.
struct P0Field {
  Vector values;

  P0Field() = default;
  explicit P0Field(Vector v) : values(std::move(v)) {}
  static P0Field constant(const Mesh& mesh, double value) {
    return P0Field(Vector::Constant(mesh.num_cells(), value));
  }
  Eigen::Index size() const { return values.size(); }
  double operator[](Eigen::Index i) const { return values[i]; }
};

/// One value per vertex.
struct P1Field {
  Vector values;
};

/// Lowest-order Raviart-Thomas field: one coefficient per edge, the mean
/// normal component along the edge's global normal.
struct RT0Field {
  Vector values;

  RT0Field() = default;
  explicit RT0Field(Vector v) : values(std::move(v)) {}
  static RT0Field zero(const Mesh& mesh) { return RT0Field(Vector::Zero(mesh.num_edges())); }
  Eigen::Index size() const { return values.size(); }
};

using ScalarFunction = std::function<double(const Point&)>;
using VectorFunction = std::function<Point(const Point&)>;

enum class BoundaryMode { dirichlet, neumann };

const char* to_string(BoundaryMode mode);

}  // namespace aquifer
