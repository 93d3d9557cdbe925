#pragma once

#include "aquifer/fields.hpp"
#include "aquifer/mesh.hpp"

#include <optional>
#include <string>
#include <vector>

namespace aquifer {

double l2_norm(const Mesh& mesh, const P0Field& c);
/// Exact L2 norm of an RT0 field (cellwise quadratic integrand).
double l2_norm(const Mesh& mesh, const RT0Field& u);

/// ||c - f||_{L2} by the 7-point rule.
double l2_error(const Mesh& mesh, const P0Field& c, const ScalarFunction& f);
double l2_error(const Mesh& mesh, const RT0Field& u, const VectorFunction& f);

/// Jump seminorm (sum over edges of sigma (c_i - c_j)^2)^{1/2}. Boundary
/// edges use a ghost value 0 in Dirichlet mode and are skipped in Neumann mode.
double discrete_h1_norm(const Mesh& mesh, const P0Field& c, BoundaryMode mode);
/// Inner product behind discrete_h1_norm.
double discrete_h1_inner(const Mesh& mesh, const P0Field& a, const P0Field& b, BoundaryMode mode);

struct ErrorNorms {
  double l2 = 0.0;
  double h1_discrete = 0.0;
};

/// Against a closed-form reference; the discrete H1 part uses P_h of f.
ErrorNorms error_norms(const Mesh& mesh, const P0Field& c, const ScalarFunction& f, BoundaryMode mode);
/// Against a field on a nested finer mesh, restricted by cell averaging.
ErrorNorms error_norms(const Mesh& mesh, const P0Field& c, const Mesh& fine_mesh, const P0Field& fine,
                       BoundaryMode mode);

/// Cell-average restriction of a fine P0 field onto a coarse mesh whose
/// cells are unions of fine cells. Throws InvalidArgument if the meshes are
/// not nested.
P0Field restrict_to_coarse(const Mesh& fine_mesh, const P0Field& fine, const Mesh& coarse_mesh);

/// log(e_k / e_{k+1}) / log(h_k / h_{k+1}) for consecutive rows.
std::vector<double> observed_orders(const std::vector<double>& h, const std::vector<double>& errors);
/// log2(e_k / e_{k+1}), the rate for successive halvings.
std::vector<double> observed_orders(const std::vector<double>& errors);

/// Rows of (h, tau, errors); orders derived on demand.
class ConvergenceTable {
 public:
  explicit ConvergenceTable(std::vector<std::string> norm_names) : names_(std::move(norm_names)) {}

  /// Throws InvalidArgument unless h strictly decreases.
  void add_row(double h, double tau, std::vector<double> errors);

  const std::vector<std::string>& norm_names() const { return names_; }
  std::size_t rows() const { return h_.size(); }
  double h(std::size_t row) const { return h_[row]; }
  double tau(std::size_t row) const { return tau_[row]; }
  double error(std::size_t row, std::size_t norm) const { return errors_[row][norm]; }
  std::vector<double> errors(std::size_t norm) const;
  /// One entry per consecutive pair of rows.
  std::vector<double> orders(std::size_t norm) const;
  std::size_t norm_index(const std::string& name) const;

  /// Header `h,tau,err_<name>...,order_<name>...`; orders blank on row 1.
  std::string to_csv() const;

 private:
  std::vector<std::string> names_;
  std::vector<double> h_, tau_;
  std::vector<std::vector<double>> errors_;
};

}  // namespace aquifer
