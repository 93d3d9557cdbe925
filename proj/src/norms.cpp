#include "aquifer/norms.hpp"

#include "aquifer/assembly.hpp"
#include "aquifer/error.hpp"
#include "aquifer/quadrature.hpp"
#include "format.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace aquifer {

namespace {

void check_cells(const Mesh& mesh, const P0Field& c, const char* who) {
  if (c.size() != mesh.num_cells()) throw InvalidArgument(std::string(who) + ": field size != cell count");
}

}  // namespace

double l2_norm(const Mesh& mesh, const P0Field& c) {
  check_cells(mesh, c, "l2_norm");
  double s = 0.0;
  for (int i = 0; i < mesh.num_cells(); ++i) s += mesh.cell(i).area * c[i] * c[i];
  return std::sqrt(s);
}

double l2_norm(const Mesh& mesh, const RT0Field& u) {
  if (u.size() != mesh.num_edges()) throw InvalidArgument("l2_norm: field size != edge count");
  double s = 0.0;
  for (int ci = 0; ci < mesh.num_cells(); ++ci) {
    const Cell& c = mesh.cell(ci);
    const auto& v = c.vertices;
    s += quadrature::integrate(mesh.vertex(v[0]), mesh.vertex(v[1]), mesh.vertex(v[2]), c.area,
                               quadrature::edge_midpoint_rule(),
                               [&](const Point& x) { return rt0_value(mesh, u, ci, x).squaredNorm(); });
  }
  return std::sqrt(s);
}

double l2_error(const Mesh& mesh, const P0Field& c, const ScalarFunction& f) {
  check_cells(mesh, c, "l2_error");
  double s = 0.0;
  for (int ci = 0; ci < mesh.num_cells(); ++ci) {
    const Cell& cell = mesh.cell(ci);
    const auto& v = cell.vertices;
    s += quadrature::integrate(mesh.vertex(v[0]), mesh.vertex(v[1]), mesh.vertex(v[2]), cell.area,
                               quadrature::seven_point_rule(), [&](const Point& x) {
                                 const double d = c[ci] - f(x);
                                 return d * d;
                               });
  }
  return std::sqrt(s);
}

double l2_error(const Mesh& mesh, const RT0Field& u, const VectorFunction& f) {
  if (u.size() != mesh.num_edges()) throw InvalidArgument("l2_error: field size != edge count");
  double s = 0.0;
  for (int ci = 0; ci < mesh.num_cells(); ++ci) {
    const Cell& cell = mesh.cell(ci);
    const auto& v = cell.vertices;
    s += quadrature::integrate(mesh.vertex(v[0]), mesh.vertex(v[1]), mesh.vertex(v[2]), cell.area,
                               quadrature::seven_point_rule(), [&](const Point& x) {
                                 return (rt0_value(mesh, u, ci, x) - f(x)).squaredNorm();
                               });
  }
  return std::sqrt(s);
}

double discrete_h1_inner(const Mesh& mesh, const P0Field& a, const P0Field& b, BoundaryMode mode) {
  check_cells(mesh, a, "discrete_h1_inner");
  check_cells(mesh, b, "discrete_h1_inner");
  double s = 0.0;
  for (const Edge& e : mesh.edges()) {
    const int i = e.cells[0];
    if (e.boundary) {
      if (mode == BoundaryMode::neumann) continue;
      s += e.sigma * a[i] * b[i];
    } else {
      const int j = e.cells[1];
      s += e.sigma * (a[i] - a[j]) * (b[i] - b[j]);
    }
  }
  return s;
}

double discrete_h1_norm(const Mesh& mesh, const P0Field& c, BoundaryMode mode) {
  return std::sqrt(std::max(0.0, discrete_h1_inner(mesh, c, c, mode)));
}

ErrorNorms error_norms(const Mesh& mesh, const P0Field& c, const ScalarFunction& f, BoundaryMode mode) {
  ErrorNorms out;
  out.l2 = l2_error(mesh, c, f);
  const P0Field ref = project_P_h(mesh, f);
  out.h1_discrete = discrete_h1_norm(mesh, P0Field(c.values - ref.values), mode);
  return out;
}

P0Field restrict_to_coarse(const Mesh& fine_mesh, const P0Field& fine, const Mesh& coarse_mesh) {
  check_cells(fine_mesh, fine, "restrict_to_coarse");
  Vector integral = Vector::Zero(coarse_mesh.num_cells());
  Vector covered = Vector::Zero(coarse_mesh.num_cells());
  for (int fi = 0; fi < fine_mesh.num_cells(); ++fi) {
    const Cell& fc = fine_mesh.cell(fi);
    const auto host = coarse_mesh.locate(fc.centroid);
    if (!host) throw InvalidArgument("restrict_to_coarse: fine cell outside the coarse mesh");
    integral[*host] += fc.area * fine[fi];
    covered[*host] += fc.area;
  }
  for (int ci = 0; ci < coarse_mesh.num_cells(); ++ci) {
    const double area = coarse_mesh.cell(ci).area;
    if (std::abs(covered[ci] - area) > 1e-9 * area) {
      throw InvalidArgument("restrict_to_coarse: meshes are not nested (no restriction map)");
    }
    integral[ci] /= covered[ci];
  }
  return P0Field(std::move(integral));
}

ErrorNorms error_norms(const Mesh& mesh, const P0Field& c, const Mesh& fine_mesh, const P0Field& fine,
                       BoundaryMode mode) {
  check_cells(mesh, c, "error_norms");
  const P0Field ref = restrict_to_coarse(fine_mesh, fine, mesh);
  const P0Field diff(c.values - ref.values);
  return {l2_norm(mesh, diff), discrete_h1_norm(mesh, diff, mode)};
}

std::vector<double> observed_orders(const std::vector<double>& h, const std::vector<double>& errors) {
  if (h.size() != errors.size()) throw InvalidArgument("observed_orders: size mismatch");
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
    out.push_back(std::log(errors[k] / errors[k + 1]) / std::log(h[k] / h[k + 1]));
  }
  return out;
}

std::vector<double> observed_orders(const std::vector<double>& errors) {
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) out.push_back(std::log2(errors[k] / errors[k + 1]));
  return out;
}

void ConvergenceTable::add_row(double h, double tau, std::vector<double> errors) {
  if (errors.size() != names_.size()) throw InvalidArgument("ConvergenceTable: wrong number of errors");
  if (!h_.empty() && !(h < h_.back())) throw InvalidArgument("ConvergenceTable: h must strictly decrease");
  h_.push_back(h);
  tau_.push_back(tau);
  errors_.push_back(std::move(errors));
}

std::vector<double> ConvergenceTable::errors(std::size_t norm) const {
  std::vector<double> out;
  for (const auto& row : errors_) out.push_back(row[norm]);
  return out;
}

std::vector<double> ConvergenceTable::orders(std::size_t norm) const {
  return observed_orders(h_, errors(norm));
}

std::size_t ConvergenceTable::norm_index(const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw InvalidArgument("ConvergenceTable: unknown norm '" + name + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

std::string ConvergenceTable::to_csv() const {
  std::ostringstream out;
  out << "h,tau";
  for (const auto& n : names_) out << ",err_" << n;
  for (const auto& n : names_) out << ",order_" << n;
  out << "\n";
  std::vector<std::vector<double>> ord;
  for (std::size_t k = 0; k < names_.size(); ++k) ord.push_back(orders(k));
  for (std::size_t r = 0; r < rows(); ++r) {
    out << detail::format_number(h_[r]) << "," << detail::format_number(tau_[r]);
    for (double e : errors_[r]) out << "," << detail::format_number(e);
    for (std::size_t k = 0; k < names_.size(); ++k) {
      out << ",";
      if (r > 0) out << detail::format_number(ord[k][r - 1]);
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace aquifer
