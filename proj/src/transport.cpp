#include "aquifer/transport.hpp"

#include "aquifer/error.hpp"
#include "format.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <limits>

namespace aquifer {

using detail::format_number;

const char* to_string(Isotherm::Kind kind) {
  switch (kind) {
    case Isotherm::Kind::linear: return "linear";
    case Isotherm::Kind::freundlich: return "freundlich";
    case Isotherm::Kind::langmuir: return "langmuir";
  }
  return "?";
}

double Isotherm::eval(double c) const {
  const double x = std::max(c, 0.0);
  switch (kind) {
    case Kind::linear: return k * x;
    case Kind::freundlich: return x == 0.0 ? 0.0 : k * std::pow(x, k2);
    case Kind::langmuir: return k * x / (1.0 + k2 * x);
  }
  return 0.0;
}

double Isotherm::lipschitz(double c_max) const {
  const double cm = std::max(c_max, 0.0);
  switch (kind) {
    case Kind::linear: return std::abs(k);
    case Kind::langmuir: return std::abs(k);  // r' = k / (1 + k' c)^2 peaks at c = 0
    case Kind::freundlich:
      if (k == 0.0 || k2 == 0.0) return 0.0;
      if (k2 < 1.0) return std::numeric_limits<double>::infinity();
      return k * k2 * std::pow(cm, k2 - 1.0);
  }
  return 0.0;
}

bool Isotherm::violates_bounded_derivative() const {
  return kind == Kind::freundlich && k > 0.0 && k2 > 0.0 && k2 < 1.0;
}

void TransportParams::validate(const Mesh& mesh) const {
  const int nc = mesh.num_cells();
  if (porosity.size() != nc || source.size() != nc || initial.size() != nc) {
    throw InvalidArgument("transport: porosity, source and initial data need one value per cell");
  }
  if (!(retardation > 0.0) || !std::isfinite(retardation)) {
    throw InvalidArgument("transport: retardation factor R must be > 0");
  }
  if (!(porosity.values.minCoeff() > 0.0) || !porosity.values.allFinite()) {
    throw InvalidArgument("transport: porosity must be > 0 in every cell");
  }
  if (!(initial.values.minCoeff() >= 0.0) || !(initial.values.maxCoeff() <= 1.0)) {
    throw InvalidArgument("transport: initial concentration must lie in [0, 1]");
  }
  if (!source.values.allFinite()) throw InvalidArgument("transport: non-finite source");
  if (!(isotherm.k >= 0.0) || !(isotherm.k2 >= 0.0)) {
    throw InvalidArgument("transport: isotherm parameters must be >= 0");
  }
}

bool cfl_satisfied(double tau, double h, int dim, double epsilon, double c_cfl) {
  return std::pow(tau, 1.0 - epsilon) / std::pow(h, dim) <= c_cfl;
}

double cfl_timestep(double h, int dim, double epsilon, double c_cfl) {
  if (!(h > 0.0) || !(epsilon > 0.0 && epsilon < 1.0) || !(c_cfl > 0.0) || dim < 1) {
    throw InvalidArgument("cfl_timestep: requires h > 0, 0 < epsilon < 1, C_CFL > 0");
  }
  double tau = std::pow(c_cfl * std::pow(h, dim), 1.0 / (1.0 - epsilon));
  while (!cfl_satisfied(tau, h, dim, epsilon, c_cfl)) tau = std::nextafter(tau, 0.0);
  return tau;
}

double solvability_threshold(const TransportParams& params, double vmax) {
  const auto b = bound_constants(params.dispersion, vmax);
  if (b.c_disp == 0.0) return std::numeric_limits<double>::infinity();
  const double pmin = params.porosity_min();
  const double pmax = params.porosity_max();
  const double growth = 1.0 + std::sqrt(vmax);
  return params.retardation * pmin * pmin * pmin / (2.0 * pmax * b.c_disp * b.c_disp * growth * growth);
}

GuardReport check_step_admissible(const Mesh& mesh, const TransportParams& params, const DarcySolution& darcy,
                                  double tau, const std::optional<CflCondition>& cfl) {
  GuardReport g;
  g.threshold = solvability_threshold(params, darcy.vmax);
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    g.admissible = false;
    g.reason = "time step must be positive and finite";
  } else if (cfl && !cfl_satisfied(tau, mesh.metrics().h, 2, cfl->epsilon, cfl->c_cfl)) {
    g.admissible = false;
    g.reason = "CFL condition violated: tau^(1-eps)/h^N = " +
               format_number(std::pow(tau, 1.0 - cfl->epsilon) / std::pow(mesh.metrics().h, 2)) +
               " > C_CFL = " + format_number(cfl->c_cfl);
  } else if (!(tau < g.threshold)) {
    g.admissible = false;
    g.reason = "tau = " + format_number(tau) + " is not below the solvability threshold " +
               format_number(g.threshold);
  }
  return g;
}

TransportStepper::TransportStepper(const Mesh& mesh, TransportParams params, const DarcySolution& darcy,
                                   double tau, std::optional<CflCondition> cfl)
    : mesh_(&mesh),
      params_(std::move(params)),
      tau_(tau),
      threshold_(0.0),
      vmax_(darcy.vmax),
      space_(mesh, params_.mode == BoundaryMode::neumann) {
  params_.validate(mesh);
  if (darcy.v.size() != mesh.num_edges()) throw InvalidArgument("transport: Darcy field does not match the mesh");
  const GuardReport guard = check_step_admissible(mesh, params_, darcy, tau, cfl);
  threshold_ = guard.threshold;
  if (!guard.admissible) throw StepRefused("transport step refused: " + guard.reason);

  const int nc = mesh.num_cells();
  CellTensors sqrt_s(nc), flux_weight(nc);
  std::vector<Point> drift(nc);
  capacity_.resize(nc);
  area_.resize(nc);
  for (int c = 0; c < nc; ++c) {
    const Point v = rt0_cell_average(mesh, darcy.v, c);
    const double psi = params_.porosity[c];
    sqrt_s[c] = dispersion_sqrt<2>(params_.dispersion, v);
    flux_weight[c] = dispersion_inv_sqrt<2>(params_.dispersion, v).scaled(1.0 / psi);
    drift[c] = dispersion_inv_times_v<2>(params_.dispersion, v) / psi;
    area_[c] = mesh.cell(c).area;
    capacity_[c] = params_.retardation * psi * area_[c];
  }

  const SparseMatrix& prol = space_.prolongation();
  weighted_div_ = assemble_weighted_div(mesh, sqrt_s);
  const SparseMatrix bg =
      SparseMatrix(assemble_div(mesh).transpose()) + assemble_vector_coupling(mesh, drift);
  coupling_ = prol.transpose() * bg;
  flux_mass_dofs_ = prol.transpose() * assemble_rt0_weighted_mass(mesh, flux_weight) * prol;
  rt0_mass_ = assemble_rt0_mass(mesh);

  const int nf = space_.size();
  const SparseMatrix div_dofs = weighted_div_ * prol;
  std::vector<Triplet> t;
  t.reserve(nc + div_dofs.nonZeros() + coupling_.nonZeros() + flux_mass_dofs_.nonZeros());
  for (int c = 0; c < nc; ++c) t.emplace_back(c, c, capacity_[c]);
  for (int k = 0; k < div_dofs.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(div_dofs, k); it; ++it) t.emplace_back(it.row(), nc + it.col(), tau * it.value());
  for (int k = 0; k < coupling_.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(coupling_, k); it; ++it) t.emplace_back(nc + it.row(), it.col(), -it.value());
  for (int k = 0; k < flux_mass_dofs_.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(flux_mass_dofs_, k); it; ++it)
      t.emplace_back(nc + it.row(), nc + it.col(), it.value());
  SparseMatrix system(nc + nf, nc + nf);
  system.setFromTriplets(t.begin(), t.end());
  system.makeCompressed();

  lu_ = std::make_unique<Eigen::SparseLU<SparseMatrix>>();
  lu_->analyzePattern(system);
  lu_->factorize(system);
  if (lu_->info() != Eigen::Success) {
    throw SolverError("transport: factorization failed at tau = " + format_number(tau) + " (threshold " +
                      format_number(threshold_) + "): " + lu_->lastErrorMessage());
  }
}

TransportState TransportStepper::initial_state() const {
  TransportState s;
  s.n = 0;
  s.t = 0.0;
  s.c = params_.initial;
  const Vector rhs = coupling_ * s.c.values;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(flux_mass_dofs_);
  if (ldlt.info() != Eigen::Success) throw SolverError("transport: flux mass matrix is not SPD");
  s.vc = space_.expand(ldlt.solve(rhs), mesh_->num_edges());
  return s;
}

TransportState TransportStepper::step(const TransportState& previous) const {
  const int nc = mesh_->num_cells();
  const int nf = space_.size();
  Vector rhs(nc + nf);
  for (int c = 0; c < nc; ++c) {
    rhs[c] = capacity_[c] * previous.c[c] +
             tau_ * area_[c] * (params_.source[c] - params_.isotherm.eval(previous.c[c]));
  }
  rhs.tail(nf).setZero();
  const Vector x = lu_->solve(rhs);
  if (!x.allFinite()) {
    throw SolverError("transport: non-finite solution at step " + std::to_string(previous.n + 1));
  }
  TransportState next;
  next.n = previous.n + 1;
  next.t = next.n * tau_;
  next.c = P0Field(x.head(nc));
  next.vc = space_.expand(x.tail(nf), mesh_->num_edges());
  return next;
}

Vector TransportStepper::weighted_divergence(const RT0Field& vc) const { return weighted_div_ * vc.values; }

double TransportStepper::flux_l2_squared(const RT0Field& vc) const {
  return std::max(0.0, vc.values.dot(rt0_mass_ * vc.values));
}

double TransportStepper::conc_l2_squared(const P0Field& c) const {
  return area_.dot(c.values.cwiseAbs2());
}

double TransportStepper::mass_residual(const TransportState& previous, const TransportState& next) const {
  const Vector div = weighted_divergence(next.vc);
  double residual = 0.0, scale = 0.0;
  for (int c = 0; c < mesh_->num_cells(); ++c) {
    const double react = tau_ * area_[c] * params_.isotherm.eval(previous.c[c]);
    const double src = tau_ * area_[c] * params_.source[c];
    residual += capacity_[c] * (next.c[c] - previous.c[c]) + tau_ * div[c] + react - src;
    scale += std::abs(capacity_[c] * next.c[c]) + std::abs(capacity_[c] * previous.c[c]) +
             std::abs(tau_ * div[c]) + std::abs(react) + std::abs(src);
  }
  return scale > 0.0 ? std::abs(residual) / scale : 0.0;
}

TransportState step(const Mesh& mesh, const TransportState& state, const TransportParams& params,
                    const DarcySolution& darcy, double tau) {
  const TransportStepper stepper(mesh, params, darcy, tau);
  return stepper.step(state);
}

RunResult run(const TransportStepper& stepper, double t_final, bool keep_trajectory,
              const StateObserver& observer) {
  if (!(t_final >= 0.0)) throw InvalidArgument("run: T_final must be >= 0");
  const double tau = stepper.tau();
  const int steps = static_cast<int>(std::ceil(t_final / tau - 1e-12));

  RunResult result;
  result.summary.vmax = stepper.vmax();
  result.summary.bound_factor = 1.0 + stepper.vmax() + stepper.vmax() * stepper.vmax();

  TransportState state = stepper.initial_state();
  StabilityLedger ledger;
  ledger.sup_vc2 = stepper.flux_l2_squared(state.vc);

  StepDiagnostics d0;
  d0.ledger = ledger;
  d0.min_c = std::min(0.0, state.c.values.minCoeff());
  result.summary.min_c = d0.min_c;
  if (observer) observer(state, d0);
  if (keep_trajectory) result.trajectory.push_back(state);

  const Mesh& mesh = stepper.mesh();
  for (int n = 1; n <= steps; ++n) {
    TransportState next = stepper.step(state);

    const P0Field dc(next.c.values - state.c.values);
    const RT0Field dvc(next.vc.values - state.vc.values);
    const Vector div = stepper.weighted_divergence(next.vc);
    double div2 = 0.0;
    for (int c = 0; c < mesh.num_cells(); ++c) div2 += div[c] * div[c] / mesh.cell(c).area;
    const double vc2 = stepper.flux_l2_squared(next.vc);

    ledger.steps = n;
    ledger.sum_dc2_over_tau += stepper.conc_l2_squared(dc) / tau;
    ledger.sup_vc2 = std::max(ledger.sup_vc2, vc2);
    ledger.sum_dvc2 += stepper.flux_l2_squared(dvc);
    ledger.tau_sum_div2 += tau * div2;
    ledger.tau_sum_c2 += tau * stepper.conc_l2_squared(next.c);
    ledger.tau_sum_vc2 += tau * vc2;

    StepDiagnostics d;
    d.n = n;
    d.t = next.t;
    d.ledger = ledger;
    d.min_c = std::min(0.0, next.c.values.minCoeff());
    d.mass_residual = stepper.mass_residual(state, next);
    result.summary.min_c = std::min(result.summary.min_c, d.min_c);
    result.summary.max_mass_residual = std::max(result.summary.max_mass_residual, d.mass_residual);

    if (observer) observer(next, d);
    result.diagnostics.push_back(d);
    if (keep_trajectory) result.trajectory.push_back(next);
    state = std::move(next);
  }
  result.summary.ledger = ledger;
  return result;
}

}  // namespace aquifer
