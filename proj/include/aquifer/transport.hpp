#pragma once

#include "aquifer/assembly.hpp"
#include "aquifer/darcy.hpp"
#include "aquifer/dispersion.hpp"
#include "aquifer/error.hpp"
#include "aquifer/fields.hpp"
#include "aquifer/mesh.hpp"

#include <Eigen/SparseLU>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace aquifer {

/// Sorption/reaction law r(c) with k, k' >= 0.
struct Isotherm {
  enum class Kind { linear, freundlich, langmuir };
  Kind kind = Kind::linear;
  double k = 0.0;
  double k2 = 0.0;  // k' (exponent or saturation coefficient)

  static Isotherm linear(double k) { return {Kind::linear, k, 0.0}; }
  static Isotherm freundlich(double k, double exponent) { return {Kind::freundlich, k, exponent}; }
  static Isotherm langmuir(double k, double saturation) { return {Kind::langmuir, k, saturation}; }

  /// r(max(c, 0)).
  double eval(double c) const;
  /// sup |r'| on [0, c_max]; +inf for Freundlich with k' < 1.
  double lipschitz(double c_max) const;
  /// Freundlich with k' < 1 has an unbounded derivative at 0.
  bool violates_bounded_derivative() const;
};

const char* to_string(Isotherm::Kind kind);

struct TransportParams {
  double retardation = 1.0;  // R
  P0Field porosity;          // psi
  DispersionParams dispersion{1.0, 1.0, 0.0};
  Isotherm isotherm;
  P0Field source;  // p, already restricted to the spread region
  BoundaryMode mode = BoundaryMode::neumann;
  P0Field initial;  // c0

  /// Throws InvalidArgument on size mismatch or violated bounds
  /// (R > 0, psi > 0, 0 <= c0 <= 1, k, k' >= 0).
  void validate(const Mesh& mesh) const;
  double porosity_min() const { return porosity.values.minCoeff(); }
  double porosity_max() const { return porosity.values.maxCoeff(); }
};

struct TransportState {
  int n = 0;
  double t = 0.0;
  P0Field c;
  RT0Field vc;
};

/// tau = (C_CFL h^N)^{1/(1-epsilon)}, nudged down until
/// tau^{1-epsilon} / h^N <= C_CFL holds in floating point.
double cfl_timestep(double h, int dim, double epsilon, double c_cfl);
bool cfl_satisfied(double tau, double h, int dim, double epsilon, double c_cfl);

struct CflCondition {
  double epsilon = 0.1;
  double c_cfl = 1.0;
  bool operator==(const CflCondition&) const = default;
};

/// Largest tau for which the step is provably uniquely solvable:
/// psi_+^{-1} - 2 tau C_disp^2 (1 + vmax^{1/2})^2 / (R psi_-^3) > 0.
double solvability_threshold(const TransportParams& params, double vmax);

struct GuardReport {
  bool admissible = true;
  std::string reason;
  double threshold = 0.0;
};

/// Checks tau against the solvability threshold and, when given, the CFL
/// condition. Runs before any assembly or factorization.
GuardReport check_step_admissible(const Mesh& mesh, const TransportParams& params, const DarcySolution& darcy,
                                  double tau, const std::optional<CflCondition>& cfl);

/// Thrown when the guard rejects tau; no factorization was attempted.
class StepRefused : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Running sums of the stability estimates.
struct StabilityLedger {
  int steps = 0;
  double sum_dc2_over_tau = 0.0;  // sum ||c^n - c^{n-1}||^2 / tau
  double sup_vc2 = 0.0;           // sup_k ||vc^k||^2
  double sum_dvc2 = 0.0;          // sum ||vc^n - vc^{n-1}||^2
  double tau_sum_div2 = 0.0;      // tau sum ||div(S^{1/2} vc^n)||^2
  double tau_sum_c2 = 0.0;        // tau sum ||c^n||^2
  double tau_sum_vc2 = 0.0;       // tau sum ||vc^n||^2

  /// ||c||^2_{L2(0,t_n;L2)} + tau ||vc||^2_{L2(0,t_n;L2)}
  double discrete_energy(double tau) const { return tau_sum_c2 + tau * tau_sum_vc2; }
};

struct StepDiagnostics {
  int n = 0;
  double t = 0.0;
  StabilityLedger ledger;  // after this step
  double min_c = 0.0;      // min(0, min_T c^n_T)
  double mass_residual = 0.0;  // relative residual of the w = 1 balance
};

/// Assembled and factored scheme for fixed (mesh, params, v_h, tau):
///   M_{R psi} c^n + tau D vc^n = M_{R psi} c^{n-1} - tau M r(c^{n-1}) + tau M p
///   A vc^n - (B^T + G) c^n = 0
/// with D = weighted div of S^{1/2}, A = mass weighted by S^{-1/2}/psi,
/// G = coupling with S^{-1} v_h / psi, S frozen at cell centroids.
/// Keeps a reference to `mesh`, which must outlive the stepper.
class TransportStepper {
 public:
  TransportStepper(const Mesh& mesh, TransportParams params, const DarcySolution& darcy, double tau,
                   std::optional<CflCondition> cfl = std::nullopt);

  const Mesh& mesh() const { return *mesh_; }
  const TransportParams& params() const { return params_; }
  double tau() const { return tau_; }
  double threshold() const { return threshold_; }
  double vmax() const { return vmax_; }
  const FluxSpace& flux_space() const { return space_; }

  /// c^0 with the total flux consistent with the second equation.
  TransportState initial_state() const;
  TransportState step(const TransportState& previous) const;

  /// Relative residual of the first equation tested with w = 1.
  double mass_residual(const TransportState& previous, const TransportState& next) const;
  /// Cellwise div(S^{1/2} vc) integrals.
  Vector weighted_divergence(const RT0Field& vc) const;
  double flux_l2_squared(const RT0Field& vc) const;
  double conc_l2_squared(const P0Field& c) const;

 private:
  const Mesh* mesh_;
  TransportParams params_;
  double tau_;
  double threshold_;
  double vmax_;
  FluxSpace space_;

  Vector capacity_;  // R psi |T|
  Vector area_;
  SparseMatrix weighted_div_;   // cells x edges
  SparseMatrix coupling_;       // dofs x cells: P^T (B^T + G)
  SparseMatrix flux_mass_dofs_; // P^T A P
  SparseMatrix rt0_mass_;       // unweighted, edges x edges
  std::unique_ptr<Eigen::SparseLU<SparseMatrix>> lu_;
};

/// Convenience single step (assembles and factors every call).
TransportState step(const Mesh& mesh, const TransportState& state, const TransportParams& params,
                    const DarcySolution& darcy, double tau);

struct RunSummary {
  StabilityLedger ledger;
  double vmax = 0.0;
  double bound_factor = 0.0;  // 1 + ||v_h||_inf + ||v_h||_inf^2
  double min_c = 0.0;         // most negative concentration seen (<= 0)
  double max_mass_residual = 0.0;
};

struct RunResult {
  std::vector<TransportState> trajectory;  // empty unless kept
  std::vector<StepDiagnostics> diagnostics;
  RunSummary summary;
};

using StateObserver = std::function<void(const TransportState&, const StepDiagnostics&)>;

/// Steps until t_n >= t_final (ceil(t_final / tau) uniform steps). The
/// observer, if any, sees every state including n = 0.
RunResult run(const TransportStepper& stepper, double t_final, bool keep_trajectory = true,
              const StateObserver& observer = {});

}  // namespace aquifer
