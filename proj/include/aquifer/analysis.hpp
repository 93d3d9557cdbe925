#pragma once

#include "aquifer/norms.hpp"
#include "aquifer/transport.hpp"

#include <optional>
#include <vector>

namespace aquifer {

/// Norms of one transport state.
struct DiscreteNormReport {
  double h1_discrete = 0.0;  // ||c||_{1,h}
  double c_l2 = 0.0;
  double vc_l2 = 0.0;
  /// ||c||_{1,h} / (||vc|| + ||c||); absent when the denominator vanishes.
  std::optional<double> ratio;
};

DiscreteNormReport discrete_norm_report(const Mesh& mesh, const TransportState& state, BoundaryMode mode);

struct MajorizationResult {
  std::optional<double> max_ratio;
  int step = -1;  // where the max occurs
};

/// max over the trajectory of ||c^n||_{1,h} / (||vc^n|| + ||c^n||).
MajorizationResult check_majorization(const Mesh& mesh, const std::vector<TransportState>& trajectory,
                                      BoundaryMode mode);

/// Piecewise-linear-in-time value (C^tau(t), V_C^tau(t)) of a uniformly
/// stepped trajectory. Throws InvalidArgument outside [t_0, t_N].
struct InterpolatedState {
  P0Field c;
  RT0Field vc;
};
InterpolatedState time_interpolant(const std::vector<TransportState>& trajectory, double t);

/// ||C_coarse^tau - P_h C_fine^tau||_{L2(Omega x (0, t_end))} for two
/// trajectories on nested meshes, integrated exactly in time over the merged
/// time nodes (the integrand is piecewise quadratic).
double space_time_l2_difference(const Mesh& coarse_mesh, const std::vector<TransportState>& coarse,
                                const Mesh& fine_mesh, const std::vector<TransportState>& fine, double t_end);

}  // namespace aquifer
