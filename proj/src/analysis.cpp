#include "aquifer/analysis.hpp"

#include "aquifer/error.hpp"

#include <algorithm>
#include <cmath>

namespace aquifer {

DiscreteNormReport discrete_norm_report(const Mesh& mesh, const TransportState& state, BoundaryMode mode) {
  DiscreteNormReport r;
  r.h1_discrete = discrete_h1_norm(mesh, state.c, mode);
  r.c_l2 = l2_norm(mesh, state.c);
  r.vc_l2 = l2_norm(mesh, state.vc);
  const double denom = r.c_l2 + r.vc_l2;
  if (denom > 0.0) r.ratio = r.h1_discrete / denom;
  return r;
}

MajorizationResult check_majorization(const Mesh& mesh, const std::vector<TransportState>& trajectory,
                                      BoundaryMode mode) {
  MajorizationResult out;
  for (const auto& s : trajectory) {
    const auto r = discrete_norm_report(mesh, s, mode);
    if (r.ratio && (!out.max_ratio || *r.ratio > *out.max_ratio)) {
      out.max_ratio = r.ratio;
      out.step = s.n;
    }
  }
  return out;
}

namespace {

/// Index n with t in (t_{n-1}, t_n], n >= 1.
std::size_t interval_of(const std::vector<TransportState>& traj, double t) {
  const auto it = std::lower_bound(traj.begin() + 1, traj.end(), t,
                                   [](const TransportState& s, double x) { return s.t < x; });
  return std::min<std::size_t>(static_cast<std::size_t>(it - traj.begin()), traj.size() - 1);
}

}  // namespace

InterpolatedState time_interpolant(const std::vector<TransportState>& trajectory, double t) {
  if (trajectory.empty()) throw InvalidArgument("time_interpolant: empty trajectory");
  const double t0 = trajectory.front().t;
  const double tn = trajectory.back().t;
  if (!(t >= t0 && t <= tn)) throw InvalidArgument("time_interpolant: t outside [t_0, t_N]");
  if (trajectory.size() == 1 || t == t0) return {trajectory.front().c, trajectory.front().vc};

  const std::size_t n = interval_of(trajectory, t);
  const auto& hi = trajectory[n];
  const auto& lo = trajectory[n - 1];
  if (t == hi.t) return {hi.c, hi.vc};
  const double step = hi.t - lo.t;
  const double a = (t - lo.t) / step;
  const double b = (hi.t - t) / step;
  return {P0Field(a * hi.c.values + b * lo.c.values), RT0Field(a * hi.vc.values + b * lo.vc.values)};
}

double space_time_l2_difference(const Mesh& coarse_mesh, const std::vector<TransportState>& coarse,
                                const Mesh& fine_mesh, const std::vector<TransportState>& fine, double t_end) {
  if (coarse.empty() || fine.empty()) throw InvalidArgument("space_time_l2_difference: empty trajectory");
  if (t_end > coarse.back().t || t_end > fine.back().t) {
    throw InvalidArgument("space_time_l2_difference: t_end beyond a trajectory");
  }
  std::vector<double> nodes;
  for (const auto& s : coarse) if (s.t < t_end) nodes.push_back(s.t);
  for (const auto& s : fine) if (s.t < t_end) nodes.push_back(s.t);
  nodes.push_back(t_end);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end(), [](double a, double b) { return std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(b)); }),
              nodes.end());

  // Restriction is linear, so restrict the fine states once.
  std::vector<TransportState> fine_restricted;
  fine_restricted.reserve(fine.size());
  for (const auto& s : fine) {
    TransportState r;
    r.n = s.n;
    r.t = s.t;
    r.c = restrict_to_coarse(fine_mesh, s.c, coarse_mesh);
    r.vc = RT0Field(Vector::Zero(coarse_mesh.num_edges()));
    fine_restricted.push_back(std::move(r));
  }
  auto diff_at = [&](double t) {
    const P0Field a = time_interpolant(coarse, std::min(t, coarse.back().t)).c;
    const P0Field b = time_interpolant(fine_restricted, std::min(t, fine.back().t)).c;
    return P0Field(a.values - b.values);
  };

  // Simpson per sub-interval; the squared difference is quadratic in t there.
  double total = 0.0;
  P0Field left = diff_at(nodes.front());
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    const double a = nodes[k], b = nodes[k + 1];
    const P0Field mid = diff_at(0.5 * (a + b));
    const P0Field right = diff_at(b);
    const double fa = std::pow(l2_norm(coarse_mesh, left), 2);
    const double fm = std::pow(l2_norm(coarse_mesh, mid), 2);
    const double fb = std::pow(l2_norm(coarse_mesh, right), 2);
    total += (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    left = right;
  }
  return std::sqrt(std::max(total, 0.0));
}

}  // namespace aquifer
