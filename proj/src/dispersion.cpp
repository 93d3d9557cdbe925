#include "aquifer/dispersion.hpp"

#include "aquifer/error.hpp"

#include <algorithm>
#include <string>

namespace aquifer {

DispersionParams::DispersionParams(double molecular, double alpha_longitudinal, double alpha_transverse)
    : sm_(molecular), al_(alpha_longitudinal), at_(alpha_transverse) {
  if (!(sm_ > 0.0) || !std::isfinite(sm_)) {
    throw InvalidArgument("dispersion: molecular diffusion S_m must be > 0");
  }
  if (!(at_ >= 0.0) || !(al_ > at_) || !std::isfinite(al_)) {
    throw InvalidArgument("dispersion: requires alpha_L > alpha_T >= 0 (got alpha_L=" +
                          std::to_string(al_) + ", alpha_T=" + std::to_string(at_) + ")");
  }
}

DispersionBounds bound_constants(const DispersionParams& p, double v_max) {
  if (!(v_max >= 0.0)) throw InvalidArgument("bound_constants: v_max must be >= 0");
  DispersionBounds b{};
  const double sm = p.molecular();
  b.lambda_min = sm;
  b.lambda_max = sm + p.alpha_l() * v_max;
  b.m_minus = 1.0 / b.lambda_max;
  b.m_plus = std::min(v_max / b.lambda_max, 1.0 / p.alpha_l());
  // sqrt(S_m + alpha_L t^2) / (1 + t) has one interior minimum at
  // t = S_m / alpha_L, so the sup over [0, sqrt(v_max)] is at an endpoint.
  const double t = std::sqrt(v_max);
  b.sqrt_growth = std::max(std::sqrt(sm), std::sqrt(b.lambda_max) / (1.0 + t));
  b.c_disp = b.m_plus * b.sqrt_growth;
  return b;
}

}  // namespace aquifer
