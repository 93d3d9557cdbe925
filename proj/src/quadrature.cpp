#include "aquifer/quadrature.hpp"

#include <cmath>

namespace aquifer::quadrature {

namespace {

const std::array<TrianglePoint, 3> kMidpoint{{
    {{0.5, 0.5, 0.0}, 1.0 / 3.0},
    {{0.0, 0.5, 0.5}, 1.0 / 3.0},
    {{0.5, 0.0, 0.5}, 1.0 / 3.0},
}};

std::array<TrianglePoint, 7> make_seven_point() {
  const double r15 = std::sqrt(15.0);
  const double a1 = (6.0 - r15) / 21.0;
  const double a2 = (6.0 + r15) / 21.0;
  const double w1 = (155.0 - r15) / 1200.0;
  const double w2 = (155.0 + r15) / 1200.0;
  const double b1 = 1.0 - 2.0 * a1;
  const double b2 = 1.0 - 2.0 * a2;
  return {{
      {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 9.0 / 40.0},
      {{a1, a1, b1}, w1},
      {{a1, b1, a1}, w1},
      {{b1, a1, a1}, w1},
      {{a2, a2, b2}, w2},
      {{a2, b2, a2}, w2},
      {{b2, a2, a2}, w2},
  }};
}

const std::array<TrianglePoint, 7> kSeven = make_seven_point();

std::array<LinePoint, 3> make_gauss3() {
  const double g = 0.5 * std::sqrt(3.0 / 5.0);
  return {{{0.5 - g, 5.0 / 18.0}, {0.5, 8.0 / 18.0}, {0.5 + g, 5.0 / 18.0}}};
}

const std::array<LinePoint, 3> kGauss3 = make_gauss3();

}  // namespace

std::span<const TrianglePoint> edge_midpoint_rule() { return kMidpoint; }
std::span<const TrianglePoint> seven_point_rule() { return kSeven; }
std::span<const LinePoint> gauss3_line() { return kGauss3; }

}  // namespace aquifer::quadrature
