#pragma once

#include "aquifer/mesh.hpp"

#include <array>
#include <span>

namespace aquifer::quadrature {

/// Barycentric point with weight normalized so the weights sum to 1.
struct TrianglePoint {
  std::array<double, 3> bary;
  double weight;
};

/// Edge midpoints, degree 2.
std::span<const TrianglePoint> edge_midpoint_rule();
/// Strang-Fix / Dunavant 7-point rule, degree 5.
std::span<const TrianglePoint> seven_point_rule();

/// Gauss-Legendre on [0, 1]; weights sum to 1.
struct LinePoint {
  double s;
  double weight;
};
std::span<const LinePoint> gauss3_line();

inline Point map(const Point& a, const Point& b, const Point& c, const TrianglePoint& q) {
  return q.bary[0] * a + q.bary[1] * b + q.bary[2] * c;
}

/// Integral of f over triangle (a, b, c) with the given rule.
template <class F>
auto integrate(const Point& a, const Point& b, const Point& c, double area,
               std::span<const TrianglePoint> rule, F&& f) {
  auto sum = f(map(a, b, c, rule[0])) * rule[0].weight;
  for (std::size_t i = 1; i < rule.size(); ++i) sum += f(map(a, b, c, rule[i])) * rule[i].weight;
  return sum * area;
}

}  // namespace aquifer::quadrature
