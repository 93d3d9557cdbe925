#include "aquifer/error.hpp"
#include "aquifer/mesh.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace aquifer;

namespace {

double raw_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * std::abs((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

}  // namespace

TEST_CASE("structured mesh counts") {
  for (int n : {1, 2, 3, 7}) {
    const Mesh m = build_structured_mesh(n);
    CHECK(m.num_cells() == 2 * n * n);
    CHECK(m.num_vertices() == (n + 1) * (n + 1));
    CHECK(m.num_edges() == 3 * n * n + 2 * n);
    CHECK(m.num_boundary_edges() == 4 * n);
  }
  const Mesh one = build_structured_mesh(1);
  CHECK(one.num_cells() == 2);
  CHECK(one.num_vertices() == 4);
  CHECK(one.num_edges() == 5);
}

TEST_CASE("structured mesh rejects n < 1") {
  CHECK_THROWS_AS(build_structured_mesh(0), InvalidArgument);
  CHECK_THROWS_AS(build_structured_mesh(-3), InvalidArgument);
}

TEST_CASE("areas sum to the domain area") {
  CHECK(build_structured_mesh(2).total_area() == doctest::Approx(1.0).epsilon(1e-12));
  const Rectangle d{-1.0, 2.5, 0.5, 1.25};
  const Mesh m = build_structured_mesh(5, d);
  CHECK(std::abs(m.total_area() - d.area()) <= 1e-12 * d.area());
  CHECK(std::abs(m.boundary_enclosed_area() - d.area()) <= 1e-12 * d.area());
}

TEST_CASE("cells are positively oriented and areas match raw coordinates") {
  const Mesh m = build_structured_mesh(4, {0.0, 2.0, 0.0, 1.0});
  for (const auto& c : m.cells()) {
    const Point& a = m.vertex(c.vertices[0]);
    const Point& b = m.vertex(c.vertices[1]);
    const Point& d = m.vertex(c.vertices[2]);
    CHECK(signed_area(a, b, d) > 0.0);
    CHECK(c.area == doctest::Approx(raw_area(a, b, d)).epsilon(1e-14));
  }
}

TEST_CASE("Euler relation") {
  for (int n : {1, 4, 9}) {
    const Mesh m = build_structured_mesh(n);
    CHECK(m.num_vertices() - m.num_edges() + m.num_cells() == 1);
  }
}

TEST_CASE("edge adjacency and orientation") {
  const Mesh m = build_structured_mesh(3);
  for (int e = 0; e < m.num_edges(); ++e) {
    const Edge& edge = m.edge(e);
    if (edge.boundary) {
      CHECK(edge.cells[1] == -1);
      // outward: normal points away from the adjacent centroid
      CHECK(edge.normal.dot(edge.midpoint - m.cell(edge.cells[0]).centroid) > 0.0);
    } else {
      CHECK(edge.cells[0] < edge.cells[1]);
      CHECK(edge.normal.dot(m.cell(edge.cells[1]).centroid - m.cell(edge.cells[0]).centroid) > 0.0);
    }
    CHECK(edge.normal.norm() == doctest::Approx(1.0).epsilon(1e-15));
  }
  // each cell lists its edges opposite its vertices, with consistent signs
  for (int t = 0; t < m.num_cells(); ++t) {
    const Cell& c = m.cell(t);
    for (int k = 0; k < 3; ++k) {
      const Edge& edge = m.edge(c.edges[k]);
      CHECK(edge.vertices[0] != c.vertices[k]);
      CHECK(edge.vertices[1] != c.vertices[k]);
      const int expected = edge.cells[0] == t ? 1 : -1;
      CHECK(c.edge_signs[k] == expected);
    }
  }
}

TEST_CASE("every interior edge has two cells, every boundary edge one") {
  const Mesh m = build_structured_mesh(5);
  std::vector<int> seen(m.num_edges(), 0);
  for (const auto& c : m.cells()) {
    for (int e : c.edges) ++seen[e];
  }
  for (int e = 0; e < m.num_edges(); ++e) CHECK(seen[e] == (m.edge(e).boundary ? 1 : 2));
}

TEST_CASE("circumcenter examples") {
  const Point c1 = circumcenter(Point(0, 0), Point(1, 0), Point(0, 1));
  CHECK(c1.x() == doctest::Approx(0.5));
  CHECK(c1.y() == doctest::Approx(0.5));
  const Point c2 = circumcenter(Point(0, 0), Point(2, 0), Point(1, 1));
  CHECK(c2.x() == doctest::Approx(1.0));
  CHECK(std::abs(c2.y()) < 1e-15);
  const Point a(0, 0), b(1, 0), c(0.5, std::sqrt(3.0) / 2.0);
  const Point cc = circumcenter(a, b, c);
  const Point g = (a + b + c) / 3.0;
  CHECK((cc - g).norm() < 1e-15);
  CHECK_THROWS_AS(circumcenter(Point(0, 0), Point(1, 1), Point(2, 2)), InvalidArgument);
}

TEST_CASE("circumcenter equidistance on random triangles") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 500; ++i) {
    const Point a(u(rng), u(rng)), b(u(rng), u(rng)), c(u(rng), u(rng));
    if (raw_area(a, b, c) < 1e-3) continue;
    const Point x = circumcenter(a, b, c);
    const double ra = (x - a).norm();
    CHECK(std::abs((x - b).norm() - ra) <= 1e-12 * ra);
    CHECK(std::abs((x - c).norm() - ra) <= 1e-12 * ra);
  }
}

TEST_CASE("sigma is length over center distance, with centroid fallback on diagonals") {
  const Mesh m = build_structured_mesh(4);
  const double h = m.metrics().h;
  int fallback = 0;
  for (const auto& e : m.edges()) {
    const Point& p = m.vertex(e.vertices[0]);
    const Point& q = m.vertex(e.vertices[1]);
    CHECK(e.length == doctest::Approx((q - p).norm()).epsilon(1e-14));
    CHECK(e.center_distance > 0.0);
    CHECK(std::abs(e.sigma - e.length / e.center_distance) <= 1e-12 * e.sigma);
    if (e.boundary) continue;
    const Cell& a = m.cell(e.cells[0]);
    const Cell& b = m.cell(e.cells[1]);
    const double dc = (a.circumcenter - b.circumcenter).norm();
    if (dc < 1e-10 * h) {
      ++fallback;
      CHECK(e.rule == DistanceRule::centroid_fallback);
      CHECK(e.center_distance == doctest::Approx((a.centroid - b.centroid).norm()).epsilon(1e-14));
    } else {
      CHECK(e.rule == DistanceRule::circumcenter);
      CHECK(e.center_distance == doctest::Approx(dc).epsilon(1e-14));
    }
  }
  // the diagonals of the right triangles share their circumcenter
  CHECK(fallback == 16);
  CHECK(m.num_fallback_edges() == fallback);
}

TEST_CASE("mesh metrics") {
  const Mesh m4 = build_structured_mesh(4);
  CHECK(m4.metrics().h == doctest::Approx(std::sqrt(2.0) / 4.0).epsilon(1e-14));
  const double q1 = build_structured_mesh(1).metrics().quasi_uniformity;
  for (int n : {2, 5, 8}) {
    CHECK(build_structured_mesh(n).metrics().quasi_uniformity == doctest::Approx(q1).epsilon(1e-12));
  }
  CHECK(q1 >= 1.0);
  const Mesh eq({Point(0, 0), Point(1, 0), Point(0.5, std::sqrt(3.0) / 2.0)}, {{0, 1, 2}});
  const double q_eq = eq.metrics().quasi_uniformity;
  // equilateral: diameter / (2 inradius) = 1 / (2 / (2 sqrt 3)) = sqrt 3
  CHECK(q_eq == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  CHECK(q_eq < q1);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const Point a(u(rng), u(rng)), b(u(rng), u(rng)), c(u(rng), u(rng));
    if (raw_area(a, b, c) < 1e-3) continue;
    CHECK(Mesh({a, b, c}, {{0, 1, 2}}).metrics().quasi_uniformity >= q_eq * (1.0 - 1e-12));
  }
}

TEST_CASE("clockwise cells are reoriented") {
  const Mesh m({Point(0, 0), Point(1, 0), Point(0, 1)}, {{0, 2, 1}});
  CHECK(m.cell(0).area == doctest::Approx(0.5));
  const auto& v = m.cell(0).vertices;
  CHECK(signed_area(m.vertex(v[0]), m.vertex(v[1]), m.vertex(v[2])) > 0.0);
}

TEST_CASE("load_mesh round trip and errors") {
  const std::string dir = AQUIFER_TEST_DATA;
  const Mesh loaded = load_mesh(dir + "/unit_square_n1.mesh");
  const Mesh built = build_structured_mesh(1);
  REQUIRE(loaded.num_cells() == built.num_cells());
  CHECK(loaded.num_edges() == built.num_edges());
  for (int i = 0; i < built.num_vertices(); ++i) CHECK((loaded.vertex(i) - built.vertex(i)).norm() == 0.0);
  for (int t = 0; t < built.num_cells(); ++t) CHECK(loaded.cell(t).vertices == built.cell(t).vertices);
  CHECK(format_mesh(loaded) == format_mesh(built));

  try {
    load_mesh(dir + "/duplicate_cell.mesh");
    FAIL("expected a connectivity error");
  } catch (const MeshError& e) {
    CHECK(e.line() == 8);
  }
  try {
    load_mesh(dir + "/collinear.mesh");
    FAIL("expected a zero-area error");
  } catch (const MeshError& e) {
    CHECK(e.line() == 7);
    CHECK(std::string(e.what()).find("area") != std::string::npos);
  }
  CHECK_THROWS_AS(load_mesh(dir + "/missing.mesh"), MeshError);
}

TEST_CASE("parse_mesh reports malformed records with their line") {
  auto line_of = [](const std::string& text) {
    try {
      parse_mesh(text);
    } catch (const MeshError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("nodes 3 cells 1\n0 0\n1 0\n0 1\n0 1 2\n") == 1);
  CHECK(line_of("vertices 3 cells 1\n0 0\n1 x\n0 1\n0 1 2\n") == 3);
  CHECK(line_of("vertices 3 cells 1\n0 0\n1 0\n0 1\n0 1 5\n") == 5);
  CHECK(line_of("vertices 3 cells 2\n0 0\n1 0\n0 1\n0 1 2\n") > 0);
  CHECK(line_of("vertices 3 cells 1\n0 0\n1 0\n0 1\n0 1 2\n") == -1);
}

TEST_CASE("edge shared by three cells is rejected") {
  std::vector<Point> v{Point(0, 0), Point(1, 0), Point(0, 1), Point(0, -1), Point(1, 1)};
  CHECK_THROWS_AS(Mesh(v, {{0, 1, 2}, {0, 3, 1}, {0, 1, 4}}), MeshError);
}

TEST_CASE("locate") {
  const Mesh m = build_structured_mesh(4);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const Point p(u(rng), u(rng));
    const auto t = m.locate(p);
    REQUIRE(t.has_value());
    const auto& c = m.cell(*t);
    const double s = raw_area(p, m.vertex(c.vertices[0]), m.vertex(c.vertices[1])) +
                     raw_area(p, m.vertex(c.vertices[1]), m.vertex(c.vertices[2])) +
                     raw_area(p, m.vertex(c.vertices[2]), m.vertex(c.vertices[0]));
    CHECK(s == doctest::Approx(c.area).epsilon(1e-10));
  }
  CHECK_FALSE(m.locate(Point(1.5, 0.5)).has_value());
}
