#pragma once

#include <Eigen/Core>

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace aquifer {

using Point = Eigen::Vector2d;

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rectangle {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  double area() const { return (x1 - x0) * (y1 - y0); }
  bool operator==(const Rectangle&) const = default;
};

/// Which rule produced the center distance d of an edge.
enum class DistanceRule { circumcenter, centroid_fallback };

struct Edge {
  std::array<int, 2> vertices;  // sorted ascending
  // cells[0] < cells[1]; cells[1] == -1 on the boundary
  std::array<int, 2> cells;
  bool boundary = false;
  // Unit normal oriented from cells[0] into cells[1] (outward on the boundary).
  Point normal;
  Point midpoint;
  double length = 0.0;
  // Interior: distance between the adjacent cell centers. Boundary: distance
  // from the cell center to the edge line.
  double center_distance = 0.0;
  double sigma = 0.0;  // length / center_distance
  DistanceRule rule = DistanceRule::circumcenter;

  bool interior() const { return !boundary; }
};

struct Cell {
  std::array<int, 3> vertices;  // counter-clockwise
  // edges[k] is the edge opposite vertices[k]
  std::array<int, 3> edges;
  // +1 if the global normal of edges[k] points out of this cell
  std::array<int, 3> edge_signs;
  double area = 0.0;
  Point centroid;
  Point circumcenter;
  double diameter = 0.0;  // longest edge
  double inradius = 0.0;
};

struct MeshMetrics {
  double h = 0.0;                  // max cell diameter
  double quasi_uniformity = 0.0;   // max diameter / min inscribed diameter
};

/// Conforming triangulation of a polygonal domain with all derived geometry.
/// Immutable after construction.
class Mesh {
 public:
  /// Builds connectivity and geometry from raw data. Clockwise cells are
  /// reoriented. Throws MeshError on zero-area cells, duplicated cells or
  /// edges shared by more than two cells. `first_cell_line` lets file
  /// loaders report the line of a bad cell.
  Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> cells,
       int first_cell_line = 0);

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const std::vector<Edge>& edges() const { return edges_; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_cells() const { return static_cast<int>(cells_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_boundary_edges() const { return num_boundary_edges_; }

  const Point& vertex(int i) const { return vertices_[i]; }
  const Cell& cell(int i) const { return cells_[i]; }
  const Edge& edge(int i) const { return edges_[i]; }

  double total_area() const;
  /// Area enclosed by the boundary edges (shoelace over outward-oriented edges).
  double boundary_enclosed_area() const;
  const MeshMetrics& metrics() const { return metrics_; }

  /// Cell containing `p` (closed triangles, tolerance relative to h), or
  /// nullopt outside the mesh.
  std::optional<int> locate(const Point& p) const;

  /// Count of edges whose center distance used the centroid fallback.
  int num_fallback_edges() const;

 private:
  void build_locator();

  std::vector<Point> vertices_;
  std::vector<Cell> cells_;
  std::vector<Edge> edges_;
  int num_boundary_edges_ = 0;
  MeshMetrics metrics_;

  // uniform bucket grid for locate()
  Point box_min_, box_max_;
  int grid_nx_ = 1, grid_ny_ = 1;
  std::vector<std::vector<int>> buckets_;
};

/// n x n squares over `domain`, each cut by the diagonal from lower-left to
/// upper-right. Throws InvalidArgument for n < 1.
Mesh build_structured_mesh(int n, const Rectangle& domain = {});

/// Reads the `vertices V cells C` text format.
Mesh load_mesh(const std::filesystem::path& path);
Mesh parse_mesh(const std::string& text);
/// Writes the text format read by load_mesh.
std::string format_mesh(const Mesh& mesh);

/// Circumcenter of a triangle. Throws InvalidArgument if degenerate.
Point circumcenter(const Point& a, const Point& b, const Point& c);
Point circumcenter(const Mesh& mesh, int cell);

double signed_area(const Point& a, const Point& b, const Point& c);

MeshMetrics mesh_metrics(const Mesh& mesh);

}  // namespace aquifer
