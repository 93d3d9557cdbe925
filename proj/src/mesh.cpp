#include "aquifer/mesh.hpp"

#include "aquifer/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace aquifer {

namespace {

constexpr double kFallbackFactor = 1e-10;

double distance_to_line(const Point& p, const Point& a, const Point& b) {
  const Point d = b - a;
  const double cross = d.x() * (p.y() - a.y()) - d.y() * (p.x() - a.x());
  return std::abs(cross) / d.norm();
}

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

}  // namespace

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

Point circumcenter(const Point& a, const Point& b, const Point& c) {
  // Solve |x-a|^2 = |x-b|^2 = |x-c|^2 relative to a.
  const Point ab = b - a;
  const Point ac = c - a;
  const double det = 2.0 * (ab.x() * ac.y() - ab.y() * ac.x());
  const double scale = std::max(ab.squaredNorm(), ac.squaredNorm());
  if (!(std::abs(det) > 1e-14 * scale) || !std::isfinite(det)) {
    throw InvalidArgument("circumcenter: degenerate triangle");
  }
  const double ab2 = ab.squaredNorm();
  const double ac2 = ac.squaredNorm();
  const double ux = (ac.y() * ab2 - ab.y() * ac2) / det;
  const double uy = (ab.x() * ac2 - ac.x() * ab2) / det;
  return a + Point(ux, uy);
}

Point circumcenter(const Mesh& mesh, int cell) {
  const auto& v = mesh.cell(cell).vertices;
  return circumcenter(mesh.vertex(v[0]), mesh.vertex(v[1]), mesh.vertex(v[2]));
}

Mesh::Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> cells, int first_cell_line)
    : vertices_(std::move(vertices)) {
  const int nv = num_vertices();
  auto line_of = [&](int c) { return first_cell_line > 0 ? first_cell_line + c : 0; };

  if (cells.empty()) throw MeshError("mesh has no cells");
  for (const auto& p : vertices_) {
    if (!std::isfinite(p.x()) || !std::isfinite(p.y())) throw MeshError("non-finite vertex coordinate");
  }

  std::set<std::array<int, 3>> seen;
  cells_.reserve(cells.size());
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    auto tri = cells[ci];
    const int c = static_cast<int>(ci);
    for (int k : tri) {
      if (k < 0 || k >= nv) throw MeshError("vertex index out of range", line_of(c));
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      throw MeshError("cell repeats a vertex", line_of(c));
    }
    auto sorted = tri;
    std::sort(sorted.begin(), sorted.end());
    if (!seen.insert(sorted).second) throw MeshError("duplicated cell", line_of(c));

    double area = signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
    const double scale = std::max({(vertices_[tri[1]] - vertices_[tri[0]]).squaredNorm(),
                                   (vertices_[tri[2]] - vertices_[tri[0]]).squaredNorm(),
                                   (vertices_[tri[2]] - vertices_[tri[1]]).squaredNorm()});
    if (!(std::abs(area) > 1e-14 * scale)) throw MeshError("zero-area cell", line_of(c));
    if (area < 0) {
      std::swap(tri[1], tri[2]);
      area = -area;
    }
    Cell cell;
    cell.vertices = tri;
    cell.area = area;
    const Point& a = vertices_[tri[0]];
    const Point& b = vertices_[tri[1]];
    const Point& cc = vertices_[tri[2]];
    cell.centroid = (a + b + cc) / 3.0;
    cell.circumcenter = circumcenter(a, b, cc);
    const double la = (b - cc).norm(), lb = (cc - a).norm(), lc = (a - b).norm();
    cell.diameter = std::max({la, lb, lc});
    cell.inradius = 2.0 * area / (la + lb + lc);
    cells_.push_back(cell);
  }

  // Edges in order of first encounter.
  std::unordered_map<std::uint64_t, int> index;
  index.reserve(cells_.size() * 2);
  for (int c = 0; c < num_cells(); ++c) {
    Cell& cell = cells_[c];
    for (int k = 0; k < 3; ++k) {
      const int a = cell.vertices[(k + 1) % 3];
      const int b = cell.vertices[(k + 2) % 3];
      const auto key = edge_key(a, b);
      auto it = index.find(key);
      if (it == index.end()) {
        Edge e;
        e.vertices = {std::min(a, b), std::max(a, b)};
        e.cells = {c, -1};
        index.emplace(key, num_edges());
        cell.edges[k] = num_edges();
        edges_.push_back(e);
      } else {
        Edge& e = edges_[it->second];
        if (e.cells[1] != -1) throw MeshError("edge shared by more than two cells", line_of(c));
        e.cells[1] = c;  // cells visited in increasing order
        cell.edges[k] = it->second;
      }
    }
  }

  double hmax = 0.0;
  for (const auto& c : cells_) hmax = std::max(hmax, c.diameter);

  for (auto& e : edges_) {
    e.boundary = e.cells[1] == -1;
    const Point& p = vertices_[e.vertices[0]];
    const Point& q = vertices_[e.vertices[1]];
    e.length = (q - p).norm();
    e.midpoint = 0.5 * (p + q);
    Point n(q.y() - p.y(), p.x() - q.x());
    n /= n.norm();
    // orient out of cells[0]
    if (n.dot(e.midpoint - cells_[e.cells[0]].centroid) < 0) n = -n;
    e.normal = n;

    const Cell& c0 = cells_[e.cells[0]];
    double d = 0.0;
    if (e.boundary) {
      ++num_boundary_edges_;
      d = distance_to_line(c0.circumcenter, p, q);
      if (d < kFallbackFactor * hmax) {
        d = distance_to_line(c0.centroid, p, q);
        e.rule = DistanceRule::centroid_fallback;
      }
    } else {
      const Cell& c1 = cells_[e.cells[1]];
      d = (c1.circumcenter - c0.circumcenter).norm();
      if (d < kFallbackFactor * hmax) {
        d = (c1.centroid - c0.centroid).norm();
        e.rule = DistanceRule::centroid_fallback;
      }
    }
    e.center_distance = d;
    e.sigma = e.length / d;
  }

  for (int c = 0; c < num_cells(); ++c) {
    Cell& cell = cells_[c];
    for (int k = 0; k < 3; ++k) cell.edge_signs[k] = edges_[cell.edges[k]].cells[0] == c ? 1 : -1;
  }

  metrics_ = aquifer::mesh_metrics(*this);
  build_locator();
}

double Mesh::total_area() const {
  double s = 0.0;
  for (const auto& c : cells_) s += c.area;
  return s;
}

double Mesh::boundary_enclosed_area() const {
  double s = 0.0;
  for (const auto& e : edges_) {
    if (!e.boundary) continue;
    Point p = vertices_[e.vertices[0]];
    Point q = vertices_[e.vertices[1]];
    // traverse so the outward normal is on the right
    const Point t = q - p;
    if (t.x() * e.normal.y() - t.y() * e.normal.x() > 0) std::swap(p, q);
    s += 0.5 * (p.x() * q.y() - q.x() * p.y());
  }
  return s;
}

int Mesh::num_fallback_edges() const {
  return static_cast<int>(std::count_if(edges_.begin(), edges_.end(), [](const Edge& e) {
    return e.rule == DistanceRule::centroid_fallback;
  }));
}

void Mesh::build_locator() {
  box_min_ = vertices_.front();
  box_max_ = vertices_.front();
  for (const auto& p : vertices_) {
    box_min_ = box_min_.cwiseMin(p);
    box_max_ = box_max_.cwiseMax(p);
  }
  const int n = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(num_cells()) / 2.0)));
  grid_nx_ = n;
  grid_ny_ = n;
  buckets_.assign(static_cast<std::size_t>(grid_nx_) * grid_ny_, {});
  const Point span = (box_max_ - box_min_).cwiseMax(Point(1e-300, 1e-300));
  for (int c = 0; c < num_cells(); ++c) {
    Point lo = vertices_[cells_[c].vertices[0]], hi = lo;
    for (int v : cells_[c].vertices) {
      lo = lo.cwiseMin(vertices_[v]);
      hi = hi.cwiseMax(vertices_[v]);
    }
    const int i0 = std::clamp(static_cast<int>((lo.x() - box_min_.x()) / span.x() * grid_nx_), 0, grid_nx_ - 1);
    const int i1 = std::clamp(static_cast<int>((hi.x() - box_min_.x()) / span.x() * grid_nx_), 0, grid_nx_ - 1);
    const int j0 = std::clamp(static_cast<int>((lo.y() - box_min_.y()) / span.y() * grid_ny_), 0, grid_ny_ - 1);
    const int j1 = std::clamp(static_cast<int>((hi.y() - box_min_.y()) / span.y() * grid_ny_), 0, grid_ny_ - 1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) buckets_[static_cast<std::size_t>(j) * grid_nx_ + i].push_back(c);
  }
}

std::optional<int> Mesh::locate(const Point& p) const {
  const double tol = 1e-12 * metrics_.h;
  if ((p.array() < box_min_.array() - tol).any() || (p.array() > box_max_.array() + tol).any()) {
    return std::nullopt;
  }
  const Point span = (box_max_ - box_min_).cwiseMax(Point(1e-300, 1e-300));
  const int i = std::clamp(static_cast<int>((p.x() - box_min_.x()) / span.x() * grid_nx_), 0, grid_nx_ - 1);
  const int j = std::clamp(static_cast<int>((p.y() - box_min_.y()) / span.y() * grid_ny_), 0, grid_ny_ - 1);
  for (int c : buckets_[static_cast<std::size_t>(j) * grid_nx_ + i]) {
    const auto& v = cells_[c].vertices;
    const Point &a = vertices_[v[0]], &b = vertices_[v[1]], &cc = vertices_[v[2]];
    const double scale = tol * metrics_.h;
    if (signed_area(a, b, p) >= -scale && signed_area(b, cc, p) >= -scale && signed_area(cc, a, p) >= -scale) {
      return c;
    }
  }
  return std::nullopt;
}

MeshMetrics mesh_metrics(const Mesh& mesh) {
  MeshMetrics m;
  double min_inscribed = std::numeric_limits<double>::infinity();
  for (const auto& c : mesh.cells()) {
    m.h = std::max(m.h, c.diameter);
    min_inscribed = std::min(min_inscribed, 2.0 * c.inradius);
  }
  m.quasi_uniformity = m.h / min_inscribed;
  return m;
}

Mesh build_structured_mesh(int n, const Rectangle& domain) {
  if (n < 1) throw InvalidArgument("build_structured_mesh: n must be >= 1");
  if (!(domain.x1 > domain.x0) || !(domain.y1 > domain.y0)) {
    throw InvalidArgument("build_structured_mesh: empty domain");
  }
  std::vector<Point> vertices;
  vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      // exact endpoints
      const double x = i == n ? domain.x1 : domain.x0 + (domain.x1 - domain.x0) * i / n;
      const double y = j == n ? domain.y1 : domain.y0 + (domain.y1 - domain.y0) * j / n;
      vertices.emplace_back(x, y);
    }
  }
  std::vector<std::array<int, 3>> cells;
  cells.reserve(static_cast<std::size_t>(2) * n * n);
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return Mesh(std::move(vertices), std::move(cells));
}

Mesh parse_mesh(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;

  auto next_content_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      const auto pos = line.find_first_not_of(" \t\r");
      if (pos != std::string::npos) return true;
    }
    return false;
  };

  if (!next_content_line()) throw MeshError("empty mesh file", 1);
  std::istringstream header(line);
  std::string kv, kc;
  long long nv = -1, nc = -1;
  if (!(header >> kv >> nv >> kc >> nc) || kv != "vertices" || kc != "cells" || nv < 3 || nc < 1) {
    throw MeshError("expected header 'vertices <V> cells <C>'", lineno);
  }
  std::string extra;
  if (header >> extra) throw MeshError("trailing data in header", lineno);

  std::vector<Point> vertices;
  vertices.reserve(static_cast<std::size_t>(nv));
  for (long long i = 0; i < nv; ++i) {
    if (!next_content_line()) throw MeshError("unexpected end of file in vertex block", lineno + 1);
    std::istringstream ls(line);
    double x = 0, y = 0;
    if (!(ls >> x >> y) || (ls >> extra)) throw MeshError("expected 'x y'", lineno);
    vertices.emplace_back(x, y);
  }
  std::vector<std::array<int, 3>> cells;
  std::vector<int> cell_lines;
  cells.reserve(static_cast<std::size_t>(nc));
  for (long long i = 0; i < nc; ++i) {
    if (!next_content_line()) throw MeshError("unexpected end of file in cell block", lineno + 1);
    std::istringstream ls(line);
    long long a = 0, b = 0, c = 0;
    if (!(ls >> a >> b >> c) || (ls >> extra)) throw MeshError("expected 'i j k'", lineno);
    for (long long k : {a, b, c}) {
      if (k < 0 || k >= nv) throw MeshError("vertex index out of range", lineno);
    }
    cells.push_back({static_cast<int>(a), static_cast<int>(b), static_cast<int>(c)});
    cell_lines.push_back(lineno);
  }
  if (next_content_line()) throw MeshError("trailing data after cell block", lineno);

  try {
    return Mesh(std::move(vertices), std::move(cells), 1);
  } catch (const MeshError& e) {
    // Mesh reports line = 1 + cell index; map back to the file line.
    if (e.line() > 0) {
      const int idx = e.line() - 1;
      const std::string msg = e.what();
      const auto colon = msg.find(": ");
      throw MeshError(colon == std::string::npos ? msg : msg.substr(colon + 2), cell_lines[idx]);
    }
    throw;
  }
}

Mesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_mesh(buf.str());
}

std::string format_mesh(const Mesh& mesh) {
  std::ostringstream out;
  out.precision(17);
  out << "vertices " << mesh.num_vertices() << " cells " << mesh.num_cells() << "\n";
  for (const auto& p : mesh.vertices()) out << p.x() << " " << p.y() << "\n";
  for (const auto& c : mesh.cells()) {
    out << c.vertices[0] << " " << c.vertices[1] << " " << c.vertices[2] << "\n";
  }
  return out.str();
}

}  // namespace aquifer
