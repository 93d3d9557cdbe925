#include "aquifer/output.hpp"

#include "aquifer/assembly.hpp"
#include "aquifer/error.hpp"
#include "format.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

namespace aquifer {

using detail::format_number;

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw IoError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename '" + tmp.string() + "' to '" + path.string() + "'");
  }
}

void prepare_output_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "'");
  }
  const auto probe = dir / ".aquifer_write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw IoError("output directory '" + dir.string() + "' is not writable");
  }
  std::filesystem::remove(probe, ec);
}

std::string concentration_csv(const Mesh& mesh, const P0Field& c) {
  std::ostringstream o;
  o << "cell,x,y,c\n";
  for (int t = 0; t < mesh.num_cells(); ++t) {
    const Point& x = mesh.cell(t).centroid;
    o << t << ',' << format_number(x.x()) << ',' << format_number(x.y()) << ',' << format_number(c[t]) << '\n';
  }
  return o.str();
}

std::string flux_csv(const RT0Field& flux) {
  std::ostringstream o;
  o << "edge,flux\n";
  for (Eigen::Index e = 0; e < flux.values.size(); ++e) o << e << ',' << format_number(flux.values[e]) << '\n';
  return o.str();
}

std::string fields_vtk(const Mesh& mesh, const P0Field& c, const RT0Field& flux, const std::string& title) {
  std::ostringstream o;
  o << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  o << "POINTS " << mesh.num_vertices() << " double\n";
  for (const auto& p : mesh.vertices()) o << format_number(p.x()) << ' ' << format_number(p.y()) << " 0\n";
  o << "CELLS " << mesh.num_cells() << ' ' << 4 * mesh.num_cells() << '\n';
  for (const auto& cell : mesh.cells()) {
    o << "3 " << cell.vertices[0] << ' ' << cell.vertices[1] << ' ' << cell.vertices[2] << '\n';
  }
  o << "CELL_TYPES " << mesh.num_cells() << '\n';
  for (int t = 0; t < mesh.num_cells(); ++t) o << "5\n";
  o << "CELL_DATA " << mesh.num_cells() << '\n';
  o << "SCALARS c double 1\nLOOKUP_TABLE default\n";
  for (int t = 0; t < mesh.num_cells(); ++t) o << format_number(c[t]) << '\n';
  o << "VECTORS flux double\n";
  for (int t = 0; t < mesh.num_cells(); ++t) {
    const Point u = rt0_cell_average(mesh, flux, t);
    o << format_number(u.x()) << ' ' << format_number(u.y()) << " 0\n";
  }
  return o.str();
}

std::string ledger_csv(const std::vector<LedgerRow>& rows) {
  std::ostringstream o;
  o << kLedgerHeader << '\n';
  for (const auto& r : rows) {
    const auto& l = r.ledger;
    o << r.step << ',' << format_number(r.t) << ',' << format_number(l.sum_dc2_over_tau) << ','
      << format_number(l.sup_vc2) << ',' << format_number(l.sum_dvc2) << ',' << format_number(l.tau_sum_div2) << ','
      << format_number(l.tau_sum_c2) << ',' << format_number(l.tau_sum_vc2) << ',' << format_number(r.min_c) << ','
      << format_number(r.mass_residual) << '\n';
  }
  return o.str();
}

std::string step_label(int step) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%06d", step);
  return buf;
}

}  // namespace aquifer
