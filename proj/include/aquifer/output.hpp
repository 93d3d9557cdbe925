#pragma once

#include "aquifer/fields.hpp"
#include "aquifer/mesh.hpp"
#include "aquifer/transport.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace aquifer {

/// Writes `contents` to a temporary sibling and renames it over `path`.
/// Throws IoError on failure.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// Creates `dir` if needed and checks that it is writable.
void prepare_output_dir(const std::filesystem::path& dir);

/// `cell,x,y,c` with centroid coordinates.
std::string concentration_csv(const Mesh& mesh, const P0Field& c);
/// `edge,flux` with the RT0 coefficient of each edge.
std::string flux_csv(const RT0Field& flux);
/// Legacy ASCII unstructured grid with CELL_DATA: scalar c and the
/// cell-averaged flux vector.
std::string fields_vtk(const Mesh& mesh, const P0Field& c, const RT0Field& flux, const std::string& title);

/// One ledger row per step.
struct LedgerRow {
  int step = 0;
  double t = 0.0;
  StabilityLedger ledger;
  double min_c = 0.0;
  double mass_residual = 0.0;
};

inline constexpr const char* kLedgerHeader =
    "step,t,sum_dc2_over_tau,sup_vc2,sum_dvc2,tau_sum_div2,tau_sum_c2,tau_sum_vc2,min_c,mass_residual";

std::string ledger_csv(const std::vector<LedgerRow>& rows);

/// Zero-padded step label used in file names.
std::string step_label(int step);

}  // namespace aquifer
