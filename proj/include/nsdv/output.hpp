#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "nsdv/diagnostics.hpp"
#include "nsdv/model.hpp"

namespace nsdv {

/// Build identifier captured at configure time (git describe style).
std::string build_id();

/// "# build=<id> config_hash=<hash>".
std::string footer_line(const std::string& config_hash);

/// Snapshot CSV with header "x,rho,u,v,w1,y,udot".
void write_snapshot_csv(const std::filesystem::path& path, const FluidState& s,
                        const Grid1D& g, const ModelParams& p,
                        const std::string& config_hash);

struct ManifestEntry {
  double time;
  std::string file;
};

/// JSON-style index of snapshot files.
void write_manifest(const std::filesystem::path& path,
                    std::span<const ManifestEntry> entries,
                    const std::string& config_hash);

/// Diagnostics CSV, one row per output time.
void write_diagnostics_csv(const std::filesystem::path& path,
                           const DiagnosticSeries& d,
                           const std::string& config_hash);

/// Two-column whitespace separated data for plotting.
void write_plot_data(const std::filesystem::path& path,
                     std::span<const double> x, std::span<const double> y,
                     const std::string& x_label, const std::string& y_label,
                     const std::string& config_hash);

}  // namespace nsdv
