#include "nsdv/output.hpp"

#include <fstream>

#include "nsdv/effective.hpp"
#include "nsdv/errors.hpp"
#include "nsdv/format.hpp"

#ifndef NSDV_BUILD_ID
#define NSDV_BUILD_ID "unknown"
#endif

namespace nsdv {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open " + path.string() + " for writing");
  return f;
}

}  // namespace

std::string build_id() { return NSDV_BUILD_ID; }

std::string footer_line(const std::string& config_hash) {
  return "# build=" + build_id() + " config_hash=" + config_hash;
}

void write_snapshot_csv(const std::filesystem::path& path, const FluidState& s,
                        const Grid1D& g, const ModelParams& p,
                        const std::string& config_hash) {
  const auto f = effective_fields(s, g, p);
  auto out = open_out(path);
  out << "x,rho,u,v,w1,y,udot\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    out << format_double(g.x(i)) << ',' << format_double(s.rho[i]) << ','
        << format_double(s.u[i]) << ',' << format_double(f.v[i]) << ','
        << format_double(f.w1[i]) << ',' << format_double(f.y[i]) << ','
        << format_double(f.udot[i]) << '\n';
  }
  out << footer_line(config_hash) << '\n';
}

void write_manifest(const std::filesystem::path& path,
                    std::span<const ManifestEntry> entries,
                    const std::string& config_hash) {
  auto out = open_out(path);
  out << "{\"snapshots\": [\n";
  for (std::size_t k = 0; k < entries.size(); ++k) {
    out << "  {\"t\": " << format_double(entries[k].time) << ", \"file\": \""
        << entries[k].file << "\"}" << (k + 1 < entries.size() ? "," : "") << '\n';
  }
  out << "]}\n" << footer_line(config_hash) << '\n';
}

void write_diagnostics_csv(const std::filesystem::path& path,
                           const DiagnosticSeries& d,
                           const std::string& config_hash) {
  auto out = open_out(path);
  out << "t,energy,energy_diss_accum,bd,bd_diss_accum,A,B,y_max,oleinik_slope,"
         "inv_rho_max,rho_max,bv_v,w1_max,flags\n";
  for (std::size_t k = 0; k < d.times.size(); ++k) {
    const double row[] = {d.times[k],      d.energy[k],      d.energy_diss[k],
                          d.bd_entropy[k], d.bd_diss[k],     d.hoff_A[k],
                          d.hoff_B[k],     d.y_max[k],       d.oleinik_slope[k],
                          d.inv_rho_max[k], d.rho_max[k],    d.bv_norm_v[k],
                          d.w1_max[k]};
    for (double v : row) out << format_double(v) << ',';
    out << flag_string(d.flags[k]) << '\n';
  }
  out << footer_line(config_hash) << '\n';
}

void write_plot_data(const std::filesystem::path& path,
                     std::span<const double> x, std::span<const double> y,
                     const std::string& x_label, const std::string& y_label,
                     const std::string& config_hash) {
  if (x.size() != y.size()) throw ShapeError("write_plot_data: column lengths differ");
  auto out = open_out(path);
  out << "# " << x_label << ' ' << y_label << '\n';
  for (std::size_t i = 0; i < x.size(); ++i)
    out << format_double(x[i]) << ' ' << format_double(y[i]) << '\n';
  out << footer_line(config_hash) << '\n';
}

}  // namespace nsdv
