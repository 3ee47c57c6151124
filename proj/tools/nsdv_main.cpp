// nsdv: run / verify / convergence / twin front end.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nsdv/config.hpp"
#include "nsdv/diagnostics.hpp"
#include "nsdv/effective.hpp"
#include "nsdv/errors.hpp"
#include "nsdv/format.hpp"
#include "nsdv/initdata.hpp"
#include "nsdv/output.hpp"
#include "nsdv/solver.hpp"
#include "nsdv/studies.hpp"

namespace fs = std::filesystem;
using namespace nsdv;

namespace {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kNumericalFailure = 3,
  kMonitorViolation = 4,
  kBlowUp = 5,
};

struct Loaded {
  ScenarioConfig cfg;
  std::string hash;
};

Loaded load(const std::string& path, std::optional<double> cadence) {
  Loaded l{load_config(path), {}};
  if (cadence) l.cfg.solver.output_cadence = *cadence;
  validate_config(l.cfg);
  l.hash = config_hash(l.cfg);
  return l;
}

// --out wins, then NSDV_OUT_DIR, then ./nsdv_out; runs are keyed by hash.
fs::path output_dir(const std::string& out, const std::string& hash) {
  fs::path root = "nsdv_out";
  if (!out.empty()) {
    root = out;
  } else if (const char* env = std::getenv("NSDV_OUT_DIR"); env && *env) {
    root = env;
  }
  return root / hash;
}

void write_text(const fs::path& path, const std::string& body, const std::string& hash) {
  fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open " + path.string() + " for writing");
  f << body << footer_line(hash) << '\n';
}

std::string snapshot_name(std::size_t k) {
  std::string s = std::to_string(k);
  return "snapshot_" + std::string(s.size() < 4 ? 4 - s.size() : 0, '0') + s + ".csv";
}

void write_run_outputs(const fs::path& dir, const Loaded& l, const Trajectory& tr,
                       const DiagnosticSeries& d) {
  const auto& g = tr.grid;
  const auto& p = tr.params;
  std::vector<ManifestEntry> entries;
  for (std::size_t k = 0; k < tr.snapshots.size(); ++k) {
    const auto name = snapshot_name(k);
    write_snapshot_csv(dir / name, tr.snapshots[k], g, p, l.hash);
    entries.push_back({tr.snapshots[k].time, name});
  }
  write_manifest(dir / "manifest.json", entries, l.hash);
  write_diagnostics_csv(dir / "diagnostics.csv", d, l.hash);
  write_text(dir / "config.cfg", serialize_config(l.cfg), l.hash);

  const auto xs = g.coords();
  const auto& last = tr.snapshots.back();
  const auto f = effective_fields(last, g, p);
  write_plot_data(dir / "plot_rho_final.dat", xs, last.rho, "x", "rho", l.hash);
  write_plot_data(dir / "plot_u_final.dat", xs, last.u, "x", "u", l.hash);
  write_plot_data(dir / "plot_v_final.dat", xs, f.v, "x", "v", l.hash);
  write_plot_data(dir / "plot_y_final.dat", xs, f.y, "x", "y", l.hash);
  write_plot_data(dir / "plot_energy.dat", d.times, d.energy, "t", "energy", l.hash);
  write_plot_data(dir / "plot_bd.dat", d.times, d.bd_entropy, "t", "bd", l.hash);
  write_plot_data(dir / "plot_y_max.dat", d.times, d.y_max, "t", "y_max", l.hash);
  write_plot_data(dir / "plot_inv_rho_max.dat", d.times, d.inv_rho_max, "t",
                  "inv_rho_max", l.hash);
}

int report_blowup(const Trajectory& tr) {
  const auto& b = *tr.blowup;
  std::cerr << "vacuum blow-up at t=" << format_double(b.time) << " node=" << b.node
            << " x=" << format_double(tr.grid.x(b.node)) << " rho=" << format_double(b.rho)
            << '\n';
  return kBlowUp;
}

int cmd_run(const std::string& config, const std::string& out, std::optional<double> cadence) {
  const auto l = load(config, cadence);
  const auto init = build_initial(l.cfg);
  const auto tr = run(init.state, l.cfg.solver, l.cfg.grid(), l.cfg.model());
  const auto d = evaluate_monitors(tr);
  const auto dir = output_dir(out, l.hash);
  write_run_outputs(dir, l, tr, d);
  std::cout << "wrote " << tr.snapshots.size() << " snapshots to " << dir.string() << '\n';
  std::cout << "steps=" << tr.steps << " t=" << format_double(tr.snapshots.back().time)
            << " flags=" << flag_string(d.all_flags()) << '\n';
  if (tr.blowup) return report_blowup(tr);
  return kOk;
}

int cmd_verify(const std::string& config, const std::string& out, std::optional<double> cadence) {
  const auto l = load(config, cadence);
  const auto init = build_initial(l.cfg);
  const auto tr = run(init.state, l.cfg.solver, l.cfg.grid(), l.cfg.model());
  const auto d = evaluate_monitors(tr);
  if (!out.empty() || std::getenv("NSDV_OUT_DIR")) write_run_outputs(output_dir(out, l.hash), l, tr, d);

  const std::uint32_t all = d.all_flags();
  auto line = [&](const char* name, std::uint32_t bit, bool checked) {
    std::cout << name << ": " << (!checked ? "skipped" : (all & bit) ? "VIOLATED" : "ok") << '\n';
  };
  std::cout << "config_hash=" << l.hash << " tolerance=" << format_double(d.tolerance) << '\n';
  line("energy", kFlagEnergy, true);
  line("bd", kFlagBd, true);
  line("y_envelope", kFlagYEnvelope, d.y_env_available);
  line("oleinik", kFlagOleinik, d.y_env_available);
  line("vacuum", kFlagVacuum, d.vacuum_comparison_available);
  line("w1_sign", kFlagW1Sign, d.w1_sign_checked);
  line("blowup", kFlagBlowUp, true);
  if (tr.blowup) return report_blowup(tr);
  return d.any_violation() ? kMonitorViolation : kOk;
}

int cmd_convergence(const std::string& id, int levels, const std::string& mode,
                    const std::string& out) {
  if (mode != "cfl" && mode != "dx2") throw ConfigError("dt-mode must be cfl or dx2");
  const auto table = mms_convergence(id, levels, mode == "cfl" ? DtMode::Cfl : DtMode::DxSquared);
  const auto text = format_convergence(table);
  std::cout << text;
  std::cout << "min_order=" << format_double(table.min_order())
            << " monotone=" << (table.monotone() ? "yes" : "no") << '\n';
  if (!out.empty()) {
    const fs::path dir = fs::path(out) / ("convergence_" + id + "_" + mode);
    std::ostringstream tag_os;
    tag_os << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(id + ":" + mode);
    const auto tag = tag_os.str();
    write_text(dir / "table.csv", text, tag);
    std::vector<double> dx, err;
    for (const auto& r : table.rows) {
      dx.push_back(r.dx);
      err.push_back(r.error);
    }
    write_plot_data(dir / "plot_error.dat", dx, err, "dx", "error", tag);
  }
  return table.monotone() ? kOk : kNumericalFailure;
}

int cmd_twin(const std::string& config, double epsilon, const std::string& out,
             std::optional<double> cadence) {
  const auto l = load(config, cadence);
  const auto init = build_initial(l.cfg);
  const auto r = twin_run_stability(init.state, l.cfg.solver, l.cfg.grid(), l.cfg.model(), epsilon);
  std::ostringstream os;
  os << "t,du_l2,du_weighted,dissipation,lhs,rhs,K\n";
  for (std::size_t k = 0; k < r.times.size(); ++k)
    os << format_double(r.times[k]) << ',' << format_double(r.du_l2[k]) << ','
       << format_double(r.du_weighted[k]) << ',' << format_double(r.dissipation[k]) << ','
       << format_double(r.lhs[k]) << ',' << format_double(r.rhs[k]) << ','
       << format_double(r.k_factor[k]) << '\n';
  std::cout << "# epsilon=" << format_double(r.epsilon) << " kappa=" << format_double(r.kappa) << '\n'
            << os.str() << "crossing_time=" << format_double(r.crossing_time)
            << " gronwall=" << (r.gronwall_holds ? "holds" : "fails") << '\n';
  if (!out.empty() || std::getenv("NSDV_OUT_DIR")) {
    const auto dir = output_dir(out, l.hash) / "twin";
    write_text(dir / "twin.csv", os.str(), l.hash);
    write_plot_data(dir / "plot_du_l2.dat", r.times, r.du_l2, "t", "du_l2", l.hash);
  }
  return r.gronwall_holds ? kOk : kMonitorViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1D compressible Navier-Stokes with density dependent viscosity"};
  app.require_subcommand(1);

  std::string config, out;
  std::optional<double> cadence;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "scenario file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output root (default $NSDV_OUT_DIR or ./nsdv_out)");
    sub->add_option("--cadence", cadence, "output cadence override")->check(CLI::PositiveNumber);
  };

  auto* run_cmd = app.add_subcommand("run", "integrate and write snapshots and diagnostics");
  add_common(run_cmd);
  auto* verify_cmd = app.add_subcommand("verify", "integrate and check every monitor");
  add_common(verify_cmd);

  auto* conv_cmd = app.add_subcommand("convergence", "manufactured-solution refinement study");
  std::string id;
  int levels = 4;
  std::string dt_mode = "dx2";
  conv_cmd->add_option("id", id, "manufactured solution id")->required();
  conv_cmd->add_option("--levels", levels, "refinement levels")->check(CLI::Range(2, 8));
  conv_cmd->add_option("--dt-mode", dt_mode, "cfl or dx2");
  conv_cmd->add_option("--out", out, "write the table under this directory");

  auto* twin_cmd = app.add_subcommand("twin", "perturbed twin run and stability report");
  add_common(twin_cmd);
  double epsilon = 1e-6;
  twin_cmd->add_option("--epsilon", epsilon, "perturbation amplitude")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*run_cmd) return cmd_run(config, out, cadence);
    if (*verify_cmd) return cmd_verify(config, out, cadence);
    if (*conv_cmd) return cmd_convergence(id, levels, dt_mode, out);
    if (*twin_cmd) return cmd_twin(config, epsilon, out, cadence);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const VacuumBlowUp& e) {
    std::cerr << "vacuum blow-up at t=" << format_double(e.time()) << ": " << e.what() << '\n';
    return kBlowUp;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kOk;
}
