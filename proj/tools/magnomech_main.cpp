// magnomech — steady-state simulator for the driven magnon-photon-phonon
// cavity system: mean-field derivation, drift/diffusion assembly, Lyapunov
// steady state, Gaussian entanglement measures, and figure-reproduction
// sweeps with CSV + meta.json output.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "magnomech/config.hpp"
#include "magnomech/errors.hpp"
#include "magnomech/gaussian.hpp"
#include "magnomech/io.hpp"
#include "magnomech/linalg.hpp"
#include "magnomech/model.hpp"
#include "magnomech/sweep.hpp"
#include "magnomech/version.hpp"

namespace {

using namespace magnomech;

std::string out_path(const cli::RunConfig& rc, const std::string& filename) {
  return (std::filesystem::path(rc.out_dir) / filename).string();
}

int cmd_derive(const cli::RunConfig& rc, bool write_csv) {
  const model::DerivedState d = model::derive(
      rc.params, {rc.thresholds.low_excitation, rc.thresholds.kerr});
  std::cout << io::derive_report(rc.params, d);
  if (write_csv) {
    io::write_file(out_path(rc, "derive.csv"), io::derive_csv(rc.params, d));
    std::cout << "  wrote " << out_path(rc, "derive.csv") << "\n";
  }
  return cli::k_exit_ok;
}

int cmd_stability(const cli::RunConfig& rc) {
  const model::DerivedState d = model::derive(rc.params);
  const RealMatrix a = model::drift_matrix(rc.params, d.g_mb_eff);
  const auto eigs = linalg::eigenvalues_general(a);
  const model::StabilityVerdict verdict = model::stability_check(a);
  std::cout << io::stability_report(rc.params, verdict, eigs);
  return cli::k_exit_ok;
}

int cmd_entangle(const cli::RunConfig& rc) {
  const model::DerivedState d = model::derive(
      rc.params, {rc.thresholds.low_excitation, rc.thresholds.kerr});
  const sweep::PointResult point = sweep::evaluate_point(rc.params);
  std::cout << io::entangle_report(rc.params, d, point);
  if (!point.stable) {
    std::cerr << "unstable drift matrix: max Re(eig) = " << point.max_real_eig
              << " (omega_b units)\n";
    return cli::k_exit_instability;
  }
  return cli::k_exit_ok;
}

int run_and_write_sweep(const cli::RunConfig& rc, const sweep::SweepSpec& spec,
                        const std::string& stem, const std::string& command,
                        const std::string& figure) {
  const sweep::SweepTable table = sweep::run_sweep(spec, rc.workers);
  io::write_file(out_path(rc, stem + ".csv"), io::sweep_csv(table));
  io::write_file(out_path(rc, stem + ".meta.json"),
                 io::sweep_meta_json(table, command, figure, rc.thresholds));
  std::cout << stem << ":\n" << io::sweep_summary(table);
  std::cout << "  wrote " << out_path(rc, stem + ".csv") << " and " << out_path(rc, stem + ".meta.json")
            << "\n";
  return cli::k_exit_ok;
}

int cmd_sweep(const cli::RunConfig& rc) {
  if (!rc.sweep_spec) {
    throw ConfigError("the sweep command needs a 'sweep' block in the config file");
  }
  return run_and_write_sweep(rc, *rc.sweep_spec, "sweep", "sweep", "");
}

int cmd_reproduce(const cli::RunConfig& rc) {
  if (rc.figure.empty()) throw ConfigError("reproduce needs --figure <name>");
  const sweep::SweepSpec spec = sweep::figure_preset(rc.figure);
  return run_and_write_sweep(rc, spec, rc.figure, "reproduce", rc.figure);
}

int cmd_validate(const cli::RunConfig& rc) {
  const model::DerivedState d = model::derive(
      rc.params, {rc.thresholds.low_excitation, rc.thresholds.kerr});
  const model::ValidityReport report = model::validity_report(rc.params, d);
  std::cout << io::validate_report(rc.params, report, rc.thresholds);
  return report.all_pass() ? cli::k_exit_ok : cli::k_exit_validity;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"steady-state cavity-magnomechanics simulator"};
  app.set_version_flag("--version", std::string("magnomech ") + magnomech::k_version);
  app.require_subcommand(1);

  cli::ParseInputs in;
  std::string config_path, figure, out_dir;
  unsigned workers = 0;
  double temperature = 0.0;
  std::vector<std::string> sets;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--workers", workers, "worker thread count");
    sub->add_option("--set", sets, "override a config key (key=value, repeatable)");
    sub->add_option("--temperature", temperature, "bath temperature [K]");
    return sub;
  };

  CLI::App* derive = add_common(app.add_subcommand("derive", "print derived quantities"));
  bool derive_csv = false;
  derive->add_flag("--csv", derive_csv, "also write derive.csv to --out");
  CLI::App* stability = add_common(app.add_subcommand("stability", "drift-matrix eigenvalues and verdict"));
  CLI::App* entangle = add_common(app.add_subcommand("entangle", "single-point entanglement measures"));
  CLI::App* sweep_cmd = add_common(app.add_subcommand("sweep", "run the sweep block from the config"));
  CLI::App* reproduce = add_common(app.add_subcommand("reproduce", "run a figure preset"));
  reproduce->add_option("--figure", figure, "preset name (fig2a..fig4b)")->required();
  CLI::App* validate = add_common(app.add_subcommand("validate", "linearization validity checks"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::k_exit_config;
  }

  try {
    if (derive->parsed()) in.command = cli::Command::Derive;
    if (stability->parsed()) in.command = cli::Command::Stability;
    if (entangle->parsed()) in.command = cli::Command::Entangle;
    if (sweep_cmd->parsed()) in.command = cli::Command::Sweep;
    if (reproduce->parsed()) in.command = cli::Command::Reproduce;
    if (validate->parsed()) in.command = cli::Command::Validate;

    CLI::App* active = app.get_subcommands().front();
    if (!config_path.empty()) in.config_path = config_path;
    if (active->count("--out") > 0) in.out_dir = out_dir;
    if (active->count("--workers") > 0) in.workers = workers;
    if (active->count("--temperature") > 0) in.temperature = temperature;
    if (!figure.empty()) in.figure = figure;
    in.set_overrides = sets;

    const cli::RunConfig rc = cli::parse_config(in);
    switch (rc.command) {
      case cli::Command::Derive: return cmd_derive(rc, derive_csv);
      case cli::Command::Stability: return cmd_stability(rc);
      case cli::Command::Entangle: return cmd_entangle(rc);
      case cli::Command::Sweep: return cmd_sweep(rc);
      case cli::Command::Reproduce: return cmd_reproduce(rc);
      case cli::Command::Validate: return cmd_validate(rc);
    }
    return cli::k_exit_ok;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::exit_code_for(e);
  }
}
