#pragma once

#include <optional>
#include <string>
#include <vector>

#include "magnomech/model.hpp"
#include "magnomech/sweep.hpp"

namespace magnomech::cli {

// Configuration layer for the command-line tool. Config files are JSON with
// ordinary-frequency keys (suffix _hz, converted to angular internally);
// flags and --set overrides win over file values, which win over the
// defaults (the reference parameter set). Schema violations throw
// ConfigError with the offending key path.

enum class Command { Derive, Stability, Entangle, Sweep, Reproduce, Validate };

struct Thresholds {
  double low_excitation = 0.01;
  double kerr = 0.25;
  double tripartite = 1e-6;
};

struct RunConfig {
  Command command = Command::Derive;
  model::SystemParams params;
  Thresholds thresholds;
  std::optional<sweep::SweepSpec> sweep_spec;  // present when the config carries a sweep block
  std::string figure;                          // reproduce target
  std::string out_dir = ".";
  unsigned workers = 1;
};

/// The reference parameter set in physical coupling mode: omega_a/2pi = 10 GHz,
/// omega_b/2pi = 10 MHz, gamma_b/2pi = 100 Hz, kappa_a/2pi = kappa_m/2pi = 1 MHz,
/// g_ma/2pi = 3.2 MHz, T = 10 mK, delta_a = -omega_b, delta_m_eff = 0.9 omega_b,
/// B0 = 3.9e-5 T, g_mb/2pi = 0.2 Hz, 250 um sphere.
model::SystemParams default_params();

struct ParseInputs {
  Command command = Command::Derive;
  std::optional<std::string> config_path;
  std::vector<std::string> set_overrides;  // "key=value" or "nested.key=value"
  std::optional<double> temperature;       // --temperature flag [K]
  std::optional<std::string> figure;
  std::optional<std::string> out_dir;
  std::optional<unsigned> workers;
};

/// Build the fully validated RunConfig (defaults <- file <- --set <- flags).
RunConfig parse_config(const ParseInputs& in);

/// Worker-count resolution: explicit value, else MAGNOMECH_WORKERS, else
/// hardware concurrency.
unsigned resolve_workers(std::optional<unsigned> explicit_value);

/// Stable exit-code mapping: 0 success, 2 config, 3 derivation, 4 instability,
/// 5 unphysical CM, 6 I/O, 7 validity failure.
int exit_code_for(const std::exception& e) noexcept;

inline constexpr int k_exit_ok = 0;
inline constexpr int k_exit_config = 2;
inline constexpr int k_exit_derivation = 3;
inline constexpr int k_exit_instability = 4;
inline constexpr int k_exit_unphysical = 5;
inline constexpr int k_exit_io = 6;
inline constexpr int k_exit_validity = 7;

}  // namespace magnomech::cli
