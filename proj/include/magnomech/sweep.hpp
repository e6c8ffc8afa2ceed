#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "magnomech/model.hpp"

namespace magnomech::sweep {

// Grid evaluation of the full pipeline
//   params -> derived -> A, D -> stability -> V -> entanglement measures
// plus the presets that reproduce the reference figure panels. Grid points
// are independent pure-function evaluations; the worker pool writes into
// pre-indexed slots, so the output is identical for any worker count.

enum class Axis { DeltaA, DeltaMEff, Temperature, GRatio, KappaA };
std::string_view axis_name(Axis a) noexcept;
Axis axis_from_name(std::string_view name);  // throws ConfigError

struct AxisSpec {
  Axis axis = Axis::DeltaA;
  double min = 0.0;  // rad/s for frequency axes, K for temperature, plain ratio for GRatio
  double max = 0.0;
  int points = 101;
};

enum class Measure { EAm, EMb, EAb, RMin };
std::string_view measure_name(Measure m) noexcept;
Measure measure_from_name(std::string_view name);  // throws ConfigError

/// Inner per-point optimization of delta_a (temperature-robustness preset).
struct InnerOptimization {
  double delta_a_min = 0.0;
  double delta_a_max = 0.0;
  int grid_points = 401;
};

struct SweepSpec {
  model::SystemParams base;
  std::vector<AxisSpec> axes;  // 1 or 2
  std::vector<Measure> outputs;
  std::optional<InnerOptimization> optimize_delta_a;
  void validate() const;  // throws ConfigError / DomainError
};

struct PointResult {
  bool stable = false;
  bool has_measures = false;
  double max_real_eig = 0.0;  // omega_b units
  double e_am = 0.0, e_mb = 0.0, e_ab = 0.0;
  std::array<double, 3> residual_contangles{};  // raw, focus order a, m, b
  double r_min = 0.0;
  double lyapunov_residual = 0.0;
  std::string error;  // per-point failure note (sweeps record, direct calls throw)
};

/// Single-point pipeline evaluation. Throws on derivation/solver failures;
/// instability is NOT an error here (reported through the result).
PointResult evaluate_point(const model::SystemParams& p);

struct SweepRow {
  std::array<double, 2> axis_values{};  // [1] unused for 1-axis sweeps
  PointResult point;
};

struct SweepTable {
  SweepSpec spec;
  std::vector<std::vector<double>> axis_values;  // per axis, the grid ticks
  std::vector<SweepRow> rows;                    // row-major over axes
  std::size_t stable_count = 0;
  std::size_t error_count = 0;
};

/// Evaluate the grid. Row-major ordering over the axes; deterministic and
/// byte-identical for any worker count.
SweepTable run_sweep(const SweepSpec& spec, unsigned workers = 1);

struct DetuningOptimum {
  double delta_a = 0.0;
  double value = 0.0;
};

/// Maximize one measure over delta_a in [lo, hi]: fixed grid scan (401
/// points by default) then golden-section refinement of the best bracket.
/// Ties resolve to the smallest delta_a; an all-zero objective reports the
/// range midpoint. Throws EmptyResultError if no stable point exists.
DetuningOptimum optimize_over_detuning(const model::SystemParams& base, Measure measure,
                                       double lo, double hi, int grid_points = 401);

/// Named presets: fig2a fig2b fig2c fig2d fig3a fig3a_inset fig3b fig4a fig4b.
SweepSpec figure_preset(std::string_view name);  // throws DomainError for unknown names
std::vector<std::string_view> figure_preset_names();

}  // namespace magnomech::sweep
