#include "magnomech/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "magnomech/constants.hpp"
#include "magnomech/errors.hpp"
#include "magnomech/gaussian.hpp"
#include "magnomech/linalg.hpp"

namespace magnomech::sweep {
namespace {

using gaussian::CovarianceMatrix;
using gaussian::Mode;
using model::SystemParams;

std::vector<double> linspace(double lo, double hi, int points) {
  std::vector<double> out(static_cast<std::size_t>(points));
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (int i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] = lo + step * i;
  out.back() = hi;  // pin the endpoint against accumulation error
  return out;
}

SystemParams with_axis_value(SystemParams p, Axis axis, double value) {
  switch (axis) {
    case Axis::DeltaA: p.delta_a = value; break;
    case Axis::DeltaMEff: p.delta_m_eff = value; break;
    case Axis::Temperature: p.temperature = value; break;
    case Axis::GRatio: p.g_mb_direct = value * p.g_ma; break;
    case Axis::KappaA: p.kappa_a = value; break;
  }
  return p;
}

double measure_of(const PointResult& r, Measure m) {
  switch (m) {
    case Measure::EAm: return r.e_am;
    case Measure::EMb: return r.e_mb;
    case Measure::EAb: return r.e_ab;
    case Measure::RMin: return r.r_min;
  }
  return 0.0;
}

void store_measure(PointResult& r, Measure m, double value) {
  switch (m) {
    case Measure::EAm: r.e_am = value; break;
    case Measure::EMb: r.e_mb = value; break;
    case Measure::EAb: r.e_ab = value; break;
    case Measure::RMin: r.r_min = value; break;
  }
}

// Row evaluation for the inner-optimization presets: each requested measure
// gets its own delta_a optimum at this grid point.
PointResult evaluate_optimized_row(const SystemParams& p, const SweepSpec& spec) {
  PointResult res;
  const InnerOptimization& opt = *spec.optimize_delta_a;
  bool any = false;
  for (Measure m : spec.outputs) {
    try {
      const DetuningOptimum best =
          optimize_over_detuning(p, m, opt.delta_a_min, opt.delta_a_max, opt.grid_points);
      store_measure(res, m, best.value);
      any = true;
    } catch (const EmptyResultError&) {
      store_measure(res, m, 0.0);
    }
  }
  res.stable = any;
  res.has_measures = any;
  return res;
}

}  // namespace

std::string_view axis_name(Axis a) noexcept {
  switch (a) {
    case Axis::DeltaA: return "delta_a";
    case Axis::DeltaMEff: return "delta_m_eff";
    case Axis::Temperature: return "temperature";
    case Axis::GRatio: return "g_ratio";
    case Axis::KappaA: return "kappa_a";
  }
  return "?";
}

Axis axis_from_name(std::string_view name) {
  if (name == "delta_a") return Axis::DeltaA;
  if (name == "delta_m_eff") return Axis::DeltaMEff;
  if (name == "temperature") return Axis::Temperature;
  if (name == "g_ratio") return Axis::GRatio;
  if (name == "kappa_a") return Axis::KappaA;
  throw ConfigError("unknown sweep axis '" + std::string(name) + "'");
}

std::string_view measure_name(Measure m) noexcept {
  switch (m) {
    case Measure::EAm: return "e_am";
    case Measure::EMb: return "e_mb";
    case Measure::EAb: return "e_ab";
    case Measure::RMin: return "r_min";
  }
  return "?";
}

Measure measure_from_name(std::string_view name) {
  if (name == "e_am") return Measure::EAm;
  if (name == "e_mb") return Measure::EMb;
  if (name == "e_ab") return Measure::EAb;
  if (name == "r_min") return Measure::RMin;
  throw ConfigError("unknown measure '" + std::string(name) + "'");
}

void SweepSpec::validate() const {
  base.validate();
  if (axes.empty() || axes.size() > 2) throw ConfigError("sweep needs 1 or 2 axes");
  for (const AxisSpec& ax : axes) {
    if (ax.points < 2) throw ConfigError("axis points must be >= 2");
    if (!(ax.min < ax.max)) throw ConfigError("axis min must be < max");
    if (ax.axis == Axis::GRatio && base.coupling_mode != model::CouplingMode::Direct) {
      throw ConfigError("g_ratio axis requires direct coupling mode (G_mb fixed by the ratio)");
    }
    if ((ax.axis == Axis::Temperature && ax.min < 0.0) ||
        ((ax.axis == Axis::KappaA || ax.axis == Axis::GRatio) && ax.min < 0.0)) {
      throw ConfigError("axis range must be non-negative for this axis");
    }
  }
  if (axes.size() == 2 && axes[0].axis == axes[1].axis) {
    throw ConfigError("the two sweep axes must differ");
  }
  if (outputs.empty()) throw ConfigError("sweep outputs must not be empty");
  if (optimize_delta_a) {
    for (const AxisSpec& ax : axes)
      if (ax.axis == Axis::DeltaA)
        throw ConfigError("delta_a cannot be both a sweep axis and the inner optimization variable");
    if (!(optimize_delta_a->delta_a_min < optimize_delta_a->delta_a_max) ||
        optimize_delta_a->grid_points < 3) {
      throw ConfigError("invalid inner optimization range");
    }
  }
}

PointResult evaluate_point(const SystemParams& p) {
  PointResult res;
  const model::DerivedState derived = model::derive(p);
  const RealMatrix a = model::drift_matrix(p, derived.g_mb_eff);
  const model::StabilityVerdict verdict = model::stability_check(a);
  res.max_real_eig = verdict.max_real_part;
  if (!verdict.stable) return res;
  res.stable = true;

  const RealMatrix d = model::diffusion_matrix(p, derived);
  const RealMatrix v = linalg::lyapunov_solve(a, d);
  res.lyapunov_residual = linalg::lyapunov_residual(a, v, d);

  // bona fide Gaussian-state gate; single-quadrature variances may dip below
  // vacuum away from the operating point (the magnomechanical interaction
  // squeezes some quadratures), which is physical and allowed
  CovarianceMatrix cm(v, {Mode::Cavity, Mode::Magnon, Mode::Mechanical});
  cm.require_physical();

  res.e_am = gaussian::log_negativity(cm, {0, {1}});
  res.e_mb = gaussian::log_negativity(cm, {1, {2}});
  res.e_ab = gaussian::log_negativity(cm, {0, {2}});
  res.residual_contangles = gaussian::residual_contangle_all(cm);
  res.r_min = gaussian::min_residual_contangle(cm);
  res.has_measures = true;
  return res;
}

SweepTable run_sweep(const SweepSpec& spec, unsigned workers) {
  spec.validate();
  SweepTable table;
  table.spec = spec;
  for (const AxisSpec& ax : spec.axes) table.axis_values.push_back(linspace(ax.min, ax.max, ax.points));

  const std::size_t n1 = table.axis_values[0].size();
  const std::size_t n2 = spec.axes.size() == 2 ? table.axis_values[1].size() : 1;
  table.rows.resize(n1 * n2);

  const auto eval_row = [&](std::size_t idx) {
    SweepRow& row = table.rows[idx];
    const std::size_t i = idx / n2;
    const std::size_t j = idx % n2;
    row.axis_values[0] = table.axis_values[0][i];
    SystemParams p = with_axis_value(spec.base, spec.axes[0].axis, row.axis_values[0]);
    if (spec.axes.size() == 2) {
      row.axis_values[1] = table.axis_values[1][j];
      p = with_axis_value(p, spec.axes[1].axis, row.axis_values[1]);
    }
    try {
      row.point = spec.optimize_delta_a ? evaluate_optimized_row(p, spec) : evaluate_point(p);
    } catch (const std::exception& e) {
      row.point = PointResult{};
      row.point.error = e.what();
    }
  };

  const std::size_t total = table.rows.size();
  if (workers <= 1 || total < 2) {
    for (std::size_t idx = 0; idx < total; ++idx) eval_row(idx);
  } else {
    std::atomic<std::size_t> next{0};
    const unsigned count = std::min<unsigned>(workers, static_cast<unsigned>(total));
    std::vector<std::thread> pool;
    pool.reserve(count);
    for (unsigned w = 0; w < count; ++w) {
      pool.emplace_back([&] {
        for (std::size_t idx = next.fetch_add(1); idx < total; idx = next.fetch_add(1)) {
          eval_row(idx);
        }
      });
    }
    for (std::thread& th : pool) th.join();
  }

  for (const SweepRow& row : table.rows) {
    if (row.point.stable) ++table.stable_count;
    if (!row.point.error.empty()) ++table.error_count;
  }
  return table;
}

DetuningOptimum optimize_over_detuning(const SystemParams& base, Measure measure, double lo,
                                       double hi, int grid_points) {
  if (!(lo < hi)) throw DomainError("optimize_over_detuning: empty range");
  if (grid_points < 3) throw DomainError("optimize_over_detuning: need at least 3 grid points");

  const auto objective = [&](double delta) -> double {
    SystemParams p = base;
    p.delta_a = delta;
    try {
      const PointResult r = evaluate_point(p);
      return r.stable ? measure_of(r, measure) : -1.0;
    } catch (const std::exception&) {
      return -1.0;
    }
  };

  // measures below this are double-precision leakage of max(0, -ln 2 nu)
  constexpr double k_zero_objective = 1e-12;

  const std::vector<double> grid = linspace(lo, hi, grid_points);
  std::size_t best = grid.size();
  double best_value = -1.0;
  bool any_stable = false;
  bool any_positive = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = objective(grid[i]);
    if (v >= 0.0) any_stable = true;
    if (v > k_zero_objective) any_positive = true;
    if (v > best_value) {  // strict: ties keep the smallest delta_a
      best_value = v;
      best = i;
    }
  }
  if (!any_stable) {
    throw EmptyResultError("optimize_over_detuning: no stable point in range");
  }
  if (!any_positive) {
    return {0.5 * (lo + hi), 0.0};  // all-zero objective: report the midpoint
  }

  // golden-section refinement of the bracket around the best grid point
  double a = grid[best == 0 ? 0 : best - 1];
  double b = grid[std::min(best + 1, grid.size() - 1)];
  constexpr double gr = 0.6180339887498949;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = objective(c);
  double fd = objective(d);
  for (int iter = 0; iter < 48; ++iter) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = objective(d);
    }
  }
  double refined_x = fc >= fd ? c : d;
  double refined_v = std::max(fc, fd);
  if (refined_v > best_value) return {refined_x, refined_v};
  return {grid[best], best_value};
}

SweepSpec figure_preset(std::string_view name) {
  using model::CouplingMode;
  constexpr double two_pi = constants::two_pi;

  SystemParams base;
  base.omega_a = two_pi * 10e9;
  base.omega_b = two_pi * 10e6;
  base.gamma_b = two_pi * 100.0;
  base.kappa_a = two_pi * 1e6;
  base.kappa_m = two_pi * 1e6;
  base.g_ma = two_pi * 3.2e6;
  base.temperature = 10e-3;
  base.coupling_mode = CouplingMode::Direct;
  base.g_mb_direct = two_pi * 3.2e6;
  base.delta_a = -base.omega_b;
  base.delta_m_eff = 0.9 * base.omega_b;

  const double wb = base.omega_b;
  const AxisSpec delta_a_axis{Axis::DeltaA, -2.0 * wb, 2.0 * wb, 101};
  const AxisSpec delta_m_axis{Axis::DeltaMEff, -2.0 * wb, 2.0 * wb, 101};

  SweepSpec spec;
  spec.base = base;

  if (name == "fig2a" || name == "fig2b" || name == "fig2c") {
    spec.axes = {delta_a_axis, delta_m_axis};
    spec.outputs = {name == "fig2a" ? Measure::EAm
                                    : name == "fig2b" ? Measure::EMb : Measure::EAb};
    return spec;
  }
  if (name == "fig2d") {
    spec.axes = {delta_a_axis, AxisSpec{Axis::GRatio, 0.0, 2.0, 101}};
    spec.outputs = {Measure::EAm};
    return spec;
  }

  // figure 3/4 family: stronger magnomechanical coupling
  spec.base.g_mb_direct = two_pi * 4.8e6;

  if (name == "fig3a") {
    spec.axes = {delta_a_axis};
    spec.outputs = {Measure::EAm, Measure::EMb, Measure::EAb};
    return spec;
  }
  if (name == "fig3a_inset") {
    spec.axes = {AxisSpec{Axis::Temperature, 10e-3, 300e-3, 25}};
    spec.outputs = {Measure::EAm, Measure::EMb, Measure::EAb};
    spec.optimize_delta_a = InnerOptimization{-2.0 * wb, 2.0 * wb, 401};
    return spec;
  }
  if (name == "fig3b") {
    spec.axes = {delta_a_axis};
    spec.outputs = {Measure::RMin};
    return spec;
  }
  if (name == "fig4a" || name == "fig4b") {
    spec.base.kappa_a = two_pi * 3e6;
    spec.base.kappa_m = spec.base.kappa_a / 5.0;
    spec.axes = {delta_a_axis};
    spec.outputs = name == "fig4a"
                       ? std::vector<Measure>{Measure::EAm, Measure::EMb, Measure::EAb}
                       : std::vector<Measure>{Measure::RMin};
    return spec;
  }
  throw DomainError("unknown figure preset '" + std::string(name) + "'");
}

std::vector<std::string_view> figure_preset_names() {
  return {"fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3a_inset", "fig3b", "fig4a", "fig4b"};
}

}  // namespace magnomech::sweep
