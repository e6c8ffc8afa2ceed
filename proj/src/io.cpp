#include "magnomech/io.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include <json.hpp>

#include "magnomech/constants.hpp"
#include "magnomech/errors.hpp"
#include "magnomech/gaussian.hpp"
#include "magnomech/version.hpp"

namespace magnomech::io {
namespace {

using nlohmann::ordered_json;
constexpr double two_pi = constants::two_pi;

std::string measure_column(sweep::Measure m, bool optimized) {
  std::string name{sweep::measure_name(m)};
  if (optimized) name += "_opt";
  return name;
}

std::string axis_unit(sweep::Axis a) {
  switch (a) {
    case sweep::Axis::DeltaA:
    case sweep::Axis::DeltaMEff:
    case sweep::Axis::KappaA: return "rad/s";
    case sweep::Axis::Temperature: return "K";
    case sweep::Axis::GRatio: return "1";
  }
  return "?";
}

ordered_json params_json(const model::SystemParams& p) {
  ordered_json j;
  j["omega_a_hz"] = p.omega_a / two_pi;
  j["omega_b_hz"] = p.omega_b / two_pi;
  j["delta_a_hz"] = p.delta_a / two_pi;
  j["delta_m_eff_hz"] = p.delta_m_eff / two_pi;
  j["kappa_a_hz"] = p.kappa_a / two_pi;
  j["kappa_m_hz"] = p.kappa_m / two_pi;
  j["gamma_b_hz"] = p.gamma_b / two_pi;
  j["g_ma_hz"] = p.g_ma / two_pi;
  j["temperature_k"] = p.temperature;
  if (p.coupling_mode == model::CouplingMode::Direct) {
    j["coupling"] = {{"mode", "direct"}, {"g_mb_eff_hz", p.g_mb_direct / two_pi}};
  } else {
    j["coupling"] = {{"mode", "physical"},
                     {"b0_tesla", p.physical.b0},
                     {"g_mb_hz", p.physical.g_mb / two_pi},
                     {"sphere_diameter_m", p.physical.sphere_diameter},
                     {"spin_density_per_m3", p.physical.spin_density},
                     {"gyromagnetic_ratio_hz_per_t", p.physical.gyromagnetic_ratio / two_pi},
                     {"spin_s", p.physical.spin_s},
                     {"kerr_1mm_hz", p.physical.kerr_1mm / two_pi}};
  }
  return j;
}

void append_kv(std::string& out, std::string_view key, const std::string& value) {
  out += "  ";
  out += key;
  for (std::size_t i = key.size(); i < 22; ++i) out += ' ';
  out += value;
  out += '\n';
}

std::string fmt(double v, const char* format = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

std::string fmt_complex(std::complex<double> z) {
  std::string out = fmt(z.real());
  out += z.imag() < 0 ? " - " : " + ";
  out += fmt(std::abs(z.imag()));
  out += "i";
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string sweep_csv(const sweep::SweepTable& table) {
  const bool optimized = table.spec.optimize_delta_a.has_value();
  std::string out;
  for (std::size_t a = 0; a < table.spec.axes.size(); ++a) {
    if (a) out += ',';
    out += sweep::axis_name(table.spec.axes[a].axis);
  }
  out += ",stable";
  for (sweep::Measure m : table.spec.outputs) {
    out += ',';
    out += measure_column(m, optimized);
  }
  out += '\n';

  for (const sweep::SweepRow& row : table.rows) {
    for (std::size_t a = 0; a < table.spec.axes.size(); ++a) {
      if (a) out += ',';
      out += format_double(row.axis_values[a]);
    }
    out += row.point.stable ? ",1" : ",0";
    for (sweep::Measure m : table.spec.outputs) {
      out += ',';
      if (row.point.has_measures) {
        switch (m) {
          case sweep::Measure::EAm: out += format_double(row.point.e_am); break;
          case sweep::Measure::EMb: out += format_double(row.point.e_mb); break;
          case sweep::Measure::EAb: out += format_double(row.point.e_ab); break;
          case sweep::Measure::RMin: out += format_double(row.point.r_min); break;
        }
      }
      // unstable or errored rows leave measure cells empty
    }
    out += '\n';
  }
  return out;
}

std::string sweep_meta_json(const sweep::SweepTable& table, const std::string& command,
                            const std::string& figure, const cli::Thresholds& thresholds) {
  const bool optimized = table.spec.optimize_delta_a.has_value();
  ordered_json j;
  j["tool"] = "magnomech";
  j["version"] = k_version;
  j["command"] = command;
  if (!figure.empty()) j["figure"] = figure;
  j["parameters"] = params_json(table.spec.base);
  ordered_json axes = ordered_json::array();
  for (std::size_t a = 0; a < table.spec.axes.size(); ++a) {
    const sweep::AxisSpec& ax = table.spec.axes[a];
    axes.push_back({{"axis", std::string(sweep::axis_name(ax.axis))},
                    {"min", ax.min},
                    {"max", ax.max},
                    {"points", ax.points},
                    {"unit", axis_unit(ax.axis)}});
  }
  j["grid"] = axes;
  ordered_json outputs = ordered_json::array();
  for (sweep::Measure m : table.spec.outputs) outputs.push_back(measure_column(m, optimized));
  j["outputs"] = outputs;
  if (optimized) {
    j["optimize_delta_a"] = {{"min", table.spec.optimize_delta_a->delta_a_min},
                             {"max", table.spec.optimize_delta_a->delta_a_max},
                             {"grid_points", table.spec.optimize_delta_a->grid_points},
                             {"unit", "rad/s"}};
  }
  j["tolerances"] = {{"stability_margin", model::k_stability_margin},
                     {"lyapunov_residual", 1e-9},
                     {"contangle_floor", gaussian::k_contangle_floor},
                     {"tripartite_threshold", thresholds.tripartite},
                     {"low_excitation_threshold", thresholds.low_excitation},
                     {"kerr_threshold", thresholds.kerr}};
  j["stable_points"] = table.stable_count;
  j["error_points"] = table.error_count;
  j["total_points"] = table.rows.size();
  return j.dump(2) + "\n";
}

std::string derive_csv(const model::SystemParams& p, const model::DerivedState& d) {
  std::string out = "key,value\n";
  const auto add = [&out](const char* key, double v) {
    out += key;
    out += ',';
    out += format_double(v);
    out += '\n';
  };
  add("g_mb_eff_rad_per_s", d.g_mb_eff);
  add("n_therm_a", d.n_therm_a);
  add("n_therm_m", d.n_therm_m);
  add("n_therm_b", d.n_therm_b);
  if (d.physical) {
    const auto& ph = *d.physical;
    add("rabi_omega_rad_per_s", ph.rabi_omega);
    add("n_spins", ph.n_spins);
    add("m_mean_re", ph.m_mean.real());
    add("m_mean_im", ph.m_mean.imag());
    add("m_mean_abs", std::abs(ph.m_mean));
    add("m_mean_approx_im", ph.m_mean_approx.imag());
    add("q_mean", ph.q_mean);
    add("magnon_occupation", ph.magnon_occupation);
    add("kerr_coefficient_rad_per_s", ph.kerr_coefficient);
    add("low_excitation_ratio", ph.low_excitation.ratio);
    add("kerr_ratio", ph.kerr.ratio);
  }
  (void)p;
  return out;
}

std::string derive_report(const model::SystemParams& p, const model::DerivedState& d) {
  std::string out = "derived state (coupling mode: ";
  out += p.coupling_mode == model::CouplingMode::Physical ? "physical" : "direct";
  out += ")\n";
  append_kv(out, "g_mb_eff", fmt(d.g_mb_eff) + " rad/s  (" + fmt(d.g_mb_eff / two_pi) + " Hz)");
  append_kv(out, "n_therm_a", fmt(d.n_therm_a));
  append_kv(out, "n_therm_m", fmt(d.n_therm_m));
  append_kv(out, "n_therm_b", fmt(d.n_therm_b));
  if (!d.physical) {
    append_kv(out, "rabi_omega", "n/a (direct coupling mode)");
    append_kv(out, "n_spins", "n/a (direct coupling mode)");
    append_kv(out, "m_mean", "n/a (direct coupling mode)");
    append_kv(out, "validity", "n/a (direct coupling mode)");
    return out;
  }
  const auto& ph = *d.physical;
  append_kv(out, "rabi_omega", fmt(ph.rabi_omega) + " rad/s");
  append_kv(out, "n_spins", fmt(ph.n_spins));
  append_kv(out, "m_mean_exact", fmt_complex(ph.m_mean) + "  (|m| = " + fmt(std::abs(ph.m_mean)) + ")");
  append_kv(out, "m_mean_approx", fmt_complex(ph.m_mean_approx));
  const double abs_exact = std::abs(ph.m_mean);
  if (abs_exact > 0.0) {
    append_kv(out, "m_mean_rel_diff_abs",
              fmt(std::abs(abs_exact - std::abs(ph.m_mean_approx)) / abs_exact));
    append_kv(out, "m_mean_rel_diff_cplx",
              fmt(std::abs(ph.m_mean - ph.m_mean_approx) / abs_exact));
  }
  append_kv(out, "q_mean", fmt(ph.q_mean));
  append_kv(out, "magnon_occupation", fmt(ph.magnon_occupation));
  append_kv(out, "kerr_coefficient", fmt(ph.kerr_coefficient) + " rad/s");
  append_kv(out, "low_excitation", std::string("ratio ") + fmt(ph.low_excitation.ratio) +
                                       (ph.low_excitation.pass ? "  pass" : "  FAIL"));
  append_kv(out, "kerr", std::string("ratio ") + fmt(ph.kerr.ratio) +
                             (ph.kerr.pass ? "  pass" : "  FAIL"));
  if (ph.no_drive) append_kv(out, "note", "no drive (rabi_omega = 0); validity ratios trivial");
  return out;
}

std::string stability_report(const model::SystemParams& p, const model::StabilityVerdict& verdict,
                             const std::vector<std::complex<double>>& eigenvalues) {
  std::string out = verdict.stable ? "stable\n" : "UNSTABLE\n";
  append_kv(out, "max_real_eig", fmt(verdict.max_real_part) + " (omega_b units)");
  append_kv(out, "margin_rad_per_s", fmt(verdict.max_real_part * p.omega_b));
  out += "  drift eigenvalues (omega_b units):\n";
  for (const auto& e : eigenvalues) {
    out += "    ";
    out += fmt_complex(e);
    out += '\n';
  }
  return out;
}

std::string entangle_report(const model::SystemParams& p, const model::DerivedState& d,
                            const sweep::PointResult& point) {
  std::string out;
  append_kv(out, "stable", point.stable ? "yes" : "no");
  append_kv(out, "max_real_eig", fmt(point.max_real_eig) + " (omega_b units)");
  if (!point.stable) return out;
  append_kv(out, "E_am", format_double(point.e_am));
  append_kv(out, "E_mb", format_double(point.e_mb));
  append_kv(out, "E_ab", format_double(point.e_ab));
  append_kv(out, "R_tau_a|mb", format_double(point.residual_contangles[0]));
  append_kv(out, "R_tau_m|ab", format_double(point.residual_contangles[1]));
  append_kv(out, "R_tau_b|am", format_double(point.residual_contangles[2]));
  append_kv(out, "R_min", format_double(point.r_min));
  append_kv(out, "lyapunov_residual", fmt(point.lyapunov_residual, "%.3g"));
  if (d.physical) {
    append_kv(out, "low_excitation", std::string("ratio ") + fmt(d.physical->low_excitation.ratio) +
                                         (d.physical->low_excitation.pass ? "  pass" : "  FAIL"));
    append_kv(out, "kerr", std::string("ratio ") + fmt(d.physical->kerr.ratio) +
                               (d.physical->kerr.pass ? "  pass" : "  FAIL"));
  } else {
    append_kv(out, "validity", "n/a (direct coupling mode)");
  }
  (void)p;
  return out;
}

std::string validate_report(const model::SystemParams& p, const model::ValidityReport& report,
                            const cli::Thresholds& thresholds) {
  std::string out;
  if (report.no_drive) {
    out += "no drive (rabi_omega = 0): validity ratios trivially zero\n";
  }
  append_kv(out, "low_excitation",
            std::string("ratio ") + fmt(report.low_excitation.ratio) + "  threshold " +
                fmt(thresholds.low_excitation) +
                (report.low_excitation.pass ? "  PASS" : "  FAIL"));
  append_kv(out, "kerr", std::string("ratio ") + fmt(report.kerr.ratio) + "  threshold " +
                             fmt(thresholds.kerr) + (report.kerr.pass ? "  PASS" : "  FAIL"));
  (void)p;
  return out;
}

std::string sweep_summary(const sweep::SweepTable& table) {
  const bool optimized = table.spec.optimize_delta_a.has_value();
  std::string out;
  append_kv(out, "grid_points", std::to_string(table.rows.size()));
  append_kv(out, "stable_points", std::to_string(table.stable_count));
  append_kv(out, "stable_fraction",
            fmt(table.rows.empty()
                    ? 0.0
                    : static_cast<double>(table.stable_count) / static_cast<double>(table.rows.size())));
  if (table.error_count > 0) append_kv(out, "error_points", std::to_string(table.error_count));

  for (sweep::Measure m : table.spec.outputs) {
    double best = 0.0;
    const sweep::SweepRow* best_row = nullptr;
    for (const sweep::SweepRow& row : table.rows) {
      if (!row.point.has_measures) continue;
      double v = 0.0;
      switch (m) {
        case sweep::Measure::EAm: v = row.point.e_am; break;
        case sweep::Measure::EMb: v = row.point.e_mb; break;
        case sweep::Measure::EAb: v = row.point.e_ab; break;
        case sweep::Measure::RMin: v = row.point.r_min; break;
      }
      if (!best_row || v > best) {
        best = v;
        best_row = &row;
      }
    }
    const std::string col = measure_column(m, optimized);
    if (!best_row) {
      append_kv(out, "max_" + col, "n/a (no stable points)");
      continue;
    }
    std::string where = std::string(sweep::axis_name(table.spec.axes[0].axis)) + " = " +
                        fmt(best_row->axis_values[0]);
    if (table.spec.axes.size() == 2) {
      where += std::string(", ") + std::string(sweep::axis_name(table.spec.axes[1].axis)) + " = " +
               fmt(best_row->axis_values[1]);
    }
    append_kv(out, "max_" + col, fmt(best) + "  at " + where);
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) {
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + p.parent_path().string() + "': " + ec.message());
  }
  std::ofstream f(p, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw IoError("write failed for '" + path + "'");
}

}  // namespace magnomech::io
