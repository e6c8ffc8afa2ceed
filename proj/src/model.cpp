#include "magnomech/model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "magnomech/errors.hpp"
#include "magnomech/linalg.hpp"

namespace magnomech::model {
namespace {

using std::complex;

void require_positive(double v, const char* field) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(field) + " must be > 0 (got " + std::to_string(v) + ")");
  }
}

void require_finite(double v, const char* field) {
  if (!std::isfinite(v)) throw DomainError(std::string(field) + " must be finite");
}

}  // namespace

void SystemParams::validate() const {
  require_positive(omega_a, "omega_a");
  require_positive(omega_b, "omega_b");
  require_finite(delta_a, "delta_a");
  require_finite(delta_m_eff, "delta_m_eff");
  require_positive(kappa_a, "kappa_a");
  require_positive(kappa_m, "kappa_m");
  require_positive(gamma_b, "gamma_b");
  require_positive(g_ma, "g_ma");
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
    throw DomainError("temperature must be >= 0 (got " + std::to_string(temperature) + ")");
  }
  // Markovian mechanical bath needs a large quality factor.
  if (!(omega_b / gamma_b > 100.0)) {
    throw DomainError("mechanical quality factor omega_b/gamma_b must exceed 100 (got " +
                      std::to_string(omega_b / gamma_b) + ")");
  }
  if (coupling_mode == CouplingMode::Direct) {
    if (!(g_mb_direct >= 0.0) || !std::isfinite(g_mb_direct)) {
      throw DomainError("g_mb_direct must be >= 0");
    }
  } else {
    if (!(physical.b0 >= 0.0) || !std::isfinite(physical.b0)) throw DomainError("b0 must be >= 0");
    if (!(physical.g_mb >= 0.0) || !std::isfinite(physical.g_mb))
      throw DomainError("g_mb must be >= 0");
    require_positive(physical.sphere_diameter, "sphere_diameter");
    require_positive(physical.spin_density, "spin_density");
    require_positive(physical.gyromagnetic_ratio, "gyromagnetic_ratio");
    require_positive(physical.spin_s, "spin_s");
    if (!(physical.kerr_1mm >= 0.0)) throw DomainError("kerr_1mm must be >= 0");
  }
}

double rabi_frequency(double b0, double n_spins, double gyromagnetic_ratio) {
  if (b0 == 0.0) return 0.0;
  require_positive(b0, "b0");
  require_positive(n_spins, "n_spins");
  require_positive(gyromagnetic_ratio, "gyromagnetic_ratio");
  return 0.25 * std::sqrt(5.0) * gyromagnetic_ratio * std::sqrt(n_spins) * b0;
}

double spin_count(double sphere_diameter, double spin_density) {
  if (sphere_diameter == 0.0) return 0.0;
  require_positive(sphere_diameter, "sphere_diameter");
  require_positive(spin_density, "spin_density");
  const double volume = (std::numbers::pi / 6.0) * sphere_diameter * sphere_diameter * sphere_diameter;
  return spin_density * volume;
}

std::complex<double> magnon_amplitude_exact(const SystemParams& p, double rabi_omega) {
  const complex<double> ca(p.kappa_a, p.delta_a);
  const complex<double> cm(p.kappa_m, p.delta_m_eff);
  const complex<double> denom = p.g_ma * p.g_ma + cm * ca;
  const double denom_floor = 1e-12 * (p.g_ma * p.g_ma + std::abs(cm) * std::abs(ca));
  if (std::abs(denom) <= denom_floor) {
    throw DegenerateParametersError("magnon_amplitude_exact: vanishing denominator");
  }
  return rabi_omega * ca / denom;
}

std::complex<double> magnon_amplitude_approx(const SystemParams& p, double rabi_omega) {
  const double denom = p.g_ma * p.g_ma - p.delta_m_eff * p.delta_a;
  const double denom_floor = 1e-12 * (p.g_ma * p.g_ma + std::abs(p.delta_m_eff * p.delta_a));
  if (std::abs(denom) <= denom_floor) {
    throw DegenerateParametersError("magnon_amplitude_approx: resonant denominator");
  }
  return complex<double>(0.0, rabi_omega * p.delta_a / denom);
}

double effective_coupling(double g_mb, std::complex<double> m_mean) {
  if (g_mb < 0.0) throw DomainError("effective_coupling: g_mb must be >= 0");
  return std::sqrt(2.0) * g_mb * std::abs(m_mean);
}

double thermal_occupation(double omega, double temperature) {
  require_positive(omega, "omega");
  if (!(temperature >= 0.0)) throw DomainError("temperature must be >= 0");
  if (temperature == 0.0) return 0.0;
  const double x = constants::hbar * omega / (constants::k_boltzmann * temperature);
  return 1.0 / std::expm1(x);  // expm1 overflows to inf for huge x -> returns 0
}

DerivedState derive(const SystemParams& p, const ValidityThresholds& thresholds) {
  p.validate();
  DerivedState d;
  d.n_therm_a = thermal_occupation(p.omega_a, p.temperature);
  d.n_therm_m = d.n_therm_a;  // magnon sits within a linewidth of the cavity (GHz scale)
  d.n_therm_b = thermal_occupation(p.omega_b, p.temperature);

  if (p.coupling_mode == CouplingMode::Direct) {
    d.g_mb_eff = p.g_mb_direct;
    return d;
  }

  PhysicalDerived phys;
  phys.n_spins = spin_count(p.physical.sphere_diameter, p.physical.spin_density);
  phys.rabi_omega = rabi_frequency(p.physical.b0, phys.n_spins, p.physical.gyromagnetic_ratio);
  phys.m_mean = magnon_amplitude_exact(p, phys.rabi_omega);
  phys.m_mean_approx = magnon_amplitude_approx(p, phys.rabi_omega);
  phys.magnon_occupation = std::norm(phys.m_mean);
  phys.q_mean = -(p.physical.g_mb / p.omega_b) * phys.magnon_occupation;
  const double diameter_ratio = 1e-3 / p.physical.sphere_diameter;
  phys.kerr_coefficient = p.physical.kerr_1mm * diameter_ratio * diameter_ratio * diameter_ratio;
  phys.no_drive = (phys.rabi_omega == 0.0);

  const double two_n_s = 2.0 * phys.n_spins * p.physical.spin_s;  // = 5N for s = 5/2
  phys.low_excitation.ratio = phys.no_drive ? 0.0 : phys.magnon_occupation / two_n_s;
  phys.low_excitation.pass = phys.low_excitation.ratio < thresholds.low_excitation;
  const double m_abs = std::abs(phys.m_mean);
  phys.kerr.ratio = phys.no_drive
                        ? 0.0
                        : phys.kerr_coefficient * m_abs * m_abs * m_abs / phys.rabi_omega;
  phys.kerr.pass = phys.kerr.ratio < thresholds.kerr;

  d.g_mb_eff = effective_coupling(p.physical.g_mb, phys.m_mean);
  d.physical = phys;
  return d;
}

RealMatrix drift_matrix(const SystemParams& p, double g_mb_eff) {
  const double wb = p.omega_b;
  const double ka = p.kappa_a / wb;
  const double km = p.kappa_m / wb;
  const double gb = p.gamma_b / wb;
  const double da = p.delta_a / wb;
  const double dm = p.delta_m_eff / wb;
  const double gma = p.g_ma / wb;
  const double gmb = g_mb_eff / wb;

  RealMatrix a(6, 6);
  a(0, 0) = -ka;   a(0, 1) = da;    a(0, 3) = gma;
  a(1, 0) = -da;   a(1, 1) = -ka;   a(1, 2) = -gma;
  a(2, 1) = gma;   a(2, 2) = -km;   a(2, 3) = dm;   a(2, 4) = -gmb;
  a(3, 0) = -gma;  a(3, 2) = -dm;   a(3, 3) = -km;
  a(4, 5) = 1.0;
  a(5, 3) = gmb;   a(5, 4) = -1.0;  a(5, 5) = -gb;
  return a;
}

RealMatrix diffusion_matrix(const SystemParams& p, const DerivedState& derived) {
  const double wb = p.omega_b;
  RealMatrix d(6, 6);
  d(0, 0) = d(1, 1) = p.kappa_a * (2.0 * derived.n_therm_a + 1.0) / wb;
  d(2, 2) = d(3, 3) = p.kappa_m * (2.0 * derived.n_therm_m + 1.0) / wb;
  d(4, 4) = 0.0;
  d(5, 5) = p.gamma_b * (2.0 * derived.n_therm_b + 1.0) / wb;
  return d;
}

StabilityVerdict stability_check(const RealMatrix& a) {
  const auto eigs = linalg::eigenvalues_general(a);
  double max_real = -std::numeric_limits<double>::infinity();
  for (const auto& e : eigs) max_real = std::max(max_real, e.real());
  return {max_real < -k_stability_margin, max_real};
}

ValidityReport validity_report(const SystemParams& p, const DerivedState& derived) {
  if (p.coupling_mode != CouplingMode::Physical || !derived.physical) {
    throw NotApplicableError(
        "validity_report: requires physical coupling mode (sphere geometry and drive field)");
  }
  const PhysicalDerived& phys = *derived.physical;
  return {phys.low_excitation, phys.kerr, phys.no_drive};
}

}  // namespace magnomech::model
