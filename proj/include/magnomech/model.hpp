#pragma once

#include <complex>
#include <optional>

#include "magnomech/constants.hpp"
#include "magnomech/matrix.hpp"

namespace magnomech::model {

// Physical model of the driven magnon-photon-phonon system. All frequencies
// and rates are angular (rad/s). The drift/diffusion matrices are returned in
// omega_b units so their entries are O(1); the entanglement measures computed
// downstream are dimensionless and unaffected by that scaling.

enum class CouplingMode { Direct, Physical };

/// Inputs needed to derive the magnomechanical coupling from the drive field
/// and sphere geometry (CouplingMode::Physical).
struct PhysicalCoupling {
  double b0 = 0.0;                // drive magnetic field amplitude [T]
  double g_mb = 0.0;              // single-magnon magnomechanical rate [rad/s]
  double sphere_diameter = 0.0;   // YIG sphere diameter [m]
  double spin_density = 4.22e27;                        // [1/m^3]
  double gyromagnetic_ratio = constants::two_pi * 28e9;  // [rad/s per T]
  double spin_s = 2.5;            // ground-state Fe3+ spin
  double kerr_1mm = constants::two_pi * 1e-10;  // Kerr coefficient of a 1 mm sphere [rad/s]
};

struct SystemParams {
  double omega_a = 0.0;      // cavity frequency [rad/s]
  double omega_b = 0.0;      // mechanical frequency [rad/s]
  double delta_a = 0.0;      // cavity-drive detuning omega_a - omega_0 [rad/s]
  double delta_m_eff = 0.0;  // effective magnon-drive detuning [rad/s]
  double kappa_a = 0.0;      // cavity amplitude decay rate [rad/s]
  double kappa_m = 0.0;      // magnon amplitude decay rate [rad/s]
  double gamma_b = 0.0;      // mechanical damping rate [rad/s]
  double g_ma = 0.0;         // magnon-photon coupling [rad/s]
  double temperature = 0.0;  // bath temperature [K]

  CouplingMode coupling_mode = CouplingMode::Direct;
  double g_mb_direct = 0.0;  // |G_mb| when CouplingMode::Direct [rad/s]
  PhysicalCoupling physical; // used when CouplingMode::Physical

  /// Throws DomainError naming the offending field. Enforces positivity of
  /// rates/frequencies, temperature >= 0, and the Markovian guard
  /// omega_b / gamma_b > 100.
  void validate() const;
};

struct ValidityRatio {
  double ratio = 0.0;
  bool pass = true;
};

/// Quantities that exist only in physical coupling mode.
struct PhysicalDerived {
  double rabi_omega = 0.0;  // drive Rabi frequency [rad/s]
  double n_spins = 0.0;
  std::complex<double> m_mean;         // steady-state magnon amplitude (exact form)
  std::complex<double> m_mean_approx;  // large-detuning form (pure imaginary)
  double q_mean = 0.0;                 // static mechanical displacement
  double magnon_occupation = 0.0;      // |<m>|^2
  double kerr_coefficient = 0.0;       // volume-scaled K [rad/s]
  ValidityRatio low_excitation;        // |<m>|^2 / (5N)
  ValidityRatio kerr;                  // K |<m>|^3 / Omega
  bool no_drive = false;
};

struct DerivedState {
  double g_mb_eff = 0.0;  // |G_mb| [rad/s]
  double n_therm_a = 0.0;
  double n_therm_m = 0.0;  // evaluated at omega_a (magnon near cavity resonance)
  double n_therm_b = 0.0;
  std::optional<PhysicalDerived> physical;
};

struct ValidityThresholds {
  double low_excitation = 0.01;
  double kerr = 0.25;
};

/// Omega = (sqrt(5)/4) gamma sqrt(N) B0.
double rabi_frequency(double b0, double n_spins, double gyromagnetic_ratio);

/// N = rho (pi/6) d^3.
double spin_count(double sphere_diameter, double spin_density);

/// Steady-state magnon amplitude, exact form:
/// <m> = Omega (i Da + ka) / (g_ma^2 + (i Dm + km)(i Da + ka)).
std::complex<double> magnon_amplitude_exact(const SystemParams& p, double rabi_omega);

/// Large-detuning form <m> ~= i Omega Da / (g_ma^2 - Dm Da), pure imaginary.
std::complex<double> magnon_amplitude_approx(const SystemParams& p, double rabi_omega);

/// |G_mb| = sqrt(2) g_mb |<m>|. The phase of <m> is absorbed by a local
/// quadrature rotation of the magnon mode, which no entanglement measure
/// can see, so only the magnitude enters the drift matrix.
double effective_coupling(double g_mb, std::complex<double> m_mean);

/// Bose-Einstein occupation [exp(hbar w / kB T) - 1]^-1; 0 at T = 0.
double thermal_occupation(double omega, double temperature);

/// Full derivation chain for a parameter set.
DerivedState derive(const SystemParams& p, const ValidityThresholds& thresholds = {});

/// Drift matrix of the linearized quadrature dynamics, ordering
/// (dX, dY, dx, dy, dq, dp), every entry divided by omega_b.
RealMatrix drift_matrix(const SystemParams& p, double g_mb_eff);

/// Diffusion matrix diag[ka(2Na+1), ka(2Na+1), km(2Nm+1), km(2Nm+1), 0,
/// gb(2Nb+1)], divided by omega_b.
RealMatrix diffusion_matrix(const SystemParams& p, const DerivedState& derived);

struct StabilityVerdict {
  bool stable = false;
  double max_real_part = 0.0;  // in omega_b units
};

/// Hurwitz test: stable iff every eigenvalue real part < -1e-12 (scaled).
StabilityVerdict stability_check(const RealMatrix& a);

struct ValidityReport {
  ValidityRatio low_excitation;
  ValidityRatio kerr;
  bool no_drive = false;
  bool all_pass() const { return low_excitation.pass && kerr.pass; }
};

/// Low-excitation and Kerr linearization checks (physical mode only;
/// throws NotApplicableError for direct mode).
ValidityReport validity_report(const SystemParams& p, const DerivedState& derived);

inline constexpr double k_stability_margin = 1e-12;  // omega_b units

}  // namespace magnomech::model
