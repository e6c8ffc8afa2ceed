#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "magnomech/matrix.hpp"

namespace magnomech::gaussian {

// Gaussian-state entanglement measures on covariance matrices, vacuum
// normalization V_vac = I/2 (quadratures X = (a + a^dag)/sqrt(2)).

enum class Mode : int { Cavity = 0, Magnon = 1, Mechanical = 2 };
std::string_view mode_name(Mode m) noexcept;  // "a", "m", "b"

/// 2n x 2n symmetric covariance matrix with interleaved quadrature ordering
/// (X1, Y1, X2, Y2, ...) and per-mode labels.
///
/// The constructor enforces shape, finiteness and symmetry (tolerance 1e-10
/// relative to the largest entry), then symmetrizes exactly. Physicality and
/// the vacuum bound on diagonal variances are separate checks: steady-state
/// CMs from the Lyapunov pipeline must pass both, but generic Gaussian states
/// (locally squeezed) can sit below vacuum on a single quadrature.
class CovarianceMatrix {
 public:
  CovarianceMatrix(RealMatrix m, std::vector<Mode> labels);

  std::size_t n_modes() const noexcept { return labels_.size(); }
  const RealMatrix& matrix() const noexcept { return m_; }
  const std::vector<Mode>& labels() const noexcept { return labels_; }

  /// Smallest eigenvalue of V + (i/2) Omega_n (Hermitian); >= 0 up to
  /// roundoff for a bona fide Gaussian state.
  double min_physicality_eigenvalue() const;
  bool is_physical(double tol = k_physicality_tol) const;
  void require_physical(double tol = k_physicality_tol) const;  // throws PhysicalityError

  /// All diagonal variances >= 1/2 - tol.
  bool diagonal_vacuum_limited(double tol = 1e-8) const noexcept;

  static constexpr double k_physicality_tol = 1e-8;

 private:
  RealMatrix m_;
  std::vector<Mode> labels_;
};

/// One mode versus one or two other modes.
struct ModePartition {
  std::size_t side_one = 0;
  std::vector<std::size_t> side_two;
};

/// Symplectic form of n modes: block-diagonal [[0, 1], [-1, 0]].
RealMatrix symplectic_form(std::size_t n_modes);

/// Keep the quadrature rows/columns of the listed modes (ascending, unique).
CovarianceMatrix reduce_modes(const CovarianceMatrix& v, std::span<const std::size_t> keep);

/// P V P with P flipping the Y quadrature of one mode. Exact involution.
CovarianceMatrix partial_transpose(const CovarianceMatrix& v, std::size_t transposed_mode);

/// The n symplectic eigenvalues, ascending: |Im| of the eigenvalues of
/// Omega_n V, deduplicated by conjugate pairing.
/// Throws NumericalDegeneracyError if the pairing fails beyond 1e-8.
std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& v);

/// E_N = max[0, -ln 2 nu_min(P V P)] with the partial transpose taken on
/// side_one. Reduces v to the partition's modes first; rejects unphysical
/// input with PhysicalityError.
double log_negativity(const CovarianceMatrix& v, const ModePartition& part);

/// Squared logarithmic negativity.
double contangle(const CovarianceMatrix& v, const ModePartition& part);

/// C_{i|jk} - C_{i|j} - C_{i|k} for a 3-mode CM (raw, may be ~-1e-9 negative
/// from roundoff).
double residual_contangle(const CovarianceMatrix& v, std::size_t focus);

/// All three residual contangles, focus order (mode 0, mode 1, mode 2).
std::array<double, 3> residual_contangle_all(const CovarianceMatrix& v);

/// min over the three focuses, with negatives inside the 1e-9 numerical
/// floor clamped to zero. Genuine tripartite entanglement iff the result
/// exceeds k_tripartite_threshold.
double min_residual_contangle(const CovarianceMatrix& v);

inline constexpr double k_contangle_floor = 1e-9;
inline constexpr double k_tripartite_threshold = 1e-6;

}  // namespace magnomech::gaussian
