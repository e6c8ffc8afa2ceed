#pragma once

#include <complex>
#include <span>
#include <vector>

#include "magnomech/matrix.hpp"

namespace magnomech::linalg {

inline constexpr std::size_t k_max_eigen_dim = 64;

/// All eigenvalues (with multiplicity) of a real square matrix.
/// Balancing + Householder Hessenberg reduction + Francis double-shift QR.
/// Complex eigenvalues come out in exact conjugate pairs.
/// Throws DimensionError (non-square or n > 64), ConvergenceError.
std::vector<std::complex<double>> eigenvalues_general(const RealMatrix& m);

/// Eigenvalues of a symmetric real matrix, ascending. Householder
/// tridiagonalization + QL with implicit Wilkinson shifts (guaranteed
/// convergence, unlike the general iteration on degenerate spectra).
std::vector<double> eigenvalues_symmetric(const RealMatrix& m);

/// Eigenvalues of a Hermitian complex matrix, ascending. Computed on the
/// real symmetric embedding [[Re, -Im], [Im, Re]], whose spectrum is the
/// Hermitian spectrum doubled; the duplicates are paired off.
std::vector<double> eigenvalues_hermitian(const ComplexMatrix& m);

/// Solve m x = rhs by LU with partial pivoting.
/// Throws DimensionError, SingularMatrixError (reports the failing pivot).
std::vector<double> solve_linear(const RealMatrix& m, std::span<const double> rhs);

/// Solve a V + V a^T + d = 0 by vectorization:
/// (a (x) I + I (x) a) vec(V) = -vec(d), then V <- (V + V^T)/2.
/// Caller guarantees a is Hurwitz; a singular vectorized operator is
/// reported as InstabilityError.
RealMatrix lyapunov_solve(const RealMatrix& a, const RealMatrix& d);

/// Relative residual ||a v + v a^T + d||_F / (||a||_F ||v||_F + ||d||_F).
double lyapunov_residual(const RealMatrix& a, const RealMatrix& v, const RealMatrix& d);

}  // namespace magnomech::linalg
