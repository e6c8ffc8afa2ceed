#include "magnomech/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "magnomech/errors.hpp"
#include "magnomech/linalg.hpp"

namespace magnomech::gaussian {
namespace {

void require_mode_index(const CovarianceMatrix& v, std::size_t mode, const char* op) {
  if (mode >= v.n_modes()) {
    throw DomainError(std::string(op) + ": mode index " + std::to_string(mode) +
                      " out of range for " + std::to_string(v.n_modes()) + " modes");
  }
}

// side_one first, then side_two ascending; all distinct and in range
std::vector<std::size_t> partition_modes(const CovarianceMatrix& v, const ModePartition& part) {
  if (part.side_two.empty() || part.side_two.size() > 2) {
    throw DomainError("log_negativity: side_two must hold one or two modes");
  }
  require_mode_index(v, part.side_one, "log_negativity");
  std::vector<std::size_t> modes{part.side_one};
  for (std::size_t m : part.side_two) {
    require_mode_index(v, m, "log_negativity");
    if (m == part.side_one || std::find(modes.begin(), modes.end(), m) != modes.end()) {
      throw DomainError("log_negativity: partition modes must be distinct");
    }
    modes.push_back(m);
  }
  std::sort(modes.begin(), modes.end());
  return modes;
}

}  // namespace

std::string_view mode_name(Mode m) noexcept {
  switch (m) {
    case Mode::Cavity: return "a";
    case Mode::Magnon: return "m";
    case Mode::Mechanical: return "b";
  }
  return "?";
}

CovarianceMatrix::CovarianceMatrix(RealMatrix m, std::vector<Mode> labels)
    : m_(std::move(m)), labels_(std::move(labels)) {
  if (labels_.empty() || m_.rows() != 2 * labels_.size() || m_.cols() != 2 * labels_.size()) {
    throw DimensionError("CovarianceMatrix: need a 2n x 2n matrix with one label per mode");
  }
  if (!m_.all_finite()) throw DomainError("CovarianceMatrix: non-finite entries");
  const double tol = 1e-10 * std::max(1.0, m_.max_abs());
  if (m_.max_abs_diff(m_.transposed()) > tol) {
    throw DomainError("CovarianceMatrix: input not symmetric within 1e-10");
  }
  m_.symmetrize();
}

double CovarianceMatrix::min_physicality_eigenvalue() const {
  const std::size_t dim = m_.rows();
  const RealMatrix omega = symplectic_form(n_modes());
  ComplexMatrix herm(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      herm(i, j) = std::complex<double>(m_(i, j), 0.5 * omega(i, j));
  const auto eigs = linalg::eigenvalues_hermitian(herm);
  return eigs.front();
}

bool CovarianceMatrix::is_physical(double tol) const {
  return min_physicality_eigenvalue() >= -tol;
}

void CovarianceMatrix::require_physical(double tol) const {
  const double min_eig = min_physicality_eigenvalue();
  if (min_eig < -tol) {
    throw PhysicalityError("covariance matrix unphysical: min eig of V + (i/2)Omega = " +
                           std::to_string(min_eig));
  }
}

bool CovarianceMatrix::diagonal_vacuum_limited(double tol) const noexcept {
  for (std::size_t i = 0; i < m_.rows(); ++i)
    if (m_(i, i) < 0.5 - tol) return false;
  return true;
}

RealMatrix symplectic_form(std::size_t n_modes) {
  RealMatrix omega(2 * n_modes, 2 * n_modes);
  for (std::size_t k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

CovarianceMatrix reduce_modes(const CovarianceMatrix& v, std::span<const std::size_t> keep) {
  if (keep.empty()) throw DomainError("reduce_modes: keep set must be nonempty");
  std::vector<std::size_t> modes(keep.begin(), keep.end());
  std::sort(modes.begin(), modes.end());
  if (std::adjacent_find(modes.begin(), modes.end()) != modes.end()) {
    throw DomainError("reduce_modes: duplicate mode index");
  }
  require_mode_index(v, modes.back(), "reduce_modes");

  const std::size_t k = modes.size();
  RealMatrix sub(2 * k, 2 * k);
  std::vector<Mode> labels(k);
  for (std::size_t p = 0; p < k; ++p) {
    labels[p] = v.labels()[modes[p]];
    for (std::size_t q = 0; q < k; ++q)
      for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t t = 0; t < 2; ++t)
          sub(2 * p + s, 2 * q + t) = v.matrix()(2 * modes[p] + s, 2 * modes[q] + t);
  }
  return CovarianceMatrix(std::move(sub), std::move(labels));
}

CovarianceMatrix partial_transpose(const CovarianceMatrix& v, std::size_t transposed_mode) {
  require_mode_index(v, transposed_mode, "partial_transpose");
  RealMatrix m = v.matrix();
  const std::size_t y = 2 * transposed_mode + 1;
  for (std::size_t j = 0; j < m.cols(); ++j) m(y, j) = -m(y, j);
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, y) = -m(i, y);
  return CovarianceMatrix(std::move(m), v.labels());
}

std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& v) {
  const std::size_t n = v.n_modes();
  const RealMatrix product = matmul(symplectic_form(n), v.matrix());
  const auto eigs = linalg::eigenvalues_general(product);

  double scale = 0.0;
  for (const auto& e : eigs) scale = std::max(scale, std::abs(e));
  const double tol = 1e-8 * std::max(1.0, scale);

  // spectrum of Omega V is +-(i nu_j); moduli of the imaginary parts pair up
  for (const auto& e : eigs) {
    if (std::abs(e.real()) > 100.0 * tol) {
      throw NumericalDegeneracyError(
          "symplectic_eigenvalues: eigenvalue with non-negligible real part " +
          std::to_string(e.real()));
    }
  }
  std::vector<double> moduli(eigs.size());
  for (std::size_t i = 0; i < eigs.size(); ++i) moduli[i] = std::abs(eigs[i].imag());
  std::sort(moduli.begin(), moduli.end());

  std::vector<double> nus(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = moduli[2 * k], b = moduli[2 * k + 1];
    if (std::abs(a - b) > tol) {
      throw NumericalDegeneracyError("symplectic_eigenvalues: conjugate pairing mismatch " +
                                     std::to_string(std::abs(a - b)));
    }
    nus[k] = 0.5 * (a + b);
  }
  return nus;
}

double log_negativity(const CovarianceMatrix& v, const ModePartition& part) {
  const auto modes = partition_modes(v, part);
  const CovarianceMatrix reduced =
      (modes.size() == v.n_modes()) ? v : reduce_modes(v, modes);
  reduced.require_physical();

  const auto it = std::find(modes.begin(), modes.end(), part.side_one);
  const std::size_t local_index = static_cast<std::size_t>(it - modes.begin());
  const CovarianceMatrix pt = partial_transpose(reduced, local_index);
  const auto nus = symplectic_eigenvalues(pt);
  const double nu_min = nus.front();
  if (!(nu_min > 0.0)) {
    throw PhysicalityError("log_negativity: non-positive symplectic eigenvalue after PT");
  }
  return std::max(0.0, -std::log(2.0 * nu_min));
}

double contangle(const CovarianceMatrix& v, const ModePartition& part) {
  const double e = log_negativity(v, part);
  return e * e;
}

double residual_contangle(const CovarianceMatrix& v, std::size_t focus) {
  if (v.n_modes() != 3) throw DomainError("residual_contangle: needs exactly 3 modes");
  require_mode_index(v, focus, "residual_contangle");
  std::vector<std::size_t> others;
  for (std::size_t m = 0; m < 3; ++m)
    if (m != focus) others.push_back(m);

  const double c_one_two = contangle(v, {focus, others});
  const double c_j = contangle(v, {focus, {others[0]}});
  const double c_k = contangle(v, {focus, {others[1]}});
  return c_one_two - c_j - c_k;
}

std::array<double, 3> residual_contangle_all(const CovarianceMatrix& v) {
  return {residual_contangle(v, 0), residual_contangle(v, 1), residual_contangle(v, 2)};
}

double min_residual_contangle(const CovarianceMatrix& v) {
  const auto r = residual_contangle_all(v);
  const double raw = *std::min_element(r.begin(), r.end());
  if (raw >= 0.0) return raw;
  // monogamy holds analytically; tiny negatives are double-precision noise
  return 0.0;
}

}  // namespace magnomech::gaussian
