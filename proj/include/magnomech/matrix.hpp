#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace magnomech {

/// Dense row-major real matrix. Everything in this project is tiny
/// (n <= 64), so storage is a flat vector and operations are direct loops.
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(std::size_t rows, std::size_t cols);  // zero-initialized
  static RealMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_ && rows_ > 0; }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  const double* row_data(std::size_t i) const { return data_.data() + i * cols_; }
  double* row_data(std::size_t i) { return data_.data() + i * cols_; }
  std::span<const double> entries() const noexcept { return data_; }
  std::span<double> entries() noexcept { return data_; }

  RealMatrix transposed() const;
  void symmetrize();  // m <- (m + m^T)/2, square only

  bool all_finite() const noexcept;
  double max_abs() const noexcept;
  double frobenius_norm() const noexcept;
  double max_abs_diff(const RealMatrix& other) const;

  RealMatrix& operator+=(const RealMatrix& other);
  RealMatrix& operator-=(const RealMatrix& other);
  RealMatrix& operator*=(double s);

  friend RealMatrix operator+(RealMatrix a, const RealMatrix& b) { return a += b; }
  friend RealMatrix operator-(RealMatrix a, const RealMatrix& b) { return a -= b; }
  friend RealMatrix operator*(RealMatrix a, double s) { return a *= s; }
  friend RealMatrix operator*(double s, RealMatrix a) { return a *= s; }
  friend bool operator==(const RealMatrix& a, const RealMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

/// Dense row-major complex matrix; intermediate for eigenvalue extraction.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_ && rows_ > 0; }

  std::complex<double> operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  std::complex<double>& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  bool all_finite() const noexcept;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::complex<double>> data_;
};

RealMatrix matmul(const RealMatrix& a, const RealMatrix& b);
RealMatrix kron(const RealMatrix& a, const RealMatrix& b);

}  // namespace magnomech
