#include "magnomech/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "magnomech/errors.hpp"
#include "magnomech/kernels.hpp"

namespace magnomech::linalg {
namespace {

constexpr double k_eps = std::numeric_limits<double>::epsilon();

void require_square(const RealMatrix& m, const char* op) {
  if (!m.square()) {
    throw DimensionError(std::string(op) + ": matrix must be square, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

// Diagonal similarity scaling (radix 2) so row and column norms are
// comparable; eigenvalues are unchanged and the QR iteration gets more
// uniform roundoff.
void balance(RealMatrix& a) {
  const std::size_t n = a.rows();
  constexpr double radix = 2.0;
  constexpr double sqrdx = radix * radix;
  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double f = 1.0;
      double g = r / radix;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        g = 1.0 / f;
        for (std::size_t j = 0; j < n; ++j) a(i, j) *= g;
        for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
}

// Householder similarity reduction to upper Hessenberg form.
void reduce_to_hessenberg(RealMatrix& a) {
  const std::size_t n = a.rows();
  if (n < 3) return;
  std::vector<double> v(n, 0.0);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double scale = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) scale += std::abs(a(i, k));
    if (scale == 0.0) continue;
    double h = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      v[i] = a(i, k) / scale;
      h += v[i] * v[i];
    }
    const double g = -std::copysign(std::sqrt(h), v[k + 1]);
    h -= v[k + 1] * g;  // h = v^T v / 2 after the update below
    v[k + 1] -= g;
    // left: A <- (I - v v^T / h) A
    for (std::size_t j = 0; j < n; ++j) {
      double f = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) f += v[i] * a(i, j);
      f /= h;
      for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= f * v[i];
    }
    // right: A <- A (I - v v^T / h)
    for (std::size_t i = 0; i < n; ++i) {
      double f = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) f += a(i, j) * v[j];
      f /= h;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * v[j];
    }
    a(k + 1, k) = scale * g;
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
  }
}

// Francis double-shift QR on an upper Hessenberg matrix. Classic EISPACK
// hqr with epsilon-scaled deflation tests and exceptional shifts.
std::vector<std::complex<double>> hessenberg_qr(RealMatrix& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<std::complex<double>> eig(static_cast<std::size_t>(n));

  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));
  if (anorm == 0.0) return eig;  // zero matrix

  int nn = n - 1;
  double t = 0.0;
  while (nn >= 0) {
    int its = 0;
    int l = 0;
    do {
      for (l = nn; l >= 1; --l) {
        double s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(a(l, l - 1)) <= k_eps * s) {
          a(l, l - 1) = 0.0;
          break;
        }
      }
      double x = a(nn, nn);
      if (l == nn) {
        eig[nn] = {x + t, 0.0};
        --nn;
      } else {
        double y = a(nn - 1, nn - 1);
        double w = a(nn, nn - 1) * a(nn - 1, nn);
        if (l == nn - 1) {
          double p = 0.5 * (y - x);
          const double q = p * p + w;
          double z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + std::copysign(z, p);
            eig[nn - 1] = {x + z, 0.0};
            eig[nn] = (z != 0.0) ? std::complex<double>{x - w / z, 0.0} : eig[nn - 1];
          } else {
            eig[nn - 1] = {x + p, z};
            eig[nn] = {x + p, -z};
          }
          nn -= 2;
        } else {
          if (its == 40) {
            throw ConvergenceError("eigenvalues_general: QR iteration exceeded 40 sweeps");
          }
          if (its == 10 || its == 20 || its == 30) {
            // exceptional shift
            t += x;
            for (int i = 0; i <= nn; ++i) a(i, i) -= x;
            const double s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          int m = nn - 2;
          double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
          for (; m >= l; --m) {
            z = a(m, m);
            const double rdiff = x - z;
            const double sdiff = y - z;
            p = (rdiff * sdiff - w) / a(m + 1, m) + a(m, m + 1);
            q = a(m + 1, m + 1) - z - rdiff - sdiff;
            r = a(m + 2, m + 1);
            const double s = std::abs(p) + std::abs(q) + std::abs(r);
            if (s != 0.0) {
              p /= s;
              q /= s;
              r /= s;
            }
            if (m == l) break;
            const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
            const double v =
                std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) + std::abs(a(m + 1, m + 1)));
            if (u <= k_eps * v) break;
          }
          for (int i = m + 2; i <= nn; ++i) {
            a(i, i - 2) = 0.0;
            if (i != m + 2) a(i, i - 3) = 0.0;
          }
          for (int k = m; k <= nn - 1; ++k) {
            if (k != m) {
              p = a(k, k - 1);
              q = a(k + 1, k - 1);
              r = (k != nn - 1) ? a(k + 2, k - 1) : 0.0;
              x = std::abs(p) + std::abs(q) + std::abs(r);
              if (x != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            const double s = std::copysign(std::sqrt(p * p + q * q + r * r), p);
            if (s == 0.0) continue;
            if (k == m) {
              if (l != m) a(k, k - 1) = -a(k, k - 1);
            } else {
              a(k, k - 1) = -s * x;
            }
            p += s;
            x = p / s;
            y = q / s;
            z = r / s;
            q /= p;
            r /= p;
            for (int j = k; j <= nn; ++j) {
              double pp = a(k, j) + q * a(k + 1, j);
              if (k != nn - 1) {
                pp += r * a(k + 2, j);
                a(k + 2, j) -= pp * z;
              }
              a(k + 1, j) -= pp * y;
              a(k, j) -= pp * x;
            }
            const int mmin = std::min(nn, k + 3);
            for (int i = l; i <= mmin; ++i) {
              // here pp is already (h u)/s, so the k-entry subtracts pp itself
              double pp = x * a(i, k) + y * a(i, k + 1);
              if (k != nn - 1) {
                pp += z * a(i, k + 2);
                a(i, k + 2) -= pp * r;
              }
              a(i, k + 1) -= pp * q;
              a(i, k) -= pp;
            }
          }
        }
      }
    } while (l < nn - 1);
  }
  return eig;
}

// Householder tridiagonalization of a symmetric matrix, values only.
// d gets the diagonal, e the subdiagonal (e[0..n-2]).
void tridiagonalize_symmetric(RealMatrix a, std::vector<double>& d, std::vector<double>& e) {
  const int n = static_cast<int>(a.rows());
  d.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<double> sub(static_cast<std::size_t>(n), 0.0);  // sub[i] couples i-1 and i
  for (int i = n - 1; i >= 1; --i) {
    const int l = i - 1;
    double h = 0.0;
    if (l > 0) {
      double scale = 0.0;
      for (int k = 0; k <= l; ++k) scale += std::abs(a(i, k));
      if (scale == 0.0) {
        sub[i] = a(i, l);
      } else {
        for (int k = 0; k <= l; ++k) {
          a(i, k) /= scale;
          h += a(i, k) * a(i, k);
        }
        double f = a(i, l);
        const double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
        sub[i] = scale * g;
        h -= f * g;
        a(i, l) = f - g;
        f = 0.0;
        for (int j = 0; j <= l; ++j) {
          double gg = 0.0;
          for (int k = 0; k <= j; ++k) gg += a(j, k) * a(i, k);
          for (int k = j + 1; k <= l; ++k) gg += a(k, j) * a(i, k);
          d[j] = gg / h;
          f += d[j] * a(i, j);
        }
        const double hh = f / (h + h);
        for (int j = 0; j <= l; ++j) {
          f = a(i, j);
          const double gg = d[j] - hh * f;
          d[j] = gg;
          for (int k = 0; k <= j; ++k) a(j, k) -= (f * d[k] + gg * a(i, k));
        }
      }
    } else {
      sub[i] = a(i, l);
    }
  }
  for (int i = 0; i < n; ++i) d[i] = a(i, i);
  e.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 1; i < n; ++i) e[i - 1] = sub[i];
}

// QL with implicit Wilkinson shifts on a tridiagonal; values only.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e) {
  const int n = static_cast<int>(d.size());
  if (n == 0) return;
  e[static_cast<std::size_t>(n) - 1] = 0.0;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= k_eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 50) {
          throw ConvergenceError("eigenvalues_symmetric: QL iteration exceeded 50 sweeps");
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i = m - 1;
        for (; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

std::vector<std::complex<double>> eigenvalues_general(const RealMatrix& m) {
  require_square(m, "eigenvalues_general");
  if (m.rows() > k_max_eigen_dim) {
    throw DimensionError("eigenvalues_general: n = " + std::to_string(m.rows()) +
                         " exceeds the supported maximum of 64");
  }
  if (!m.all_finite()) throw DomainError("eigenvalues_general: non-finite entries");
  const std::size_t n = m.rows();
  if (n == 1) return {std::complex<double>(m(0, 0), 0.0)};
  try {
    RealMatrix work = m;
    balance(work);
    reduce_to_hessenberg(work);
    return hessenberg_qr(work);
  } catch (const ConvergenceError&) {
    // Highly structured spectra (exact +-pairs or repeated conjugate pairs)
    // can cycle the shift strategy. Retry on an exact diagonal similarity
    // D m D^-1 that perturbs the rounding path; eigenvalues are unchanged.
    RealMatrix work(n, n);
    constexpr double f = 1.0625;
    std::vector<double> scale(n, 1.0);
    for (std::size_t i = 1; i < n; ++i) scale[i] = scale[i - 1] * f;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) work(i, j) = m(i, j) * (scale[i] / scale[j]);
    balance(work);
    reduce_to_hessenberg(work);
    return hessenberg_qr(work);
  }
}

std::vector<double> eigenvalues_symmetric(const RealMatrix& m) {
  require_square(m, "eigenvalues_symmetric");
  if (!m.all_finite()) throw DomainError("eigenvalues_symmetric: non-finite entries");
  {
    const double tol = 1e-9 * std::max(1.0, m.max_abs());
    if (m.max_abs_diff(m.transposed()) > tol) {
      throw DomainError("eigenvalues_symmetric: input not symmetric");
    }
  }
  std::vector<double> d, e;
  tridiagonalize_symmetric(m, d, e);
  tridiagonal_ql(d, e);
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<double> eigenvalues_hermitian(const ComplexMatrix& m) {
  if (!m.square()) throw DimensionError("eigenvalues_hermitian: matrix must be square");
  const std::size_t n = m.rows();
  RealMatrix embed(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto v = m(i, j);
      embed(i, j) = v.real();
      embed(i, j + n) = -v.imag();
      embed(i + n, j) = v.imag();
      embed(i + n, j + n) = v.real();
    }
  }
  // symmetric solver: the embedding duplicates every eigenvalue exactly,
  // which is the degenerate case the general QR iteration handles worst
  std::vector<double> reals = eigenvalues_symmetric(embed);
  // the embedding doubles every eigenvalue; collapse adjacent pairs
  std::vector<double> out(n);
  double scale = 0.0;
  for (double v : reals) scale = std::max(scale, std::abs(v));
  const double tol = 1e-8 * std::max(1.0, scale);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = reals[2 * k], b = reals[2 * k + 1];
    if (std::abs(a - b) > tol) {
      throw NumericalDegeneracyError("eigenvalues_hermitian: embedding pairs disagree by " +
                                     std::to_string(std::abs(a - b)));
    }
    out[k] = 0.5 * (a + b);
  }
  return out;
}

std::vector<double> solve_linear(const RealMatrix& m, std::span<const double> rhs) {
  require_square(m, "solve_linear");
  const std::size_t n = m.rows();
  if (rhs.size() != n) {
    throw DimensionError("solve_linear: rhs length " + std::to_string(rhs.size()) +
                         " does not match n = " + std::to_string(n));
  }
  RealMatrix lu = m;
  std::vector<double> x(rhs.begin(), rhs.end());
  const double pivot_floor = static_cast<double>(n) * k_eps * std::max(m.max_abs(), 1e-300);

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double piv_mag = std::abs(lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double mag = std::abs(lu(i, k));
      if (mag > piv_mag) {
        piv = i;
        piv_mag = mag;
      }
    }
    if (piv_mag <= pivot_floor) {
      throw SingularMatrixError(
          "solve_linear: singular to working precision at column " + std::to_string(k) +
              " (pivot magnitude " + std::to_string(piv_mag) + ")",
          piv_mag);
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
      std::swap(x[k], x[piv]);
    }
    const double inv = 1.0 / lu(k, k);
    const double* pivot_row = lu.row_data(k) + k + 1;
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = lu(i, k) * inv;
      if (f != 0.0) {
        kernels::axpy(-f, pivot_row, lu.row_data(i) + k + 1, n - k - 1);
        x[i] -= f * x[k];
      }
      lu(i, k) = f;
    }
  }
  for (std::size_t ii = n; ii-- > 0;) {
    const double acc = kernels::dot(lu.row_data(ii) + ii + 1, x.data() + ii + 1, n - ii - 1);
    x[ii] = (x[ii] - acc) / lu(ii, ii);
  }
  return x;
}

RealMatrix lyapunov_solve(const RealMatrix& a, const RealMatrix& d) {
  require_square(a, "lyapunov_solve");
  require_square(d, "lyapunov_solve");
  const std::size_t n = a.rows();
  if (d.rows() != n) throw DimensionError("lyapunov_solve: a and d dimensions differ");
  {
    const double sym_tol = 1e-9 * std::max(1.0, d.max_abs());
    RealMatrix dt = d.transposed();
    if (d.max_abs_diff(dt) > sym_tol) throw DomainError("lyapunov_solve: d is not symmetric");
  }

  // row-major vec: vec(a V + V a^T) = (a (x) I + I (x) a) vec(V)
  const RealMatrix eye = RealMatrix::identity(n);
  RealMatrix op = kron(a, eye);
  op += kron(eye, a);

  std::vector<double> rhs(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rhs[i * n + j] = -d(i, j);

  std::vector<double> vec;
  try {
    vec = solve_linear(op, rhs);
  } catch (const SingularMatrixError& e) {
    throw InstabilityError(std::string("lyapunov_solve: vectorized operator singular "
                                       "(drift matrix not Hurwitz?): ") +
                           e.what());
  }

  RealMatrix v(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) v(i, j) = vec[i * n + j];
  v.symmetrize();
  return v;
}

double lyapunov_residual(const RealMatrix& a, const RealMatrix& v, const RealMatrix& d) {
  RealMatrix res = matmul(a, v);
  res += matmul(v, a.transposed());
  res += d;
  const double denom = a.frobenius_norm() * v.frobenius_norm() + d.frobenius_norm();
  return denom > 0.0 ? res.frobenius_norm() / denom : res.frobenius_norm();
}

}  // namespace magnomech::linalg
