#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace magnomech::kernels {

// Data-parallel inner loops used by the dense solvers. A scalar reference
// implementation always exists; AVX2 (x86-64) and NEON (aarch64) variants are
// selected at runtime when the host supports them. The environment variable
// MAGNOMECH_KERNELS=scalar|avx2|neon|auto overrides autodetection.
//
// SIMD variants may reassociate sums (FMA, lane-wise accumulators), so results
// can differ from the scalar reference at the rounding level; the equivalence
// suite pins the allowed deviation. Within one process the selected variant is
// fixed, which keeps sweep output bit-reproducible.

enum class Variant { Scalar, Avx2, Neon };

struct Ops {
  double (*dot)(const double* a, const double* b, std::size_t n) noexcept;
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n) noexcept;
  void (*scale)(double* x, double alpha, std::size_t n) noexcept;
};

std::string_view name(Variant v) noexcept;
std::vector<Variant> supported();

/// Active ops table (resolved on first use).
const Ops& active() noexcept;
Variant active_variant() noexcept;

/// Force a variant (tests, benchmarking). Returns false if the host cannot
/// run it. Not meant to be called concurrently with kernel use.
bool select(Variant v) noexcept;
bool select(std::string_view name_or_auto) noexcept;

inline double dot(const double* a, const double* b, std::size_t n) noexcept {
  return active().dot(a, b, n);
}
inline void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept {
  active().axpy(alpha, x, y, n);
}
inline void scale(double* x, double alpha, std::size_t n) noexcept {
  active().scale(x, alpha, n);
}

namespace detail {
extern const Ops scalar_ops;
#if defined(MAGNOMECH_HAVE_AVX2_TU)
extern const Ops avx2_ops;
bool avx2_supported() noexcept;
#endif
#if defined(MAGNOMECH_HAVE_NEON_TU)
extern const Ops neon_ops;
#endif
}  // namespace detail

}  // namespace magnomech::kernels
