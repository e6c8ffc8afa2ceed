#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "magnomech/kernels.hpp"

using namespace magnomech;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = unit(rng);
  return v;
}

struct VariantGuard {
  kernels::Variant saved = kernels::active_variant();
  ~VariantGuard() { kernels::select(saved); }
};

}  // namespace

TEST_CASE("scalar kernels: basic identities") {
  VariantGuard guard;
  REQUIRE(kernels::select(kernels::Variant::Scalar));
  const std::vector<double> a{1.0, 2.0, 3.0};
  std::vector<double> b{4.0, 5.0, 6.0};
  CHECK(kernels::dot(a.data(), b.data(), 3) == doctest::Approx(32.0));
  kernels::axpy(2.0, a.data(), b.data(), 3);
  CHECK(b[0] == 6.0);
  CHECK(b[2] == 12.0);
  kernels::scale(b.data(), 0.5, 3);
  CHECK(b[0] == 3.0);
  kernels::axpy(0.0, a.data(), b.data(), 3);  // no-op
  CHECK(b[0] == 3.0);
  CHECK(kernels::dot(a.data(), b.data(), 0) == 0.0);
}

TEST_CASE("every supported variant matches the scalar reference") {
  VariantGuard guard;
  std::mt19937_64 rng(20240811);
  const auto variants = kernels::supported();
  REQUIRE(!variants.empty());

  // odd lengths exercise every remainder path
  for (const std::size_t n : {1u, 2u, 3u, 5u, 7u, 8u, 15u, 16u, 33u, 36u, 67u, 1024u, 1037u}) {
    const auto a = random_vec(rng, n);
    const auto x = random_vec(rng, n);
    const auto y0 = random_vec(rng, n);
    const double alpha = 1.7;

    REQUIRE(kernels::select(kernels::Variant::Scalar));
    const double dot_ref = kernels::dot(a.data(), x.data(), n);
    std::vector<double> axpy_ref = y0;
    kernels::axpy(alpha, x.data(), axpy_ref.data(), n);
    std::vector<double> scale_ref = y0;
    kernels::scale(scale_ref.data(), alpha, n);

    double abs_bound = 0.0;
    for (std::size_t i = 0; i < n; ++i) abs_bound += std::abs(a[i] * x[i]);

    for (const kernels::Variant v : variants) {
      if (v == kernels::Variant::Scalar) continue;
      REQUIRE(kernels::select(v));
      CAPTURE(kernels::name(v));
      CAPTURE(n);
      const double dot_v = kernels::dot(a.data(), x.data(), n);
      CHECK(std::abs(dot_v - dot_ref) <= 1e-13 * (abs_bound + 1.0));

      std::vector<double> axpy_v = y0;
      kernels::axpy(alpha, x.data(), axpy_v.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(axpy_v[i] - axpy_ref[i]) <= 1e-15 * (std::abs(axpy_ref[i]) + 1.0));
      }

      std::vector<double> scale_v = y0;
      kernels::scale(scale_v.data(), alpha, n);
      for (std::size_t i = 0; i < n; ++i) CHECK(scale_v[i] == scale_ref[i]);
    }
  }
}

TEST_CASE("variant selection is sticky and reports its name") {
  VariantGuard guard;
  REQUIRE(kernels::select("scalar"));
  CHECK(kernels::active_variant() == kernels::Variant::Scalar);
  CHECK(kernels::name(kernels::active_variant()) == "scalar");
  CHECK_FALSE(kernels::select("no-such-variant"));
  CHECK(kernels::active_variant() == kernels::Variant::Scalar);
  CHECK(kernels::select("auto"));
}
