#include <atomic>
#include <cstdlib>

#include "magnomech/kernels.hpp"

namespace magnomech::kernels {
namespace {

const Ops* ops_for(Variant v) noexcept {
  switch (v) {
    case Variant::Scalar:
      return &detail::scalar_ops;
    case Variant::Avx2:
#if defined(MAGNOMECH_HAVE_AVX2_TU)
      if (detail::avx2_supported()) return &detail::avx2_ops;
#endif
      return nullptr;
    case Variant::Neon:
#if defined(MAGNOMECH_HAVE_NEON_TU)
      return &detail::neon_ops;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

Variant pick_auto() noexcept {
#if defined(MAGNOMECH_HAVE_AVX2_TU)
  if (detail::avx2_supported()) return Variant::Avx2;
#endif
#if defined(MAGNOMECH_HAVE_NEON_TU)
  return Variant::Neon;
#else
  return Variant::Scalar;
#endif
}

Variant initial_variant() noexcept {
  if (const char* env = std::getenv("MAGNOMECH_KERNELS")) {
    const std::string_view requested(env);
    if (requested == "scalar") return Variant::Scalar;
    if ((requested == "avx2" && ops_for(Variant::Avx2)) ||
        (requested == "neon" && ops_for(Variant::Neon))) {
      return requested == "avx2" ? Variant::Avx2 : Variant::Neon;
    }
    // unknown or unsupported value: fall through to autodetection
  }
  return pick_auto();
}

struct State {
  std::atomic<const Ops*> ops;
  std::atomic<Variant> variant;
  State() {
    const Variant v = initial_variant();
    variant.store(v, std::memory_order_relaxed);
    ops.store(ops_for(v), std::memory_order_relaxed);
  }
};

State& state() noexcept {
  static State s;
  return s;
}

}  // namespace

std::string_view name(Variant v) noexcept {
  switch (v) {
    case Variant::Scalar: return "scalar";
    case Variant::Avx2: return "avx2";
    case Variant::Neon: return "neon";
  }
  return "scalar";
}

std::vector<Variant> supported() {
  std::vector<Variant> out{Variant::Scalar};
  if (ops_for(Variant::Avx2)) out.push_back(Variant::Avx2);
  if (ops_for(Variant::Neon)) out.push_back(Variant::Neon);
  return out;
}

const Ops& active() noexcept { return *state().ops.load(std::memory_order_relaxed); }

Variant active_variant() noexcept { return state().variant.load(std::memory_order_relaxed); }

bool select(Variant v) noexcept {
  const Ops* ops = ops_for(v);
  if (!ops) return false;
  state().variant.store(v, std::memory_order_relaxed);
  state().ops.store(ops, std::memory_order_relaxed);
  return true;
}

bool select(std::string_view name_or_auto) noexcept {
  if (name_or_auto == "auto") return select(pick_auto());
  if (name_or_auto == "scalar") return select(Variant::Scalar);
  if (name_or_auto == "avx2") return select(Variant::Avx2);
  if (name_or_auto == "neon") return select(Variant::Neon);
  return false;
}

}  // namespace magnomech::kernels
