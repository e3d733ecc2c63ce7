#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels_impl.hpp"
#include "specfun/error.hpp"

namespace specfun::simd {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* table_if_supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return &detail::scalar_table();
    case Isa::avx2:
      return cpu_has_avx2() ? detail::avx2_table() : nullptr;
    case Isa::neon:
      // NEON is architecturally mandatory on aarch64.
      return detail::neon_table();
  }
  return nullptr;
}

const KernelTable* select_default() noexcept {
  if (const char* env = std::getenv("SPECFUN_SP_ISA")) {
    const std::string want(env);
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
      if (want == isa_name(isa)) {
        if (const KernelTable* t = table_if_supported(isa)) return t;
      }
    }
  }
  for (Isa isa : {Isa::avx2, Isa::neon}) {
    if (const KernelTable* t = table_if_supported(isa)) return t;
  }
  return &detail::scalar_table();
}

std::atomic<const KernelTable*>& active_slot() noexcept {
  static std::atomic<const KernelTable*> slot{select_default()};
  return slot;
}

}  // namespace

bool isa_supported(Isa isa) noexcept { return table_if_supported(isa) != nullptr; }

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

const KernelTable& kernels_for(Isa isa) {
  const KernelTable* t = table_if_supported(isa);
  if (t == nullptr) {
    throw Error(ErrorCode::InvalidArgument,
                "kernel variant '" + std::string(isa_name(isa)) + "' is not available on this CPU");
  }
  return *t;
}

const KernelTable& active_kernels() noexcept { return *active_slot().load(std::memory_order_acquire); }

Isa active_isa() noexcept { return active_kernels().isa; }

void set_active_isa(Isa isa) { active_slot().store(&kernels_for(isa), std::memory_order_release); }

}  // namespace specfun::simd
