#include <cstdlib>
#include <string_view>

#include "qwork/kernels.hpp"

namespace qwork::kernels {

#if defined(QWORK_BUILD_AVX2)
const Ops& avx2_ops();
#endif
#if defined(QWORK_BUILD_NEON)
const Ops& neon_ops();
#endif

namespace {

const Ops* find_backend(std::string_view name) {
  if (name == "scalar") return &scalar_ops();
#if defined(QWORK_BUILD_AVX2)
  if (name == "avx2" && __builtin_cpu_supports("avx2")) return &avx2_ops();
#endif
#if defined(QWORK_BUILD_NEON)
  if (name == "neon") return &neon_ops();
#endif
  return nullptr;
}

const Ops* pick_default() {
  if (const char* env = std::getenv("QWORK_KERNELS")) {
    if (const Ops* ops = find_backend(env)) return ops;
  }
#if defined(QWORK_BUILD_AVX2)
  if (__builtin_cpu_supports("avx2")) return &avx2_ops();
#endif
#if defined(QWORK_BUILD_NEON)
  return &neon_ops();
#endif
  return &scalar_ops();
}

const Ops*& active_slot() {
  static const Ops* slot = pick_default();
  return slot;
}

}  // namespace

const Ops& active() { return *active_slot(); }

std::string_view backend_name() { return active().name; }

bool set_backend(std::string_view name) {
  if (const Ops* ops = find_backend(name)) {
    active_slot() = ops;
    return true;
  }
  return false;
}

}  // namespace qwork::kernels
