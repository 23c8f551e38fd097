#include "sod/kernels/kernels.hpp"

#include <cstdlib>
#include <stdexcept>

namespace sod::kern {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Ops* pick_auto() {
  if (const Ops* o = avx2_ops(); o && cpu_has_avx2()) return o;
  if (const Ops* o = neon_ops()) return o;
  return &ref_ops();
}

const Ops* initial_backend() {
  if (const char* env = std::getenv("SOD_KERNEL_BACKEND")) {
    std::string name(env);
    if (name == "ref") return &ref_ops();
    if (name == "avx2" && avx2_ops() && cpu_has_avx2()) return avx2_ops();
    if (name == "neon" && neon_ops()) return neon_ops();
  }
  return pick_auto();
}

const Ops*& active() {
  static const Ops* ops = initial_backend();
  return ops;
}

}  // namespace

const Ops& ops() { return *active(); }

std::string backend_name() { return active()->name; }

void set_backend(const std::string& name) {
  if (name == "auto") {
    active() = pick_auto();
    return;
  }
  if (name == "ref") {
    active() = &ref_ops();
    return;
  }
  if (name == "avx2") {
    if (const Ops* o = avx2_ops(); o && cpu_has_avx2()) {
      active() = o;
      return;
    }
    throw std::runtime_error("kernel backend 'avx2' not available on this CPU");
  }
  if (name == "neon") {
    if (const Ops* o = neon_ops()) {
      active() = o;
      return;
    }
    throw std::runtime_error("kernel backend 'neon' not available on this CPU");
  }
  throw std::runtime_error("unknown kernel backend '" + name + "'");
}

}  // namespace sod::kern
