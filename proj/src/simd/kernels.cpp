#include "lich/kernels.hpp"

#include <atomic>

namespace lich::kernels {
namespace {

Isa detect() noexcept { return avx2_available() ? Isa::avx2 : Isa::scalar; }

std::atomic<Isa>& current() noexcept {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

bool avx2_available() noexcept {
#if defined(LICH_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

const char* isa_name(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void force_isa(Isa isa) noexcept {
  if (isa == Isa::avx2 && !avx2_available()) isa = Isa::scalar;
  current().store(isa, std::memory_order_relaxed);
}

double dot(const double* x, const double* y, std::size_t n) noexcept {
  return active_isa() == Isa::avx2 ? avx2::dot(x, y, n) : scalar::dot(x, y, n);
}

double wdot(const double* w, const double* x, const double* y, std::size_t n) noexcept {
  return active_isa() == Isa::avx2 ? avx2::wdot(w, x, y, n) : scalar::wdot(w, x, y, n);
}

void axpy(double a, const double* x, double* y, std::size_t n) noexcept {
  if (active_isa() == Isa::avx2)
    avx2::axpy(a, x, y, n);
  else
    scalar::axpy(a, x, y, n);
}

void apply_blocks(const double* m, std::size_t f, const double* x, double* y,
                  std::size_t nblocks) noexcept {
  if (active_isa() == Isa::avx2)
    avx2::apply_blocks(m, f, x, y, nblocks);
  else
    scalar::apply_blocks(m, f, x, y, nblocks);
}

}  // namespace lich::kernels
