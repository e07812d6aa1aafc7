#include "lich/kernels.hpp"

namespace lich::kernels::scalar {

double dot(const double* x, const double* y, std::size_t n) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double wdot(const double* w, const double* x, const double* y, std::size_t n) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * x[i] * y[i];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) noexcept {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void apply_blocks(const double* m, std::size_t f, const double* x, double* y,
                  std::size_t nblocks) noexcept {
  for (std::size_t b = 0; b < nblocks; ++b) {
    const double* xb = x + b * f;
    double* yb = y + b * f;
    for (std::size_t r = 0; r < f; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < f; ++c) s += m[r * f + c] * xb[c];
      yb[r] = s;
    }
  }
}

}  // namespace lich::kernels::scalar
