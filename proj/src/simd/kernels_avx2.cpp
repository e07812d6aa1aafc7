#include "lich/kernels.hpp"

#if defined(LICH_HAVE_AVX2_TU)
#include <immintrin.h>

namespace lich::kernels::avx2 {
namespace {

inline double hsum(__m256d v) noexcept {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

double dot(const double* x, const double* y, std::size_t n) noexcept {
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
    a1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), a1);
  }
  for (; i + 4 <= n; i += 4)
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double wdot(const double* w, const double* x, const double* y, std::size_t n) noexcept {
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d p0 = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i));
    __m256d p1 = _mm256_mul_pd(_mm256_loadu_pd(w + i + 4), _mm256_loadu_pd(x + i + 4));
    a0 = _mm256_fmadd_pd(p0, _mm256_loadu_pd(y + i), a0);
    a1 = _mm256_fmadd_pd(p1, _mm256_loadu_pd(y + i + 4), a1);
  }
  for (; i + 4 <= n; i += 4) {
    __m256d p0 = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i));
    a0 = _mm256_fmadd_pd(p0, _mm256_loadu_pd(y + i), a0);
  }
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) s += w[i] * x[i] * y[i];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) noexcept {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void apply_blocks(const double* m, std::size_t f, const double* x, double* y,
                  std::size_t nblocks) noexcept {
  if (f == 1) {
    const __m256d vm = _mm256_set1_pd(m[0]);
    std::size_t i = 0;
    for (; i + 4 <= nblocks; i += 4)
      _mm256_storeu_pd(y + i, _mm256_mul_pd(vm, _mm256_loadu_pd(x + i)));
    for (; i < nblocks; ++i) y[i] = m[0] * x[i];
    return;
  }
  // Each output component is a length-f dot product; vectorize along the row.
  for (std::size_t b = 0; b < nblocks; ++b) {
    const double* xb = x + b * f;
    double* yb = y + b * f;
    for (std::size_t r = 0; r < f; ++r) {
      const double* row = m + r * f;
      __m256d acc = _mm256_setzero_pd();
      std::size_t c = 0;
      for (; c + 4 <= f; c += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(row + c), _mm256_loadu_pd(xb + c), acc);
      double s = hsum(acc);
      for (; c < f; ++c) s += row[c] * xb[c];
      yb[r] = s;
    }
  }
}

}  // namespace lich::kernels::avx2

#else

// Non-x86 builds: the AVX2 entry points forward to the reference kernels and
// avx2_available() reports false, so they are never selected.
namespace lich::kernels::avx2 {
double dot(const double* x, const double* y, std::size_t n) noexcept {
  return scalar::dot(x, y, n);
}
double wdot(const double* w, const double* x, const double* y, std::size_t n) noexcept {
  return scalar::wdot(w, x, y, n);
}
void axpy(double a, const double* x, double* y, std::size_t n) noexcept {
  scalar::axpy(a, x, y, n);
}
void apply_blocks(const double* m, std::size_t f, const double* x, double* y,
                  std::size_t nblocks) noexcept {
  scalar::apply_blocks(m, f, x, y, nblocks);
}
}  // namespace lich::kernels::avx2

#endif
