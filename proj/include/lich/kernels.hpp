#pragma once

// Dense inner-loop kernels with a scalar reference implementation and an
// AVX2/FMA variant selected once at runtime from the CPU features.

#include <cstddef>

namespace lich::kernels {

enum class Isa { scalar, avx2 };

Isa active_isa() noexcept;
const char* isa_name(Isa isa) noexcept;
bool avx2_available() noexcept;

// Overrides the dispatch choice (tests use this to compare both paths).
// Requests for an unavailable ISA fall back to scalar.
void force_isa(Isa isa) noexcept;

double dot(const double* x, const double* y, std::size_t n) noexcept;
// Σ w_i x_i y_i over three arrays of equal length.
double wdot(const double* w, const double* x, const double* y, std::size_t n) noexcept;
// y += a x
void axpy(double a, const double* x, double* y, std::size_t n) noexcept;
// y_b = M x_b for every length-f block b of x (M row-major f×f), nblocks blocks.
void apply_blocks(const double* m, std::size_t f, const double* x, double* y,
                  std::size_t nblocks) noexcept;

namespace scalar {
double dot(const double* x, const double* y, std::size_t n) noexcept;
double wdot(const double* w, const double* x, const double* y, std::size_t n) noexcept;
void axpy(double a, const double* x, double* y, std::size_t n) noexcept;
void apply_blocks(const double* m, std::size_t f, const double* x, double* y,
                  std::size_t nblocks) noexcept;
}  // namespace scalar

namespace avx2 {
double dot(const double* x, const double* y, std::size_t n) noexcept;
double wdot(const double* w, const double* x, const double* y, std::size_t n) noexcept;
void axpy(double a, const double* x, double* y, std::size_t n) noexcept;
void apply_blocks(const double* m, std::size_t f, const double* x, double* y,
                  std::size_t nblocks) noexcept;
}  // namespace avx2

}  // namespace lich::kernels
