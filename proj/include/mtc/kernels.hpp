#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference implementation and,
// on x86-64, an AVX2 variant chosen at runtime. The variants accumulate in the same
// 4-lane order as the reference, so results are bit-identical across them.

#include <cstddef>
#include <span>

namespace mtc::kernels {

struct MaxResult {
  double value = 0.0;
  std::size_t index = 0;  // first index attaining the maximum
};

struct KernelTable {
  const char* name;
  MaxResult (*max_abs)(const double* x, std::size_t n);
  MaxResult (*max_value)(const double* x, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*centered_sum_squares)(const double* x, std::size_t n, double center);
  double (*reciprocal_sum)(const double* x, std::size_t n);
  // out[i] = (common + scale * z[i]) + shift[i]; shift may be null (treated as 0).
  void (*equicorrelated)(double* out, const double* z, const double* shift, std::size_t n,
                         double common, double scale);
};

const KernelTable& scalar_table() noexcept;

/// AVX2 table, or nullptr when not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_table() noexcept;

/// Table used by the library: AVX2 when available unless the environment variable
/// MTC_KERNELS=scalar is set at first use.
const KernelTable& active_table() noexcept;

// Span front-ends over active_table(). max_abs / max_value require non-empty input.
MaxResult max_abs(std::span<const double> x) noexcept;
MaxResult max_value(std::span<const double> x) noexcept;
double sum(std::span<const double> x) noexcept;
double centered_sum_squares(std::span<const double> x, double center) noexcept;
double reciprocal_sum(std::span<const double> x) noexcept;
void equicorrelated(std::span<double> out, std::span<const double> z,
                    std::span<const double> shift, double common, double scale) noexcept;

}  // namespace mtc::kernels
