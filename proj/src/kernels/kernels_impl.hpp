#pragma once

#include "mtc/kernels.hpp"

namespace mtc::kernels::detail {

MaxResult scalar_max_abs(const double* x, std::size_t n);
MaxResult scalar_max_value(const double* x, std::size_t n);
double scalar_sum(const double* x, std::size_t n);
double scalar_centered_sum_squares(const double* x, std::size_t n, double center);
double scalar_reciprocal_sum(const double* x, std::size_t n);
void scalar_equicorrelated(double* out, const double* z, const double* shift, std::size_t n,
                           double common, double scale);

#if defined(MTC_HAVE_AVX2)
MaxResult avx2_max_abs(const double* x, std::size_t n);
MaxResult avx2_max_value(const double* x, std::size_t n);
double avx2_sum(const double* x, std::size_t n);
double avx2_centered_sum_squares(const double* x, std::size_t n, double center);
double avx2_reciprocal_sum(const double* x, std::size_t n);
void avx2_equicorrelated(double* out, const double* z, const double* shift, std::size_t n,
                         double common, double scale);
#endif

}  // namespace mtc::kernels::detail
