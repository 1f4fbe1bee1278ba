#include <immintrin.h>

#include "kernels_impl.hpp"

namespace mtc::kernels::detail {

namespace {

constexpr std::size_t kLanes = 4;

inline __m256d abs_pd(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

template <bool Absolute>
MaxResult max_by(const double* x, std::size_t n) {
  const std::size_t blocked = n - n % kLanes;
  MaxResult best{Absolute ? (x[0] < 0.0 ? -x[0] : x[0]) : x[0], 0};
  if (blocked > 0) {
    __m256d value = _mm256_loadu_pd(x);
    if constexpr (Absolute) value = abs_pd(value);
    __m256d index = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
    __m256d candidate_index = index;
    const __m256d step = _mm256_set1_pd(static_cast<double>(kLanes));
    for (std::size_t i = kLanes; i < blocked; i += kLanes) {
      candidate_index = _mm256_add_pd(candidate_index, step);
      __m256d v = _mm256_loadu_pd(x + i);
      if constexpr (Absolute) v = abs_pd(v);
      const __m256d greater = _mm256_cmp_pd(v, value, _CMP_GT_OQ);
      value = _mm256_blendv_pd(value, v, greater);
      index = _mm256_blendv_pd(index, candidate_index, greater);
    }
    alignas(32) double lane_value[kLanes];
    alignas(32) double lane_index[kLanes];
    _mm256_store_pd(lane_value, value);
    _mm256_store_pd(lane_index, index);
    best = {lane_value[0], static_cast<std::size_t>(lane_index[0])};
    for (std::size_t j = 1; j < kLanes; ++j) {
      const auto idx = static_cast<std::size_t>(lane_index[j]);
      if (lane_value[j] > best.value || (lane_value[j] == best.value && idx < best.index)) {
        best = {lane_value[j], idx};
      }
    }
  }
  for (std::size_t i = blocked; i < n; ++i) {
    double v = x[i];
    if constexpr (Absolute) v = v < 0.0 ? -v : v;
    if (v > best.value) best = {v, i};
  }
  return best;
}

inline double reduce_lanes(__m256d acc) {
  alignas(32) double lane[kLanes];
  _mm256_store_pd(lane, acc);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

}  // namespace

MaxResult avx2_max_abs(const double* x, std::size_t n) { return max_by<true>(x, n); }

MaxResult avx2_max_value(const double* x, std::size_t n) { return max_by<false>(x, n); }

double avx2_sum(const double* x, std::size_t n) {
  const std::size_t blocked = n - n % kLanes;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < blocked; i += kLanes) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double total = reduce_lanes(acc);
  for (std::size_t i = blocked; i < n; ++i) total += x[i];
  return total;
}

double avx2_centered_sum_squares(const double* x, std::size_t n, double center) {
  const std::size_t blocked = n - n % kLanes;
  const __m256d c = _mm256_set1_pd(center);
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < blocked; i += kLanes) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), c);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double total = reduce_lanes(acc);
  for (std::size_t i = blocked; i < n; ++i) {
    const double d = x[i] - center;
    total += d * d;
  }
  return total;
}

double avx2_reciprocal_sum(const double* x, std::size_t n) {
  const std::size_t blocked = n - n % kLanes;
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < blocked; i += kLanes) {
    acc = _mm256_add_pd(acc, _mm256_div_pd(one, _mm256_loadu_pd(x + i)));
  }
  double total = reduce_lanes(acc);
  for (std::size_t i = blocked; i < n; ++i) total += 1.0 / x[i];
  return total;
}

void avx2_equicorrelated(double* out, const double* z, const double* shift, std::size_t n,
                         double common, double scale) {
  const std::size_t blocked = n - n % kLanes;
  const __m256d c = _mm256_set1_pd(common);
  const __m256d s = _mm256_set1_pd(scale);
  for (std::size_t i = 0; i < blocked; i += kLanes) {
    __m256d v = _mm256_add_pd(c, _mm256_mul_pd(s, _mm256_loadu_pd(z + i)));
    if (shift != nullptr) v = _mm256_add_pd(v, _mm256_loadu_pd(shift + i));
    _mm256_storeu_pd(out + i, v);
  }
  for (std::size_t i = blocked; i < n; ++i) {
    out[i] = common + scale * z[i];
    if (shift != nullptr) out[i] += shift[i];
  }
}

}  // namespace mtc::kernels::detail
