#include "kernels_impl.hpp"

#include <cmath>

namespace mtc::kernels::detail {

namespace {

constexpr std::size_t kLanes = 4;

// Strict '>' keeps the first index on ties.
template <class Transform>
MaxResult max_by(const double* x, std::size_t n, Transform transform) {
  const std::size_t blocked = n - n % kLanes;
  MaxResult best{transform(x[0]), 0};
  if (blocked > 0) {
    double lane_value[kLanes];
    std::size_t lane_index[kLanes];
    for (std::size_t j = 0; j < kLanes; ++j) {
      lane_value[j] = transform(x[j]);
      lane_index[j] = j;
    }
    for (std::size_t i = kLanes; i < blocked; i += kLanes) {
      for (std::size_t j = 0; j < kLanes; ++j) {
        const double v = transform(x[i + j]);
        if (v > lane_value[j]) {
          lane_value[j] = v;
          lane_index[j] = i + j;
        }
      }
    }
    best = {lane_value[0], lane_index[0]};
    for (std::size_t j = 1; j < kLanes; ++j) {
      if (lane_value[j] > best.value ||
          (lane_value[j] == best.value && lane_index[j] < best.index)) {
        best = {lane_value[j], lane_index[j]};
      }
    }
  }
  for (std::size_t i = blocked; i < n; ++i) {
    const double v = transform(x[i]);
    if (v > best.value) best = {v, i};
  }
  return best;
}

template <class Term>
double lane_sum(std::size_t n, Term term) {
  const std::size_t blocked = n - n % kLanes;
  double acc[kLanes] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < blocked; i += kLanes) {
    for (std::size_t j = 0; j < kLanes; ++j) acc[j] += term(i + j);
  }
  double total = (acc[0] + acc[1]) + (acc[2] + acc[3]);
  for (std::size_t i = blocked; i < n; ++i) total += term(i);
  return total;
}

}  // namespace

MaxResult scalar_max_abs(const double* x, std::size_t n) {
  return max_by(x, n, [](double v) { return std::abs(v); });
}

MaxResult scalar_max_value(const double* x, std::size_t n) {
  return max_by(x, n, [](double v) { return v; });
}

double scalar_sum(const double* x, std::size_t n) {
  return lane_sum(n, [x](std::size_t i) { return x[i]; });
}

double scalar_centered_sum_squares(const double* x, std::size_t n, double center) {
  return lane_sum(n, [x, center](std::size_t i) {
    const double d = x[i] - center;
    return d * d;
  });
}

double scalar_reciprocal_sum(const double* x, std::size_t n) {
  return lane_sum(n, [x](std::size_t i) { return 1.0 / x[i]; });
}

void scalar_equicorrelated(double* out, const double* z, const double* shift, std::size_t n,
                           double common, double scale) {
  if (shift == nullptr) {
    for (std::size_t i = 0; i < n; ++i) out[i] = common + scale * z[i];
  } else {
    for (std::size_t i = 0; i < n; ++i) out[i] = (common + scale * z[i]) + shift[i];
  }
}

}  // namespace mtc::kernels::detail
