#include <cstdlib>
#include <cstring>

#include "kernels_impl.hpp"

namespace mtc::kernels {

namespace {

constexpr KernelTable kScalar{
    "scalar",
    detail::scalar_max_abs,
    detail::scalar_max_value,
    detail::scalar_sum,
    detail::scalar_centered_sum_squares,
    detail::scalar_reciprocal_sum,
    detail::scalar_equicorrelated,
};

#if defined(MTC_HAVE_AVX2)
constexpr KernelTable kAvx2{
    "avx2",
    detail::avx2_max_abs,
    detail::avx2_max_value,
    detail::avx2_sum,
    detail::avx2_centered_sum_squares,
    detail::avx2_reciprocal_sum,
    detail::avx2_equicorrelated,
};
#endif

const KernelTable& select_table() noexcept {
  const char* forced = std::getenv("MTC_KERNELS");
  if (forced != nullptr && std::strcmp(forced, "scalar") == 0) return kScalar;
  if (const KernelTable* simd = avx2_table()) return *simd;
  return kScalar;
}

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept {
#if defined(MTC_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_table() noexcept {
  static const KernelTable& table = select_table();
  return table;
}

MaxResult max_abs(std::span<const double> x) noexcept {
  return active_table().max_abs(x.data(), x.size());
}

MaxResult max_value(std::span<const double> x) noexcept {
  return active_table().max_value(x.data(), x.size());
}

double sum(std::span<const double> x) noexcept { return active_table().sum(x.data(), x.size()); }

double centered_sum_squares(std::span<const double> x, double center) noexcept {
  return active_table().centered_sum_squares(x.data(), x.size(), center);
}

double reciprocal_sum(std::span<const double> x) noexcept {
  return active_table().reciprocal_sum(x.data(), x.size());
}

void equicorrelated(std::span<double> out, std::span<const double> z,
                    std::span<const double> shift, double common, double scale) noexcept {
  active_table().equicorrelated(out.data(), z.data(), shift.empty() ? nullptr : shift.data(),
                                out.size(), common, scale);
}

}  // namespace mtc::kernels
