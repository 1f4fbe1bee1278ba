#pragma once

// Counter-based random streams. Replicate r of cell k in an experiment draws from
// the stream keyed by derive_stream_key(master_seed, k, r), so results do not depend
// on how replicates are scheduled across threads.

#include <boost/random/normal_distribution.hpp>
#include <cstdint>
#include <limits>
#include <span>

namespace mtc {

/// SplitMix64 output function.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_stream_key(std::uint64_t master_seed, std::uint64_t cell,
                                std::uint64_t replicate) noexcept;

/// SplitMix64 in counter mode: the i-th output is mix64(key + (i + 1) * golden_gamma).
/// Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * kGoldenGamma);
  }

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  static constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Standard normal variates from one counter stream (Boost's ziggurat sampler,
/// which is bit-reproducible across platforms for a given engine).
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t key) noexcept : engine_(key) {}

  double operator()() { return dist_(engine_); }

  void fill(std::span<double> out) {
    for (double& v : out) v = dist_(engine_);
  }

  std::uint64_t key() const noexcept { return engine_.key(); }

 private:
  CounterRng engine_;
  boost::random::normal_distribution<double> dist_;
};

}  // namespace mtc
