#include "mtc/rng.hpp"

namespace mtc {

std::uint64_t derive_stream_key(std::uint64_t master_seed, std::uint64_t cell,
                                std::uint64_t replicate) noexcept {
  std::uint64_t key = mix64(master_seed + 0x9e3779b97f4a7c15ULL);
  key = mix64(key ^ (cell * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
  key = mix64(key ^ (replicate * 0xaef17502108ef2d9ULL + 0x2545f4914f6cdd1dULL));
  return key;
}

}  // namespace mtc
