// Counter-based random streams. Value n of stream s is a 64-bit hash of
// (key(master_seed, s), n), so any stream can be regenerated in isolation
// and worker scheduling cannot change what a given sample draws.
#pragma once

#include <cstdint>

namespace treequench {

namespace detail {

inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
inline constexpr std::uint64_t kStreamSalt = 0xC2B2AE3D27D4EB4Full;

// Stafford variant 13 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

}  // namespace detail

class CounterRng {
 public:
  CounterRng(std::uint64_t master_seed, std::uint64_t stream)
      : key_(detail::mix64(detail::mix64(master_seed + detail::kGamma) +
                           stream * detail::kStreamSalt)) {}

  std::uint64_t next_u64() {
    counter_ += detail::kGamma;
    return detail::mix64(key_ + counter_);
  }

  // Uniform in [0, 1) with 53 significant bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace treequench
