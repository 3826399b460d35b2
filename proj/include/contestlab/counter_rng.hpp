#pragma once

#include <cstdint>

namespace contestlab {

/// The 64-bit finalizer used by splitmix64.
inline std::uint64_t splitmix64_mix(std::uint64_t x) noexcept {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Counter-based random stream: the state is a pure function of
/// (seed, trial, stream), so any trial on any thread regenerates exactly the
/// same numbers. One stream per player, plus a reserved stream for
/// tie-breaking, keeps draws independent within a trial.
class CounterRng {
 public:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  CounterRng(std::uint64_t seed, std::uint64_t trial,
             std::uint64_t stream) noexcept
      : state_(splitmix64_mix(
            splitmix64_mix(splitmix64_mix(seed + kGolden) ^ trial) ^ stream)) {}

  std::uint64_t next_u64() noexcept {
    state_ += kGolden;
    return splitmix64_mix(state_);
  }

  /// Uniform on the open interval (0, 1): 53 random bits offset by half an
  /// ulp, so neither endpoint can occur.
  double next_u01() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform index in [0, k). The 128-bit multiply keeps the modulo bias
  /// below 2^-64 per draw.
  std::size_t next_index(std::size_t k) noexcept {
    using u128 = unsigned __int128;
    return static_cast<std::size_t>(
        (static_cast<u128>(next_u64()) * static_cast<u128>(k)) >> 64);
  }

 private:
  std::uint64_t state_;
};

}  // namespace contestlab
