#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Every draw is
// a pure function of (key, counter), so parallel streams never share state.

#include <array>
#include <cstdint>

namespace ldplab {

class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter generate(Counter ctr, Key key) noexcept {
    ctr = round(ctr, key);
    for (int i = 1; i < 10; ++i) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
      ctr = round(ctr, key);
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static constexpr Counter round(const Counter& c, const Key& k) noexcept {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
};

/// Uniform doubles addressed by (seed, stream, index). Two 53-bit doubles
/// come out of each Philox block.
class CounterStream {
 public:
  constexpr CounterStream(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  /// Uniform in [0, 1).
  constexpr double uniform(std::uint64_t index) const noexcept {
    const std::uint64_t block = index >> 1;
    const auto out = Philox4x32::generate(
        {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
         static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
        key_);
    const std::size_t lane = (index & 1u) * 2u;
    const std::uint64_t bits =
        (static_cast<std::uint64_t>(out[lane]) << 32 | out[lane + 1]) >> 11;
    return static_cast<double>(bits) * 0x1.0p-53;
  }

  /// Uniform in the open interval (0, 1).
  constexpr double open_uniform(std::uint64_t index) const noexcept {
    return uniform(index) + 0x1.0p-54;
  }

 private:
  Philox4x32::Key key_;
  std::uint64_t stream_;
};

/// Derives an independent seed for a sub-experiment (SplitMix64 finalizer).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace ldplab
