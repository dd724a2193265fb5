#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace ultrarelax {

// Counter-based Philox4x32-10 block generator. Streams are indexed by
// (seed, stream) with the block counter in the remaining words, so path k of
// a Monte Carlo run draws the same deviates no matter how paths are split
// across threads, and aggregate results are byte-identical for a fixed seed.
struct Philox4x32 {
  static constexpr std::uint32_t mult_a = 0xD2511F53u;
  static constexpr std::uint32_t mult_b = 0xCD9E8D57u;
  static constexpr std::uint32_t weyl_a = 0x9E3779B9u;
  static constexpr std::uint32_t weyl_b = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      if (round != 0) {
        key[0] += weyl_a;
        key[1] += weyl_b;
      }
      const std::uint64_t prod0 = static_cast<std::uint64_t>(mult_a) * counter[0];
      const std::uint64_t prod1 = static_cast<std::uint64_t>(mult_b) * counter[2];
      const auto hi0 = static_cast<std::uint32_t>(prod0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(prod0);
      const auto hi1 = static_cast<std::uint32_t>(prod1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(prod1);
      counter = {hi1 ^ counter[1] ^ key[0], lo1, hi0 ^ counter[3] ^ key[1], lo0};
    }
    return counter;
  }
};

// Double-precision deviates drawn from one Philox stream.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_lo_(static_cast<std::uint32_t>(stream)),
        stream_hi_(static_cast<std::uint32_t>(stream >> 32)) {}

  // Uniform in [0, 1), 53 significant bits.
  double uniform() {
    const std::uint64_t bits = next64();
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

  // Exponential deviate with the given rate; never returns infinity.
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  // Uniform integer in [0, bound); bound must be positive. The modulo bias
  // of the fixed-point multiply is ~bound/2^64, irrelevant for tree digits.
  std::uint64_t below(std::uint64_t bound) {
    const unsigned __int128 wide = static_cast<unsigned __int128>(next64()) * bound;
    return static_cast<std::uint64_t>(wide >> 64);
  }

  std::uint64_t next64() {
    if (word_ >= 4) {
      buffer_ = Philox4x32::block({stream_lo_, stream_hi_, block_lo_, block_hi_}, key_);
      if (++block_lo_ == 0) ++block_hi_;
      word_ = 0;
    }
    const std::uint64_t lo = buffer_[word_];
    const std::uint64_t hi = buffer_[word_ + 1];
    word_ += 2;
    return (hi << 32) | lo;
  }

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint32_t stream_lo_;
  std::uint32_t stream_hi_;
  std::uint32_t block_lo_ = 0;
  std::uint32_t block_hi_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int word_ = 4;
};

}  // namespace ultrarelax
