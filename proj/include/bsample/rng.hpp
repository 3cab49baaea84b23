#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace bsample {

// SplitMix64 finalizer. Used both to expand seeds and to derive substream keys.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based derivation of a child seed from (parent, index, tag). Pure function of its
// arguments, so the seed of replicate k never depends on which worker ran it or when.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index,
                                    std::uint64_t tag = 0) noexcept {
  return mix64(mix64(mix64(parent) ^ index) + 0x632be59bd9b4e019ULL * (tag + 1));
}

// Identifies one logical random stream.
struct StreamId {
  std::uint64_t seed = 0;
  std::uint64_t substream = 0;

  friend constexpr bool operator==(const StreamId&, const StreamId&) = default;
};

// xoshiro256** generator; satisfies UniformRandomBitGenerator.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(StreamId id) noexcept {
    std::uint64_t x = derive_seed(id.seed, id.substream, 0x5eed);
    for (auto& word : s_) {
      x += 0x9e3779b97f4a7c15ULL;
      word = mix64(x);
    }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
};

}  // namespace bsample
