#pragma once

#include <cstdint>
#include <vector>

namespace lesionlab {

// Deterministic RNG used everywhere randomness is needed. Hand-rolled so
// streams are identical across compilers and standard libraries; std::shuffle
// and std::uniform_*_distribution are implementation-defined and would break
// the byte-reproducibility contract on report files.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound) by rejection; unbiased.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform double in [0, 1) with 53 bits of precision.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform double in [lo, hi).
  double next_double(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t mix_u64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Child seed derivation: independent well-mixed streams per (tag, index)
// pair so adding one experiment axis never perturbs another.
inline std::uint64_t child_seed(std::uint64_t master, std::uint64_t tag,
                                std::uint64_t index) {
  return mix_u64(master ^ mix_u64(tag + 0x632be59bd9b4e019ULL) ^
                 mix_u64(index + 0x9e3779b97f4a7c15ULL));
}

// Fisher-Yates with the portable generator above.
template <typename T>
void shuffle_in_place(std::vector<T>& values, SplitMix64& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace lesionlab
