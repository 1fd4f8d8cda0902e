#pragma once

#include <cstdint>
#include <random>

namespace dgt {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; decorrelates nearby seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream `stream` of the generator family rooted at `seed`.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(mix_seed(seed)), static_cast<std::uint32_t>(mix_seed(seed) >> 32),
                    static_cast<std::uint32_t>(mix_seed(stream ^ 0x5bd1e995ULL)),
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

/// Uniform integers in [0, n) for n < 2^32, two per engine call (Lemire's
/// multiply-and-reject).
class IndexSampler {
 public:
  explicit IndexSampler(Rng& rng) : rng_(rng) {}

  std::uint32_t operator()(std::uint32_t n) {
    std::uint64_t m = std::uint64_t{next()} * n;
    if (static_cast<std::uint32_t>(m) < n) {
      const std::uint32_t threshold = static_cast<std::uint32_t>(-n) % n;
      while (static_cast<std::uint32_t>(m) < threshold) m = std::uint64_t{next()} * n;
    }
    return static_cast<std::uint32_t>(m >> 32);
  }

 private:
  std::uint32_t next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const std::uint64_t word = rng_();
    spare_ = static_cast<std::uint32_t>(word >> 32);
    have_spare_ = true;
    return static_cast<std::uint32_t>(word);
  }

  Rng& rng_;
  std::uint32_t spare_ = 0;
  bool have_spare_ = false;
};

}  // namespace dgt
