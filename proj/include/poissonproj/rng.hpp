#ifndef POISSONPROJ_RNG_HPP
#define POISSONPROJ_RNG_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace poissonproj {

/// Counter-based deterministic random stream built on SplitMix64.
///
/// Every generator in the library takes an explicit Rng, so outputs are a
/// pure function of the seed. Independent replicate streams are derived via
/// derive_stream(master_seed, r), which makes Monte Carlo runs reproducible
/// and independent of the order in which replicates execute.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    // SplitMix64 (Steele, Lea, Flood 2014)
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; caches the spare deviate.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 == 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Hash-derived seed for replicate r of a run with the given master seed.
/// Mixes both words through SplitMix64 so nearby (seed, r) pairs give
/// uncorrelated streams.
inline std::uint64_t derive_stream(std::uint64_t master_seed, std::uint64_t r) {
  Rng mix(master_seed ^ (r * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
  mix.next_u64();
  return mix.next_u64();
}

/// Exact Poisson(mean) draw.
///
/// Uses the exponential-interarrival (multiplication) method for mean <= 30;
/// larger means are split into chunks, exploiting that independent Poisson
/// draws add. Every mean used in this library is <= 10.
inline long sample_poisson(double mean, Rng& rng) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw std::invalid_argument("sample_poisson: mean must be finite and >= 0");
  }
  if (mean == 0.0) return 0;
  long total = 0;
  double remaining = mean;
  while (remaining > 30.0) {
    remaining -= 30.0;
    const double limit = std::exp(-30.0);
    double p = 1.0;
    long k = -1;
    do {
      p *= rng.uniform();
      ++k;
    } while (p > limit);
    total += k;
  }
  const double limit = std::exp(-remaining);
  double p = 1.0;
  long k = -1;
  do {
    p *= rng.uniform();
    ++k;
  } while (p > limit);
  return total + k;
}

}  // namespace poissonproj

#endif  // POISSONPROJ_RNG_HPP
