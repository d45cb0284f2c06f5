#ifndef POISSONPROJ_SAMPLER_HPP
#define POISSONPROJ_SAMPLER_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "poissonproj/intensity.hpp"
#include "poissonproj/rng.hpp"

namespace poissonproj {

enum class CovariateKind { IidUniform, MixingAr };

/// Law of the covariate process. MixingAr is the mod-1 autoregression
/// X_i = frac(ar_coefficient * X_{i-1} + eps_i), eps_i ~ N(0, noise_sd^2),
/// which stays in [0,1) and is geometrically beta-mixing.
struct CovariateProcessSpec {
  CovariateKind kind = CovariateKind::IidUniform;
  double ar_coefficient = 0.5;
  double noise_sd = 1.0;

  void validate() const {
    if (!(ar_coefficient >= 0.0 && ar_coefficient < 1.0)) {
      throw std::invalid_argument("CovariateProcessSpec: ar_coefficient must be in [0,1)");
    }
    if (!(noise_sd > 0.0)) {
      throw std::invalid_argument("CovariateProcessSpec: noise_sd must be > 0");
    }
  }
};

/// Paired covariate/count observations.
struct Sample {
  std::vector<double> xs;
  std::vector<long> ys;

  std::size_t size() const { return xs.size(); }
};

/// Fractional part mapped into [0,1).
inline double frac_mod1(double v) {
  double f = v - std::floor(v);
  if (f >= 1.0) f = 0.0;  // guards against rounding at the top edge
  return f;
}

inline std::vector<double> gen_covariates(const CovariateProcessSpec& spec,
                                          std::size_t n, std::uint64_t seed) {
  spec.validate();
  if (n == 0) throw std::invalid_argument("gen_covariates: n must be >= 1");
  Rng rng(seed);
  std::vector<double> xs(n);
  if (spec.kind == CovariateKind::IidUniform) {
    for (auto& x : xs) x = rng.uniform();
  } else {
    xs[0] = rng.uniform();
    for (std::size_t i = 1; i < n; ++i) {
      xs[i] = frac_mod1(spec.ar_coefficient * xs[i - 1] + spec.noise_sd * rng.gaussian());
    }
  }
  return xs;
}

/// Draws a full dataset: covariates from the process spec, counts
/// conditionally Poisson with mean intensity(x_i). Deterministic given seed.
inline Sample simulate_dataset(const IntensityFunction& intensity,
                               const CovariateProcessSpec& spec, std::size_t n,
                               std::uint64_t seed) {
  Sample s;
  s.xs = gen_covariates(spec, n, seed);
  // counts use a stream decoupled from the covariate stream
  Rng rng(derive_stream(seed, 0x506F6973736F6EULL));
  s.ys.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.ys[i] = sample_poisson(intensity(s.xs[i]), rng);
  }
  return s;
}

}  // namespace poissonproj

#endif  // POISSONPROJ_SAMPLER_HPP
