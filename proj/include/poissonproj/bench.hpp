#ifndef POISSONPROJ_BENCH_HPP
#define POISSONPROJ_BENCH_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "poissonproj/basis.hpp"
#include "poissonproj/estimator.hpp"
#include "poissonproj/intensity.hpp"
#include "poissonproj/rng.hpp"
#include "poissonproj/sampler.hpp"
#include "poissonproj/selection.hpp"

namespace poissonproj {

/// Full description of one Monte Carlo experiment. Replicate r draws its
/// dataset from the stream derive_stream(master_seed, r), so reports are
/// identical for any worker count.
struct BenchmarkConfig {
  std::size_t n = 1024;
  std::size_t replicates = 500;
  CovariateProcessSpec covariates;
  IntensityFunction intensity = test_intensity();
  std::string intensity_id = "paper";
  BasisFamily family = BasisFamily::DyadicHistogram;
  PenaltySpec penalty;
  std::uint64_t master_seed = 1;
  Quadrature quadrature;
  std::optional<int> fixed_model_index;  // bypasses selection when set

  void validate() const {
    if (n < 2) throw std::invalid_argument("BenchmarkConfig: n must be >= 2");
    if (replicates < 1) throw std::invalid_argument("BenchmarkConfig: replicates must be >= 1");
    covariates.validate();
    quadrature.validate();
  }
};

struct ReplicateRecord {
  std::size_t r = 0;
  std::uint64_t seed = 0;
  double error = 0.0;
  int chosen_index = 0;
};

struct BenchmarkReport {
  double mean_error = 0.0;
  double sd_error = 0.0;
  std::map<int, std::size_t> chosen_histogram;  // model index -> count
  std::vector<ReplicateRecord> records;
};

inline ReplicateRecord run_replicate(const BenchmarkConfig& config, std::size_t r) {
  config.validate();
  ReplicateRecord rec;
  rec.r = r;
  rec.seed = derive_stream(config.master_seed, r);
  const Sample sample = simulate_dataset(config.intensity, config.covariates, config.n, rec.seed);
  ProjectionEstimate chosen;
  if (config.fixed_model_index) {
    chosen = fit_projection(sample, Model{config.family, *config.fixed_model_index});
    rec.chosen_index = *config.fixed_model_index;
  } else {
    const ModelCollection collection = default_collection(config.family, config.n);
    SelectionResult sel = select_model(sample, collection, config.penalty);
    chosen = std::move(sel.estimate);
    rec.chosen_index = sel.chosen_index;
  }
  rec.error = l2_error_sq(chosen, config.intensity, config.quadrature);
  return rec;
}

/// Runs all replicates (strided across `threads` workers) and aggregates in
/// replicate order. The report is byte-stable across worker counts.
inline BenchmarkReport run_benchmark(const BenchmarkConfig& config,
                                     unsigned threads = std::thread::hardware_concurrency()) {
  config.validate();
  if (threads == 0) threads = 1;
  const std::size_t r_total = config.replicates;
  BenchmarkReport report;
  report.records.resize(r_total);

  auto worker = [&](unsigned w) {
    for (std::size_t r = w; r < r_total; r += threads) {
      report.records[r] = run_replicate(config, r);
    }
  };
  if (threads == 1 || r_total == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    for (auto& t : pool) t.join();
  }

  double sum = 0.0;
  for (const auto& rec : report.records) {
    sum += rec.error;
    ++report.chosen_histogram[rec.chosen_index];
  }
  report.mean_error = sum / static_cast<double>(r_total);
  if (r_total > 1) {
    double ss = 0.0;
    for (const auto& rec : report.records) {
      const double d = rec.error - report.mean_error;
      ss += d * d;
    }
    report.sd_error = std::sqrt(ss / static_cast<double>(r_total - 1));
  }
  return report;
}

struct QuantileBand {
  std::vector<double> xs;
  // rows indexed like kBandProbabilities
  std::vector<std::vector<double>> quantiles;
};

inline constexpr double kBandProbabilities[5] = {0.01, 0.25, 0.50, 0.75, 0.99};

/// Linear-interpolation empirical quantile of a sorted vector.
inline double empirical_quantile(const std::vector<double>& sorted, double p) {
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double w = h - std::floor(h);
  return sorted[lo] * (1.0 - w) + sorted[hi] * w;
}

/// Pointwise quantile bands of the selected estimator over the replicates.
inline QuantileBand quantile_bands(const BenchmarkConfig& config,
                                   std::size_t grid_resolution,
                                   unsigned threads = std::thread::hardware_concurrency()) {
  config.validate();
  if (config.replicates < 2) {
    throw std::invalid_argument("quantile_bands: needs at least 2 replicates");
  }
  if (grid_resolution < 2) {
    throw std::invalid_argument("quantile_bands: grid resolution must be >= 2");
  }
  if (threads == 0) threads = 1;
  const std::size_t r_total = config.replicates;
  // values[r][g]
  std::vector<std::vector<double>> values(r_total);

  auto worker = [&](unsigned w) {
    for (std::size_t r = w; r < r_total; r += threads) {
      const std::uint64_t seed = derive_stream(config.master_seed, r);
      const Sample sample =
          simulate_dataset(config.intensity, config.covariates, config.n, seed);
      ProjectionEstimate est;
      if (config.fixed_model_index) {
        est = fit_projection(sample, Model{config.family, *config.fixed_model_index});
      } else {
        const ModelCollection collection = default_collection(config.family, config.n);
        est = select_model(sample, collection, config.penalty).estimate;
      }
      values[r].resize(grid_resolution);
      for (std::size_t g = 0; g < grid_resolution; ++g) {
        const double x = static_cast<double>(g) / static_cast<double>(grid_resolution - 1);
        values[r][g] = est.evaluate(x);
      }
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    for (auto& t : pool) t.join();
  }

  QuantileBand band;
  band.xs.resize(grid_resolution);
  band.quantiles.assign(5, std::vector<double>(grid_resolution));
  std::vector<double> column(r_total);
  for (std::size_t g = 0; g < grid_resolution; ++g) {
    band.xs[g] = static_cast<double>(g) / static_cast<double>(grid_resolution - 1);
    for (std::size_t r = 0; r < r_total; ++r) column[r] = values[r][g];
    std::sort(column.begin(), column.end());
    for (std::size_t q = 0; q < 5; ++q) {
      band.quantiles[q][g] = empirical_quantile(column, kBandProbabilities[q]);
    }
  }
  return band;
}

enum class GammaKind { Polynomial, Exponential };

/// Ellipsoid weight sequence: gamma_0 = 1 and gamma_j = j^p (Polynomial,
/// p > 1/2) or exp(p j) (Exponential, p > 0).
struct SobolevSpec {
  GammaKind kind = GammaKind::Polynomial;
  double p = 1.0;
  double radius = 1.0;

  void validate() const {
    if (kind == GammaKind::Polynomial && !(p > 0.5)) {
      throw std::invalid_argument("SobolevSpec: polynomial weights need p > 1/2");
    }
    if (kind == GammaKind::Exponential && !(p > 0.0)) {
      throw std::invalid_argument("SobolevSpec: exponential weights need p > 0");
    }
    if (!(radius > 0.0)) throw std::invalid_argument("SobolevSpec: radius must be > 0");
  }

  double gamma(std::size_t j) const {
    if (j == 0) return 1.0;
    if (kind == GammaKind::Polynomial) return std::pow(static_cast<double>(j), p);
    return std::exp(p * static_cast<double>(j));
  }
};

struct MinimaxRate {
  std::size_t m_opt = 0;
  double psi_n = 0.0;
};

/// Bias-variance balancing dimension m_opt = argmin_k max{gamma_k^-2, (2k+1)/n}
/// and the resulting rate Psi_n. Forward scan: the variance branch (2k+1)/n is
/// increasing, so once it alone exceeds the best value seen no later k can win.
inline MinimaxRate minimax_rate(const SobolevSpec& spec, std::size_t n) {
  spec.validate();
  if (n < 1) throw std::invalid_argument("minimax_rate: n must be >= 1");
  MinimaxRate best{0, std::max(1.0, 1.0 / static_cast<double>(n))};  // k = 0, gamma_0 = 1
  for (std::size_t k = 1;; ++k) {
    const double variance = (2.0 * static_cast<double>(k) + 1.0) / static_cast<double>(n);
    if (variance >= best.psi_n) break;
    const double g = spec.gamma(k);
    const double value = std::max(1.0 / (g * g), variance);
    if (value < best.psi_n) best = {k, value};
  }
  return best;
}

/// Ordinary least-squares slope of ys against xs.
inline double ols_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("ols_slope: need two equal-length series");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

struct RateStudyResult {
  std::vector<std::size_t> ns;
  std::vector<double> mean_errors;
  double slope = 0.0;
};

/// Empirical rate of convergence: runs the benchmark at each n and fits the
/// log-log slope of mean error against n.
inline RateStudyResult rate_study(const BenchmarkConfig& base,
                                  const std::vector<std::size_t>& ns,
                                  unsigned threads = std::thread::hardware_concurrency()) {
  if (ns.size() < 3) throw std::invalid_argument("rate_study: need at least 3 sample sizes");
  for (std::size_t i = 1; i < ns.size(); ++i) {
    if (ns[i] <= ns[i - 1]) {
      throw std::invalid_argument("rate_study: sample sizes must be strictly increasing");
    }
  }
  RateStudyResult result;
  result.ns = ns;
  std::vector<double> log_n, log_err;
  for (std::size_t n : ns) {
    BenchmarkConfig cfg = base;
    cfg.n = n;
    const BenchmarkReport rep = run_benchmark(cfg, threads);
    result.mean_errors.push_back(rep.mean_error);
    log_n.push_back(std::log(static_cast<double>(n)));
    log_err.push_back(std::log(rep.mean_error));
  }
  result.slope = ols_slope(log_n, log_err);
  return result;
}

}  // namespace poissonproj

#endif  // POISSONPROJ_BENCH_HPP
