#ifndef POISSONPROJ_SELECTION_HPP
#define POISSONPROJ_SELECTION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "poissonproj/basis.hpp"
#include "poissonproj/estimator.hpp"
#include "poissonproj/sampler.hpp"

namespace poissonproj {

enum class PenaltyVariant { KnownXi, Plugin, Dependent, Practical };

/// One of the four penalty rules. KnownXi and Practical use an a-priori
/// sup-norm bound xi; Plugin and Dependent estimate mu_hat = 1 v |lambda_Pi|_inf^2
/// from a coarse histogram on `partition_cells` uniform cells (0 = derive a
/// default from n).
struct PenaltySpec {
  PenaltyVariant variant = PenaltyVariant::Practical;
  double xi = 10.0;      // KnownXi, Practical
  double kappa = 0.09;   // Practical
  std::size_t partition_cells = 0;  // Plugin, Dependent; 0 = default
  bool strict_partition = false;
};

inline double pen_known_xi(const Model& model, std::size_t n, double xi,
                           double phi = Model::phi_constant) {
  if (n < 1) throw std::invalid_argument("pen_known_xi: n must be >= 1");
  if (!(xi >= 0.0)) throw std::invalid_argument("pen_known_xi: xi must be >= 0");
  const double mu = std::max(1.0, xi * xi);
  const double dn = phi * phi * static_cast<double>(model.dim()) / static_cast<double>(n);
  return 24.0 * mu * dn + 400.0 * mu * dn * std::log(static_cast<double>(n) + 2.0);
}

inline double pen_plugin(const Model& model, std::size_t n, double mu_hat,
                         double phi = Model::phi_constant) {
  if (!(mu_hat >= 1.0)) throw std::invalid_argument("pen_plugin: mu_hat must be >= 1");
  const double dn = phi * phi * static_cast<double>(model.dim()) / static_cast<double>(n);
  return 384.0 * mu_hat * dn + 6400.0 * mu_hat * dn * std::log(static_cast<double>(n) + 2.0);
}

inline double pen_dependent(const Model& model, std::size_t n, double mu_hat,
                            double phi = Model::phi_constant) {
  if (!(mu_hat >= 1.0)) throw std::invalid_argument("pen_dependent: mu_hat must be >= 1");
  const double log_term = std::log(static_cast<double>(n) + 2.0) / static_cast<double>(n);
  const double d = static_cast<double>(model.dim());
  return d * log_term + 6400.0 * mu_hat * phi * phi * d * log_term;
}

// The practical penalty uses the base-2 logarithm: with the dyadic model
// collections it targets, kappa = 0.09 then reproduces the reference error
// levels, while a natural log under-penalizes and lets the selection overfit
// (the stochastic part of the contrast grows like 0.05 D at these scales).
inline double pen_practical(const Model& model, std::size_t n, double xi, double kappa) {
  if (n < 2) throw std::invalid_argument("pen_practical: n must be >= 2");
  if (!(kappa > 0.0)) throw std::invalid_argument("pen_practical: kappa must be > 0");
  return kappa * static_cast<double>(model.dim()) * xi * xi *
         std::log2(static_cast<double>(n)) / static_cast<double>(n);
}

/// Uniform partition of [0,1] into M cells (Lebesgue measure 1/M each).
struct Partition {
  std::size_t cells = 1;

  double measure(std::size_t) const { return 1.0 / static_cast<double>(cells); }

  std::size_t cell_of(double x) const {
    auto j = static_cast<std::size_t>(std::floor(x * static_cast<double>(cells)));
    return std::min(j, cells - 1);
  }
};

/// Partition size for the plug-in sup-norm estimator. The strict sizes come
/// from the theory's constraints M <= n / (320 log n) (independent) and
/// M <= n^{1/3} / (320 log n) (dependent); both collapse to M = 1 at desk
/// scale, so the default mode uses M = floor(n^{1/3}).
inline Partition default_partition(std::size_t n, bool dependent, bool strict = false) {
  if (n < 2) throw std::invalid_argument("default_partition: n must be >= 2");
  const double nd = static_cast<double>(n);
  double m = 0.0;
  if (strict) {
    const double base = dependent ? std::cbrt(nd) : nd;
    m = std::floor(base / (320.0 * std::log(nd)));
  } else {
    m = std::floor(std::cbrt(nd));
  }
  return Partition{static_cast<std::size_t>(std::max(1.0, m))};
}

struct PluginFit {
  double mu_hat = 1.0;
  std::vector<double> cell_values;  // step value of lambda_Pi on each cell
  Partition partition;

  double evaluate(double x) const { return cell_values[partition.cell_of(x)]; }
};

/// Coarse histogram estimator lambda_Pi and mu_hat = 1 v |lambda_Pi|_inf^2.
/// Cell value j is sum of counts with x in cell j over n * measure(j), the
/// projection-estimator normalization.
inline PluginFit fit_plugin_mu(const Sample& sample, const Partition& partition) {
  if (sample.size() == 0) {
    throw std::invalid_argument("fit_plugin_mu: sample must be non-empty");
  }
  PluginFit fit;
  fit.partition = partition;
  fit.cell_values.assign(partition.cells, 0.0);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    fit.cell_values[partition.cell_of(sample.xs[i])] += static_cast<double>(sample.ys[i]);
  }
  double sup = 0.0;
  for (std::size_t j = 0; j < partition.cells; ++j) {
    fit.cell_values[j] /= static_cast<double>(sample.size()) * partition.measure(j);
    sup = std::max(sup, std::abs(fit.cell_values[j]));
  }
  fit.mu_hat = std::max(1.0, sup * sup);
  return fit;
}

struct SelectionRow {
  int model_index = 0;
  std::size_t dim = 0;
  double contrast = 0.0;
  double penalty = 0.0;
  double criterion = 0.0;
};

struct SelectionResult {
  int chosen_index = 0;
  std::vector<SelectionRow> table;
  std::optional<double> mu_hat;
  ProjectionEstimate estimate;
};

/// Penalized-contrast model selection: fits every model in the collection,
/// evaluates contrast against the maximal model and the penalty, and returns
/// the criterion argmin. Ties resolve to the smallest dimension, then the
/// smallest index.
inline SelectionResult select_model(const Sample& sample,
                                    const ModelCollection& collection,
                                    const PenaltySpec& spec) {
  if (collection.indices.empty()) {
    throw std::invalid_argument("select_model: collection must be non-empty");
  }
  const std::size_t n = sample.size();

  std::optional<double> mu_hat;
  if (spec.variant == PenaltyVariant::Plugin || spec.variant == PenaltyVariant::Dependent) {
    Partition part = spec.partition_cells > 0
                         ? Partition{spec.partition_cells}
                         : default_partition(n, spec.variant == PenaltyVariant::Dependent,
                                             spec.strict_partition);
    mu_hat = fit_plugin_mu(sample, part).mu_hat;
  }

  // Fit the maximal model once; nested coefficients follow exactly by
  // orthogonal projection (prefix for trig, pairwise aggregation for
  // histograms), matching fit_projection on every submodel.
  const ProjectionEstimate max_fit = fit_projection(sample, collection.maximal());
  std::vector<ProjectionEstimate> fits;
  fits.reserve(collection.indices.size());
  for (std::size_t k = 0; k < collection.indices.size(); ++k) {
    ProjectionEstimate est;
    est.model = collection.model(k);
    est.n = n;
    est.coefficients = project_coefficients(max_fit, est.model.index);
    fits.push_back(std::move(est));
  }

  SelectionResult result;
  result.mu_hat = mu_hat;
  std::size_t best = 0;
  for (std::size_t k = 0; k < fits.size(); ++k) {
    SelectionRow row;
    row.model_index = collection.indices[k];
    row.dim = fits[k].model.dim();
    row.contrast = contrast(fits[k], max_fit);
    switch (spec.variant) {
      case PenaltyVariant::KnownXi:
        row.penalty = pen_known_xi(fits[k].model, n, spec.xi);
        break;
      case PenaltyVariant::Plugin:
        row.penalty = pen_plugin(fits[k].model, n, *mu_hat);
        break;
      case PenaltyVariant::Dependent:
        row.penalty = pen_dependent(fits[k].model, n, *mu_hat);
        break;
      case PenaltyVariant::Practical:
        row.penalty = pen_practical(fits[k].model, n, spec.xi, spec.kappa);
        break;
    }
    row.criterion = row.contrast + row.penalty;
    result.table.push_back(row);
    // collection order is increasing dimension, so strict < keeps the
    // smallest-dimension minimizer
    if (row.criterion < result.table[best].criterion) best = k;
  }
  result.chosen_index = collection.indices[best];
  result.estimate = std::move(fits[best]);
  return result;
}

}  // namespace poissonproj

#endif  // POISSONPROJ_SELECTION_HPP
