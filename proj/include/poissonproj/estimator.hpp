#ifndef POISSONPROJ_ESTIMATOR_HPP
#define POISSONPROJ_ESTIMATOR_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "poissonproj/basis.hpp"
#include "poissonproj/intensity.hpp"
#include "poissonproj/quadrature.hpp"
#include "poissonproj/sampler.hpp"

namespace poissonproj {

/// Projection estimator: coefficients theta_hat over a model's basis,
/// theta_hat_eta = (1/n) sum_i y_i phi_eta(x_i).
struct ProjectionEstimate {
  Model model;
  std::vector<double> coefficients;  // position p holds theta_hat at model.eta_at(p)
  std::size_t n = 0;

  double evaluate(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw std::invalid_argument("ProjectionEstimate::evaluate: x must lie in [0,1]");
    }
    if (model.family == BasisFamily::DyadicHistogram) {
      const std::size_t cell = histogram_cell(model.index, x);
      return coefficients[cell] * std::sqrt(static_cast<double>(model.dim()));
    }
    double v = 0.0;
    for (std::size_t p = 0; p < coefficients.size(); ++p) {
      v += coefficients[p] * eval_basis(model, model.eta_at(p), x);
    }
    return v;
  }
};

inline ProjectionEstimate fit_projection(const Sample& sample, const Model& model) {
  if (sample.size() == 0) {
    throw std::invalid_argument("fit_projection: sample must be non-empty");
  }
  ProjectionEstimate est;
  est.model = model;
  est.n = sample.size();
  est.coefficients.assign(model.dim(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(sample.size());
  if (model.family == BasisFamily::DyadicHistogram) {
    const double scale = std::sqrt(static_cast<double>(model.dim()));
    for (std::size_t i = 0; i < sample.size(); ++i) {
      est.coefficients[histogram_cell(model.index, sample.xs[i])] +=
          static_cast<double>(sample.ys[i]) * scale * inv_n;
    }
  } else {
    for (std::size_t i = 0; i < sample.size(); ++i) {
      const double y = static_cast<double>(sample.ys[i]);
      if (y == 0.0) continue;
      for (std::size_t p = 0; p < est.coefficients.size(); ++p) {
        est.coefficients[p] += y * eval_basis(model, model.eta_at(p), sample.xs[i]) * inv_n;
      }
    }
  }
  return est;
}

/// Coefficients of the orthogonal projection of `fine` onto the nested model
/// with the given (smaller or equal) index. For histograms each coarse
/// coefficient aggregates two fine ones; for the trigonometric family the
/// coarse coordinates are a coefficient prefix.
inline std::vector<double> project_coefficients(const ProjectionEstimate& fine,
                                                int coarse_index) {
  if (coarse_index > fine.model.index) {
    throw std::invalid_argument("project_coefficients: target model not nested");
  }
  if (fine.model.family == BasisFamily::Trigonometric) {
    const std::size_t d = 2 * static_cast<std::size_t>(coarse_index) + 1;
    return {fine.coefficients.begin(), fine.coefficients.begin() + static_cast<long>(d)};
  }
  std::vector<double> c = fine.coefficients;
  static const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
  for (int level = fine.model.index; level > coarse_index; --level) {
    std::vector<double> coarse(c.size() / 2);
    for (std::size_t j = 0; j < coarse.size(); ++j) {
      coarse[j] = (c[2 * j] + c[2 * j + 1]) * kInvSqrt2;
    }
    c = std::move(coarse);
  }
  return c;
}

/// Penalized-contrast value Upsilon_n(lambda_hat_m) = |f|^2 - 2 <lambda_hat_n, f>
/// evaluated in coefficient space against the maximal-model estimate. For
/// nested projection estimators from one sample this equals
/// -sum_{eta in I_m} theta_hat_eta^2.
inline double contrast(const ProjectionEstimate& estimate,
                       const ProjectionEstimate& max_estimate) {
  if (estimate.model.family != max_estimate.model.family) {
    throw std::invalid_argument("contrast: estimates use different basis families");
  }
  if (estimate.model.index > max_estimate.model.index) {
    throw std::invalid_argument("contrast: estimate's model is not nested in the maximal one");
  }
  const std::vector<double> max_in_coarse =
      project_coefficients(max_estimate, estimate.model.index);
  double norm_sq = 0.0;
  double inner = 0.0;
  for (std::size_t p = 0; p < estimate.coefficients.size(); ++p) {
    norm_sq += estimate.coefficients[p] * estimate.coefficients[p];
    inner += estimate.coefficients[p] * max_in_coarse[p];
  }
  return norm_sq - 2.0 * inner;
}

/// Squared L2 distance between the estimate and a known intensity, by
/// composite Simpson with panels aligned to histogram cell edges and to the
/// truth's declared discontinuities.
inline double l2_error_sq(const ProjectionEstimate& estimate,
                          const IntensityFunction& truth, const Quadrature& quad) {
  std::vector<double> breaks = truth.discontinuities;
  if (estimate.model.family == BasisFamily::DyadicHistogram) {
    const auto cells = estimate.model.dim();
    for (std::size_t j = 1; j < cells; ++j) {
      breaks.push_back(static_cast<double>(j) / static_cast<double>(cells));
    }
  }
  return quad.integrate(
      [&](double x) {
        const double d = estimate.evaluate(x) - truth(x);
        return d * d;
      },
      std::move(breaks));
}

/// Sup-norm of the estimate: exact for histograms, grid-based for the
/// trigonometric family.
inline double sup_norm(const ProjectionEstimate& estimate,
                       std::size_t grid_resolution = 4096) {
  if (grid_resolution < 2) {
    throw std::invalid_argument("sup_norm: grid resolution must be >= 2");
  }
  if (estimate.model.family == BasisFamily::DyadicHistogram) {
    const double scale = std::sqrt(static_cast<double>(estimate.model.dim()));
    double mx = 0.0;
    for (double c : estimate.coefficients) mx = std::max(mx, std::abs(c) * scale);
    return mx;
  }
  double mx = 0.0;
  for (std::size_t g = 0; g < grid_resolution; ++g) {
    const double x = static_cast<double>(g) / static_cast<double>(grid_resolution - 1);
    mx = std::max(mx, std::abs(estimate.evaluate(x)));
  }
  return mx;
}

}  // namespace poissonproj

#endif  // POISSONPROJ_ESTIMATOR_HPP
