#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "poissonproj/estimator.hpp"
#include "poissonproj/rng.hpp"
#include "poissonproj/sampler.hpp"

using namespace poissonproj;

namespace {

Sample random_sample(std::size_t n, double max_mean, std::uint64_t seed) {
  Rng rng(seed);
  Sample s;
  for (std::size_t i = 0; i < n; ++i) {
    s.xs.push_back(rng.uniform());
    s.ys.push_back(sample_poisson(max_mean * rng.uniform(), rng));
  }
  return s;
}

// theta_eta = integral of lambda * phi_eta, by quadrature
double coefficient_oracle(const IntensityFunction& lam, const Model& model, long eta) {
  Quadrature quad;
  std::vector<double> breaks = lam.discontinuities;
  if (model.family == BasisFamily::DyadicHistogram) {
    for (std::size_t j = 1; j < model.dim(); ++j) {
      breaks.push_back(static_cast<double>(j) / static_cast<double>(model.dim()));
    }
  }
  return quad.integrate([&](double x) { return lam(x) * eval_basis(model, eta, x); }, breaks);
}

}  // namespace

TEST_CASE("fit_projection basic examples") {
  Sample s;
  s.xs = {0.25};
  s.ys = {2};
  const auto est = fit_projection(s, Model{BasisFamily::Trigonometric, 0});
  REQUIRE(est.coefficients.size() == 1);
  REQUIRE(est.coefficients[0] == Catch::Approx(2.0));
  REQUIRE(est.evaluate(0.9) == Catch::Approx(2.0));

  Sample h;
  h.xs = {0.1};
  h.ys = {3};
  const auto hist = fit_projection(h, Model{BasisFamily::DyadicHistogram, 2});
  REQUIRE(hist.coefficients == std::vector<double>{6.0, 0.0, 0.0, 0.0});
  REQUIRE(hist.evaluate(0.2) == Catch::Approx(12.0));

  Sample zero;
  zero.xs = {0.1, 0.6};
  zero.ys = {0, 0};
  const auto z = fit_projection(zero, Model{BasisFamily::Trigonometric, 2});
  for (double c : z.coefficients) REQUIRE(c == 0.0);
  REQUIRE(z.evaluate(0.3) == 0.0);

  REQUIRE_THROWS_AS(fit_projection(Sample{}, Model{}), std::invalid_argument);
  REQUIRE_THROWS_AS(z.evaluate(1.2), std::invalid_argument);
}

TEST_CASE("contrast matches -sum theta^2 for nested fits") {
  for (auto family : {BasisFamily::Trigonometric, BasisFamily::DyadicHistogram}) {
    const Sample s = random_sample(200, 8.0, 31 + static_cast<int>(family));
    const int max_index = family == BasisFamily::Trigonometric ? 6 : 5;
    const auto max_fit = fit_projection(s, Model{family, max_index});
    double prev = 1.0;
    for (int m = 0; m <= max_index; ++m) {
      const auto fit = fit_projection(s, Model{family, m});
      double sum_sq = 0.0;
      for (double c : fit.coefficients) sum_sq += c * c;
      const double ups = contrast(fit, max_fit);
      REQUIRE(ups == Catch::Approx(-sum_sq).epsilon(1e-12).margin(1e-15));
      REQUIRE(ups <= prev + 1e-12);  // non-increasing along the nest
      prev = ups;
    }
    // f = lambda_hat_n in the contrast gives -|lambda_hat_n|^2
    double max_sum_sq = 0.0;
    for (double c : max_fit.coefficients) max_sum_sq += c * c;
    REQUIRE(contrast(max_fit, max_fit) == Catch::Approx(-max_sum_sq));
  }
}

TEST_CASE("contrast simple values and errors") {
  Sample s;
  s.xs = {0.25};
  s.ys = {2};
  const auto e0 = fit_projection(s, Model{BasisFamily::Trigonometric, 0});
  const auto e1 = fit_projection(s, Model{BasisFamily::Trigonometric, 1});
  REQUIRE(contrast(e0, e1) == Catch::Approx(-4.0));

  Sample z;
  z.xs = {0.25};
  z.ys = {0};
  const auto z0 = fit_projection(z, Model{BasisFamily::Trigonometric, 0});
  const auto z1 = fit_projection(z, Model{BasisFamily::Trigonometric, 1});
  REQUIRE(contrast(z0, z1) == 0.0);

  const auto h = fit_projection(s, Model{BasisFamily::DyadicHistogram, 1});
  REQUIRE_THROWS_AS(contrast(e0, h), std::invalid_argument);
  REQUIRE_THROWS_AS(contrast(e1, e0), std::invalid_argument);
}

TEST_CASE("l2_error_sq examples") {
  const IntensityFunction lam = test_intensity();
  const Quadrature quad;

  ProjectionEstimate zero;
  zero.model = Model{BasisFamily::Trigonometric, 0};
  zero.coefficients = {0.0};
  REQUIRE(l2_error_sq(zero, lam, quad) == Catch::Approx(575.0 / 12.0).epsilon(1e-8));

  ProjectionEstimate c2;
  c2.model = Model{BasisFamily::Trigonometric, 0};
  c2.coefficients = {2.0};
  REQUIRE(l2_error_sq(c2, constant_intensity(2.0), quad) < 1e-12);

  ProjectionEstimate one;
  one.model = Model{BasisFamily::Trigonometric, 0};
  one.coefficients = {1.0};
  REQUIRE(l2_error_sq(one, constant_intensity(0.0), quad) == Catch::Approx(1.0));
}

TEST_CASE("sup_norm examples") {
  ProjectionEstimate hist;
  hist.model = Model{BasisFamily::DyadicHistogram, 2};
  const double scale = 2.0;  // sqrt(4)
  hist.coefficients = {2.0 / scale, 0.0, -1.0 / scale, 5.0 / scale};
  REQUIRE(sup_norm(hist) == Catch::Approx(5.0));

  ProjectionEstimate zero;
  zero.model = Model{BasisFamily::Trigonometric, 1};
  zero.coefficients = {0.0, 0.0, 0.0};
  REQUIRE(sup_norm(zero) == 0.0);

  ProjectionEstimate cosonly;
  cosonly.model = Model{BasisFamily::Trigonometric, 1};
  cosonly.coefficients = {0.0, 1.0, 0.0};
  REQUIRE(sup_norm(cosonly, 4096) == Catch::Approx(std::sqrt(2.0)).epsilon(1e-5));
  REQUIRE_THROWS_AS(sup_norm(cosonly, 1), std::invalid_argument);
}

TEST_CASE("Pythagoras decomposition against the quadrature oracle") {
  const IntensityFunction lam = test_intensity();
  const Quadrature quad;
  const Model model{BasisFamily::DyadicHistogram, 3};
  const Sample s = simulate_dataset(lam, {}, 2048, 404);
  const auto est = fit_projection(s, model);

  // projection of lambda on the model, coefficients by quadrature
  ProjectionEstimate proj;
  proj.model = model;
  proj.n = s.size();
  for (std::size_t p = 0; p < model.dim(); ++p) {
    proj.coefficients.push_back(coefficient_oracle(lam, model, model.eta_at(p)));
  }

  const double total = l2_error_sq(est, lam, quad);
  const double bias_sq = l2_error_sq(proj, lam, quad);
  double dist_sq = 0.0;  // |est - proj|^2 in coefficient space
  for (std::size_t p = 0; p < model.dim(); ++p) {
    const double d = est.coefficients[p] - proj.coefficients[p];
    dist_sq += d * d;
  }
  REQUIRE(total == Catch::Approx(bias_sq + dist_sq).epsilon(1e-8));
}

TEST_CASE("coefficient unbiasedness over 2000 replicates") {
  const IntensityFunction lam = test_intensity();
  const std::size_t n = 256;
  const std::size_t reps = 2000;
  for (auto [family, max_m] : {std::pair{BasisFamily::Trigonometric, 2},
                               std::pair{BasisFamily::DyadicHistogram, 3}}) {
    for (int m = 0; m <= max_m; ++m) {
      const Model model{family, m};
      std::vector<double> sum(model.dim(), 0.0), sum_sq(model.dim(), 0.0);
      for (std::size_t r = 0; r < reps; ++r) {
        const Sample s = simulate_dataset(lam, {}, n, derive_stream(8000 + m, r));
        const auto est = fit_projection(s, model);
        for (std::size_t p = 0; p < model.dim(); ++p) {
          sum[p] += est.coefficients[p];
          sum_sq[p] += est.coefficients[p] * est.coefficients[p];
        }
      }
      for (std::size_t p = 0; p < model.dim(); ++p) {
        const double mean = sum[p] / static_cast<double>(reps);
        const double var = sum_sq[p] / static_cast<double>(reps) - mean * mean;
        const double se = std::sqrt(var / static_cast<double>(reps));
        const double truth = coefficient_oracle(lam, model, model.eta_at(p));
        REQUIRE(std::abs(mean - truth) < 3.0 * se + 1e-9);
      }
    }
  }
}
