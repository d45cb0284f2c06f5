#ifndef POISSONPROJ_BASIS_HPP
#define POISSONPROJ_BASIS_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "poissonproj/intensity.hpp"

namespace poissonproj {

enum class BasisFamily { Trigonometric, DyadicHistogram };

/// One finite-dimensional approximation space: a basis family plus a model
/// index m. Trigonometric: span{1, sqrt2 cos(2 pi j x), sqrt2 sin(2 pi j x)}
/// for j = 1..m, dimension 2m+1. DyadicHistogram: the 2^m indicator basis
/// sqrt(2^m) 1_[(j-1)/2^m, j/2^m), dimension 2^m, last cell closed at 1.
/// Both families satisfy sum_eta phi_eta(x)^2 = D_m pointwise, so Phi = 1.
struct Model {
  BasisFamily family = BasisFamily::DyadicHistogram;
  int index = 0;

  std::size_t dim() const {
    if (family == BasisFamily::Trigonometric) return 2 * static_cast<std::size_t>(index) + 1;
    return std::size_t{1} << index;
  }

  static constexpr double phi_constant = 1.0;

  /// Signed basis label at coefficient position p. Trigonometric positions
  /// interleave as [0, +1, -1, +2, -2, ...] so nested models share a
  /// coefficient prefix; histogram labels are the cell numbers 1..2^m.
  long eta_at(std::size_t p) const {
    if (family == BasisFamily::Trigonometric) {
      if (p == 0) return 0;
      const long j = static_cast<long>((p + 1) / 2);
      return (p % 2 == 1) ? j : -j;
    }
    return static_cast<long>(p) + 1;
  }
};

/// Basis function phi_eta of the given model, evaluated at x in [0,1].
inline double eval_basis(const Model& model, long eta, double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("eval_basis: x must lie in [0,1]");
  }
  static const double kSqrt2 = std::sqrt(2.0);
  if (model.family == BasisFamily::Trigonometric) {
    if (eta < -model.index || eta > model.index) {
      throw std::invalid_argument("eval_basis: eta outside the model's index set");
    }
    if (eta == 0) return 1.0;
    if (eta > 0) return kSqrt2 * std::cos(kTwoPi * static_cast<double>(eta) * x);
    return kSqrt2 * std::sin(kTwoPi * static_cast<double>(-eta) * x);
  }
  const long cells = static_cast<long>(model.dim());
  if (eta < 1 || eta > cells) {
    throw std::invalid_argument("eval_basis: eta outside the model's index set");
  }
  // cell containing x; x == 1 belongs to the last cell
  long cell = static_cast<long>(std::floor(x * static_cast<double>(cells))) + 1;
  if (cell > cells) cell = cells;
  return (cell == eta) ? std::sqrt(static_cast<double>(cells)) : 0.0;
}

/// Index of the cell (0-based) containing x under a 2^m dyadic partition.
inline std::size_t histogram_cell(int index, double x) {
  const std::size_t cells = std::size_t{1} << index;
  auto cell = static_cast<std::size_t>(std::floor(x * static_cast<double>(cells)));
  if (cell >= cells) cell = cells - 1;
  return cell;
}

/// A nested collection of models of one family, sized for sample size n so
/// that D_m <= n and |collection| <= n.
struct ModelCollection {
  BasisFamily family = BasisFamily::DyadicHistogram;
  std::vector<int> indices;
  std::size_t n = 0;

  Model model(std::size_t k) const { return Model{family, indices[k]}; }
  Model maximal() const { return Model{family, indices.back()}; }
};

/// Default collections: histogram {0,...,floor(log2 n)}; trigonometric
/// {0,...,floor((n-1)/2)} so that 2m+1 <= n.
inline ModelCollection default_collection(BasisFamily family, std::size_t n) {
  if (n == 0) throw std::invalid_argument("default_collection: n must be >= 1");
  ModelCollection c;
  c.family = family;
  c.n = n;
  int max_index = 0;
  if (family == BasisFamily::DyadicHistogram) {
    while ((std::size_t{2} << max_index) <= n) ++max_index;  // floor(log2 n)
  } else {
    max_index = static_cast<int>((n - 1) / 2);
  }
  for (int m = 0; m <= max_index; ++m) c.indices.push_back(m);
  return c;
}

struct Assumption1Diagnostic {
  double max_square_sum = 0.0;
  double ratio_to_bound = 0.0;  // max / (Phi^2 D_m)
};

/// Grid check of the square-sum bound sup_x sum_eta phi_eta(x)^2 <= Phi^2 D_m.
/// For both built-in families the sum is identically D_m.
inline Assumption1Diagnostic check_assumption1(const Model& model,
                                               std::size_t grid_resolution) {
  if (grid_resolution < 2) {
    throw std::invalid_argument("check_assumption1: grid resolution must be >= 2");
  }
  double max_sum = 0.0;
  const auto dim = model.dim();
  for (std::size_t g = 0; g < grid_resolution; ++g) {
    const double x = static_cast<double>(g) / static_cast<double>(grid_resolution - 1);
    double s = 0.0;
    for (std::size_t p = 0; p < dim; ++p) {
      const double v = eval_basis(model, model.eta_at(p), x);
      s += v * v;
    }
    if (s > max_sum) max_sum = s;
  }
  const double bound = Model::phi_constant * Model::phi_constant * static_cast<double>(dim);
  return {max_sum, max_sum / bound};
}

}  // namespace poissonproj

#endif  // POISSONPROJ_BASIS_HPP
