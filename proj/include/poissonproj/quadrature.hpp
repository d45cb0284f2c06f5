#ifndef POISSONPROJ_QUADRATURE_HPP
#define POISSONPROJ_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace poissonproj {

/// Composite-Simpson quadrature on [0,1], with panel boundaries aligned to
/// caller-supplied breakpoints so piecewise-smooth integrands keep the full
/// Simpson order.
struct Quadrature {
  std::size_t panels = 4096;

  void validate() const {
    if (panels < 2 || panels % 2 != 0) {
      throw std::invalid_argument("Quadrature: panels must be even and >= 2");
    }
  }

  /// Integrates f over [0,1]. Interior breakpoints (sorted or not, values
  /// outside (0,1) ignored) split the domain; each segment gets a panel
  /// count proportional to its length, rounded up to an even number.
  double integrate(const std::function<double(double)>& f,
                   std::vector<double> breakpoints = {}) const {
    validate();
    breakpoints.push_back(0.0);
    breakpoints.push_back(1.0);
    std::sort(breakpoints.begin(), breakpoints.end());
    std::vector<double> edges;
    for (double b : breakpoints) {
      if (b < 0.0 || b > 1.0) continue;
      if (edges.empty() || b > edges.back() + 1e-15) edges.push_back(b);
    }
    double total = 0.0;
    for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
      const double a = edges[s];
      const double b = edges[s + 1];
      auto seg = static_cast<std::size_t>(
          std::ceil(static_cast<double>(panels) * (b - a)));
      if (seg < 2) seg = 2;
      if (seg % 2 != 0) ++seg;
      const double h = (b - a) / static_cast<double>(seg);
      // endpoints are nudged inward so that integrands discontinuous at a
      // breakpoint are sampled from the correct one-sided limit
      const double eps = std::max((b - a) * 1e-9, 1e-15);
      double acc = f(a + eps) + f(b - eps);
      for (std::size_t i = 1; i < seg; ++i) {
        acc += f(a + h * static_cast<double>(i)) * (i % 2 == 1 ? 4.0 : 2.0);
      }
      total += acc * h / 3.0;
    }
    return total;
  }
};

}  // namespace poissonproj

#endif  // POISSONPROJ_QUADRATURE_HPP
