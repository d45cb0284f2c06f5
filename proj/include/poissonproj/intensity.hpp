#ifndef POISSONPROJ_INTENSITY_HPP
#define POISSONPROJ_INTENSITY_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

namespace poissonproj {

/// A non-negative intensity function on [0,1], optionally annotated with
/// closed-form norms and interior discontinuity points (used to align
/// quadrature panels).
struct IntensityFunction {
  std::function<double(double)> fn;
  std::optional<double> sup_norm;
  std::optional<double> l2_norm_sq;
  std::optional<double> l1_norm;
  std::vector<double> discontinuities;

  double operator()(double x) const { return fn(x); }
};

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// The benchmark test intensity
///   lambda(x) = (5 + 5 cos(2 pi x)) on [0, 0.5],  10 x on (0.5, 1].
/// Closed-form norms: sup = 10, integral of lambda^2 = 575/12,
/// integral of lambda = 25/4.
inline IntensityFunction test_intensity() {
  IntensityFunction f;
  f.fn = [](double x) {
    if (x <= 0.5) return 5.0 + 5.0 * std::cos(kTwoPi * x);
    return 10.0 * x;
  };
  f.sup_norm = 10.0;
  f.l2_norm_sq = 575.0 / 12.0;  // 18.75 + 175/6
  f.l1_norm = 25.0 / 4.0;       // 2.5 + 3.75
  f.discontinuities = {0.5};
  return f;
}

inline IntensityFunction constant_intensity(double c) {
  IntensityFunction f;
  f.fn = [c](double) { return c; };
  f.sup_norm = c;
  f.l2_norm_sq = c * c;
  f.l1_norm = c;
  return f;
}

}  // namespace poissonproj

#endif  // POISSONPROJ_INTENSITY_HPP
