#pragma once

#include "anapt/core.hpp"

#include <cmath>

namespace anapt {

namespace detail {

// Abramowitz & Stegun 26.2.23 rational approximation to the standard normal
// quantile for the lower tail, |error| < 4.5e-4; used only as a Newton seed.
inline double normal_quantile_seed(double u) {
  const double t = std::sqrt(-2.0 * std::log(u));
  const double num = 2.515517 + t * (0.802853 + t * 0.010328);
  const double den = 1.0 + t * (1.432788 + t * (0.189269 + t * 0.001308));
  return -(t - num / den);
}

}  // namespace detail

// Inverse complementary error function on (0, 2), accurate to <= 1e-12
// relative: rational seed + Newton on std::erfc. The complementary form is
// the numerically sound entry point for arguments near 0 (erf_inv near 1).
inline double erfc_inv(double y) {
  if (!(y > 0.0 && y < 2.0)) throw DomainError("erfc_inv: argument must lie in (0, 2)");
  if (y == 1.0) return 0.0;
  if (y > 1.0) return -erfc_inv(2.0 - y);

  // erfc(t) = y  <=>  Phi(-t*sqrt(2)) = y/2
  double t = -detail::normal_quantile_seed(0.5 * y) / std::sqrt(2.0);
  constexpr double two_over_sqrt_pi = 1.1283791670955126;
  for (int it = 0; it < 4; ++it) {
    const double err = std::erfc(t) - y;
    const double deriv = -two_over_sqrt_pi * std::exp(-t * t);
    const double step = err / deriv;
    t -= step;
    if (std::abs(step) <= 1e-15 * std::abs(t)) break;
  }
  return t;
}

// Inverse error function on (-1, 1), <= 1e-12 relative error on
// (-1 + 1e-15, 1 - 1e-15). Callers holding 1-x directly should prefer
// erfc_inv(1-x) to avoid cancellation.
inline double erf_inv(double x) {
  if (!(x > -1.0 && x < 1.0)) throw DomainError("erf_inv: argument must lie in (-1, 1)");
  return erfc_inv(1.0 - x);
}

// Composite Simpson quadrature with an odd node count over [a, b].
template <class F>
double simpson(F&& f, double a, double b, long nodes) {
  if (nodes < 3 || nodes % 2 == 0) throw DomainError("simpson: need an odd node count >= 3");
  const double h = (b - a) / static_cast<double>(nodes - 1);
  double sum = f(a) + f(b);
  for (long i = 1; i < nodes - 1; ++i) sum += f(a + h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

}  // namespace anapt
