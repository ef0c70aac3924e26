#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace capsim {

// Adaptive Gauss-Kronrod quadrature on [a, b].  The 15-point Kronrod rule
// with its embedded 7-point Gauss rule gives a local error estimate; an
// interval is accepted once the estimate drops below rel_tol relative to the
// local integral (or an absolute floor for nearly-zero panels), otherwise it
// is bisected.  All integrands in this project are smooth on compact
// intervals, so convergence is fast and a modest depth cap suffices.
namespace detail {

// Nodes/weights of the (G7, K15) pair on [-1, 1] (positive half; symmetric).
inline constexpr double kK15Nodes[8] = {
    0.0,
    0.2077849550078985,
    0.4058451513773972,
    0.5860872354676911,
    0.7415311855993945,
    0.8648644233597691,
    0.9491079123427585,
    0.9914553711208126,
};
inline constexpr double kK15Weights[8] = {
    0.2094821410847278,
    0.2044329400752989,
    0.1903505780647854,
    0.1690047266392679,
    0.1406532597155259,
    0.1047900103222502,
    0.0630920926299786,
    0.0229353220105292,
};
inline constexpr double kG7Weights[4] = {
    0.4179591836734694,
    0.3818300505051189,
    0.2797053914892767,
    0.1294849661688697,
};

template <typename F>
void kronrod15(const F& f, double a, double b, double& integral, double& error) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double k = kK15Weights[0] * fc;
  double g = kG7Weights[0] * fc;
  for (int i = 1; i < 8; ++i) {
    const double fv = f(c - h * kK15Nodes[i]) + f(c + h * kK15Nodes[i]);
    k += kK15Weights[i] * fv;
    if (i % 2 == 0) g += kG7Weights[i / 2] * fv;
  }
  integral = k * h;
  error = std::abs((k - g) * h);
}

template <typename F>
double adapt(const F& f, double a, double b, double rel_tol, double abs_floor, int depth) {
  double integral, error;
  kronrod15(f, a, b, integral, error);
  if (error <= rel_tol * std::abs(integral) + abs_floor || depth >= 48) {
    return integral;
  }
  const double c = 0.5 * (a + b);
  return adapt(f, a, c, rel_tol, 0.5 * abs_floor, depth + 1) +
         adapt(f, c, b, rel_tol, 0.5 * abs_floor, depth + 1);
}

}  // namespace detail

template <typename F>
double integrate(const F& f, double a, double b, double rel_tol = 1e-13) {
  if (!(rel_tol > 0.0)) throw std::invalid_argument("integrate: rel_tol must be positive");
  if (a == b) return 0.0;
  // Absolute floor keeps subdivision finite on panels where the integrand is
  // negligibly small compared to the whole integral.
  double integral, error;
  detail::kronrod15(f, a, b, integral, error);
  const double floor = 1e-300 + rel_tol * std::abs(integral);
  return detail::adapt(f, a, b, rel_tol, floor, 0);
}

}  // namespace capsim
