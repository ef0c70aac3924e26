#include <doctest.h>

#include <cmath>
#include <numbers>

#include "capsim/quadrature.hpp"

using capsim::integrate;

TEST_CASE("polynomial and trigonometric integrals") {
  CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi) ==
        doctest::Approx(2.0).epsilon(1e-13));
  CHECK(std::abs(integrate([](double x) { return std::cos(10.0 * x); }, 0.0,
                           2.0 * std::numbers::pi)) < 1e-12);
}

TEST_CASE("sharply peaked integrand is resolved adaptively") {
  // Gaussian of width ~0.03 inside [0,1]: integral = sqrt(pi/1000) to all
  // practical digits (tails beyond [0,1] are ~1e-110).
  const double v = integrate(
      [](double x) { return std::exp(-1000.0 * (x - 0.5) * (x - 0.5)); }, 0.0, 1.0);
  CHECK(v == doctest::Approx(std::sqrt(std::numbers::pi / 1000.0)).epsilon(1e-12));
}

TEST_CASE("endpoint-peaked power integrand") {
  // integral of x^200 over [0,1] = 1/201, mass concentrated at the right edge.
  CHECK(integrate([](double x) { return std::pow(x, 200.0); }, 0.0, 1.0) ==
        doctest::Approx(1.0 / 201.0).epsilon(1e-12));
}

TEST_CASE("orientation and degenerate interval") {
  CHECK(integrate([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
  // Reversed limits integrate with the usual sign flip.
  CHECK(integrate([](double x) { return x; }, 1.0, 0.0) ==
        doctest::Approx(-0.5).epsilon(1e-14));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(integrate([](double x) { return x; }, 0.0, 1.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(integrate([](double x) { return x; }, 0.0, 1.0, -1e-3),
                  std::invalid_argument);
}
