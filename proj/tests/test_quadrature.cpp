#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mbonacci/error.hpp"
#include "mbonacci/quadrature.hpp"
#include "oracles.hpp"

using namespace mbonacci;

TEST_CASE("A encloses the Simpson reference") {
  const QuadratureResult A = quadrature_A(mpq_class(1, 1000));
  const long double ref = oracle::simpson_A();
  CHECK(A.value.lower_double() <= static_cast<double>(ref) + 1e-6);
  CHECK(A.value.upper_double() >= static_cast<double>(ref) - 1e-6);
  CHECK(A.value.width() <= 1e-3);
  CHECK(A.value.mid_double() == doctest::Approx(0.90905).epsilon(1e-3));
}

TEST_CASE("tighter tolerances nest") {
  const QuadratureResult coarse = quadrature_A(mpq_class(1, 100));
  const QuadratureResult fine = quadrature_A(mpq_class(1, 100000));
  CHECK(fine.value.width() <= 1e-5);
  CHECK(fine.subdivisions > coarse.subdivisions);
  CHECK(fine.value.lower_double() <= coarse.value.upper_double());
  CHECK(coarse.value.lower_double() <= fine.value.upper_double());
}

TEST_CASE("integrand values") {
  const Interval pi = Interval::pi(128);
  // f(pi) = 2 / (9 ln 9).
  const double at_pi = 2.0 / (9.0 * std::log(9.0));
  const Interval f = a_integrand(pi);
  CHECK(f.lower_double() <= at_pi + 1e-15);
  CHECK(f.upper_double() >= at_pi - 1e-15);
  const Interval half = a_integrand(pi / Interval(2L, 128));
  CHECK(half.mid_double() == doctest::Approx(1.0 / (5.0 * std::log(5.0))).epsilon(1e-12));
}

TEST_CASE("kappa") {
  const QuadratureResult A = quadrature_A(mpq_class(1, 10000));
  const Interval k = kappa(A);
  CHECK(k.lower_double() > 0.57);
  CHECK(k.upper_double() < 0.59);
  const long double ref = 2 * oracle::simpson_A() / std::numbers::pi_v<long double>;
  CHECK(k.mid_double() == doctest::Approx(static_cast<double>(ref)).epsilon(1e-4));
}
