#pragma once

// The constant A = int_0^{2pi} (1 - cos x)/((5 - 4 cos x) ln(5 - 4 cos x)) dx
// and kappa = 2A/pi.

#include <string>

#include <gmpxx.h>

#include "mbonacci/interval.hpp"

namespace mbonacci {

struct QuadratureResult {
  std::string name;
  Interval value;
  /// Number of interior subintervals on [eps, pi].
  long subdivisions = 0;
};

/// Excised neighbourhood of the removable endpoint singularities (reduced to
/// tol/4 for tolerances below 4e-4).
inline const mpq_class kQuadratureEpsilon{1, 10000};

/// f(x) = (1 - cos x)/((5 - 4 cos x) ln(5 - 4 cos x)), enclosed over an interval of x.
/// f is an increasing function of cos x; the enclosure uses the range of cos.
Interval a_integrand(const Interval& x);

/// Enclosure of A of width <= tol. The integrand is symmetric about pi and
/// decreasing on (0, pi], so Darboux sums on a uniform grid are exact bounds;
/// the grid is doubled until the width target is met. The excised pieces
/// [0, eps] and [2pi - eps, 2pi] contribute a mass in [0, eps (1/4) 2] each.
QuadratureResult quadrature_A(const mpq_class& tol);

/// kappa = 2A/pi.
Interval kappa(const QuadratureResult& a);

}  // namespace mbonacci
