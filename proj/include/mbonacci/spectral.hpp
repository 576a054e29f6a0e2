#pragma once

// Certified enclosures of the roots of p(x) = x^m - x^{m-1} - ... - x - 1.
//
// The dominant root beta lies in (1, 2). Every other root beta_j = B_j e^{i gamma_j}
// satisfies x^m (2 - x) = 1, hence
//   B^{2m} (4 - 4 B cos gamma + B^2) = 1,
//   m gamma - arctan(sin gamma / (2/B - cos gamma)) = 2 j pi,
// and is isolated by alternating bisections on this real system.

#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "mbonacci/interval.hpp"
#include "mbonacci/words.hpp"

namespace mbonacci {

/// beta in [lo, hi] with p(lo) < 0 < p(hi), both dyadic rationals in (1, 2).
struct BetaEnclosure {
  int m = 0;
  mpq_class lo;
  mpq_class hi;

  mpq_class width() const { return hi - lo; }
  /// Enclosure of beta at the given working precision.
  Interval to_interval(Precision prec) const { return Interval(lo, hi, prec); }
};

/// Sign of p at a rational point, computed exactly.
int p_sign_at(MParam m, const mpq_class& x);

/// Bisection on q(x) = (2 - x)^m x - 1 over x0 = 2 - beta, starting from the
/// bracket 1/(2^m - m/2) < x0 < 1/(2^m - (m+1)/2).
BetaEnclosure beta_enclosure(MParam m, const mpq_class& width);

/// Enclosure of width <= 2^{-bits}. Narrow requests are served by an MPFR Newton
/// iteration whose dyadic endpoints are then certified by exact sign evaluation.
BetaEnclosure beta_enclosure_bits(MParam m, long bits);

struct LemmaCheck {
  bool passed = false;
  std::string detail;
};

/// Exact check of q(1/(2^m - m/2)) < 0 < q(1/(2^m - (m+1)/2)).
LemmaCheck lemma_x0_check(MParam m);

/// Argument window (lo, hi) of sector j as rational multiples of pi.
std::pair<mpq_class, mpq_class> argument_window(MParam m, int j);

struct RootEnclosure {
  int m = 0;
  int j = 0;
  mpq_class modulus_lo;
  mpq_class modulus_hi;
  /// Argument in radians.
  mpq_class argument_lo;
  mpq_class argument_hi;
  /// Real root with argument exactly pi (even m, j = m/2).
  bool real_negative = false;

  Interval modulus(Precision prec) const { return Interval(modulus_lo, modulus_hi, prec); }
  Interval argument(Precision prec) const;
  /// Rectangular enclosure of the root.
  ComplexInterval value(Precision prec) const;
  /// Enclosure of root^n through the polar form, free of wrapping growth.
  ComplexInterval power(unsigned long n, Precision prec) const;
  /// Midpoint approximation and a radius bounding its distance to the root.
  std::pair<double, double> approx() const;
  double error_radius() const;
};

struct SpectralSet {
  int m = 0;
  BetaEnclosure beta;
  /// Sectors j = 1 .. m-1 in increasing argument order.
  std::vector<RootEnclosure> roots;

  /// Largest upper bound on a conjugate modulus.
  mpq_class max_modulus_hi() const;
};

/// Solves every sector to width < tol in both modulus and argument.
/// Throws PrecisionError (index = sector) if the refinement cap is exhausted.
SpectralSet conjugate_enclosures(MParam m, const mpq_class& tol);

/// Single sector; j in [1, m-1].
RootEnclosure solve_sector(MParam m, int j, const mpq_class& tol);

/// Upper bound 1 - (ln(5 - 4 cos gamma)/(2m)) (1 - ln 3/m) on |beta_j|.
mpq_class modulus_upper_bound(MParam m, int j, const RootEnclosure& root);

/// p'(beta_j) via ((m+1)z - 2m)/(z - 1) z^{m-1}.
ComplexInterval p_derivative_at_root(MParam m, const ComplexInterval& z);
/// p'(beta) for the dominant root.
Interval p_derivative_at_beta(MParam m, const Interval& beta);

}  // namespace mbonacci
