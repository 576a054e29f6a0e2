#include "mbonacci/quadrature.hpp"

#include <algorithm>
#include <vector>

#include "mbonacci/error.hpp"

namespace mbonacci {

namespace {

constexpr Precision kQuadPrecision = 128;

// f as a function of c = cos x: (1 - c)/((5 - 4c) ln(5 - 4c)), valid for c < 1.
Interval integrand_of_cos(const Interval& c) {
  const Interval one(1L, kQuadPrecision);
  const Interval u = Interval(5L, kQuadPrecision) - Interval(4L, kQuadPrecision) * c;
  return (one - c) / (u * log(u));
}

}  // namespace

Interval a_integrand(const Interval& x) {
  // Monotone in c: evaluate at the endpoints of the cos range separately.
  const Interval c = cos(x);
  if (mpfr_cmp_ui(c.hi(), 1) >= 0) {
    throw PrecisionError("integrand enclosure reaches the removable singularity at cos x = 1");
  }
  const Interval at_lo = integrand_of_cos(Interval(c.lower(), kQuadPrecision));
  const Interval at_hi = integrand_of_cos(Interval(c.upper(), kQuadPrecision));
  return hull(at_lo, at_hi);
}

QuadratureResult quadrature_A(const mpq_class& tol) {
  if (tol <= 0) {
    throw InvalidArgument("quadrature tolerance must be positive");
  }
  const Interval pi = Interval::pi(kQuadPrecision);
  // The excised mass must stay well inside the width budget.
  const mpq_class eps_q = std::min(kQuadratureEpsilon, mpq_class(tol / 4));
  const Interval eps(eps_q, kQuadPrecision);
  // Mass of both excised pieces: [0, 2 * eps * (1/4) * 2].
  const Interval excised(mpq_class(0), eps_q, kQuadPrecision);
  const Interval two(2L, kQuadPrecision);

  for (long n = 64;; n *= 2) {
    // Grid x_i = eps + i (pi - eps)/n; f decreasing on [eps, pi].
    const Interval h = (pi - eps) / Interval(n, kQuadPrecision);
    std::vector<Interval> values;
    values.reserve(static_cast<std::size_t>(n + 1));
    for (long i = 0; i <= n; ++i) {
      values.push_back(a_integrand(eps + Interval(i, kQuadPrecision) * h));
    }
    Interval lower_sum(0L, kQuadPrecision);
    Interval upper_sum(0L, kQuadPrecision);
    for (long i = 0; i < n; ++i) {
      lower_sum += values[static_cast<std::size_t>(i + 1)];
      upper_sum += values[static_cast<std::size_t>(i)];
    }
    const Interval low = two * h * lower_sum;
    const Interval high = two * h * upper_sum;
    const Interval total = hull(low, high) + excised;
    if (total.width() <= tol.get_d() || n > (1L << 24)) {
      return {"A", total, n};
    }
  }
}

Interval kappa(const QuadratureResult& a) {
  return Interval(2L, kQuadPrecision) * a.value / Interval::pi(kQuadPrecision);
}

}  // namespace mbonacci
