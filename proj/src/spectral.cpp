#include "mbonacci/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "mbonacci/error.hpp"

namespace mbonacci {

namespace {

mpq_class dyadic(long exponent) {
  mpq_class r = 1;
  if (exponent >= 0) {
    mpz_mul_2exp(r.get_num_mpz_t(), r.get_num_mpz_t(), static_cast<mp_bitcnt_t>(exponent));
  } else {
    mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<mp_bitcnt_t>(-exponent));
  }
  return r;
}

// Number of bits b with 2^{-b} <= x (x > 0).
long bits_for(const mpq_class& x) {
  if (x <= 0) {
    throw InvalidArgument("tolerance must be positive");
  }
  const long num_bits = static_cast<long>(mpz_sizeinbase(x.get_num_mpz_t(), 2));
  const long den_bits = static_cast<long>(mpz_sizeinbase(x.get_den_mpz_t(), 2));
  return std::max(1L, den_bits - num_bits + 1);
}

// q(x) = (2 - x)^m x - 1, exact.
int q_sign_at(int m, const mpq_class& x) {
  mpq_class base = 2 - x;
  mpq_class power = 1;
  for (int i = 0; i < m; ++i) {
    power *= base;
  }
  return sgn(mpq_class(power * x - 1));
}

}  // namespace

int p_sign_at(MParam m, const mpq_class& x) {
  // Horner on b^m p(a/b) = a^m - sum_{i<m} a^i b^{m-i}.
  const mpz_class& a = x.get_num();
  const mpz_class& b = x.get_den();
  mpz_class r = 1;
  mpz_class bpow = 1;
  for (int t = 1; t <= m.value(); ++t) {
    bpow *= b;
    r = r * a - bpow;
  }
  return sgn(r);
}

BetaEnclosure beta_enclosure(MParam m, const mpq_class& width) {
  if (width <= 0) {
    throw InvalidArgument("enclosure width must be positive");
  }
  const int mm = m.value();
  const mpq_class two_m = dyadic(mm);
  mpq_class x_lo = 1 / (two_m - mpq_class(mm, 2));
  mpq_class x_hi = 1 / (two_m - mpq_class(mm + 1, 2));
  x_lo.canonicalize();
  x_hi.canonicalize();
  while (x_hi - x_lo > width) {
    const mpq_class mid = (x_lo + x_hi) / 2;
    const int s = q_sign_at(mm, mid);
    if (s == 0) {
      throw ConsistencyError("rational root of q found; beta is irrational");
    }
    if (s < 0) {
      x_lo = mid;
    } else {
      x_hi = mid;
    }
  }
  BetaEnclosure e;
  e.m = mm;
  e.lo = 2 - x_hi;
  e.hi = 2 - x_lo;
  return e;
}

BetaEnclosure beta_enclosure_bits(MParam m, long bits) {
  if (bits <= 160) {
    return beta_enclosure(m, dyadic(-bits));
  }
  const int mm = m.value();
  const BetaEnclosure seed = beta_enclosure(m, dyadic(-60));
  const Precision prec = static_cast<Precision>(bits + 64);
  mpfr_t x, f, fp, t;
  mpfr_inits2(prec, x, f, fp, t, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_q(x, seed.lo.get_mpq_t(), MPFR_RNDN);
  // Newton on x^m (2 - x) - 1.
  const int iterations = static_cast<int>(std::ceil(std::log2(static_cast<double>(prec) / 50.0))) + 3;
  for (int i = 0; i < iterations; ++i) {
    mpfr_pow_ui(t, x, static_cast<unsigned long>(mm - 1), MPFR_RNDN);  // x^{m-1}
    mpfr_ui_sub(f, 2, x, MPFR_RNDN);
    mpfr_mul(f, f, t, MPFR_RNDN);
    mpfr_mul(f, f, x, MPFR_RNDN);
    mpfr_sub_ui(f, f, 1, MPFR_RNDN);
    // f' = x^{m-1} (2m - (m+1) x)
    mpfr_mul_ui(fp, x, static_cast<unsigned long>(mm + 1), MPFR_RNDN);
    mpfr_ui_sub(fp, static_cast<unsigned long>(2 * mm), fp, MPFR_RNDN);
    mpfr_mul(fp, fp, t, MPFR_RNDN);
    mpfr_div(f, f, fp, MPFR_RNDN);
    mpfr_sub(x, x, f, MPFR_RNDN);
  }
  mpq_class center;
  mpfr_get_q(center.get_mpq_t(), x);
  mpfr_clears(x, f, fp, t, static_cast<mpfr_ptr>(nullptr));

  const long e = bits + 2;
  mpz_class scaled;
  {
    mpq_class shifted = center * dyadic(e);
    mpz_fdiv_q(scaled.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
  }
  for (long slack = 1; slack <= (1L << 16); slack <<= 4) {
    BetaEnclosure enc;
    enc.m = mm;
    enc.lo = mpq_class(scaled - slack) / dyadic(e);
    enc.hi = mpq_class(scaled + slack + 1) / dyadic(e);
    enc.lo.canonicalize();
    enc.hi.canonicalize();
    if (enc.width() <= dyadic(-bits) && p_sign_at(m, enc.lo) < 0 && p_sign_at(m, enc.hi) > 0) {
      return enc;
    }
  }
  // Newton did not land; plain bisection always succeeds.
  return beta_enclosure(m, dyadic(-bits));
}

LemmaCheck lemma_x0_check(MParam m) {
  const int mm = m.value();
  const mpq_class two_m = dyadic(mm);
  mpq_class left = 1 / (two_m - mpq_class(mm, 2));
  mpq_class right = 1 / (two_m - mpq_class(mm + 1, 2));
  left.canonicalize();
  right.canonicalize();
  LemmaCheck out;
  const int sl = q_sign_at(mm, left);
  const int sr = q_sign_at(mm, right);
  if (sl >= 0) {
    out.detail = "q(1/(2^m - m/2)) is not negative";
  } else if (sr <= 0) {
    out.detail = "q(1/(2^m - (m+1)/2)) is not positive";
  } else {
    out.passed = true;
    out.detail = "ok";
  }
  return out;
}

std::pair<mpq_class, mpq_class> argument_window(MParam m, int j) {
  const int mm = m.value();
  if (j < 1 || j >= mm) {
    throw InvalidArgument("sector index must lie in [1, m-1]");
  }
  mpq_class center(2 * j, mm);
  mpq_class half(1, 6 * mm);
  center.canonicalize();
  half.canonicalize();
  return {center - half, center + half};
}

Interval RootEnclosure::argument(Precision prec) const {
  if (real_negative) {
    return Interval::pi(prec);
  }
  return Interval(argument_lo, argument_hi, prec);
}

ComplexInterval RootEnclosure::value(Precision prec) const {
  if (real_negative) {
    return {-modulus(prec), Interval(0L, prec)};
  }
  return ComplexInterval::from_polar(modulus(prec), argument(prec));
}

ComplexInterval RootEnclosure::power(unsigned long n, Precision prec) const {
  const Interval b = pow(modulus(prec), n);
  if (real_negative) {
    return {n % 2 == 0 ? b : -b, Interval(0L, prec)};
  }
  return ComplexInterval::from_polar(b, Interval(static_cast<long>(n), prec) * argument(prec));
}

std::pair<double, double> RootEnclosure::approx() const {
  const double b = mpq_class((modulus_lo + modulus_hi) / 2).get_d();
  if (real_negative) {
    return {-b, 0.0};
  }
  const double g = mpq_class((argument_lo + argument_hi) / 2).get_d();
  return {b * std::cos(g), b * std::sin(g)};
}

double RootEnclosure::error_radius() const {
  const double db = mpq_class(modulus_hi - modulus_lo).get_d();
  const double dg = real_negative ? 0.0 : mpq_class(argument_hi - argument_lo).get_d();
  return db + modulus_hi.get_d() * dg + 1e-15;
}

mpq_class SpectralSet::max_modulus_hi() const {
  mpq_class best = 0;
  for (const auto& r : roots) {
    best = std::max(best, r.modulus_hi);
  }
  return best;
}

namespace {

class SectorSolver {
 public:
  SectorSolver(int m, int j, const mpq_class& tol, Precision prec)
      : m_(m), j_(j), tol_(tol), step_(tol / 16), prec_(prec) {}

  // Returns false if the cap was hit without reaching tol.
  bool run(mpq_class& b_lo, mpq_class& b_hi, mpq_class& g_lo, mpq_class& g_hi) {
    const Interval pi = Interval::pi(prec_);
    two_j_pi_ = Interval(2L * j_, prec_) * pi;
    for (int round = 0; round < 60; ++round) {
      const mpq_class old_b = b_hi - b_lo;
      const mpq_class old_g = g_hi - g_lo;
      contract_modulus(b_lo, b_hi, g_lo, g_hi);
      contract_argument(b_lo, b_hi, g_lo, g_hi);
      if (b_hi - b_lo < tol_ && g_hi - g_lo < tol_) {
        return true;
      }
      if (round > 4 && b_hi - b_lo == old_b && g_hi - g_lo == old_g) {
        return false;
      }
    }
    return false;
  }

 private:
  int m_;
  int j_;
  mpq_class tol_;
  mpq_class step_;
  Precision prec_;
  Interval two_j_pi_;

  // F(B, c) = B^{2m}(4 - 4Bc + B^2) - 1 for all c in cos_g.
  Interval modulus_equation(const mpq_class& b, const Interval& cos_g) const {
    const Interval bb(b, prec_);
    const Interval four(4L, prec_);
    return pow(bb, static_cast<unsigned long>(2 * m_)) * (four - four * bb * cos_g + sqr(bb)) - Interval(1L, prec_);
  }

  // L(gamma, B) = m gamma - arctan(sin gamma/(2/B - cos gamma)) - 2 j pi.
  Interval argument_equation(const mpq_class& g, const Interval& b) const {
    const Interval gg(g, prec_);
    const Interval c = cos(gg);
    const Interval s = sin(gg);
    const Interval denom = Interval(2L, prec_) / b - c;
    return Interval(static_cast<long>(m_), prec_) * gg - atan(s / denom) - two_j_pi_;
  }

  void contract_modulus(mpq_class& b_lo, mpq_class& b_hi, const mpq_class& g_lo, const mpq_class& g_hi) const {
    const Interval cos_g = cos(Interval(g_lo, g_hi, prec_));
    // Lower endpoint: largest certified point with F < 0.
    mpq_class lo = b_lo;
    mpq_class hi = b_hi;
    while (hi - lo > step_) {
      const mpq_class mid = (lo + hi) / 2;
      if (modulus_equation(mid, cos_g).negative()) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    b_lo = lo;
    lo = b_lo;
    hi = b_hi;
    while (hi - lo > step_) {
      const mpq_class mid = (lo + hi) / 2;
      if (modulus_equation(mid, cos_g).positive()) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    b_hi = hi;
  }

  void contract_argument(const mpq_class& b_lo, const mpq_class& b_hi, mpq_class& g_lo, mpq_class& g_hi) const {
    const Interval b(b_lo, b_hi, prec_);
    mpq_class lo = g_lo;
    mpq_class hi = g_hi;
    while (hi - lo > step_) {
      const mpq_class mid = (lo + hi) / 2;
      if (argument_equation(mid, b).negative()) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    g_lo = lo;
    lo = g_lo;
    hi = g_hi;
    while (hi - lo > step_) {
      const mpq_class mid = (lo + hi) / 2;
      if (argument_equation(mid, b).positive()) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    g_hi = hi;
  }
};

// Real negative root -B of p for even m: B^m (2 + B) = 1.
RootEnclosure solve_real_negative(int m, int j, const mpq_class& tol) {
  mpq_class lo(1, 2);
  mpq_class hi = 1;
  auto sign = [m](const mpq_class& b) {
    mpq_class power = 1;
    for (int i = 0; i < m; ++i) {
      power *= b;
    }
    return sgn(mpq_class(power * (2 + b) - 1));
  };
  while (hi - lo >= tol) {
    const mpq_class mid = (lo + hi) / 2;
    if (sign(mid) < 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  RootEnclosure r;
  r.m = m;
  r.j = j;
  r.modulus_lo = lo;
  r.modulus_hi = hi;
  r.real_negative = true;
  return r;
}

std::pair<mpq_class, mpq_class> pi_bounds(Precision prec) {
  const Interval pi = Interval::pi(prec);
  return {pi.lower(), pi.upper()};
}

// Sector j as the complex conjugate of sector m - j: gamma -> 2 pi - gamma.
RootEnclosure conjugate_of(const RootEnclosure& mirror, int j, const mpq_class& tol) {
  const auto [pi_lo, pi_hi] = pi_bounds(bits_for(tol) + 64);
  RootEnclosure r = mirror;
  r.j = j;
  r.argument_lo = 2 * pi_lo - mirror.argument_hi;
  r.argument_hi = 2 * pi_hi - mirror.argument_lo;
  return r;
}

}  // namespace

RootEnclosure solve_sector(MParam m, int j, const mpq_class& tol) {
  const int mm = m.value();
  if (j < 1 || j >= mm) {
    throw InvalidArgument("sector index must lie in [1, m-1]");
  }
  if (tol <= 0) {
    throw InvalidArgument("root tolerance must be positive");
  }
  if (2 * j == mm) {
    return solve_real_negative(mm, j, tol);
  }
  if (2 * j > mm) {
    return conjugate_of(solve_sector(m, mm - j, tol), j, tol);
  }
  Precision prec = std::max<Precision>(kDefaultPrecision, static_cast<Precision>(bits_for(tol) + 64));
  const auto [w_lo, w_hi] = argument_window(m, j);
  for (int attempt = 0; attempt <= 8; ++attempt) {
    const auto [pi_lo, pi_hi] = pi_bounds(prec);
    mpq_class b_lo(1, 2);
    mpq_class b_hi = 1;
    // Open window; its endpoints bracket the unique solution.
    mpq_class g_lo = w_lo * pi_hi;
    mpq_class g_hi = w_hi * pi_lo;
    SectorSolver solver(mm, j, tol, prec);
    if (solver.run(b_lo, b_hi, g_lo, g_hi)) {
      RootEnclosure r;
      r.m = mm;
      r.j = j;
      r.modulus_lo = b_lo;
      r.modulus_hi = b_hi;
      r.argument_lo = g_lo;
      r.argument_hi = g_hi;
      return r;
    }
    prec *= 2;
  }
  throw PrecisionError("sector " + std::to_string(j) + " did not converge for m = " + std::to_string(mm), j);
}

SpectralSet conjugate_enclosures(MParam m, const mpq_class& tol) {
  SpectralSet set;
  set.m = m.value();
  set.beta = beta_enclosure(m, tol);
  set.roots.resize(static_cast<std::size_t>(m.value() - 1));
  for (int j = 1; j < m.value(); ++j) {
    if (2 * j > m.value()) {
      set.roots[static_cast<std::size_t>(j - 1)] =
          conjugate_of(set.roots[static_cast<std::size_t>(m.value() - j - 1)], j, tol);
    } else {
      set.roots[static_cast<std::size_t>(j - 1)] = solve_sector(m, j, tol);
    }
  }
  return set;
}

mpq_class modulus_upper_bound(MParam m, int j, const RootEnclosure& root) {
  if (root.j != j || root.m != m.value()) {
    throw InvalidArgument("root enclosure does not belong to the requested sector");
  }
  const Precision prec = 256;
  const Interval gamma = root.argument(prec);
  const Interval mm(static_cast<long>(m.value()), prec);
  const Interval ln_term = log(Interval(5L, prec) - Interval(4L, prec) * cos(gamma));
  const Interval factor = Interval(1L, prec) - log(Interval(3L, prec)) / mm;
  const Interval bound = Interval(1L, prec) - ln_term / (Interval(2L, prec) * mm) * factor;
  return bound.upper();
}

ComplexInterval p_derivative_at_root(MParam m, const ComplexInterval& z) {
  const Precision prec = z.re.precision();
  const int mm = m.value();
  const Interval zero(0L, prec);
  const ComplexInterval one{Interval(1L, prec), zero};
  const ComplexInterval num = z * Interval(static_cast<long>(mm + 1), prec) -
                              ComplexInterval{Interval(static_cast<long>(2 * mm), prec), zero};
  const ComplexInterval den = z - one;
  if (den.re.contains_zero() && den.im.contains_zero()) {
    throw PrecisionError("root enclosure touches 1");
  }
  return num / den * pow(z, static_cast<unsigned long>(mm - 1));
}

Interval p_derivative_at_beta(MParam m, const Interval& beta) {
  const Precision prec = beta.precision();
  const int mm = m.value();
  const Interval num = Interval(static_cast<long>(mm + 1), prec) * beta - Interval(static_cast<long>(2 * mm), prec);
  return num / (beta - Interval(1L, prec)) * pow(beta, static_cast<unsigned long>(mm - 1));
}

}  // namespace mbonacci
