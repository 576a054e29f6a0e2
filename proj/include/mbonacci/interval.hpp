#pragma once

// Outward-rounded interval arithmetic.
//
// Interval        MPFR endpoints, lower rounded toward -inf and upper toward +inf.
// ComplexInterval rectangular enclosure re + i*im.
// FastInterval    double endpoints widened by one ulp after every operation; used
//                 for long certified summations where MPFR would dominate runtime.
// ComplexBall     double midpoint-radius disc for long products of complex roots.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <gmpxx.h>
#include <mpfr.h>

namespace mbonacci {

using Precision = mpfr_prec_t;

inline constexpr Precision kDefaultPrecision = 128;

class Interval {
 public:
  explicit Interval(Precision prec = kDefaultPrecision);
  Interval(long value, Precision prec);
  Interval(const mpz_class& value, Precision prec);
  Interval(const mpq_class& value, Precision prec);
  Interval(const mpq_class& lo, const mpq_class& hi, Precision prec);
  static Interval from_double(double value, Precision prec);
  static Interval pi(Precision prec);

  Interval(const Interval& other);
  Interval(Interval&& other) noexcept;
  Interval& operator=(const Interval& other);
  Interval& operator=(Interval&& other) noexcept;
  ~Interval();

  Precision precision() const noexcept { return prec_; }
  const __mpfr_struct* lo() const noexcept { return lo_; }
  const __mpfr_struct* hi() const noexcept { return hi_; }

  mpq_class lower() const;
  mpq_class upper() const;
  mpq_class midpoint() const;
  double lower_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
  double upper_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }
  double mid_double() const;
  /// Upper bound on hi - lo.
  double width() const;

  bool contains_zero() const;
  bool positive() const { return mpfr_sgn(lo_) > 0; }
  bool negative() const { return mpfr_sgn(hi_) < 0; }
  bool contains(const mpq_class& x) const;
  /// This interval lies inside [other.lo, other.hi].
  bool subset_of(const Interval& other) const;

  Interval operator-() const;
  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  /// Throws PrecisionError if b contains zero.
  friend Interval operator/(const Interval& a, const Interval& b);

  Interval& operator+=(const Interval& b) { return *this = *this + b; }
  Interval& operator-=(const Interval& b) { return *this = *this - b; }
  Interval& operator*=(const Interval& b) { return *this = *this * b; }

  friend Interval pow(const Interval& x, unsigned long n);
  friend Interval sqr(const Interval& x);
  friend Interval abs(const Interval& x);
  friend Interval sqrt(const Interval& x);
  friend Interval log(const Interval& x);
  friend Interval exp(const Interval& x);
  friend Interval cos(const Interval& x);
  friend Interval sin(const Interval& x);
  friend Interval atan(const Interval& x);
  friend Interval hull(const Interval& a, const Interval& b);
  friend Interval max(const Interval& a, const Interval& b);

  /// Decimal rendering "[lo, hi]" with the given significant digits, outward.
  std::string to_string(int digits = 20) const;

 private:
  Precision prec_;
  mpfr_t lo_;
  mpfr_t hi_;

  void set_bounds(const mpfr_t lo, const mpfr_t hi);
};

/// Decimal rendering of an MPFR value rounded in the given direction.
std::string format_decimal(const __mpfr_struct* x, int digits, mpfr_rnd_t rnd);
/// Decimal rendering of an exact rational rounded in the given direction.
std::string format_decimal(const mpq_class& x, int digits, mpfr_rnd_t rnd);

struct ComplexInterval {
  Interval re;
  Interval im;

  static ComplexInterval from_polar(const Interval& modulus, const Interval& argument);

  friend ComplexInterval operator+(const ComplexInterval& a, const ComplexInterval& b);
  friend ComplexInterval operator-(const ComplexInterval& a, const ComplexInterval& b);
  friend ComplexInterval operator*(const ComplexInterval& a, const ComplexInterval& b);
  friend ComplexInterval operator*(const ComplexInterval& a, const Interval& b);
  friend ComplexInterval operator/(const ComplexInterval& a, const ComplexInterval& b);
  friend ComplexInterval pow(const ComplexInterval& z, unsigned long n);

  /// Enclosure of |z|.
  Interval modulus() const;
};

/// Interval on doubles, every result widened by one ulp in each direction.
struct FastInterval {
  double lo = 0.0;
  double hi = 0.0;

  static FastInterval from(const Interval& x) { return {x.lower_double(), x.upper_double()}; }
  static double down(double v) { return std::nextafter(v, -std::numeric_limits<double>::infinity()); }
  static double up(double v) { return std::nextafter(v, std::numeric_limits<double>::infinity()); }

  friend FastInterval operator+(FastInterval a, FastInterval b) { return {down(a.lo + b.lo), up(a.hi + b.hi)}; }
  friend FastInterval operator-(FastInterval a, FastInterval b) { return {down(a.lo - b.hi), up(a.hi - b.lo)}; }
  friend FastInterval operator*(FastInterval a, FastInterval b) {
    const double p1 = a.lo * b.lo;
    const double p2 = a.lo * b.hi;
    const double p3 = a.hi * b.lo;
    const double p4 = a.hi * b.hi;
    return {down(std::min({p1, p2, p3, p4})), up(std::max({p1, p2, p3, p4}))};
  }
  double magnitude() const { return std::max(std::fabs(lo), std::fabs(hi)); }
};

/// Complex disc center + rad on doubles with upward-rounded radius; products
/// do not suffer the wrapping effect of rectangular enclosures.
struct ComplexBall {
  double re = 0.0;
  double im = 0.0;
  double rad = 0.0;

  static ComplexBall from(const ComplexInterval& z);
  /// Upper bound on |center| + rad.
  double magnitude() const { return FastInterval::up(FastInterval::up(std::fabs(re) + std::fabs(im)) + rad); }
  /// Enclosure of the real part.
  FastInterval real() const { return {FastInterval::down(re - rad), FastInterval::up(re + rad)}; }

  friend ComplexBall operator*(const ComplexBall& a, const ComplexBall& b);
  friend ComplexBall operator+(const ComplexBall& a, const ComplexBall& b);
};

}  // namespace mbonacci
