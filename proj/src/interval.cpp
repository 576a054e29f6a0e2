#include "mbonacci/interval.hpp"

#include <array>
#include <cstdlib>

#include "mbonacci/error.hpp"

namespace mbonacci {

namespace {

Precision max_prec(const Interval& a, const Interval& b) { return std::max(a.precision(), b.precision()); }

mpq_class to_rational(const __mpfr_struct* x) {
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), x);
  return q;
}

// Scratch MPFR value with RAII.
class Scratch {
 public:
  explicit Scratch(Precision prec) { mpfr_init2(v_, prec); }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;
  ~Scratch() { mpfr_clear(v_); }
  __mpfr_struct* get() { return v_; }

 private:
  mpfr_t v_;
};

}  // namespace

Interval::Interval(Precision prec) : prec_(prec) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(long value, Precision prec) : Interval(prec) {
  mpfr_set_si(lo_, value, MPFR_RNDD);
  mpfr_set_si(hi_, value, MPFR_RNDU);
}

Interval::Interval(const mpz_class& value, Precision prec) : Interval(prec) {
  mpfr_set_z(lo_, value.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(hi_, value.get_mpz_t(), MPFR_RNDU);
}

Interval::Interval(const mpq_class& value, Precision prec) : Interval(prec) {
  mpfr_set_q(lo_, value.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_, value.get_mpq_t(), MPFR_RNDU);
}

Interval::Interval(const mpq_class& lo, const mpq_class& hi, Precision prec) : Interval(prec) {
  if (lo > hi) {
    throw InvalidArgument("interval lower bound exceeds upper bound");
  }
  mpfr_set_q(lo_, lo.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_, hi.get_mpq_t(), MPFR_RNDU);
}

Interval Interval::from_double(double value, Precision prec) {
  Interval r(prec);
  mpfr_set_d(r.lo_, value, MPFR_RNDD);
  mpfr_set_d(r.hi_, value, MPFR_RNDU);
  return r;
}

Interval Interval::pi(Precision prec) {
  Interval r(prec);
  mpfr_const_pi(r.lo_, MPFR_RNDD);
  mpfr_const_pi(r.hi_, MPFR_RNDU);
  return r;
}

Interval::Interval(const Interval& other) : prec_(other.prec_) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& other) noexcept : Interval(other.prec_) { mpfr_swap(lo_, other.lo_), mpfr_swap(hi_, other.hi_); }

Interval& Interval::operator=(const Interval& other) {
  if (this != &other) {
    prec_ = other.prec_;
    mpfr_set_prec(lo_, prec_);
    mpfr_set_prec(hi_, prec_);
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }
  return *this;
}

Interval& Interval::operator=(Interval&& other) noexcept {
  std::swap(prec_, other.prec_);
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

void Interval::set_bounds(const mpfr_t lo, const mpfr_t hi) {
  mpfr_set(lo_, lo, MPFR_RNDD);
  mpfr_set(hi_, hi, MPFR_RNDU);
}

mpq_class Interval::lower() const { return to_rational(lo_); }
mpq_class Interval::upper() const { return to_rational(hi_); }
mpq_class Interval::midpoint() const { return (lower() + upper()) / 2; }

double Interval::mid_double() const {
  Scratch s(prec_ + 1);
  mpfr_add(s.get(), lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(s.get(), s.get(), 1, MPFR_RNDN);
  return mpfr_get_d(s.get(), MPFR_RNDN);
}

double Interval::width() const {
  Scratch s(prec_);
  mpfr_sub(s.get(), hi_, lo_, MPFR_RNDU);
  return mpfr_get_d(s.get(), MPFR_RNDU);
}

bool Interval::contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }

bool Interval::contains(const mpq_class& x) const {
  return mpfr_cmp_q(lo_, x.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, x.get_mpq_t()) >= 0;
}

bool Interval::subset_of(const Interval& other) const {
  return mpfr_cmp(other.lo_, lo_) <= 0 && mpfr_cmp(hi_, other.hi_) <= 0;
}

Interval Interval::operator-() const {
  Interval r(prec_);
  mpfr_neg(r.lo_, hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  return r;
}

Interval operator+(const Interval& a, const Interval& b) {
  Interval r(max_prec(a, b));
  mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Interval operator-(const Interval& a, const Interval& b) {
  Interval r(max_prec(a, b));
  mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
  mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
  return r;
}

Interval operator*(const Interval& a, const Interval& b) {
  const Precision prec = max_prec(a, b);
  Interval r(prec);
  Scratch t(prec);
  const std::array<std::pair<const __mpfr_struct*, const __mpfr_struct*>, 4> pairs{
      {{a.lo_, b.lo_}, {a.lo_, b.hi_}, {a.hi_, b.lo_}, {a.hi_, b.hi_}}};
  bool first = true;
  for (const auto& [x, y] : pairs) {
    mpfr_mul(t.get(), x, y, MPFR_RNDD);
    if (first || mpfr_cmp(t.get(), r.lo_) < 0) {
      mpfr_set(r.lo_, t.get(), MPFR_RNDD);
    }
    mpfr_mul(t.get(), x, y, MPFR_RNDU);
    if (first || mpfr_cmp(t.get(), r.hi_) > 0) {
      mpfr_set(r.hi_, t.get(), MPFR_RNDU);
    }
    first = false;
  }
  return r;
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) {
    throw PrecisionError("interval division by an enclosure containing zero");
  }
  const Precision prec = max_prec(a, b);
  Interval inv(prec);
  mpfr_ui_div(inv.lo_, 1, b.hi_, MPFR_RNDD);
  mpfr_ui_div(inv.hi_, 1, b.lo_, MPFR_RNDU);
  return a * inv;
}

Interval sqr(const Interval& x) {
  Interval a = abs(x);
  Interval r(x.prec_);
  mpfr_sqr(r.lo_, a.lo_, MPFR_RNDD);
  mpfr_sqr(r.hi_, a.hi_, MPFR_RNDU);
  return r;
}

Interval abs(const Interval& x) {
  if (mpfr_sgn(x.lo_) >= 0) {
    return x;
  }
  if (mpfr_sgn(x.hi_) <= 0) {
    return -x;
  }
  Interval r(x.prec_);
  mpfr_set_zero(r.lo_, 1);
  if (mpfr_cmpabs(x.lo_, x.hi_) > 0) {
    mpfr_neg(r.hi_, x.lo_, MPFR_RNDU);
  } else {
    mpfr_set(r.hi_, x.hi_, MPFR_RNDU);
  }
  return r;
}

Interval pow(const Interval& x, unsigned long n) {
  if (n == 0) {
    return Interval(1L, x.prec_);
  }
  Interval r(x.prec_);
  if (mpfr_sgn(x.lo_) >= 0) {
    mpfr_pow_ui(r.lo_, x.lo_, n, MPFR_RNDD);
    mpfr_pow_ui(r.hi_, x.hi_, n, MPFR_RNDU);
    return r;
  }
  if (mpfr_sgn(x.hi_) <= 0) {
    Interval p = pow(-x, n);
    return (n % 2 == 0) ? p : -p;
  }
  // Mixed signs.
  Interval a = abs(x);
  if (n % 2 == 0) {
    mpfr_set_zero(r.lo_, 1);
    mpfr_pow_ui(r.hi_, a.hi_, n, MPFR_RNDU);
    return r;
  }
  Scratch t(x.prec_);
  mpfr_pow_ui(r.hi_, x.hi_, n, MPFR_RNDU);
  mpfr_neg(t.get(), x.lo_, MPFR_RNDU);
  mpfr_pow_ui(t.get(), t.get(), n, MPFR_RNDU);
  mpfr_neg(r.lo_, t.get(), MPFR_RNDD);
  return r;
}

Interval sqrt(const Interval& x) {
  if (mpfr_sgn(x.lo_) < 0) {
    throw PrecisionError("square root of an enclosure reaching below zero");
  }
  Interval r(x.prec_);
  mpfr_sqrt(r.lo_, x.lo_, MPFR_RNDD);
  mpfr_sqrt(r.hi_, x.hi_, MPFR_RNDU);
  return r;
}

Interval log(const Interval& x) {
  if (mpfr_sgn(x.lo_) <= 0) {
    throw PrecisionError("logarithm of an enclosure reaching zero");
  }
  Interval r(x.prec_);
  mpfr_log(r.lo_, x.lo_, MPFR_RNDD);
  mpfr_log(r.hi_, x.hi_, MPFR_RNDU);
  return r;
}

Interval exp(const Interval& x) {
  Interval r(x.prec_);
  mpfr_exp(r.lo_, x.lo_, MPFR_RNDD);
  mpfr_exp(r.hi_, x.hi_, MPFR_RNDU);
  return r;
}

Interval atan(const Interval& x) {
  Interval r(x.prec_);
  mpfr_atan(r.lo_, x.lo_, MPFR_RNDD);
  mpfr_atan(r.hi_, x.hi_, MPFR_RNDU);
  return r;
}

Interval cos(const Interval& x) {
  const Precision prec = x.prec_;
  Interval r(prec);
  if (x.width() >= 6.28) {
    mpfr_set_si(r.lo_, -1, MPFR_RNDD);
    mpfr_set_si(r.hi_, 1, MPFR_RNDU);
    return r;
  }
  Scratch t(prec);
  mpfr_cos(r.lo_, x.lo_, MPFR_RNDD);
  mpfr_cos(r.hi_, x.lo_, MPFR_RNDU);
  mpfr_cos(t.get(), x.hi_, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, t.get(), MPFR_RNDD);
  mpfr_cos(t.get(), x.hi_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, t.get(), MPFR_RNDU);

  // Extrema of cos at k*pi that may lie inside x.
  const Interval pi = Interval::pi(prec);
  const long k_lo = static_cast<long>(std::floor(x.lower_double() / 3.14159)) - 1;
  const long k_hi = static_cast<long>(std::ceil(x.upper_double() / 3.14159)) + 1;
  for (long k = k_lo; k <= k_hi; ++k) {
    const Interval kpi = Interval(k, prec) * pi;
    const bool maybe_inside = mpfr_cmp(kpi.lo_, x.hi_) <= 0 && mpfr_cmp(kpi.hi_, x.lo_) >= 0;
    if (!maybe_inside) {
      continue;
    }
    if (k % 2 == 0) {
      mpfr_set_si(r.hi_, 1, MPFR_RNDU);
    } else {
      mpfr_set_si(r.lo_, -1, MPFR_RNDD);
    }
  }
  return r;
}

Interval sin(const Interval& x) {
  Interval half_pi = Interval::pi(x.prec_);
  mpfr_div_2ui(half_pi.lo_, half_pi.lo_, 1, MPFR_RNDD);
  mpfr_div_2ui(half_pi.hi_, half_pi.hi_, 1, MPFR_RNDU);
  return cos(x - half_pi);
}

Interval hull(const Interval& a, const Interval& b) {
  Interval r(max_prec(a, b));
  mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Interval max(const Interval& a, const Interval& b) {
  Interval r(max_prec(a, b));
  mpfr_max(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

std::string format_decimal(const __mpfr_struct* x, int digits, mpfr_rnd_t rnd) {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*R*g", digits, rnd, x);
  std::string out = buf != nullptr ? buf : "";
  mpfr_free_str(buf);
  return out;
}

std::string format_decimal(const mpq_class& x, int digits, mpfr_rnd_t rnd) {
  Scratch t(static_cast<Precision>(digits) * 4 + 64);
  mpfr_set_q(t.get(), x.get_mpq_t(), rnd);
  return format_decimal(t.get(), digits, rnd);
}

std::string Interval::to_string(int digits) const {
  return "[" + format_decimal(lo_, digits, MPFR_RNDD) + ", " + format_decimal(hi_, digits, MPFR_RNDU) + "]";
}

ComplexInterval ComplexInterval::from_polar(const Interval& modulus, const Interval& argument) {
  return {modulus * cos(argument), modulus * sin(argument)};
}

ComplexInterval operator+(const ComplexInterval& a, const ComplexInterval& b) { return {a.re + b.re, a.im + b.im}; }

ComplexInterval operator-(const ComplexInterval& a, const ComplexInterval& b) { return {a.re - b.re, a.im - b.im}; }

ComplexInterval operator*(const ComplexInterval& a, const ComplexInterval& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

ComplexInterval operator*(const ComplexInterval& a, const Interval& b) { return {a.re * b, a.im * b}; }

ComplexInterval operator/(const ComplexInterval& a, const ComplexInterval& b) {
  const Interval denom = sqr(b.re) + sqr(b.im);
  const ComplexInterval num = a * ComplexInterval{b.re, -b.im};
  return {num.re / denom, num.im / denom};
}

ComplexInterval pow(const ComplexInterval& z, unsigned long n) {
  ComplexInterval result{Interval(1L, z.re.precision()), Interval(0L, z.re.precision())};
  ComplexInterval base = z;
  while (n > 0) {
    if (n & 1UL) {
      result = result * base;
    }
    n >>= 1;
    if (n > 0) {
      base = base * base;
    }
  }
  return result;
}

Interval ComplexInterval::modulus() const { return sqrt(sqr(re) + sqr(im)); }

namespace {

// Upper bound on the center offset of a double interval around its midpoint.
double half_width(double lo, double hi, double mid) {
  return FastInterval::up(std::max(hi - mid, mid - lo));
}

constexpr double kUnit = std::numeric_limits<double>::epsilon();

}  // namespace

ComplexBall ComplexBall::from(const ComplexInterval& z) {
  const double re_lo = z.re.lower_double();
  const double re_hi = z.re.upper_double();
  const double im_lo = z.im.lower_double();
  const double im_hi = z.im.upper_double();
  ComplexBall b;
  b.re = 0.5 * (re_lo + re_hi);
  b.im = 0.5 * (im_lo + im_hi);
  b.rad = FastInterval::up(half_width(re_lo, re_hi, b.re) + half_width(im_lo, im_hi, b.im));
  return b;
}

namespace {

// Upper bound on |re + i im|.
double modulus_up(double re, double im) {
  using F = FastInterval;
  return F::up(std::sqrt(F::up(F::up(re * re) + F::up(im * im))));
}

}  // namespace

ComplexBall operator*(const ComplexBall& a, const ComplexBall& b) {
  using F = FastInterval;
  const double ma = modulus_up(a.re, a.im);
  const double mb = modulus_up(b.re, b.im);
  ComplexBall r;
  r.re = a.re * b.re - a.im * b.im;
  r.im = a.re * b.im + a.im * b.re;
  // Propagated radius plus the rounding of the center (at most 3u|a||b| per component, in L1).
  const double spread = F::up(F::up(ma * b.rad) + F::up(F::up(a.rad * mb) + F::up(a.rad * b.rad)));
  const double rounding = F::up(8.0 * kUnit * F::up(ma * mb));
  r.rad = F::up(F::up(spread + rounding) + std::numeric_limits<double>::denorm_min());
  return r;
}

ComplexBall operator+(const ComplexBall& a, const ComplexBall& b) {
  using F = FastInterval;
  ComplexBall r;
  r.re = a.re + b.re;
  r.im = a.im + b.im;
  const double rounding = F::up(kUnit * F::up(std::fabs(r.re) + std::fabs(r.im)));
  r.rad = F::up(F::up(a.rad + b.rad) + rounding);
  return r;
}

}  // namespace mbonacci
