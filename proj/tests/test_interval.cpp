#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "mbonacci/error.hpp"
#include "mbonacci/interval.hpp"

using namespace mbonacci;

namespace {

mpq_class random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-100000, 100000);
  std::uniform_int_distribution<long> den(1, 9999);
  mpq_class q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

// x lies in [lo - slack, hi + slack].
bool near(const Interval& i, long double x, long double slack = 1e-15L) {
  return i.lower_double() - slack <= x && x <= i.upper_double() + slack;
}

}  // namespace

TEST_CASE("arithmetic encloses exact rational results") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const mpq_class a = random_rational(rng);
    const mpq_class b = random_rational(rng);
    const Interval ia(a, 64), ib(b, 64);
    CHECK((ia + ib).contains(a + b));
    CHECK((ia - ib).contains(a - b));
    CHECK((ia * ib).contains(a * b));
    if (b != 0) CHECK((ia / ib).contains(a / b));
    CHECK(sqr(ia).contains(a * a));
    CHECK(pow(ia, 3).contains(a * a * a));
    CHECK(abs(ia).contains(abs(a)));
  }
}

TEST_CASE("interval bounds from rationals are outward") {
  const Interval third(mpq_class(1, 3), 53);
  CHECK(third.lower() < mpq_class(1, 3));
  CHECK(third.upper() > mpq_class(1, 3));
  CHECK(third.width() < 1e-15);
  const Interval exact(mpq_class(3, 4), 53);
  CHECK(exact.lower() == exact.upper());
}

TEST_CASE("division by an interval containing zero throws") {
  const Interval one(1L, 64);
  const Interval straddle(mpq_class(-1, 10), mpq_class(1, 10), 64);
  CHECK_THROWS_AS(one / straddle, PrecisionError);
}

TEST_CASE("elementary functions agree with long double references") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-7.0, 7.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double x = dist(rng);
    const Interval ix = Interval::from_double(x, 128);
    CHECK(near(cos(ix), std::cos(static_cast<long double>(x))));
    CHECK(near(sin(ix), std::sin(static_cast<long double>(x))));
    CHECK(near(atan(ix), std::atan(static_cast<long double>(x))));
    CHECK(near(exp(ix), std::exp(static_cast<long double>(x)), 1e-12L));
    const Interval pos = Interval::from_double(std::fabs(x) + 0.01, 128);
    CHECK(near(log(pos), std::log(static_cast<long double>(std::fabs(x) + 0.01))));
    CHECK(near(sqrt(pos), std::sqrt(static_cast<long double>(std::fabs(x) + 0.01))));
  }
}

TEST_CASE("cosine over wide intervals reaches its extrema") {
  const Interval around_zero(mpq_class(-1, 2), mpq_class(1, 2), 128);
  CHECK(cos(around_zero).contains(1));
  const Interval around_pi(mpq_class(3), mpq_class(7, 2), 128);
  CHECK(cos(around_pi).contains(-1));
  const Interval full(mpq_class(0), mpq_class(7), 128);
  CHECK(cos(full).contains(1));
  CHECK(cos(full).contains(-1));
}

TEST_CASE("pi is enclosed") {
  const Interval pi = Interval::pi(200);
  CHECK(near(pi, 3.14159265358979323846L));
  CHECK(pi.width() < 1e-55);
}

TEST_CASE("hull, max and subset") {
  const Interval a(mpq_class(1), mpq_class(2), 64);
  const Interval b(mpq_class(3), mpq_class(5), 64);
  const Interval h = hull(a, b);
  CHECK(a.subset_of(h));
  CHECK(b.subset_of(h));
  CHECK(max(a, b).lower() == 3);
  CHECK_FALSE(h.subset_of(a));
}

TEST_CASE("complex multiplication encloses the exact product") {
  const ComplexInterval z{Interval(mpq_class(1, 3), 128), Interval(mpq_class(-2, 7), 128)};
  const ComplexInterval w{Interval(mpq_class(5, 11), 128), Interval(mpq_class(3, 13), 128)};
  const ComplexInterval p = z * w;
  const mpq_class re = mpq_class(1, 3) * mpq_class(5, 11) - mpq_class(-2, 7) * mpq_class(3, 13);
  const mpq_class im = mpq_class(1, 3) * mpq_class(3, 13) + mpq_class(-2, 7) * mpq_class(5, 11);
  CHECK(p.re.contains(re));
  CHECK(p.im.contains(im));
  const ComplexInterval q = p / w;
  CHECK(q.re.contains(mpq_class(1, 3)));
  CHECK(q.im.contains(mpq_class(-2, 7)));
}

TEST_CASE("ball products enclose long double products") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double ar = dist(rng), ai = dist(rng), br = dist(rng), bi = dist(rng);
    const ComplexInterval za{Interval::from_double(ar, 128), Interval::from_double(ai, 128)};
    const ComplexInterval zb{Interval::from_double(br, 128), Interval::from_double(bi, 128)};
    const ComplexBall p = ComplexBall::from(za) * ComplexBall::from(zb);
    const std::complex<long double> ref =
        std::complex<long double>(ar, ai) * std::complex<long double>(br, bi);
    CHECK(std::abs(std::complex<long double>(p.re, p.im) - ref) <= p.rad + 1e-18L);
    const FastInterval re = p.real();
    CHECK(re.lo <= ref.real());
    CHECK(ref.real() <= re.hi);
  }
}

TEST_CASE("fast interval operations are outward") {
  const FastInterval a{0.1, 0.1};
  const FastInterval b{0.2, 0.2};
  const FastInterval s = a + b;
  CHECK(s.lo < 0.30000000000000004);
  CHECK(s.hi > 0.3);
  const FastInterval p = a * b;
  CHECK(p.lo <= 0.02);
  CHECK(p.hi >= 0.02);
}

TEST_CASE("decimal rendering rounds outward") {
  const Interval third(mpq_class(1, 3), 128);
  CHECK(third.to_string(5) == "[0.33333, 0.33334]");
  CHECK(format_decimal(mpq_class(2, 3), 4, MPFR_RNDD) == "0.6666");
}
