#include <doctest.h>

#include <algorithm>
#include <complex>

#include "mbonacci/error.hpp"
#include "mbonacci/spectral.hpp"
#include "oracles.hpp"

using namespace mbonacci;

namespace {

const mpq_class kTol{1, 1000000000};

}  // namespace

TEST_CASE("sign of p at rational points") {
  CHECK(p_sign_at(MParam(2), 1) < 0);
  CHECK(p_sign_at(MParam(2), 2) > 0);
  CHECK(p_sign_at(MParam(3), mpq_class(18, 10)) < 0);
  CHECK(p_sign_at(MParam(3), mpq_class(19, 10)) > 0);
}

TEST_CASE("dominant root enclosure") {
  const BetaEnclosure golden = beta_enclosure(MParam(2), mpq_class(1, 1000000));
  CHECK(golden.lo > mpq_class(16180, 10000));
  CHECK(golden.hi < mpq_class(16181, 10000));
  CHECK(golden.width() <= mpq_class(1, 1000000));
  for (int m = 2; m <= 20; ++m) {
    const BetaEnclosure b = beta_enclosure_bits(MParam(m), 80);
    CAPTURE(m);
    CHECK(p_sign_at(MParam(m), b.lo) < 0);
    CHECK(p_sign_at(MParam(m), b.hi) > 0);
    const long double ref = oracle::dominant_root(m);
    CHECK(b.lo.get_d() <= static_cast<double>(ref) + 1e-15);
    CHECK(b.hi.get_d() >= static_cast<double>(ref) - 1e-15);
  }
}

TEST_CASE("narrow beta enclosures beyond the bisection range") {
  const BetaEnclosure b = beta_enclosure_bits(MParam(7), 600);
  CHECK(p_sign_at(MParam(7), b.lo) < 0);
  CHECK(p_sign_at(MParam(7), b.hi) > 0);
  mpq_class bound(1);
  bound /= mpq_class(mpz_class(1) << 600);
  CHECK(b.width() <= bound);
}

TEST_CASE("x0 sandwich holds exactly") {
  for (int m = 2; m <= 40; ++m) CHECK(lemma_x0_check(MParam(m)).passed);
}

TEST_CASE("conjugate roots agree with Durand-Kerner") {
  for (int m = 2; m <= 14; ++m) {
    CAPTURE(m);
    const SpectralSet set = conjugate_enclosures(MParam(m), kTol);
    REQUIRE(set.roots.size() == static_cast<std::size_t>(m - 1));
    auto reference = oracle::roots(m);
    for (const auto& r : set.roots) {
      const auto [re, im] = r.approx();
      const std::complex<long double> z(re, im);
      long double best = 1e9L;
      for (const auto& ref : reference) best = std::min(best, std::abs(ref - z));
      CHECK(best <= r.error_radius() + 1e-12L);
      CHECK(r.modulus_hi < 1);
    }
  }
}

TEST_CASE("tribonacci conjugates") {
  const SpectralSet set = conjugate_enclosures(MParam(3), kTol);
  const auto [re, im] = set.roots[0].approx();
  CHECK(re == doctest::Approx(-0.4196433776).epsilon(1e-9));
  CHECK(std::fabs(im) == doctest::Approx(0.6062907292).epsilon(1e-9));
  CHECK(set.roots[0].modulus(128).mid_double() == doctest::Approx(0.7373527058).epsilon(1e-9));
}

TEST_CASE("even m has a real negative conjugate") {
  const SpectralSet set = conjugate_enclosures(MParam(6), kTol);
  const auto it = std::find_if(set.roots.begin(), set.roots.end(), [](const RootEnclosure& r) { return r.real_negative; });
  REQUIRE(it != set.roots.end());
  CHECK(it->j == 3);
  const auto [re, im] = it->approx();
  CHECK(im == 0.0);
  CHECK(re < 0.0);
}

TEST_CASE("root enclosure properties") {
  const Precision prec = 192;
  const Interval pi = Interval::pi(prec);
  for (int m = 2; m <= 24; ++m) {
    CAPTURE(m);
    const SpectralSet set = conjugate_enclosures(MParam(m), kTol);
    Interval product = set.beta.to_interval(prec);
    for (const auto& r : set.roots) {
      const auto [lo, hi] = argument_window(MParam(m), r.j);
      const Interval arg = r.argument(prec);
      CHECK(mpfr_cmp(arg.lo(), (Interval(lo, prec) * pi).hi()) > 0);
      CHECK(mpfr_cmp(arg.hi(), (Interval(hi, prec) * pi).lo()) < 0);
      CHECK(r.modulus_hi <= modulus_upper_bound(MParam(m), r.j, r));
      CHECK(r.modulus_hi - r.modulus_lo < kTol);
      product *= r.modulus(prec);
    }
    // |constant term| = 1.
    CHECK(product.contains(1));
  }
}

TEST_CASE("conjugate pairs mirror each other") {
  const SpectralSet set = conjugate_enclosures(MParam(9), kTol);
  for (int j = 1; j < 9; ++j) {
    const auto& a = set.roots[static_cast<std::size_t>(j - 1)];
    const auto& b = set.roots[static_cast<std::size_t>(9 - j - 1)];
    CHECK(a.modulus_lo == b.modulus_lo);
    CHECK(a.modulus_hi == b.modulus_hi);
  }
}

TEST_CASE("derivative of p at the dominant root") {
  const Interval beta = beta_enclosure_bits(MParam(2), 100).to_interval(128);
  // p'(x) = 2x - 1 = sqrt 5 at the golden ratio.
  CHECK(p_derivative_at_beta(MParam(2), beta).lower_double() <= std::sqrt(5.0) + 1e-12);
  CHECK(p_derivative_at_beta(MParam(2), beta).upper_double() >= std::sqrt(5.0) - 1e-12);
}

TEST_CASE("large alphabets solve quickly") {
  const SpectralSet set = conjugate_enclosures(MParam(64), kTol);
  CHECK(set.roots.size() == 63);
  CHECK(set.max_modulus_hi() < 1);
}
