#include <doctest.h>

#include <cmath>

#include "mbonacci/error.hpp"
#include "mbonacci/exact_g.hpp"
#include "oracles.hpp"

using namespace mbonacci;

namespace {

const mpq_class kTol{1, 1000000000};

// g(a, k) from letter counts of the materialized block and a long double beta.
long double g_oracle(int m, int a, int k) {
  const auto block = oracle::phi_power_of_zero(m, k);
  const long double count = static_cast<long double>(std::count(block.begin(), block.end(), a));
  return count - static_cast<long double>(block.size()) * std::pow(oracle::dominant_root(m), -(a + 1.0L));
}

}  // namespace

TEST_CASE("g terms agree with counting in the block") {
  for (int m = 2; m <= 6; ++m) {
    BetaContext ctx{MParam(m)};
    const MBonacciSequence T = mbonacci_numbers(MParam(m), 40);
    for (int a = 0; a < m; ++a)
      for (int k = 0; k <= 16; ++k) {
        CAPTURE(m);
        CAPTURE(a);
        CAPTURE(k);
        const long double ref = g_oracle(m, a, k);
        const Interval g = eval_interval(g_term(T, a, k), ctx.beta());
        CHECK(std::fabs(g.mid_double() - static_cast<double>(ref)) < 1e-9);
        if (std::fabs(ref) > 1e-9L) CHECK(sign_of_g(MParam(m), a, k, ctx) == (ref > 0 ? 1 : -1));
      }
  }
}

TEST_CASE("symbolic reduction matches direct terms") {
  for (int m = 2; m <= 7; ++m)
    for (int a = 0; a < m; ++a) {
      const auto seq = g_sequence(MParam(m), a, 4 * m);
      const MBonacciSequence T = mbonacci_numbers(MParam(m), 6 * m);
      for (const auto& g : seq) CHECK(reduce(g, T) == g_term(T, a, g.k));
    }
}

TEST_CASE("beta-linear rendering") {
  CHECK(to_string(BetaLinear{1664, -3205, 1}) == "1664 - 3205/beta");
  CHECK(to_string(BetaLinear{-487, 3499, 3}) == "-487 + 3499/beta^3");
  CHECK_THROWS_AS(BetaLinear({1, 1, 1}) + BetaLinear({1, 1, 2}), InvalidArgument);
}

TEST_CASE("certified sign needs refinement close to zero") {
  BetaContext ctx(MParam(3), 64);
  // T_60 - T_61/beta is about 1e-8 while T_61 is about 1e15.
  const MBonacciSequence T = mbonacci_numbers(MParam(3), 80);
  const BetaLinear v{T[60], -T[61], 1};
  const int s = certified_sign(v, ctx);
  CHECK((s == 1 || s == -1));
  CHECK(ctx.bits() > 64);
}

TEST_CASE("head sums equal long double sums of |g|") {
  for (int m = 3; m <= 5; ++m)
    for (int a = 0; a < m; ++a) {
      BetaContext ctx{MParam(m)};
      long double ref = 0;
      for (int k = 0; k < 3 * m + 1; ++k) ref += std::fabs(g_oracle(m, a, k));
      const HeadSum h = head_abs_sum(MParam(m), a, 3 * m + 1, ctx);
      CHECK(h.interval.mid_double() == doctest::Approx(static_cast<double>(ref)).epsilon(1e-9));
    }
}

TEST_CASE("tail bound majorizes the neglected terms") {
  for (int m = 3; m <= 6; ++m) {
    const SpectralSet roots = conjugate_enclosures(MParam(m), kTol);
    BetaContext ctx(MParam(m), 600);
    const MBonacciSequence T = mbonacci_numbers(MParam(m), 400);
    for (int a = 0; a < m; ++a) {
      const int n = 3 * m + 1;
      Interval sum(0L, 256);
      for (int k = n; k < 300; ++k) sum += abs(eval_interval(g_term(T, a, k), ctx.beta()));
      CHECK(sum.upper() <= tail_bound(MParam(m), a, n, roots).value);
    }
  }
}

TEST_CASE("spectral expansion encloses the exact terms") {
  const SpectralSet roots = conjugate_enclosures(MParam(5), kTol);
  BetaContext ctx(MParam(5), 400);
  const MBonacciSequence T = mbonacci_numbers(MParam(5), 200);
  for (int a = 0; a < 5; ++a) {
    const auto values = spectral_g_values(MParam(5), a, roots, 0, 120);
    for (int k = 0; k < 120; ++k) {
      const Interval exact = eval_interval(g_term(T, a, k), ctx.beta());
      const FastInterval& f = values[static_cast<std::size_t>(k)];
      CHECK(f.lo <= exact.upper_double());
      CHECK(exact.lower_double() <= f.hi);
    }
  }
}

TEST_CASE("table 2 heads for m = 4") {
  BetaContext ctx{MParam(4)};
  CHECK(head_abs_sum(MParam(4), 0, 13, ctx).value == BetaLinear{1664, -3205, 1});
  CHECK(head_abs_sum(MParam(4), 1, 13, ctx).value == BetaLinear{286, -1057, 2});
  CHECK(head_abs_sum(MParam(4), 2, 13, ctx).value == BetaLinear{-487, 3499, 3});
  CHECK(head_abs_sum(MParam(4), 3, 13, ctx).value == BetaLinear{-86, 1209, 4});
}

TEST_CASE("total with a 1.1 tail factor for m = 4, a = 0 lies in [1.49, 1.51]") {
  BetaContext ctx{MParam(4)};
  const SpectralSet roots = conjugate_enclosures(MParam(4), kTol);
  const double head = head_abs_sum(MParam(4), 0, 13, ctx).interval.mid_double();
  const double tail = tail_bound(MParam(4), 0, 13, roots).value.get_d();
  const double total = head + 1.1 * tail;
  CHECK(total >= 1.49);
  CHECK(total <= 1.51);
}

TEST_CASE("certificates") {
  const SpectralSet roots2 = conjugate_enclosures(MParam(2), kTol);
  for (int a = 0; a < 2; ++a) {
    BetaContext ctx{MParam(2)};
    const BoundCertificate c = certify_c_a_bound(MParam(2), a, ctx, roots2);
    CHECK(c.bound == 1);
    REQUIRE(c.exact_total.has_value());
    CHECK(eval_interval(*c.exact_total, ctx.beta()).contains(1));
  }
  const SpectralSet roots4 = conjugate_enclosures(MParam(4), kTol);
  BetaContext ctx{MParam(4)};
  const BoundCertificate c = certify_c_a_bound(MParam(4), 0, ctx, roots4);
  CHECK(c.bound == 2);
  CHECK(c.floors_equal);
  CHECK(c.n == 16);
}

TEST_CASE("capped certification still returns an upper bound") {
  const SpectralSet roots = conjugate_enclosures(MParam(4), kTol);
  BetaContext ctx{MParam(4)};
  CertifyOptions opts;
  opts.cap_factor = 2;
  const BoundCertificate c = certify_c_a_bound(MParam(4), 1, ctx, roots, opts);
  CHECK(c.n <= 8);
  CHECK(c.bound >= 3);
}

TEST_CASE("closed head sum") {
  BetaContext ctx{MParam(4)};
  const ClosedHeadSum h = closed_head_sum(MParam(4), ctx);
  CHECK(h.value == BetaLinear{-98, 191, 1});
  CHECK(h.matches_direct);
  CHECK(h.below_five_quarters);
  for (int m = 5; m <= 20; ++m) {
    BetaContext c{MParam(m)};
    CHECK(closed_head_sum(MParam(m), c).below_five_quarters);
  }
}

TEST_CASE("analytic tail checks") {
  for (int m : {4, 7, 12}) {
    const AnalyticTailCheck c = analytic_tail_check(MParam(m), conjugate_enclosures(MParam(m), kTol));
    CHECK(c.passed);
    CHECK(c.truncated_sum_hi + c.tail_hi < c.bound_lo);
  }
}

TEST_CASE("integer coefficient rows grow by the m-term recurrence") {
  const auto seq = g_sequence(MParam(4), 0, 12);
  CHECK(seq[9].ic == std::vector<mpz_class>{15, 23, 27, 29});
  for (std::size_t k = 4; k < seq.size(); ++k)
    for (std::size_t i = 0; i < 4; ++i)
      CHECK(seq[k].ic[i] == seq[k - 1].ic[i] + seq[k - 2].ic[i] + seq[k - 3].ic[i] + seq[k - 4].ic[i]);
}
