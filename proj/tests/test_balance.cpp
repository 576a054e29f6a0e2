#include <doctest.h>

#include <cmath>

#include "mbonacci/error.hpp"
#include "mbonacci/balance.hpp"
#include "oracles.hpp"

using namespace mbonacci;

namespace {

const mpq_class kTol{1, 1000000000};

std::vector<std::size_t> range(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> out;
  for (std::size_t L = lo; L <= hi; ++L) out.push_back(L);
  return out;
}

}  // namespace

TEST_CASE("spread table agrees with window recounting") {
  for (int m = 2; m <= 5; ++m) {
    const std::size_t N = 3000;
    const auto u = oracle::word(m, N);
    std::vector<int> letters;
    for (int a = 0; a < m; ++a) letters.push_back(a);
    const SpreadTable t = brute_force_spreads(MParam(m), letters, range(1, 80), N);
    REQUIRE(t.rows.size() == 80 * letters.size());
    for (const auto& r : t.rows) {
      const auto [lo, hi] = oracle::window_extrema(u, r.length, r.letter);
      CHECK(r.min == static_cast<std::uint32_t>(lo));
      CHECK(r.max == static_cast<std::uint32_t>(hi));
      int at_max = 0, at_min = 0;
      for (std::size_t k = r.argmax; k < r.argmax + r.length; ++k) at_max += u[k] == r.letter;
      for (std::size_t k = r.argmin; k < r.argmin + r.length; ++k) at_min += u[k] == r.letter;
      CHECK(at_max == hi);
      CHECK(at_min == lo);
    }
  }
}

TEST_CASE("extremal windows are the first occurrences") {
  const auto u = oracle::word(3, 2000);
  const SpreadTable t = brute_force_spreads(MParam(3), {1}, {17}, 2000);
  const SpreadRow& r = t.rows.front();
  for (std::size_t i = 0; i < r.argmax; ++i) {
    int c = 0;
    for (std::size_t k = i; k < i + 17; ++k) c += u[k] == 1;
    CHECK(c < static_cast<int>(r.max));
  }
}

TEST_CASE("spreads are monotone in the prefix length") {
  const SpreadTable small = brute_force_spreads(MParam(4), {0, 1, 2, 3}, range(1, 200), 5000);
  const SpreadTable large = brute_force_spreads(MParam(4), {0, 1, 2, 3}, range(1, 200), 50000);
  for (std::size_t i = 0; i < small.rows.size(); ++i) CHECK(small.rows[i].spread() <= large.rows[i].spread());
}

TEST_CASE("sturmian and tribonacci spreads") {
  const SpreadTable fib = brute_force_spreads(MParam(2), {0, 1}, range(1, 300), 100000);
  CHECK(fib.max_spread(0) == 1);
  CHECK(fib.max_spread(1) == 1);
  const SpreadTable tri = brute_force_spreads(MParam(3), {0, 1, 2}, range(1, 300), 100000);
  for (int a = 0; a < 3; ++a) CHECK(tri.max_spread(a) <= 2);
}

TEST_CASE("windows longer than the prefix are rejected") {
  CHECK_THROWS_AS(brute_force_spreads(MParam(3), {0}, {101}, 100), ConfigError);
  const PrefixCounts counts(MParam(3), 100);
  CHECK_THROWS_AS(counts.scan(0, 0), ConfigError);
  CHECK_THROWS_AS(counts.scan(5, 3), InvalidArgument);
}

TEST_CASE("long windows use exact counts") {
  const std::size_t N = 140000;
  const auto u = oracle::word(2, N);
  const PrefixCounts counts(MParam(2), N);
  const SpreadRow r = counts.scan(70000, 0);
  long c = 0;
  for (std::size_t k = 0; k < 70000; ++k) c += u[k] == 0;
  CHECK(r.min <= c);
  CHECK(c <= r.max);
  CHECK(r.max - r.min == 1);
}

TEST_CASE("discrepancy by decomposition equals direct counting") {
  for (int m = 2; m <= 6; ++m) {
    const auto u = oracle::word(m, 3000);
    const MBonacciSequence T = mbonacci_numbers(MParam(m), 60);
    for (int a = 0; a < m; ++a) {
      std::uint64_t count = 0;
      for (std::uint64_t n = 1; n <= 3000; ++n) {
        count += u[n - 1] == a;
        CHECK(discrepancy_by_decomposition(MParam(m), a, n, T) == discrepancy_direct(a, count, n));
      }
    }
  }
}

TEST_CASE("discrepancy extrema against a long double scan") {
  for (int m = 2; m <= 5; ++m) {
    const auto u = oracle::word(m, 20000);
    const long double beta = oracle::dominant_root(m);
    for (int a = 0; a < m; ++a) {
      const long double mu = std::pow(beta, -(a + 1.0L));
      long double sup = -1e9L, inf = 1e9L;
      long count = 0;
      for (std::size_t n = 1; n <= u.size(); ++n) {
        count += u[n - 1] == a;
        const long double d = static_cast<long double>(count) - static_cast<long double>(n) * mu;
        sup = std::max(sup, d);
        inf = std::min(inf, d);
      }
      BetaContext ctx{MParam(m)};
      const DiscrepancyExtrema e = discrepancy_extrema(MParam(m), a, 20000, ctx);
      CHECK(e.sup_interval.mid_double() == doctest::Approx(static_cast<double>(sup)).epsilon(1e-12));
      CHECK(e.inf_interval.mid_double() == doctest::Approx(static_cast<double>(inf)).epsilon(1e-12));
    }
  }
}

TEST_CASE("single-letter prefix") {
  BetaContext ctx{MParam(4)};
  const DiscrepancyExtrema e = discrepancy_extrema(MParam(4), 0, 1, ctx);
  CHECK(e.sup == e.inf);
  CHECK(e.sup == BetaLinear{1, -1, 1});
}

TEST_CASE("discrepancy spread grows towards the series for m = 2") {
  BetaContext ctx{MParam(2)};
  double previous = 0;
  for (std::uint64_t N : {10ULL, 100ULL, 1000ULL, 100000ULL}) {
    const DiscrepancyExtrema e = discrepancy_extrema(MParam(2), 0, N, ctx);
    CHECK(e.spread.mid_double() >= previous);
    CHECK(e.spread.upper_double() < 1.0);
    previous = e.spread.mid_double();
  }
  CHECK(previous > 0.99);
}

TEST_CASE("m = 4 discrepancy stays below the table 2 total") {
  BetaContext ctx{MParam(4)};
  const DiscrepancyExtrema e = discrepancy_extrema(MParam(4), 0, 100000, ctx);
  CHECK(e.spread.upper_double() <= 1.499);
}

TEST_CASE("witness replay") {
  const auto T4 = oracle::mbonacci(4, 30);
  const auto recipes = published_witness_recipes(MParam(4));
  const WitnessReport v = compose_witness(recipes[0]);
  const WitnessReport w = compose_witness(recipes[1]);
  CHECK(v.length == 1 + T4[16] + T4[13] + T4[9] + T4[6]);
  CHECK(v.length == 3307);
  CHECK(w.length == 3303);
  CHECK(v.quotient_valid);
  CHECK(v.factor_index.has_value());
  CHECK(w.factor_index.has_value());
  CHECK(static_cast<long>(v.counts[1]) - static_cast<long>(w.counts[1]) == 3);
  CHECK_THROWS_AS(published_witness_recipes(MParam(6)), InvalidArgument);
}

TEST_CASE("trivial and invalid recipes") {
  const WitnessReport zero = compose_witness({"zero", 3, std::nullopt, {}, {{0, 1}}, std::nullopt});
  CHECK(to_string(zero.word) == "0");
  CHECK(zero.factor_index == std::optional<std::size_t>(0));
  CHECK_THROWS_AS(compose_witness({"bad", 3, std::nullopt, {{4, 1}}, {{2, 1}}, std::nullopt}), RecipeError);
  // 1 phi^3(0) = 10102010 for m = 4 is not a factor.
  const WitnessReport odd = compose_witness({"odd", 3, Letter{2}, {}, {{0, 1}}, Letter{2}});
  CHECK_FALSE(odd.factor_index.has_value());
}

TEST_CASE("spread-3 witness search") {
  const auto w = search_spread3_witness(MParam(4), 1, 4000, 1000000);
  REQUIRE(w.has_value());
  CHECK(w->length == 3305);
  CHECK(w->letter == 1);
  CHECK(w->v.size() == w->w.size());
  CHECK(w->difference == 3);
  const auto v = parikh(w->v);
  const auto u = parikh(w->w);
  CHECK(v[1] - u[1] == 3);
  CHECK_FALSE(search_spread3_witness(MParam(4), 1, 100, 100000).has_value());
  CHECK_THROWS_AS(search_spread3_witness(MParam(3), 1, 10, 100), InvalidArgument);
}

TEST_CASE("letter bound propagation") {
  const LetterPropagation p = propagate_letter_bounds(MParam(5), 2);
  REQUIRE(p.applicable);
  CHECK(p.bounds[0] == 5);
  CHECK(p.bounds[1] == mpq_class(13, 2));
  CHECK(p.global == 7);
  const LetterPropagation q = propagate_letter_bounds(MParam(4), 2);
  for (const auto& c : q.bounds) CHECK(c < 8);
  for (int m = 4; m <= 10; ++m) {
    const long edge = (1L << (m - 1)) - 2;
    CHECK_FALSE(propagate_letter_bounds(MParam(m), edge).applicable);
    CHECK(propagate_letter_bounds(MParam(m), edge - 1).applicable);
  }
  CHECK_FALSE(propagate_letter_bounds(MParam(3), 1).applicable);
}

TEST_CASE("lift identities and zero density") {
  for (int m = 2; m <= 6; ++m) CHECK(lift_letter_identity_check(MParam(m), 200, 17).passed);
  // f = 0, j = 1: phi(0) = 01.
  CHECK(parikh(apply_substitution(parse_word("0", MParam(4))))[1] == 1);
}

TEST_CASE("riemann sums and derivative maxima") {
  const QuadratureResult A = quadrature_A(mpq_class(1, 1000));
  for (int m : {4, 8, 13}) {
    const RiemannCheck r = riemann_lemma_checks(MParam(m), conjugate_enclosures(MParam(m), kTol), A);
    CHECK(r.passed);
  }
  const auto d = derivative_max_checks(20000);
  REQUIRE(d.size() == 2);
  CHECK(d[0].passed);
  CHECK(d[0].sampled_max > 0.05);
  CHECK(d[0].sampled_max < 0.125);
  CHECK(d[1].passed);
  CHECK(d[1].sampled_max == doctest::Approx(1.1247).epsilon(1e-3));
}

TEST_CASE("global bound") {
  const QuadratureResult A = quadrature_A(mpq_class(1, 1000));
  const long double kappa = 2 * oracle::simpson_A() / std::numbers::pi_v<long double>;
  for (int m : {5, 12, 29, 100}) {
    const GlobalBound g = global_balance_bound(MParam(m), A);
    CHECK(g.bound == static_cast<long>(std::floor(kappa * m)) + 12);
  }
  CHECK(global_balance_bound(MParam(29), A).bound == 28);
  CHECK(global_balance_bound(MParam(100), A).bound == 69);
  CHECK(global_balance_bound(MParam(5), A).bound == 14);
  CHECK_THROWS_AS(global_balance_bound(MParam(4), A), InvalidArgument);
}
