#include "mbonacci/balance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <mpfr.h>

#include "mbonacci/error.hpp"
#include "mbonacci/parallel.hpp"

namespace mbonacci {

namespace {

constexpr std::size_t kNarrowLimit = 65535;

template <typename Count>
SpreadRow scan_counts(const std::vector<Count>& counts, std::size_t n, std::size_t L, int letter) {
  const std::size_t windows = n - L + 1;
  const Count* lo = counts.data();
  const Count* hi = counts.data() + L;
  Count best_max = 0;
  Count best_min = std::numeric_limits<Count>::max();
  for (std::size_t i = 0; i < windows; ++i) {
    const Count d = static_cast<Count>(hi[i] - lo[i]);
    best_max = std::max(best_max, d);
    best_min = std::min(best_min, d);
  }
  SpreadRow row;
  row.length = L;
  row.letter = letter;
  row.max = best_max;
  row.min = best_min;
  bool have_max = false;
  bool have_min = false;
  for (std::size_t i = 0; i < windows && !(have_max && have_min); ++i) {
    const Count d = static_cast<Count>(hi[i] - lo[i]);
    if (!have_max && d == best_max) {
      row.argmax = i;
      have_max = true;
    }
    if (!have_min && d == best_min) {
      row.argmin = i;
      have_min = true;
    }
  }
  return row;
}

void check_letter(MParam m, int letter) {
  if (letter < 0 || letter >= m.value())
    throw InvalidArgument("letter " + std::to_string(letter) + " out of range for m = " + std::to_string(m.value()));
}

LetterWord phi0_power(MParam m, int k) {
  const mpz_class len = phi0_length(m, k);
  if (!len.fits_ulong_p() || len > mpz_class(1UL << 32)) throw RecipeError("block phi^" + std::to_string(k) + "(0) too long");
  return fixed_point_prefix(m, len.get_ui());
}

LetterWord block_product(MParam m, const std::vector<WitnessBlock>& blocks) {
  LetterWord out(m);
  for (const auto& b : blocks) {
    if (b.exponent < 0 || b.repeat < 0) throw RecipeError("negative exponent or repeat in recipe");
    const LetterWord piece = phi0_power(m, b.exponent);
    for (int r = 0; r < b.repeat; ++r) out.append(piece);
  }
  return out;
}

}  // namespace

std::uint32_t SpreadTable::max_spread(int letter) const {
  std::uint32_t best = 0;
  for (const auto& r : rows)
    if (r.letter == letter) best = std::max(best, r.spread());
  return best;
}

PrefixCounts::PrefixCounts(MParam m, std::size_t N) : m_(m), n_(N), word_(fixed_point_prefix(m, N)) {
  if (m.value() > kMaxWordAlphabet) throw InvalidArgument("alphabet too large to materialize");
  counts_.assign(static_cast<std::size_t>(m.value()), std::vector<std::uint16_t>(N + 1, 0));
  std::vector<std::uint16_t> running(static_cast<std::size_t>(m.value()), 0);
  for (std::size_t i = 0; i < N; ++i) {
    ++running[word_[i]];
    for (std::size_t a = 0; a < running.size(); ++a) counts_[a][i + 1] = running[a];
  }
}

SpreadRow PrefixCounts::scan(std::size_t L, int letter) const {
  check_letter(m_, letter);
  if (L == 0 || L > n_) throw ConfigError("window length " + std::to_string(L) + " outside [1, " + std::to_string(n_) + "]");
  const auto& narrow = counts_[static_cast<std::size_t>(letter)];
  if (L <= kNarrowLimit) return scan_counts(narrow, n_, L, letter);
  // Differences may exceed 16 bits: rebuild exact 32-bit counts for this letter.
  std::vector<std::uint32_t> wide(n_ + 1, 0);
  for (std::size_t i = 0; i < n_; ++i) wide[i + 1] = wide[i] + (word_[i] == letter ? 1u : 0u);
  return scan_counts(wide, n_, L, letter);
}

SpreadTable brute_force_spreads(const PrefixCounts& counts, const std::vector<int>& letters,
                                const std::vector<std::size_t>& lengths) {
  for (int a : letters) check_letter(counts.m(), a);
  for (std::size_t L : lengths)
    if (L > counts.size())
      throw ConfigError("window length " + std::to_string(L) + " exceeds prefix length " + std::to_string(counts.size()));
  SpreadTable table;
  table.m = counts.m().value();
  table.prefix_length = counts.size();
  table.rows.resize(lengths.size() * letters.size());
  parallel_for(lengths.size(), [&](std::size_t i) {
    for (std::size_t k = 0; k < letters.size(); ++k)
      table.rows[i * letters.size() + k] = counts.scan(lengths[i], letters[k]);
  });
  return table;
}

SpreadTable brute_force_spreads(MParam m, const std::vector<int>& letters, const std::vector<std::size_t>& lengths,
                                std::size_t N) {
  for (std::size_t L : lengths)
    if (L > N) throw ConfigError("window length " + std::to_string(L) + " exceeds prefix length " + std::to_string(N));
  const PrefixCounts counts(m, N);
  return brute_force_spreads(counts, letters, lengths);
}

BetaLinear discrepancy_by_decomposition(MParam m, int a, std::uint64_t n, const MBonacciSequence& T) {
  check_letter(m, a);
  const PrefixDecomposition d = decompose_prefix(m, n);
  BetaLinear sum{0, 0, a + 1};
  for (int k = 0; k <= d.top(); ++k)
    if (d.bits[static_cast<std::size_t>(k)]) sum = sum + g_term(T, a, k);
  return sum;
}

BetaLinear discrepancy_direct(int a, std::uint64_t count, std::uint64_t n) {
  auto as_mpz = [](std::uint64_t v) {
    mpz_class z;
    mpz_import(z.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
    return z;
  };
  return BetaLinear{as_mpz(count), -as_mpz(n), a + 1};
}

DiscrepancyExtrema discrepancy_extrema(MParam m, int a, std::uint64_t N, BetaContext& ctx) {
  check_letter(m, a);
  if (N < 1) throw InvalidArgument("discrepancy extrema need N >= 1");
  if (!(ctx.m() == m)) throw InvalidArgument("beta context built for another m");
  const int s = a + 1;
  const Interval mu_exact = pow(Interval(1L, ctx.beta().precision()) / ctx.beta(), static_cast<unsigned long>(s));
  const FastInterval mu = FastInterval::from(mu_exact);

  // D(n') - D(n) = dc - dn mu, decided in doubles and exactly when ambiguous.
  auto compare = [&](std::int64_t dc, std::int64_t dn) {
    const FastInterval diff = FastInterval{static_cast<double>(dc), static_cast<double>(dc)} -
                              FastInterval{static_cast<double>(dn), static_cast<double>(dn)} * mu;
    if (diff.lo > 0) return 1;
    if (diff.hi < 0) return -1;
    return certified_sign(BetaLinear{mpz_class(static_cast<long>(dc)), mpz_class(static_cast<long>(-dn)), s}, ctx);
  };

  PrefixGenerator gen(m);
  std::uint64_t count = 0;
  std::uint64_t sup_n = 0, sup_c = 0, inf_n = 0, inf_c = 0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    if (gen.next() == a) ++count;
    if (n == 1) {
      sup_n = inf_n = 1;
      sup_c = inf_c = count;
      continue;
    }
    const auto dc_sup = static_cast<std::int64_t>(count) - static_cast<std::int64_t>(sup_c);
    const auto dn_sup = static_cast<std::int64_t>(n) - static_cast<std::int64_t>(sup_n);
    if (compare(dc_sup, dn_sup) > 0) {
      sup_n = n;
      sup_c = count;
    }
    const auto dc_inf = static_cast<std::int64_t>(count) - static_cast<std::int64_t>(inf_c);
    const auto dn_inf = static_cast<std::int64_t>(n) - static_cast<std::int64_t>(inf_n);
    if (compare(dc_inf, dn_inf) < 0) {
      inf_n = n;
      inf_c = count;
    }
  }
  DiscrepancyExtrema out;
  out.m = m.value();
  out.a = a;
  out.N = N;
  out.sup = discrepancy_direct(a, sup_c, sup_n);
  out.inf = discrepancy_direct(a, inf_c, inf_n);
  out.sup_at = sup_n;
  out.inf_at = inf_n;
  const Interval beta = ctx.beta();
  out.sup_interval = eval_interval(out.sup, beta);
  out.inf_interval = eval_interval(out.inf, beta);
  out.spread = eval_interval(out.sup - out.inf, beta);
  return out;
}

WitnessReport compose_witness(const WitnessRecipe& recipe) {
  const MParam m(recipe.m);
  if (recipe.lead) check_letter(m, *recipe.lead);
  if (recipe.trail) check_letter(m, *recipe.trail);
  const LetterWord body = block_product(m, recipe.blocks);
  const LetterWord quotient = block_product(m, recipe.quotient);
  if (quotient.size() > body.size() || !std::equal(quotient.begin(), quotient.end(), body.begin()))
    throw RecipeError("quotient of " + (recipe.name.empty() ? std::string("recipe") : recipe.name) +
                      " is not a prefix of its block product");

  WitnessReport report;
  report.name = recipe.name;
  report.m = recipe.m;
  report.quotient_valid = true;
  LetterWord word(m);
  if (recipe.lead) word.push_back(*recipe.lead);
  word.append(body.substr(quotient.size(), body.size() - quotient.size()));
  if (recipe.trail) word.push_back(*recipe.trail);
  report.length = word.size();
  report.counts.assign(static_cast<std::size_t>(recipe.m), 0);
  for (Letter c : word) ++report.counts[c];
  report.haystack_length = std::max<std::size_t>(10 * word.size(), 1000000);
  report.factor_index = factor_search(m, word, report.haystack_length);
  report.word = std::move(word);
  return report;
}

std::vector<WitnessRecipe> published_witness_recipes(MParam m) {
  auto blocks = [](std::initializer_list<int> exps) {
    std::vector<WitnessBlock> out;
    for (int e : exps) out.push_back({e, 1});
    return out;
  };
  if (m.value() == 4) {
    WitnessRecipe v{"v", 4, Letter{1}, {}, blocks({12, 9, 5, 2}), std::nullopt};
    WitnessRecipe w{"w", 4, std::nullopt, blocks({9, 8, 5, 2}), {}, Letter{0}};
    w.blocks = {{11, 2}, {10, 1}, {7, 1}, {6, 1}, {4, 1}, {3, 1}, {2, 1}};
    return {v, w};
  }
  if (m.value() == 5) {
    WitnessRecipe v{"v", 5, Letter{1}, {}, blocks({14, 11, 6, 2}), std::nullopt};
    WitnessRecipe w{"w", 5, std::nullopt, blocks({11, 10, 6, 2}), {}, Letter{0}};
    w.blocks = {{13, 2}, {12, 1}, {9, 1}, {8, 1}, {7, 1}, {5, 1}, {3, 1}, {2, 1}};
    return {v, w};
  }
  throw InvalidArgument("printed witness recipes exist for m = 4 and m = 5 only");
}

std::optional<WitnessPair> search_spread3_witness(const PrefixCounts& counts, std::size_t L_lo, std::size_t L_hi) {
  const int m = counts.m().value();
  if (m != 4 && m != 5) throw InvalidArgument("spread-3 witness search is defined for m = 4 and m = 5");
  if (L_lo == 0) L_lo = 1;
  L_hi = std::min(L_hi, counts.size());
  const std::size_t batch = 4 * worker_count(1 << 10);
  for (std::size_t start = L_lo; start <= L_hi; start += batch) {
    const std::size_t stop = std::min(L_hi + 1, start + batch);
    std::vector<std::optional<SpreadRow>> hits(stop - start);
    parallel_for(stop - start, [&](std::size_t i) {
      for (int a = 0; a < m; ++a) {
        const SpreadRow row = counts.scan(start + i, a);
        if (row.spread() >= 3) {
          hits[i] = row;
          return;
        }
      }
    });
    for (const auto& hit : hits) {
      if (!hit) continue;
      WitnessPair pair;
      pair.length = hit->length;
      pair.letter = hit->letter;
      pair.v_start = hit->argmax;
      pair.w_start = hit->argmin;
      pair.v = counts.word().substr(hit->argmax, hit->length);
      pair.w = counts.word().substr(hit->argmin, hit->length);
      pair.difference = static_cast<long>(hit->max) - static_cast<long>(hit->min);
      return pair;
    }
  }
  return std::nullopt;
}

std::optional<WitnessPair> search_spread3_witness(MParam m, std::size_t L_lo, std::size_t L_hi, std::size_t N) {
  if (m.value() != 4 && m.value() != 5) throw InvalidArgument("spread-3 witness search is defined for m = 4 and m = 5");
  const PrefixCounts counts(m, N);
  return search_spread3_witness(counts, L_lo, L_hi);
}

LetterPropagation propagate_letter_bounds(MParam m, long c0) {
  LetterPropagation out;
  const int mv = m.value();
  if (mv < 4) {
    out.reason = "requires m >= 4";
    return out;
  }
  mpz_class limit = 1;
  limit <<= static_cast<unsigned>(mv - 1);
  limit -= 3;
  if (mpz_class(c0) > limit) {
    out.reason = "c0 = " + std::to_string(c0) + " exceeds 2^(m-1) - 3 = " + limit.get_str();
    return out;
  }
  out.applicable = true;
  for (int j = 1; j < mv; ++j) {
    mpz_class two_j = 1;
    two_j <<= static_cast<unsigned>(j);
    const mpq_class inv(1, two_j);
    mpq_class c = (2 - inv) * c0 + 4 * (1 - inv);
    c.canonicalize();
    out.bounds.push_back(c);
  }
  out.global = 2 * c0 + 3;
  return out;
}

CheckResult lift_letter_identity_check(MParam m, int samples, std::uint64_t seed, std::size_t max_length) {
  const int mv = m.value();
  if (mv > kMaxWordAlphabet) throw InvalidArgument("alphabet too large to materialize");
  if (max_length == 0) throw InvalidArgument("max_length must be positive");
  const std::size_t prefix = std::max<std::size_t>(100000, 4 * max_length);
  const LetterWord u = fixed_point_prefix(m, prefix);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> len_dist(1, max_length);
  const double density_cap = std::ldexp(1.0, std::min(mv, 60));
  long density_checked = 0;

  auto count = [](const LetterWord& w, int a) {
    return static_cast<std::size_t>(std::count(w.begin(), w.end(), static_cast<Letter>(a)));
  };
  for (int s = 0; s < samples; ++s) {
    const std::size_t len = len_dist(rng);
    std::uniform_int_distribution<std::size_t> start_dist(0, prefix - len);
    const LetterWord f = u.substr(start_dist(rng), len);
    const std::size_t zeros = count(f, 0);
    LetterWord image = f;
    for (int j = 1; j < mv; ++j) {
      image = apply_substitution(image);
      if (count(image, j) != zeros || count(image, j - 1) != f.size()) {
        std::ostringstream os;
        os << "identity fails for f = " << to_string(f) << ", j = " << j;
        return {false, os.str()};
      }
    }
    if (static_cast<double>(len) <= density_cap) {
      ++density_checked;
      if (2 * zeros > len + 2) {
        std::ostringstream os;
        os << "zero density fails for f = " << to_string(f) << ": |f|_0 = " << zeros << ", |f| = " << len;
        return {false, os.str()};
      }
    }
  }
  std::ostringstream os;
  os << samples << " factors, j = 1.." << (mv - 1) << ", zero-density on " << density_checked;
  return {true, os.str()};
}

RiemannCheck riemann_lemma_checks(MParam m, const SpectralSet& roots, const QuadratureResult& A) {
  const int mv = m.value();
  if (roots.m != mv || static_cast<int>(roots.roots.size()) != mv - 1)
    throw InvalidArgument("spectral set does not match m");
  const Precision prec = 128;
  RiemannCheck out;
  out.m = mv;
  out.sum_integrand = Interval(0L, prec);
  out.sum_cosine = Interval(0L, prec);
  for (const auto& r : roots.roots) {
    const Interval gamma = r.argument(prec);
    out.sum_integrand += a_integrand(gamma);
    // c/(5 - 4c) increases with c, so the cosine range endpoints bound it.
    const Interval c = cos(gamma);
    auto h = [&](const mpq_class& x) {
      const Interval xi(x, prec);
      return xi / (Interval(5L, prec) - Interval(4L, prec) * xi);
    };
    out.sum_cosine += hull(h(c.lower()), h(c.upper()));
  }
  const Interval pi = Interval::pi(prec);
  const Interval mi(static_cast<long>(mv), prec);
  const Interval a_value(A.value.lower(), A.value.upper(), prec);
  out.rhs_integrand = mi / (Interval(2L, prec) * pi) * a_value - Interval(mpq_class(1, 6), prec) +
                      Interval(mpq_class(mv - 1, mv), prec) * pi / Interval(16L, prec) *
                          Interval(mpq_class(37, 36), prec);
  out.rhs_cosine = Interval(mpq_class(mv + 5, 6), prec);
  const bool first = mpfr_cmp(out.sum_integrand.hi(), out.rhs_integrand.lo()) <= 0;
  const bool second = mpfr_cmp(out.sum_cosine.hi(), out.rhs_cosine.lo()) <= 0;
  out.passed = first && second;
  std::ostringstream os;
  if (!first)
    os << "integrand sum " << out.sum_integrand.to_string(10) << " exceeds " << out.rhs_integrand.to_string(10) << "; ";
  if (!second)
    os << "cosine sum " << out.sum_cosine.to_string(10) << " exceeds " << out.rhs_cosine.to_string(10) << "; ";
  if (out.passed)
    os << "sum f = " << out.sum_integrand.to_string(10) << " <= " << out.rhs_integrand.to_string(10)
       << ", sum cos/(5-4cos) = " << out.sum_cosine.to_string(10) << " <= " << out.rhs_cosine.to_string(10);
  out.detail = os.str();
  return out;
}

namespace {

// Derivatives evaluated at 128 bits; ln u vanishes to second order at x = 0.
double integrand_derivative(double x) {
  mpfr_t xs, c, s, u, lu, num, den, t;
  mpfr_inits2(128, xs, c, s, u, lu, num, den, t, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_d(xs, x, MPFR_RNDN);
  mpfr_sin_cos(s, c, xs, MPFR_RNDN);
  mpfr_mul_ui(u, c, 4, MPFR_RNDN);
  mpfr_ui_sub(u, 5, u, MPFR_RNDN);
  mpfr_log(lu, u, MPFR_RNDN);
  mpfr_add_ui(num, lu, 1, MPFR_RNDN);
  mpfr_sub(num, num, u, MPFR_RNDN);
  mpfr_mul(num, num, s, MPFR_RNDN);
  mpfr_mul(den, u, lu, MPFR_RNDN);
  mpfr_sqr(den, den, MPFR_RNDN);
  mpfr_div(t, num, den, MPFR_RNDN);
  const double out = mpfr_get_d(t, MPFR_RNDN);
  mpfr_clears(xs, c, s, u, lu, num, den, t, static_cast<mpfr_ptr>(nullptr));
  return out;
}

double cosine_derivative(double x) {
  const double d = 5.0 - 4.0 * std::cos(x);
  return -5.0 * std::sin(x) / (d * d);
}

DerivativeCheck sample_derivative(const std::string& name, double (*fp)(double), double claim, long samples) {
  const double two_pi = 2.0 * std::acos(-1.0);
  const double h = two_pi / static_cast<double>(samples);
  std::vector<double> v(static_cast<std::size_t>(samples) + 1);
  // Grid x_i = i h; both derivatives vanish at 0 and 2pi (removable limits).
  v[0] = 0.0;
  v[static_cast<std::size_t>(samples)] = 0.0;
  for (long i = 1; i < samples; ++i) v[static_cast<std::size_t>(i)] = std::fabs(fp(static_cast<double>(i) * h));
  std::vector<double> slope(static_cast<std::size_t>(samples));
  for (std::size_t i = 0; i + 1 < v.size(); ++i) slope[i] = std::fabs(v[i + 1] - v[i]) / h;
  DerivativeCheck out;
  out.name = name;
  out.claim = claim;
  out.samples = samples;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double local = 2.0 * std::max({slope[i], i > 0 ? slope[i - 1] : 0.0, i + 1 < slope.size() ? slope[i + 1] : 0.0});
    out.sampled_max = std::max(out.sampled_max, v[i]);
    out.bound = std::max(out.bound, std::max(v[i], v[i + 1]) + local * h / 2.0);
  }
  out.passed = out.bound < claim;
  return out;
}

}  // namespace

std::vector<DerivativeCheck> derivative_max_checks(long samples) {
  if (samples < 16) throw InvalidArgument("at least 16 samples required");
  return {sample_derivative("integrand", &integrand_derivative, 0.125, samples),
          sample_derivative("cosine", &cosine_derivative, 1.125, samples)};
}

GlobalBound global_balance_bound(MParam m, const QuadratureResult& A) {
  if (m.value() < 5) throw InvalidArgument("global bound requires m >= 5");
  GlobalBound out;
  out.m = m.value();
  out.kappa = kappa(A);
  const Precision prec = out.kappa.precision();
  const Interval scaled = out.kappa * Interval(static_cast<long>(m.value()), prec);
  mpfr_t f;
  mpfr_init2(f, prec);
  mpfr_floor(f, scaled.hi());
  out.bound = mpfr_get_si(f, MPFR_RNDD) + 12;
  mpfr_clear(f);
  const Interval a_value(A.value.lower(), A.value.upper(), prec);
  out.audit = Interval(mpq_class(9, 2), prec) +
              a_value / Interval::pi(prec) * Interval(static_cast<long>(m.value()), prec);
  return out;
}

}  // namespace mbonacci
