#pragma once

// Empirical and analytic balance results for the m-bonacci word: factor spreads
// over prefixes, discrepancy extrema, witness words, the letter-bound
// propagation and the global bound floor(kappa m) + 12.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "mbonacci/exact_g.hpp"
#include "mbonacci/interval.hpp"
#include "mbonacci/quadrature.hpp"
#include "mbonacci/spectral.hpp"
#include "mbonacci/words.hpp"

namespace mbonacci {

struct SpreadRow {
  std::size_t length = 0;
  int letter = 0;
  std::uint32_t min = 0;
  std::uint32_t max = 0;
  /// Smallest start of a window attaining max / min.
  std::size_t argmax = 0;
  std::size_t argmin = 0;

  std::uint32_t spread() const { return max - min; }
};

struct SpreadTable {
  int m = 0;
  std::size_t prefix_length = 0;
  /// Ordered by (length, letter).
  std::vector<SpreadRow> rows;

  /// Largest spread seen for the letter, 0 if absent.
  std::uint32_t max_spread(int letter) const;
};

/// Per-letter prefix counts of u[N] shared by several scans.
class PrefixCounts {
 public:
  PrefixCounts(MParam m, std::size_t N);

  MParam m() const noexcept { return m_; }
  std::size_t size() const noexcept { return n_; }
  const LetterWord& word() const noexcept { return word_; }
  /// Exact min/max of |u[i, i+L)|_a over 0 <= i <= N - L.
  SpreadRow scan(std::size_t L, int letter) const;

 private:
  MParam m_;
  std::size_t n_;
  LetterWord word_;
  // counts_[a][i] = |u[i]|_a mod 2^16
  std::vector<std::vector<std::uint16_t>> counts_;
};

/// Spread table for every (L, letter) pair. Throws ConfigError if max(lengths) > N.
SpreadTable brute_force_spreads(MParam m, const std::vector<int>& letters, const std::vector<std::size_t>& lengths,
                                std::size_t N);
SpreadTable brute_force_spreads(const PrefixCounts& counts, const std::vector<int>& letters,
                                const std::vector<std::size_t>& lengths);

struct DiscrepancyExtrema {
  int m = 0;
  int a = 0;
  std::uint64_t N = 0;
  /// D_a(n) = |u[n]|_a - n beta^{-(a+1)} at the extremal n (first occurrence).
  BetaLinear sup;
  BetaLinear inf;
  std::uint64_t sup_at = 0;
  std::uint64_t inf_at = 0;
  Interval sup_interval;
  Interval inf_interval;
  /// Enclosure of sup - inf.
  Interval spread;
};

/// D_a(n) = sum_k delta_k g(a, k) over the prefix decomposition of n; T must reach index top + m.
BetaLinear discrepancy_by_decomposition(MParam m, int a, std::uint64_t n, const MBonacciSequence& T);
/// D_a(n) = |u[n]|_a - n beta^{-(a+1)} from a direct letter count.
BetaLinear discrepancy_direct(int a, std::uint64_t count, std::uint64_t n);

/// Running extrema of D_a(n) for 1 <= n <= N.
DiscrepancyExtrema discrepancy_extrema(MParam m, int a, std::uint64_t N, BetaContext& ctx);

struct WitnessBlock {
  int exponent = 0;
  int repeat = 1;
};

/// lead . (quotient)^{-1} (blocks) . trail, each block standing for phi^exponent(0)^repeat.
struct WitnessRecipe {
  std::string name;
  int m = 0;
  std::optional<Letter> lead;
  std::vector<WitnessBlock> quotient;
  std::vector<WitnessBlock> blocks;
  std::optional<Letter> trail;
};

struct WitnessReport {
  std::string name;
  int m = 0;
  LetterWord word{MParam(2)};
  std::size_t length = 0;
  std::vector<std::uint64_t> counts;
  bool quotient_valid = false;
  std::size_t haystack_length = 0;
  std::optional<std::size_t> factor_index;
};

/// Throws RecipeError if the quotient is not a prefix of the block product.
WitnessReport compose_witness(const WitnessRecipe& recipe);

/// The (v, w) recipes printed for m = 4 and m = 5.
std::vector<WitnessRecipe> published_witness_recipes(MParam m);

struct WitnessPair {
  std::size_t length = 0;
  int letter = 0;
  LetterWord v{MParam(2)};
  LetterWord w{MParam(2)};
  std::size_t v_start = 0;
  std::size_t w_start = 0;
  long difference = 0;
};

/// First L in [L_lo, L_hi] (then smallest letter) whose spread reaches 3 inside u[N].
std::optional<WitnessPair> search_spread3_witness(MParam m, std::size_t L_lo, std::size_t L_hi, std::size_t N);
std::optional<WitnessPair> search_spread3_witness(const PrefixCounts& counts, std::size_t L_lo, std::size_t L_hi);

struct LetterPropagation {
  bool applicable = false;
  std::string reason;
  /// c_j bounds for j = 1 .. m-1 (index j - 1).
  std::vector<mpq_class> bounds;
  /// 2 c0 + 3.
  long global = 0;
};

/// c_j <= (2 - 2^{-j}) c0 + 4(1 - 2^{-j}) when m >= 4 and c0 <= 2^{m-1} - 3.
LetterPropagation propagate_letter_bounds(MParam m, long c0);

struct CheckResult {
  bool passed = false;
  std::string detail;
};

/// |f|_0 = |phi^j(f)|_j and |f| = |phi^j(f)|_{j-1} for random factors f, plus
/// |f|_0 <= |f|/2 + 1 for the factors with |f| <= 2^m.
CheckResult lift_letter_identity_check(MParam m, int samples, std::uint64_t seed = 1, std::size_t max_length = 50);

struct RiemannCheck {
  int m = 0;
  Interval sum_integrand;
  Interval rhs_integrand;
  Interval sum_cosine;
  Interval rhs_cosine;
  bool passed = false;
  std::string detail;
};

/// sum_j f(gamma_j) <= (m/2pi) A - 1/6 + ((m-1)/m)(pi/16)(1 + 1/36) and
/// sum_j cos gamma_j/(5 - 4 cos gamma_j) <= m/6 + 5/6.
RiemannCheck riemann_lemma_checks(MParam m, const SpectralSet& roots, const QuadratureResult& A);

struct DerivativeCheck {
  std::string name;
  double sampled_max = 0.0;
  /// sampled maximum plus a local Lipschitz margin.
  double bound = 0.0;
  double claim = 0.0;
  long samples = 0;
  bool passed = false;
};

/// max |f'| < 1/8 for the A integrand and max |d/dx cos x/(5 - 4 cos x)| < 9/8,
/// by sampling (0, 2pi) at the given number of points.
std::vector<DerivativeCheck> derivative_max_checks(long samples = 100000);

struct GlobalBound {
  int m = 0;
  Interval kappa;
  /// floor(kappa_hi m) + 12.
  long bound = 0;
  /// 9/2 + (A/pi) m.
  Interval audit;
};

/// Requires m >= 5.
GlobalBound global_balance_bound(MParam m, const QuadratureResult& A);

}  // namespace mbonacci
