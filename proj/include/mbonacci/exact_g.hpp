#pragma once

// Discrepancy increments g(a, k) = |phi^k(0)|_a - beta^{-(a+1)} |phi^k(0)|
//                               = T_{k+m-a-1} - T_{k+m} beta^{-(a+1)},
// their exact partial sums in Z + Z beta^{-s}, tail majorants and the
// certified integer bounds on c_a.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "mbonacci/interval.hpp"
#include "mbonacci/spectral.hpp"
#include "mbonacci/words.hpp"

namespace mbonacci {

/// g(a, k) as an integer combination of g(a, 0), ..., g(a, m-1).
struct GSymbolic {
  int m = 0;
  int a = 0;
  int k = 0;
  std::vector<mpz_class> ic;
};

/// ic(k) = e_k for k < m, ic(k) = ic(k-1) + ... + ic(k-m) beyond; k = 0 .. N.
std::vector<GSymbolic> g_sequence(MParam m, int a, int N);

/// Exact value p + q beta^{-s}.
struct BetaLinear {
  mpz_class p;
  mpz_class q;
  int s = 1;

  friend bool operator==(const BetaLinear& x, const BetaLinear& y) {
    return x.p == y.p && x.q == y.q && x.s == y.s;
  }
  friend BetaLinear operator+(const BetaLinear& x, const BetaLinear& y);
  friend BetaLinear operator-(const BetaLinear& x, const BetaLinear& y);
  friend BetaLinear operator*(const mpz_class& c, const BetaLinear& x);
  BetaLinear operator-() const { return {-p, -q, s}; }
};

/// "p + q/beta^s" with explicit signs, e.g. "1664 - 3205/beta".
std::string to_string(const BetaLinear& v);

/// g(a, k) directly from the m-bonacci numbers.
BetaLinear g_term(const MBonacciSequence& T, int a, int k);
/// Reduction of a symbolic combination; T must reach index k + m.
BetaLinear reduce(const GSymbolic& g, const MBonacciSequence& T);
BetaLinear reduce(const GSymbolic& g);

/// Enclosure of p + q beta^{-s} for beta in the given enclosure.
Interval eval_interval(const BetaLinear& v, const BetaEnclosure& beta, Precision prec = kDefaultPrecision);
Interval eval_interval(const BetaLinear& v, const Interval& beta);

/// Caches a dominant-root enclosure and narrows it on demand.
class BetaContext {
 public:
  explicit BetaContext(MParam m, long initial_bits = 128);

  MParam m() const noexcept { return m_; }
  long bits() const noexcept { return bits_; }
  const BetaEnclosure& enclosure() const noexcept { return enclosure_; }
  /// Ensures width <= 2^{-bits}.
  void ensure_bits(long bits);
  /// Enclosure of beta at working precision bits + 32.
  Interval beta() const;

 private:
  MParam m_;
  long bits_;
  BetaEnclosure enclosure_;
};

/// Certified sign of v; narrows the enclosure (width / 16 per retry) as needed.
/// Throws PrecisionError after 256 retries.
int certified_sign(const BetaLinear& v, BetaContext& ctx);

/// Certified sign of g(a, k).
int sign_of_g(MParam m, int a, int k, BetaContext& ctx);

struct HeadSum {
  int m = 0;
  int a = 0;
  int n = 0;
  /// sum_{k<n} |g(a, k)|.
  BetaLinear value;
  Interval interval;
  /// signs[k] = sign of g(a, k).
  std::vector<int> signs;
};

/// sum_{k<n} |g(a, k)| exactly, with its enclosure.
HeadSum head_abs_sum(MParam m, int a, int n, BetaContext& ctx);

/// Integer coefficients of sum_{k<n} |g(a, k)| over g(a, 0..m-1).
std::vector<mpz_class> head_abs_ic(MParam m, int a, const std::vector<int>& signs);

/// E_{a,n} = (max_j |beta_j|)^n sum_j |(beta_j^{-(a+1)} - beta^{-(a+1)})/p'(beta_j)| |beta_j|^m/(1 - |beta_j|).
struct TailModel {
  int m = 0;
  int a = 0;
  /// Upper bound on max_j |beta_j|.
  mpq_class rho;
  /// Upper bound on the sector sum.
  mpq_class constant;

  /// Upper bound on sum_{k>=n} |g(a, k)|.
  mpq_class bound(int n) const;
};

TailModel tail_model(MParam m, int a, const SpectralSet& roots);

struct TailBound {
  int m = 0;
  int a = 0;
  int n = 0;
  mpq_class value;
};

TailBound tail_bound(MParam m, int a, int n, const SpectralSet& roots);

/// Multiplicative safety factor applied to the tail in certificates.
inline const mpq_class kTailInflation{1000001, 1000000};

struct BoundCertificate {
  int m = 0;
  int a = 0;
  int n = 0;
  BetaLinear head;
  Interval head_interval;
  /// Inflated tail bound used in the floor comparison.
  mpq_class tail;
  /// Common floor of 2 head and 2 (head + tail); when the cap was hit, the
  /// floor of 2 (head + tail), which is still an upper bound on c_a.
  long bound = 0;
  bool floors_equal = false;
  /// m = 2 only: the whole series sum_k |g(a, k)| in the form p + q/beta.
  std::optional<BetaLinear> exact_total;
};

struct CertifyOptions {
  /// Cap on n is cap_factor * m.
  int cap_factor = 1024;
};

/// Doubles n from 2m until floor(2 head_lo) = floor(2 (head_hi + tail)).
/// For m = 2 the single conjugate root makes the tail an exact geometric series
/// |g(a, n)| beta/(beta - 1); the total is then exact and c_a < 2 sum_k |g(a, k)|
/// holds strictly (neither extremum of D_a is attained), so an integer total T
/// yields the bound 2T - 1.
BoundCertificate certify_c_a_bound(MParam m, int a, BetaContext& ctx, const SpectralSet& roots,
                                   const CertifyOptions& options = {});

struct ClosedHeadSum {
  /// 1 + (2/beta - 1)(X - 1) - Y/beta.
  BetaLinear value;
  Interval interval;
  /// 1 + (2/beta - 1) X - Y/beta, which exceeds value by 2/beta - 1.
  BetaLinear printed_value;
  Interval printed_interval;
  bool matches_direct = false;
  /// Both value and printed_value are < 5/4.
  bool below_five_quarters = false;
};

/// sum_{k<2m} |g(0, k)| in closed form, X = 2^m (2^{m-1} - 1) - (m-1) 2^{m-2},
/// Y = 2^{m-1} - 1. Throws ConsistencyError if it differs from the term-by-term sum.
ClosedHeadSum closed_head_sum(MParam m, BetaContext& ctx);

struct AnalyticTailCheck {
  int m = 0;
  /// Last index summed.
  int K = 0;
  double truncated_sum_hi = 0.0;
  double tail_hi = 0.0;
  /// (0.91/2pi) m + 1, rounded down.
  double bound_lo = 0.0;
  bool passed = false;
};

/// sum_{k=2m}^{K} |g(0, k)| + E_{0,K+1} < (0.91/(2 pi)) m + 1, K chosen so E_{0,K+1} < 1e-6.
AnalyticTailCheck analytic_tail_check(MParam m, const SpectralSet& roots);

/// Per-sector coefficients c_j = (beta_j^{-(a+1)} - beta^{-(a+1)})/p'(beta_j); g(a, k) = sum_j c_j beta_j^{k+m}.
std::vector<ComplexInterval> spectral_coefficients(MParam m, int a, const SpectralSet& roots, Precision prec);

/// Enclosures of g(a, k) for k in [k_begin, k_end) through the conjugate-root expansion.
std::vector<FastInterval> spectral_g_values(MParam m, int a, const SpectralSet& roots, int k_begin, int k_end);

}  // namespace mbonacci
