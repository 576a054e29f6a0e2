#include "mbonacci/exact_g.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "mbonacci/error.hpp"

namespace mbonacci {

namespace {

void require_letter(MParam m, int a) {
  if (a < 0 || a >= m.value()) {
    throw InvalidLetter("letter " + std::to_string(a) + " is not in [0, " + std::to_string(m.value()) + ")");
  }
}

long bit_length(const mpz_class& x) { return x == 0 ? 0 : static_cast<long>(mpz_sizeinbase(x.get_mpz_t(), 2)); }

mpz_class floor_of(const mpq_class& x) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

// Streams T_0, T_1, ... keeping the last m + 1 values.
class TStream {
 public:
  explicit TStream(int m) : m_(m) {}

  // Advances until T_index is the newest value.
  void advance_to(long index) {
    while (next_ <= index) {
      mpz_class value;
      if (next_ < m_ - 1) {
        value = 0;
      } else if (next_ == m_ - 1 || next_ == m_) {
        value = 1;
      } else {
        // T_n = 2 T_{n-1} - T_{n-1-m}
        value = 2 * window_.back() - window_.front();
      }
      window_.push_back(std::move(value));
      if (static_cast<int>(window_.size()) > m_ + 1) {
        window_.pop_front();
      }
      ++next_;
    }
  }
  // T_{newest - back}, back <= m.
  const mpz_class& at_back(int back) const { return window_[window_.size() - 1 - static_cast<std::size_t>(back)]; }

 private:
  int m_;
  long next_ = 0;
  std::deque<mpz_class> window_;
};

}  // namespace

std::vector<GSymbolic> g_sequence(MParam m, int a, int N) {
  require_letter(m, a);
  if (N < 0) {
    throw InvalidArgument("N must be >= 0");
  }
  const int mm = m.value();
  std::vector<GSymbolic> out(static_cast<std::size_t>(N + 1));
  for (int k = 0; k <= N; ++k) {
    GSymbolic& g = out[static_cast<std::size_t>(k)];
    g.m = mm;
    g.a = a;
    g.k = k;
    g.ic.assign(static_cast<std::size_t>(mm), 0);
    if (k < mm) {
      g.ic[static_cast<std::size_t>(k)] = 1;
      continue;
    }
    for (int i = 1; i <= mm; ++i) {
      const auto& prev = out[static_cast<std::size_t>(k - i)].ic;
      for (int c = 0; c < mm; ++c) {
        g.ic[static_cast<std::size_t>(c)] += prev[static_cast<std::size_t>(c)];
      }
    }
  }
  return out;
}

BetaLinear operator+(const BetaLinear& x, const BetaLinear& y) {
  if (x.s != y.s) {
    throw InvalidArgument("cannot add values over different powers of beta");
  }
  return {x.p + y.p, x.q + y.q, x.s};
}

BetaLinear operator-(const BetaLinear& x, const BetaLinear& y) { return x + (-y); }

BetaLinear operator*(const mpz_class& c, const BetaLinear& x) { return {c * x.p, c * x.q, x.s}; }

std::string to_string(const BetaLinear& v) {
  const std::string den = v.s == 1 ? "beta" : "beta^" + std::to_string(v.s);
  std::string out = v.p.get_str();
  if (v.q >= 0) {
    out += " + " + v.q.get_str();
  } else {
    out += " - " + mpz_class(-v.q).get_str();
  }
  return out + "/" + den;
}

BetaLinear g_term(const MBonacciSequence& T, int a, int k) {
  const auto m = static_cast<std::size_t>(T.m);
  const auto kk = static_cast<std::size_t>(k);
  return {T[kk + m - static_cast<std::size_t>(a) - 1], -T[kk + m], a + 1};
}

BetaLinear reduce(const GSymbolic& g, const MBonacciSequence& T) {
  BetaLinear out{0, 0, g.a + 1};
  for (int i = 0; i < g.m; ++i) {
    const mpz_class& c = g.ic[static_cast<std::size_t>(i)];
    if (c != 0) {
      out = out + c * g_term(T, g.a, i);
    }
  }
  return out;
}

BetaLinear reduce(const GSymbolic& g) { return reduce(g, mbonacci_numbers(MParam(g.m), static_cast<std::size_t>(2 * g.m))); }

Interval eval_interval(const BetaLinear& v, const Interval& beta) {
  const Precision prec = beta.precision();
  return Interval(v.p, prec) + Interval(v.q, prec) / pow(beta, static_cast<unsigned long>(v.s));
}

Interval eval_interval(const BetaLinear& v, const BetaEnclosure& beta, Precision prec) {
  return eval_interval(v, beta.to_interval(prec));
}

BetaContext::BetaContext(MParam m, long initial_bits)
    : m_(m), bits_(initial_bits), enclosure_(beta_enclosure_bits(m, initial_bits)) {}

void BetaContext::ensure_bits(long bits) {
  if (bits > bits_) {
    enclosure_ = beta_enclosure_bits(m_, bits);
    bits_ = bits;
  }
}

Interval BetaContext::beta() const { return enclosure_.to_interval(static_cast<Precision>(bits_ + 32)); }

int certified_sign(const BetaLinear& v, BetaContext& ctx) {
  if (v.q == 0) {
    return sgn(v.p);
  }
  // sign(p + q beta^{-s}) = sign(p beta^s + q).
  ctx.ensure_bits(std::max(bit_length(v.p), bit_length(v.q)) + 64);
  for (int retry = 0; retry <= 256; ++retry) {
    const Interval beta = ctx.beta();
    const Precision prec = beta.precision();
    const Interval x = Interval(v.p, prec) * pow(beta, static_cast<unsigned long>(v.s)) + Interval(v.q, prec);
    if (x.positive()) {
      return 1;
    }
    if (x.negative()) {
      return -1;
    }
    ctx.ensure_bits(ctx.bits() + 4);
  }
  throw PrecisionError("sign of " + to_string(v) + " not resolved within the refinement cap");
}

int sign_of_g(MParam m, int a, int k, BetaContext& ctx) {
  require_letter(m, a);
  if (k < 0) {
    throw InvalidArgument("k must be >= 0");
  }
  const auto T = mbonacci_numbers(m, static_cast<std::size_t>(k + m.value()));
  return certified_sign(g_term(T, a, k), ctx);
}

HeadSum head_abs_sum(MParam m, int a, int n, BetaContext& ctx) {
  require_letter(m, a);
  if (n < 1) {
    throw InvalidArgument("n must be >= 1");
  }
  const auto T = mbonacci_numbers(m, static_cast<std::size_t>(n + m.value()));
  HeadSum h;
  h.m = m.value();
  h.a = a;
  h.n = n;
  h.value = {0, 0, a + 1};
  // One enclosure narrow enough for every term: |g(a,k)| >= beta^{-k} T_{k+m}^{-1} roughly.
  ctx.ensure_bits(2 * bit_length(T[static_cast<std::size_t>(n + m.value())]) + 64);
  for (int k = 0; k < n; ++k) {
    const BetaLinear g = g_term(T, a, k);
    const int s = certified_sign(g, ctx);
    h.signs.push_back(s);
    h.value = s > 0 ? h.value + g : h.value - g;
  }
  h.interval = eval_interval(h.value, ctx.beta());
  return h;
}

std::vector<mpz_class> head_abs_ic(MParam m, int a, const std::vector<int>& signs) {
  const int n = static_cast<int>(signs.size());
  const auto seq = g_sequence(m, a, std::max(n - 1, 0));
  std::vector<mpz_class> total(static_cast<std::size_t>(m.value()), 0);
  for (int k = 0; k < n; ++k) {
    const auto& ic = seq[static_cast<std::size_t>(k)].ic;
    for (std::size_t c = 0; c < total.size(); ++c) {
      total[c] += signs[static_cast<std::size_t>(k)] * ic[c];
    }
  }
  return total;
}

std::vector<ComplexInterval> spectral_coefficients(MParam m, int a, const SpectralSet& roots, Precision prec) {
  require_letter(m, a);
  const auto s = static_cast<unsigned long>(a + 1);
  const Interval beta = roots.beta.to_interval(prec);
  const Interval mu = Interval(1L, prec) / pow(beta, s);
  const Interval zero(0L, prec);
  const ComplexInterval one{Interval(1L, prec), zero};
  std::vector<ComplexInterval> out;
  out.reserve(roots.roots.size());
  for (const auto& r : roots.roots) {
    const ComplexInterval z = r.value(prec);
    const ComplexInterval diff = one / pow(z, s) - ComplexInterval{mu, zero};
    out.push_back(diff / p_derivative_at_root(m, z));
  }
  return out;
}

std::vector<FastInterval> spectral_g_values(MParam m, int a, const SpectralSet& roots, int k_begin, int k_end) {
  const auto coeffs = spectral_coefficients(m, a, roots, kDefaultPrecision);
  const int count = std::max(0, k_end - k_begin);
  std::vector<ComplexBall> sums(static_cast<std::size_t>(count));
  for (std::size_t j = 0; j < roots.roots.size(); ++j) {
    const ComplexBall z = ComplexBall::from(roots.roots[j].value(kDefaultPrecision));
    // c_j z^{k_begin + m}
    const ComplexInterval start =
        coeffs[j] * roots.roots[j].power(static_cast<unsigned long>(k_begin + m.value()), kDefaultPrecision);
    ComplexBall term = ComplexBall::from(start);
    for (int i = 0; i < count; ++i) {
      sums[static_cast<std::size_t>(i)] = sums[static_cast<std::size_t>(i)] + term;
      term = term * z;
    }
  }
  std::vector<FastInterval> out;
  out.reserve(sums.size());
  for (const auto& s : sums) {
    out.push_back(s.real());
  }
  return out;
}

mpq_class TailModel::bound(int n) const {
  const Interval r(rho, kDefaultPrecision);
  const Interval e = pow(r, static_cast<unsigned long>(n)) * Interval(constant, kDefaultPrecision);
  return e.upper();
}

TailModel tail_model(MParam m, int a, const SpectralSet& roots) {
  require_letter(m, a);
  const Precision prec = kDefaultPrecision;
  const auto coeffs = spectral_coefficients(m, a, roots, prec);
  Interval sum(0L, prec);
  for (std::size_t j = 0; j < roots.roots.size(); ++j) {
    const Interval b(roots.roots[j].modulus_hi, prec);
    const Interval c(coeffs[j].modulus().upper(), prec);
    sum += c * pow(b, static_cast<unsigned long>(m.value())) / (Interval(1L, prec) - b);
  }
  TailModel model;
  model.m = m.value();
  model.a = a;
  model.rho = roots.max_modulus_hi();
  model.constant = sum.upper();
  return model;
}

TailBound tail_bound(MParam m, int a, int n, const SpectralSet& roots) {
  if (n < 1) {
    throw InvalidArgument("n must be >= 1");
  }
  const TailModel model = tail_model(m, a, roots);
  return {m.value(), a, n, model.bound(n)};
}

namespace {

// Incremental sum_{k<n} |g(a,k)| with signs from the spectral expansion and an
// exact fallback when the fast enclosure touches zero.
class HeadAccumulator {
 public:
  HeadAccumulator(MParam m, int a, const SpectralSet& roots, BetaContext& ctx)
      : m_(m), a_(a), roots_(roots), ctx_(ctx), stream_(m.value()), value_{0, 0, a + 1} {}

  void extend_to(int n) {
    if (n <= k_) {
      return;
    }
    const auto fast = spectral_g_values(m_, a_, roots_, k_, n);
    for (; k_ < n; ++k_) {
      stream_.advance_to(k_ + m_.value());
      const BetaLinear g{stream_.at_back(a_ + 1), -stream_.at_back(0), a_ + 1};
      const FastInterval& f = fast[static_cast<std::size_t>(k_ - (n - static_cast<int>(fast.size())))];
      int s = 0;
      if (f.lo > 0.0) {
        s = 1;
      } else if (f.hi < 0.0) {
        s = -1;
      } else {
        ctx_.ensure_bits(2 * bit_length(g.q) + 64);
        s = certified_sign(g, ctx_);
      }
      value_ = s > 0 ? value_ + g : value_ - g;
    }
  }

  const BetaLinear& value() const { return value_; }

 private:
  MParam m_;
  int a_;
  const SpectralSet& roots_;
  BetaContext& ctx_;
  TStream stream_;
  BetaLinear value_;
  int k_ = 0;
};

}  // namespace

namespace {

// For m = 2, beta^2 = beta + 1: rewrite p + q beta^{-s} as x + y/beta.
BetaLinear golden_normal_form(const BetaLinear& v) {
  if (v.s == 1) {
    return v;
  }
  // beta^{-2} = 1 - 1/beta
  return {v.p + v.q, -v.q, 1};
}

BoundCertificate certify_fibonacci(int a, BetaContext& ctx) {
  const MParam m(2);
  constexpr int n = 4;
  const HeadSum head = head_abs_sum(m, a, n, ctx);
  const auto T = mbonacci_numbers(m, n + 2);
  const BetaLinear g = g_term(T, a, n);
  const BetaLinear abs_g = certified_sign(g, ctx) > 0 ? g : -g;
  // |g| beta/(beta - 1) = |g| (beta + 1); (x + y/beta)(beta + 1) = (2x + y) + (x + y)/beta.
  const BetaLinear x = golden_normal_form(abs_g);
  const BetaLinear tail{2 * x.p + x.q, x.p + x.q, 1};
  const BetaLinear total = golden_normal_form(head.value) + tail;
  BoundCertificate cert;
  cert.m = 2;
  cert.a = a;
  cert.n = n;
  cert.head = head.value;
  cert.head_interval = head.interval;
  cert.tail = eval_interval(tail, ctx.beta()).upper();
  cert.exact_total = total;
  cert.floors_equal = true;
  if (total.q == 0) {
    cert.bound = mpz_class(2 * total.p - 1).get_si();
    return cert;
  }
  const Interval value = eval_interval(total, ctx.beta());
  const mpz_class lo = floor_of(2 * value.lower());
  const mpz_class hi = floor_of(2 * value.upper());
  cert.floors_equal = lo == hi;
  cert.bound = hi.get_si();
  return cert;
}

}  // namespace

BoundCertificate certify_c_a_bound(MParam m, int a, BetaContext& ctx, const SpectralSet& roots,
                                   const CertifyOptions& options) {
  require_letter(m, a);
  if (ctx.m() != m || roots.m != m.value()) {
    throw InvalidArgument("root data belongs to a different m");
  }
  if (m.value() == 2) {
    return certify_fibonacci(a, ctx);
  }
  const TailModel model = tail_model(m, a, roots);
  const int cap = options.cap_factor * m.value();
  HeadAccumulator head(m, a, roots, ctx);
  BoundCertificate cert;
  cert.m = m.value();
  cert.a = a;
  for (int n = 2 * m.value();; n *= 2) {
    head.extend_to(n);
    const BetaLinear& value = head.value();
    ctx.ensure_bits(std::max(bit_length(value.p), bit_length(value.q)) + 96);
    const Interval hi = eval_interval(value, ctx.beta());
    const mpq_class tail = model.bound(n) * kTailInflation;
    const mpz_class floor_lo = floor_of(2 * hi.lower());
    const mpz_class floor_hi = floor_of(2 * (hi.upper() + tail));
    cert.n = n;
    cert.head = value;
    cert.head_interval = hi;
    cert.tail = tail;
    cert.bound = floor_hi.get_si();
    cert.floors_equal = floor_lo == floor_hi;
    if (cert.floors_equal || 2 * n > cap) {
      return cert;
    }
  }
}

ClosedHeadSum closed_head_sum(MParam m, BetaContext& ctx) {
  const int mm = m.value();
  mpz_class p2m;
  mpz_class p2m1;
  mpz_class p2m2;
  mpz_ui_pow_ui(p2m.get_mpz_t(), 2, static_cast<unsigned long>(mm));
  mpz_ui_pow_ui(p2m1.get_mpz_t(), 2, static_cast<unsigned long>(mm - 1));
  mpz_ui_pow_ui(p2m2.get_mpz_t(), 2, static_cast<unsigned long>(mm - 2));
  const mpz_class X = p2m * (p2m1 - 1) - (mm - 1) * p2m2;
  const mpz_class Y = p2m1 - 1;
  ClosedHeadSum out;
  out.value = {2 - X, 2 * (X - 1) - Y, 1};
  out.printed_value = {1 - X, 2 * X - Y, 1};
  const HeadSum direct = head_abs_sum(m, 0, 2 * mm, ctx);
  out.matches_direct = direct.value == out.value;
  if (!out.matches_direct) {
    throw ConsistencyError("closed head sum " + to_string(out.value) + " differs from the direct sum " +
                           to_string(direct.value));
  }
  ctx.ensure_bits(std::max(bit_length(out.printed_value.p), bit_length(out.printed_value.q)) + 96);
  out.interval = eval_interval(out.value, ctx.beta());
  out.printed_interval = eval_interval(out.printed_value, ctx.beta());
  out.below_five_quarters =
      out.interval.upper() < mpq_class(5, 4) && out.printed_interval.upper() < mpq_class(5, 4);
  return out;
}

AnalyticTailCheck analytic_tail_check(MParam m, const SpectralSet& roots) {
  const int mm = m.value();
  if (mm < 4) {
    throw InvalidArgument("analytic tail check needs m >= 4");
  }
  const TailModel model = tail_model(m, 0, roots);
  const mpq_class limit(1, 1000000);
  // Smallest K with E_{0,K+1} < 1e-6, from a logarithmic estimate and exact confirmation.
  const double rho = model.rho.get_d();
  const double c = model.constant.get_d();
  int K = std::max(2 * mm, static_cast<int>(std::ceil(std::log(1e-6 / c) / std::log(rho))) - 1);
  while (model.bound(K + 1) >= limit) {
    K += std::max(1, K / 64);
  }
  AnalyticTailCheck out;
  out.m = mm;
  out.K = K;
  double sum = 0.0;
  constexpr int kBlock = 4096;
  for (int begin = 2 * mm; begin <= K; begin += kBlock) {
    const int end = std::min(K + 1, begin + kBlock);
    for (const FastInterval& g : spectral_g_values(m, 0, roots, begin, end)) {
      sum = FastInterval::up(sum + g.magnitude());
    }
  }
  out.truncated_sum_hi = sum;
  out.tail_hi = model.bound(K + 1).get_d();
  const Precision prec = kDefaultPrecision;
  const Interval bound = Interval(91L, prec) / Interval(100L, prec) / (Interval(2L, prec) * Interval::pi(prec)) *
                             Interval(static_cast<long>(mm), prec) +
                         Interval(1L, prec);
  out.bound_lo = bound.lower_double();
  const Interval total =
      Interval::from_double(out.truncated_sum_hi, prec) + Interval(model.bound(K + 1), prec);
  out.passed = mpfr_cmp(total.hi(), bound.lo()) < 0;
  return out;
}

}  // namespace mbonacci
