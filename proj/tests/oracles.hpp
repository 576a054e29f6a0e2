#pragma once

// Reference computations that share no code with the library: plain vectors,
// long double arithmetic and textbook algorithms.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

namespace oracle {

using ld = long double;

// First n letters of the fixed point by naive substitution of whole words.
inline std::vector<int> word(int m, std::size_t n) {
  std::vector<int> w{0};
  while (w.size() < n) {
    std::vector<int> next;
    next.reserve(2 * w.size());
    for (int c : w) {
      next.push_back(0);
      if (c + 1 < m) next.push_back(c + 1);
    }
    w.swap(next);
  }
  w.resize(n);
  return w;
}

// phi^k(0) by naive substitution.
inline std::vector<int> phi_power_of_zero(int m, int k) {
  std::vector<int> w{0};
  for (int i = 0; i < k; ++i) {
    std::vector<int> next;
    for (int c : w) {
      next.push_back(0);
      if (c + 1 < m) next.push_back(c + 1);
    }
    w.swap(next);
  }
  return w;
}

inline std::vector<std::uint64_t> mbonacci(int m, int upto) {
  std::vector<std::uint64_t> t(static_cast<std::size_t>(upto) + 1, 0);
  if (m - 1 <= upto) t[static_cast<std::size_t>(m - 1)] = 1;
  for (int n = m; n <= upto; ++n)
    for (int i = 1; i <= m; ++i) t[static_cast<std::size_t>(n)] += t[static_cast<std::size_t>(n - i)];
  return t;
}

// All roots of x^m - x^{m-1} - ... - 1 by Durand-Kerner iteration.
inline std::vector<std::complex<ld>> roots(int m) {
  using C = std::complex<ld>;
  auto p = [m](C z) {
    C h = 1;
    for (int i = 0; i < m; ++i) h = h * z - C(1);
    return h;
  };
  std::vector<C> z(static_cast<std::size_t>(m));
  const C seed(0.4L, 0.9L);
  C s = 1;
  for (auto& zi : z) {
    zi = s;
    s *= seed;
  }
  for (int it = 0; it < 2000; ++it) {
    ld move = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      C den = 1;
      for (std::size_t j = 0; j < z.size(); ++j)
        if (j != i) den *= z[i] - z[j];
      const C step = p(z[i]) / den;
      z[i] -= step;
      move = std::max(move, std::abs(step));
    }
    if (move < 1e-17L) break;
  }
  return z;
}

inline ld dominant_root(int m) {
  ld lo = 1, hi = 2;
  for (int i = 0; i < 200; ++i) {
    const ld mid = (lo + hi) / 2;
    ld h = 1;
    for (int k = 0; k < m; ++k) h = h * mid - 1;
    (h < 0 ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

// Composite Simpson rule for A over [delta, 2pi - delta], plus the endpoint
// limit 1/4 times the excised length.
inline ld simpson_A(long n = 200000) {
  const ld pi = std::numbers::pi_v<ld>;
  const ld delta = 1e-6L;
  auto f = [](ld x) {
    const ld c = std::cos(x);
    const ld u = 5 - 4 * c;
    return (1 - c) / (u * std::log(u));
  };
  const ld a = delta, b = 2 * pi - delta;
  const ld h = (b - a) / static_cast<ld>(n);
  ld s = f(a) + f(b);
  for (long i = 1; i < n; ++i) s += f(a + h * static_cast<ld>(i)) * (i % 2 ? 4 : 2);
  return s * h / 3 + 2 * delta * 0.25L;
}

// Max and min count of letter a over all windows of length L, recounting each window.
inline std::pair<int, int> window_extrema(const std::vector<int>& w, std::size_t L, int a) {
  int best_max = -1, best_min = 1 << 30;
  for (std::size_t i = 0; i + L <= w.size(); ++i) {
    int c = 0;
    for (std::size_t k = i; k < i + L; ++k) c += w[k] == a;
    best_max = std::max(best_max, c);
    best_min = std::min(best_min, c);
  }
  return {best_min, best_max};
}

}  // namespace oracle
