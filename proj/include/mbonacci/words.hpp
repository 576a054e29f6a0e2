#pragma once

// Finite words over the m-letter alphabet and the m-bonacci substitution
//   0 -> 01, 1 -> 02, ..., (m-2) -> 0(m-1), (m-1) -> 0
// together with its fixed point u, the m-bonacci numbers T_n, Parikh vectors
// and the prefix decomposition u[n] = phi^l(0)^{d_l} ... phi^0(0)^{d_0}.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "mbonacci/error.hpp"

namespace mbonacci {

using Letter = std::uint8_t;

/// Largest alphabet for which words are materialized.
inline constexpr int kMaxWordAlphabet = 256;

/// Alphabet size m >= 2.
class MParam {
 public:
  explicit MParam(int m);

  int value() const noexcept { return m_; }
  friend bool operator==(MParam, MParam) = default;

 private:
  int m_;
};

/// Finite sequence of letters, each < m.
class LetterWord {
 public:
  explicit LetterWord(MParam m) : m_(m) {}
  /// Throws InvalidLetter if some letter is >= m.
  LetterWord(MParam m, std::vector<Letter> letters);

  MParam m() const noexcept { return m_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  std::span<const Letter> letters() const noexcept { return letters_; }
  auto begin() const noexcept { return letters_.begin(); }
  auto end() const noexcept { return letters_.end(); }

  void push_back(Letter a);
  void append(const LetterWord& other);
  LetterWord substr(std::size_t pos, std::size_t len) const;

  friend bool operator==(const LetterWord&, const LetterWord&) = default;

 private:
  MParam m_;
  std::vector<Letter> letters_;
};

/// ASCII digits for m <= 10, comma-separated integers otherwise.
std::string to_string(const LetterWord& w);
LetterWord parse_word(std::string_view text, MParam m);

using ParikhVector = std::vector<mpz_class>;

/// M[a][b] = |phi(b)|_a.
class SubstitutionMatrix {
 public:
  explicit SubstitutionMatrix(MParam m);

  int size() const noexcept { return m_; }
  int operator()(int row, int col) const { return entries_[static_cast<std::size_t>(row * m_ + col)]; }
  ParikhVector apply(const ParikhVector& v) const;

 private:
  int m_;
  std::vector<int> entries_;
};

/// T_0 = ... = T_{m-2} = 0, T_{m-1} = 1, T_n = T_{n-1} + ... + T_{n-m}.
struct MBonacciSequence {
  int m = 0;
  std::vector<mpz_class> values;

  const mpz_class& operator[](std::size_t n) const { return values.at(n); }
  std::size_t size() const noexcept { return values.size(); }
};

/// Greedy (largest block first) decomposition of the prefix of length n.
struct PrefixDecomposition {
  std::uint64_t n = 0;
  /// bits[k] = delta_k; bits.size() = l + 1 with bits[l] = 1 (empty for n = 0).
  std::vector<std::uint8_t> bits;

  int top() const noexcept { return static_cast<int>(bits.size()) - 1; }
};

LetterWord apply_substitution(const LetterWord& w);
/// phi^j(w).
LetterWord apply_substitution(const LetterWord& w, int power);

/// First n letters of the fixed point, by repeated substitution of a growing buffer.
LetterWord fixed_point_prefix(MParam m, std::size_t n);

/// Incremental producer of the fixed point: letters are emitted one at a time,
/// the buffer grows with the output. Each instance is an independent cursor.
class PrefixGenerator {
 public:
  explicit PrefixGenerator(MParam m);

  Letter next();
  std::size_t emitted() const noexcept { return emitted_; }

 private:
  int m_;
  std::vector<Letter> buffer_;
  std::size_t source_ = 1;
  std::size_t emitted_ = 0;
};

MBonacciSequence mbonacci_numbers(MParam m, std::size_t upto);

/// |phi^k(0)|: 2^k for k < m, 2^k - 2^{k-m} - (k-m)2^{k-m-1} for m <= k < 2m,
/// T_{k+m} beyond.
mpz_class phi0_length(MParam m, int k);
/// Closed form only; nullopt when k >= 2m.
std::optional<mpz_class> phi0_length_closed_form(MParam m, int k);
/// |phi^k(0)|_a = T_{k+m-a-1}.
mpz_class phi0_letter_count(MParam m, int k, int a);

ParikhVector parikh(const LetterWord& w);

PrefixDecomposition decompose_prefix(MParam m, std::uint64_t n);
/// Concatenation phi^l(0)^{d_l} ... phi^0(0)^{d_0}.
LetterWord reconstruct(MParam m, const PrefixDecomposition& d);

/// |u[n]|_a via the decomposition (O(number of blocks) big-integer additions).
mpz_class count_letter_in_prefix(MParam m, int a, std::uint64_t n);

/// Smallest start of needle inside u[prefix_len].
std::optional<std::size_t> factor_search(MParam m, const LetterWord& needle, std::size_t prefix_len);
/// Same search over an already materialized haystack.
std::optional<std::size_t> factor_search(std::span<const Letter> haystack, std::span<const Letter> needle);

}  // namespace mbonacci
