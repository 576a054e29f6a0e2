#include "mbonacci/words.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

namespace mbonacci {

MParam::MParam(int m) : m_(m) {
  if (m < 2) {
    throw InvalidArgument("alphabet size m must be >= 2, got " + std::to_string(m));
  }
}

namespace {

void require_word_alphabet(MParam m) {
  if (m.value() > kMaxWordAlphabet) {
    throw InvalidArgument("words are only materialized for m <= 256");
  }
}

void require_letter(MParam m, int a) {
  if (a < 0 || a >= m.value()) {
    throw InvalidLetter("letter " + std::to_string(a) + " is not in [0, " + std::to_string(m.value()) + ")");
  }
}

}  // namespace

LetterWord::LetterWord(MParam m, std::vector<Letter> letters) : m_(m), letters_(std::move(letters)) {
  require_word_alphabet(m);
  for (Letter a : letters_) {
    require_letter(m, a);
  }
}

void LetterWord::push_back(Letter a) {
  require_letter(m_, a);
  letters_.push_back(a);
}

void LetterWord::append(const LetterWord& other) {
  if (!(other.m_ == m_)) {
    throw InvalidArgument("cannot concatenate words over different alphabets");
  }
  letters_.insert(letters_.end(), other.letters_.begin(), other.letters_.end());
}

LetterWord LetterWord::substr(std::size_t pos, std::size_t len) const {
  pos = std::min(pos, letters_.size());
  len = std::min(len, letters_.size() - pos);
  LetterWord out(m_);
  out.letters_.assign(letters_.begin() + static_cast<std::ptrdiff_t>(pos),
                      letters_.begin() + static_cast<std::ptrdiff_t>(pos + len));
  return out;
}

std::string to_string(const LetterWord& w) {
  std::string out;
  if (w.m().value() <= 10) {
    out.reserve(w.size());
    for (Letter a : w) {
      out.push_back(static_cast<char>('0' + a));
    }
    return out;
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i != 0) {
      out.push_back(',');
    }
    out += std::to_string(static_cast<int>(w[i]));
  }
  return out;
}

LetterWord parse_word(std::string_view text, MParam m) {
  std::vector<Letter> letters;
  auto push = [&](int a) {
    require_letter(m, a);
    letters.push_back(static_cast<Letter>(a));
  };
  if (m.value() <= 10) {
    for (char c : text) {
      if (c < '0' || c > '9') {
        throw InvalidLetter(std::string("unexpected character '") + c + "' in word");
      }
      push(c - '0');
    }
  } else {
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t end = text.find(',', pos);
      if (end == std::string_view::npos) {
        end = text.size();
      }
      int value = -1;
      auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + end, value);
      if (ec != std::errc() || ptr != text.data() + end) {
        throw InvalidLetter("malformed letter in comma-separated word");
      }
      push(value);
      pos = end + 1;
    }
  }
  return LetterWord(m, std::move(letters));
}

SubstitutionMatrix::SubstitutionMatrix(MParam m) : m_(m.value()), entries_(static_cast<std::size_t>(m_ * m_), 0) {
  for (int b = 0; b < m_; ++b) {
    entries_[static_cast<std::size_t>(b)] = 1;  // phi(b) starts with 0
    if (b + 1 < m_) {
      entries_[static_cast<std::size_t>((b + 1) * m_ + b)] = 1;
    }
  }
}

ParikhVector SubstitutionMatrix::apply(const ParikhVector& v) const {
  if (static_cast<int>(v.size()) != m_) {
    throw InvalidArgument("Parikh vector length does not match the matrix");
  }
  ParikhVector out(v.size(), 0);
  for (int row = 0; row < m_; ++row) {
    for (int col = 0; col < m_; ++col) {
      if ((*this)(row, col) != 0) {
        out[static_cast<std::size_t>(row)] += (*this)(row, col) * v[static_cast<std::size_t>(col)];
      }
    }
  }
  return out;
}

namespace {

void substitute_into(std::span<const Letter> src, int m, std::vector<Letter>& dst, std::size_t limit) {
  const Letter last = static_cast<Letter>(m - 1);
  for (Letter a : src) {
    if (dst.size() >= limit) {
      return;
    }
    dst.push_back(0);
    if (a != last && dst.size() < limit) {
      dst.push_back(static_cast<Letter>(a + 1));
    }
  }
}

}  // namespace

LetterWord apply_substitution(const LetterWord& w) {
  std::vector<Letter> out;
  out.reserve(2 * w.size());
  substitute_into(w.letters(), w.m().value(), out, std::numeric_limits<std::size_t>::max());
  return LetterWord(w.m(), std::move(out));
}

LetterWord apply_substitution(const LetterWord& w, int power) {
  if (power < 0) {
    throw InvalidArgument("substitution power must be >= 0");
  }
  LetterWord out = w;
  for (int i = 0; i < power; ++i) {
    out = apply_substitution(out);
  }
  return out;
}

LetterWord fixed_point_prefix(MParam m, std::size_t n) {
  require_word_alphabet(m);
  std::vector<Letter> cur{0};
  std::vector<Letter> next;
  while (cur.size() < n) {
    next.clear();
    next.reserve(std::min(2 * cur.size(), n));
    substitute_into(cur, m.value(), next, n);
    cur.swap(next);
  }
  cur.resize(n);
  return LetterWord(m, std::move(cur));
}

PrefixGenerator::PrefixGenerator(MParam m) : m_(m.value()) {
  require_word_alphabet(m);
  buffer_ = {0, 1};
}

Letter PrefixGenerator::next() {
  // u = phi(u): the image of u[source_] extends the buffer.
  while (emitted_ >= buffer_.size()) {
    const Letter a = buffer_[source_++];
    buffer_.push_back(0);
    if (a + 1 < m_) {
      buffer_.push_back(static_cast<Letter>(a + 1));
    }
  }
  return buffer_[emitted_++];
}

MBonacciSequence mbonacci_numbers(MParam m, std::size_t upto) {
  const auto mm = static_cast<std::size_t>(m.value());
  if (upto + 1 < mm) {
    throw InvalidArgument("mbonacci_numbers needs upto >= m - 1");
  }
  MBonacciSequence seq;
  seq.m = m.value();
  seq.values.assign(upto + 1, 0);
  seq.values[mm - 1] = 1;
  if (upto >= mm) {
    seq.values[mm] = 1;
  }
  // T_n = 2 T_{n-1} - T_{n-1-m} for n >= m + 1.
  for (std::size_t n = mm + 1; n <= upto; ++n) {
    seq.values[n] = 2 * seq.values[n - 1] - seq.values[n - 1 - mm];
  }
  return seq;
}

std::optional<mpz_class> phi0_length_closed_form(MParam m, int k) {
  const int mm = m.value();
  if (k < 0) {
    throw InvalidArgument("k must be >= 0");
  }
  auto pow2 = [](int e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, static_cast<unsigned long>(e));
    return r;
  };
  if (k < mm) {
    return pow2(k);
  }
  if (k < 2 * mm) {
    mpz_class r = pow2(k) - pow2(k - mm);
    if (k > mm) {
      r -= (k - mm) * pow2(k - mm - 1);
    }
    return r;
  }
  return std::nullopt;
}

mpz_class phi0_length(MParam m, int k) {
  if (auto closed = phi0_length_closed_form(m, k)) {
    return *closed;
  }
  return mbonacci_numbers(m, static_cast<std::size_t>(k + m.value()))[static_cast<std::size_t>(k + m.value())];
}

mpz_class phi0_letter_count(MParam m, int k, int a) {
  require_letter(m, a);
  if (k < 0) {
    throw InvalidArgument("k must be >= 0");
  }
  const auto idx = static_cast<std::size_t>(k + m.value() - a - 1);
  return mbonacci_numbers(m, std::max<std::size_t>(idx, static_cast<std::size_t>(m.value() - 1)))[idx];
}

ParikhVector parikh(const LetterWord& w) {
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(w.m().value()), 0);
  for (Letter a : w) {
    ++counts[a];
  }
  ParikhVector out;
  out.reserve(counts.size());
  for (auto c : counts) {
    out.emplace_back(static_cast<unsigned long>(c));
  }
  return out;
}

namespace {

// |phi^k(0)| as 64-bit values, up to the first one exceeding n.
std::vector<std::uint64_t> block_lengths_upto(MParam m, std::uint64_t n) {
  const auto mm = static_cast<std::size_t>(m.value());
  std::vector<std::uint64_t> t(mm, 0);  // T_0 .. T_{m-1}
  t[mm - 1] = 1;
  std::vector<std::uint64_t> lengths;
  // |phi^k(0)| = T_{k+m}; extend T until the block exceeds n.
  std::uint64_t window = 1;  // T_{n-1} + ... + T_{n-m}
  while (true) {
    const std::uint64_t next = window;
    lengths.push_back(next);
    if (next > n) {
      break;
    }
    window = window + next - t[t.size() - mm];
    t.push_back(next);
  }
  return lengths;
}

}  // namespace

PrefixDecomposition decompose_prefix(MParam m, std::uint64_t n) {
  PrefixDecomposition d;
  d.n = n;
  if (n == 0) {
    return d;
  }
  const auto lengths = block_lengths_upto(m, n);
  int top = static_cast<int>(lengths.size()) - 1;
  while (lengths[static_cast<std::size_t>(top)] > n) {
    --top;
  }
  d.bits.assign(static_cast<std::size_t>(top + 1), 0);
  std::uint64_t rest = n;
  for (int k = top; k >= 0; --k) {
    if (lengths[static_cast<std::size_t>(k)] <= rest) {
      d.bits[static_cast<std::size_t>(k)] = 1;
      rest -= lengths[static_cast<std::size_t>(k)];
    }
  }
  return d;
}

LetterWord reconstruct(MParam m, const PrefixDecomposition& d) {
  LetterWord out(m);
  if (d.bits.empty()) {
    return out;
  }
  const auto lengths = block_lengths_upto(m, d.n);
  const auto top = static_cast<std::size_t>(d.top());
  const LetterWord base = fixed_point_prefix(m, static_cast<std::size_t>(lengths[top]));
  for (std::size_t k = d.bits.size(); k-- > 0;) {
    if (d.bits[k] != 0) {
      out.append(base.substr(0, static_cast<std::size_t>(lengths[k])));
    }
  }
  return out;
}

mpz_class count_letter_in_prefix(MParam m, int a, std::uint64_t n) {
  require_letter(m, a);
  const PrefixDecomposition d = decompose_prefix(m, n);
  mpz_class total = 0;
  if (d.bits.empty()) {
    return total;
  }
  const auto seq = mbonacci_numbers(m, static_cast<std::size_t>(d.top() + m.value()));
  for (std::size_t k = 0; k < d.bits.size(); ++k) {
    if (d.bits[k] != 0) {
      total += seq[k + static_cast<std::size_t>(m.value() - a - 1)];
    }
  }
  return total;
}

std::optional<std::size_t> factor_search(std::span<const Letter> haystack, std::span<const Letter> needle) {
  if (needle.size() > haystack.size()) {
    return std::nullopt;
  }
  auto it = std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end());
  if (it == haystack.end() && !needle.empty()) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(it - haystack.begin());
}

std::optional<std::size_t> factor_search(MParam m, const LetterWord& needle, std::size_t prefix_len) {
  if (prefix_len < needle.size()) {
    throw InvalidArgument("prefix_len must be >= |needle|");
  }
  const LetterWord hay = fixed_point_prefix(m, prefix_len);
  return factor_search(hay.letters(), needle.letters());
}

}  // namespace mbonacci
