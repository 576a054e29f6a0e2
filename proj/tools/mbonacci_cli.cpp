// mbonacci: balance constants of m-bonacci words.
//
//   mbonacci bounds --m-range 2..12 --format md
//   mbonacci table12 --m 4
//   mbonacci brute --m 4 --lengths 3250..3360 --prefix-len 1000000
//   mbonacci roots --m-range 2..32
//   mbonacci global --m-range 5..30
//   mbonacci witness --m 4
//   mbonacci verify-all
//
// Exit codes: 0 success, 1 check failure, 2 usage error, 3 precision cap exceeded.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <regex>
#include <string>

#include <CLI11.hpp>

#include "mbonacci/error.hpp"
#include "mbonacci/report.hpp"

namespace {

using mbonacci::ConfigError;

std::pair<long, long> parse_range(const std::string& text) {
  static const std::regex re(R"(^\s*(\d+)\s*(?:(?:\.\.|-)\s*(\d+))?\s*$)");
  std::smatch match;
  if (!std::regex_match(text, match, re)) throw ConfigError("bad range '" + text + "'");
  const long lo = std::stol(match[1]);
  const long hi = match[2].matched ? std::stol(match[2]) : lo;
  if (hi < lo) throw ConfigError("empty range '" + text + "'");
  return {lo, hi};
}

// "1,5,10..20" -> 1 5 10 11 ... 20
std::vector<std::size_t> parse_lengths(const std::string& text) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string piece = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    const auto [lo, hi] = parse_range(piece);
    for (long L = lo; L <= hi; ++L) out.push_back(static_cast<std::size_t>(L));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

// Accepts "p/q", "0.001" and "1e-3".
mpq_class parse_rational(const std::string& text) {
  static const std::regex frac(R"(^\s*(\d+)\s*/\s*(\d+)\s*$)");
  static const std::regex dec(R"(^\s*(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?\s*$)");
  std::smatch match;
  if (std::regex_match(text, match, frac)) {
    mpq_class q(mpz_class(match[1].str()), mpz_class(match[2].str()));
    if (q.get_den() == 0) throw ConfigError("zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
  }
  if (!std::regex_match(text, match, dec) || (match[1].length() == 0 && match[2].length() == 0))
    throw ConfigError("bad number '" + text + "'");
  const std::string digits = match[1].str() + match[2].str();
  long exponent = match[3].matched ? std::stol(match[3]) : 0;
  exponent -= static_cast<long>(match[2].length());
  mpz_class num(digits.empty() ? std::string("0") : digits);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  mpq_class q = exponent >= 0 ? mpq_class(num * scale) : mpq_class(num, scale);
  q.canonicalize();
  return q;
}

struct Flags {
  int m = 0;
  std::string m_range;
  std::vector<int> letters;
  std::string format = "csv";
  std::string out;
  std::size_t prefix_len = 0;
  std::string lengths;
  std::string tol;
  std::string root_tol;
  long beta_bits = 100;
  std::string inject_fault;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--m", f.m, "alphabet size");
  cmd->add_option("--m-range", f.m_range, "range lo..hi of alphabet sizes");
  cmd->add_option("--letters", f.letters, "letters to report")->delimiter(',');
  cmd->add_option("--format", f.format, "csv, json or md")->check(CLI::IsMember({"csv", "json", "md"}));
  cmd->add_option("--out", f.out, "output path (default stdout)");
  cmd->add_option("--prefix-len", f.prefix_len, "prefix length N");
  cmd->add_option("--lengths", f.lengths, "window lengths, e.g. 1..2000 or 5,8,13");
  cmd->add_option("--tol", f.tol, "quadrature width target (default 1e-3)");
  cmd->add_option("--root-tol", f.root_tol, "root enclosure width (default 1e-20)");
  cmd->add_option("--beta-bits", f.beta_bits, "initial beta enclosure bits (default 100)");
}

mbonacci::RunConfig to_config(const std::string& command, const Flags& f) {
  mbonacci::RunConfig c;
  c.command = command;
  if (!f.m_range.empty()) {
    const auto [lo, hi] = parse_range(f.m_range);
    c.m_lo = static_cast<int>(lo);
    c.m_hi = static_cast<int>(hi);
  } else if (f.m) {
    c.m_lo = c.m_hi = f.m;
  } else if (command == "global") {
    c.m_lo = c.m_hi = 29;
  } else if (command == "bounds") {
    c.m_lo = 2;
    c.m_hi = 12;
  }
  c.letters = f.letters;
  c.format = mbonacci::parse_format(f.format);
  c.out = f.out;
  c.prefix_len = f.prefix_len;
  if (!f.lengths.empty()) c.lengths = parse_lengths(f.lengths);
  if (!f.tol.empty()) c.tol = parse_rational(f.tol);
  if (!f.root_tol.empty()) c.root_tol = parse_rational(f.root_tol);
  c.beta_bits = f.beta_bits;
  c.inject_fault = f.inject_fault;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Balance constants of m-bonacci words"};
  app.set_version_flag("--version", std::string("mbonacci ") + mbonacci::kToolVersion);
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"bounds", "certified upper bounds on c_a"},
      {"table12", "integer coefficients, signs and head sums"},
      {"brute", "factor spreads over a prefix"},
      {"roots", "root enclosures and lemma checks"},
      {"global", "the bound floor(kappa m) + 12"},
      {"witness", "replay printed witnesses and search for spread 3"},
      {"verify-all", "run every invariant check"}};
  for (const auto& [name, help] : commands) {
    CLI::App* cmd = app.add_subcommand(name, help);
    add_common(cmd, flags);
    if (name == "verify-all") cmd->add_option("--inject-fault", flags.inject_fault, "negative test: t-seed")->group("");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    const mbonacci::RunConfig config = to_config(command, flags);
    const mbonacci::ReportBundle bundle = mbonacci::run_command(config);
    const std::string text = mbonacci::render(bundle, config.format);
    if (config.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream file(config.out, std::ios::binary);
      if (!file) throw ConfigError("cannot open '" + config.out + "' for writing");
      file << text;
    }
    for (const auto& [phase, seconds] : bundle.timing) std::fprintf(stderr, "timing %s %.3fs\n", phase.c_str(), seconds);
    for (const auto& t : bundle.tasks)
      if (!t.passed) std::fprintf(stderr, "FAIL %s: %s\n", t.name.c_str(), t.detail.c_str());
    return mbonacci::exit_code(bundle);
  } catch (const mbonacci::PrecisionError& e) {
    std::fprintf(stderr, "precision cap exceeded: %s\n", e.what());
    return 3;
  } catch (const mbonacci::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const mbonacci::InvalidArgument& e) {
    std::fprintf(stderr, "invalid argument: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
