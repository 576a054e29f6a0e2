#include "mbonacci/report.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

#include "mbonacci/balance.hpp"
#include "mbonacci/error.hpp"
#include "mbonacci/exact_g.hpp"
#include "mbonacci/parallel.hpp"
#include "mbonacci/quadrature.hpp"
#include "mbonacci/spectral.hpp"
#include "mbonacci/words.hpp"

namespace mbonacci {

using json = nlohmann::ordered_json;

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string sci(const mpq_class& v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", v.get_d());
  return buf;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::vector<int> letters_for(const RunConfig& c, int m) {
  std::vector<int> out;
  if (c.letters.empty()) {
    for (int a = 0; a < m; ++a) out.push_back(a);
  } else {
    for (int a : c.letters)
      if (a < m) out.push_back(a);
  }
  return out;
}

std::vector<int> m_values(const RunConfig& c) {
  std::vector<int> out;
  for (int m = c.m_lo; m <= c.m_hi; ++m) out.push_back(m);
  return out;
}

void require_m_range(const RunConfig& c, int lo, int hi, const std::string& what) {
  if (c.m_lo < lo || c.m_hi > hi)
    throw ConfigError(what + " requires m in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

ReportBundle start(const RunConfig& c, const std::string& command) {
  c.validate();
  ReportBundle b;
  b.command = command;
  b.config = c.to_json();
  b.config["command"] = command;
  return b;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string md_cell(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '|') out += '\\';
    out += ch;
  }
  return out;
}

// Certified upper bound on sum_k |g(a, k)| from a certificate.
mpq_class total_upper(const BoundCertificate& cert, BetaContext& ctx) {
  if (cert.exact_total) return eval_interval(*cert.exact_total, ctx.beta()).upper();
  return cert.head_interval.upper() + cert.tail;
}

}  // namespace

OutputFormat parse_format(std::string_view text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  if (text == "md") return OutputFormat::md;
  throw ConfigError("unknown format '" + std::string(text) + "'");
}

std::string to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::csv: return "csv";
    case OutputFormat::json: return "json";
    case OutputFormat::md: return "md";
  }
  return "csv";
}

RunConfig::RunConfig() {
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, 20);
  root_tol = mpq_class(mpz_class(1), den);
}

void RunConfig::validate() const {
  if (m_lo < 2 || m_hi < m_lo) throw ConfigError("empty or invalid m range");
  if (tol <= 0 || root_tol <= 0 || beta_bits <= 0) throw ConfigError("precision targets must be positive");
  for (int a : letters)
    if (a < 0) throw ConfigError("letters must be nonnegative");
  for (std::size_t L : lengths)
    if (L == 0) throw ConfigError("window lengths must be positive");
  if (!inject_fault.empty() && inject_fault != "t-seed") throw ConfigError("unknown fault '" + inject_fault + "'");
}

json RunConfig::to_json() const {
  json j;
  j["m"] = {m_lo, m_hi};
  j["letters"] = letters;
  j["format"] = to_string(format);
  j["prefix_len"] = prefix_len;
  j["lengths"] = lengths;
  j["tol"] = tol.get_str();
  j["root_tol"] = root_tol.get_str();
  j["beta_bits"] = beta_bits;
  if (!inject_fault.empty()) j["inject_fault"] = inject_fault;
  return j;
}

bool ReportBundle::passed() const {
  return std::all_of(tasks.begin(), tasks.end(), [](const TaskResult& t) { return t.passed; });
}

bool ReportBundle::precision_failure() const {
  return std::any_of(tasks.begin(), tasks.end(), [](const TaskResult& t) { return t.precision_failure; });
}

json ReportBundle::to_json() const {
  json j;
  j["tool"] = "mbonacci";
  j["version"] = tool_version;
  j["command"] = command;
  j["config"] = config;
  j["results"] = results;
  json tasks_json = json::array();
  long failed = 0;
  for (const auto& t : tasks) {
    tasks_json.push_back({{"name", t.name}, {"passed", t.passed}, {"precision_failure", t.precision_failure},
                          {"detail", t.detail}});
    if (!t.passed) ++failed;
  }
  j["tasks"] = tasks_json;
  j["rollup"] = {{"tasks", tasks.size()}, {"failed", failed}, {"passed", failed == 0}};
  return j;
}

std::string render_csv(const ReportBundle& b) {
  std::vector<const Table*> shown;
  for (const auto& t : b.tables)
    if (t.in_csv) shown.push_back(&t);
  std::ostringstream os;
  for (std::size_t i = 0; i < shown.size(); ++i) {
    if (i > 0) os << '\n';
    if (shown.size() > 1) os << "# " << shown[i]->name << '\n';
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t k = 0; k < cells.size(); ++k) os << (k ? "," : "") << csv_field(cells[k]);
      os << '\n';
    };
    line(shown[i]->header);
    for (const auto& r : shown[i]->rows) line(r);
  }
  return os.str();
}

std::string render_json(const ReportBundle& b) { return b.to_json().dump(2) + "\n"; }

std::string render_markdown(const ReportBundle& b) {
  std::ostringstream os;
  os << "# mbonacci " << b.command << "\n";
  for (const auto& t : b.tables) {
    if (!t.in_md) continue;
    os << "\n## " << t.name << "\n\n|";
    for (const auto& h : t.header) os << ' ' << md_cell(h) << " |";
    os << "\n|";
    for (std::size_t k = 0; k < t.header.size(); ++k) os << "---|";
    os << '\n';
    for (const auto& r : t.rows) {
      os << '|';
      for (const auto& c : r) os << ' ' << md_cell(c) << " |";
      os << '\n';
    }
  }
  os << "\nStatus: " << (b.passed() ? "pass" : "FAIL") << "\n";
  return os.str();
}

std::string render(const ReportBundle& b, OutputFormat f) {
  switch (f) {
    case OutputFormat::csv: return render_csv(b);
    case OutputFormat::json: return render_json(b);
    case OutputFormat::md: return render_markdown(b);
  }
  return render_csv(b);
}

int exit_code(const ReportBundle& b) {
  if (b.passed()) return 0;
  return b.precision_failure() ? 3 : 1;
}

ReportBundle cmd_bounds(const RunConfig& c) {
  ReportBundle b = start(c, "bounds");
  require_m_range(c, 2, 64, "bounds");
  const std::vector<int> ms = m_values(c);
  Stopwatch clock;

  std::vector<std::optional<SpectralSet>> spectra(ms.size());
  std::vector<std::string> spectral_errors(ms.size());
  parallel_for(ms.size(), [&](std::size_t i) {
    try {
      spectra[i] = conjugate_enclosures(MParam(ms[i]), c.root_tol);
    } catch (const PrecisionError& e) {
      spectral_errors[i] = e.what();
    }
  });
  b.timing.emplace_back("roots", clock.seconds());

  struct Cell {
    int m = 0;
    int a = 0;
    std::optional<BoundCertificate> cert;
    std::string error;
  };
  std::vector<Cell> cells;
  std::vector<std::size_t> spectrum_of;
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (int a : letters_for(c, ms[i])) {
      cells.push_back({ms[i], a, std::nullopt, {}});
      spectrum_of.push_back(i);
    }
  parallel_for(cells.size(), [&](std::size_t k) {
    Cell& cell = cells[k];
    const auto& spectrum = spectra[spectrum_of[k]];
    if (!spectrum) {
      cell.error = spectral_errors[spectrum_of[k]];
      return;
    }
    try {
      BetaContext ctx(MParam(cell.m), c.beta_bits);
      cell.cert = certify_c_a_bound(MParam(cell.m), cell.a, ctx, *spectrum);
    } catch (const PrecisionError& e) {
      cell.error = e.what();
    }
  });
  b.timing.emplace_back("certify", clock.seconds());

  Table certs{"certificates", {"m", "a", "n", "head", "head_value", "tail", "bound", "certified"}, {}};
  json cells_json = json::array();
  std::map<int, std::vector<std::string>> grid;
  for (const auto& cell : cells) {
    auto& row = grid[cell.m];
    if (row.empty()) row.assign(static_cast<std::size_t>(c.m_hi), "×");
    if (!cell.cert) {
      row[static_cast<std::size_t>(cell.a)] = "FAIL";
      certs.rows.push_back({std::to_string(cell.m), std::to_string(cell.a), "", "", "", "", "FAIL", "precision"});
      cells_json.push_back({{"m", cell.m}, {"a", cell.a}, {"error", cell.error}});
      continue;
    }
    const BoundCertificate& cert = *cell.cert;
    const std::string status = cert.exact_total ? "exact" : (cert.floors_equal ? "floors" : "cap");
    row[static_cast<std::size_t>(cell.a)] = std::to_string(cert.bound);
    certs.rows.push_back({std::to_string(cell.m), std::to_string(cell.a), std::to_string(cert.n),
                          to_string(cert.head), fixed(cert.head_interval.mid_double(), 9), sci(cert.tail),
                          std::to_string(cert.bound), status});
    json cj{{"m", cell.m}, {"a", cell.a}, {"n", cert.n}, {"head", to_string(cert.head)},
            {"head_interval", cert.head_interval.to_string(12)}, {"tail", sci(cert.tail)},
            {"bound", cert.bound}, {"certified", status}};
    if (cert.exact_total) cj["exact_total"] = to_string(*cert.exact_total);
    cells_json.push_back(cj);
  }
  b.results["cells"] = cells_json;

  Table g{"bounds", {"m"}, {}, false, true};
  for (int a = 0; a < c.m_hi; ++a) g.header.push_back("c_" + std::to_string(a));
  for (auto& [m, row] : grid) {
    std::vector<std::string> r{std::to_string(m)};
    r.insert(r.end(), row.begin(), row.end());
    g.rows.push_back(r);
  }
  b.tables.push_back(std::move(g));
  b.tables.push_back(std::move(certs));

  for (std::size_t i = 0; i < ms.size(); ++i) {
    TaskResult t{"bounds m=" + std::to_string(ms[i]), true, false, "certified"};
    for (const auto& cell : cells)
      if (cell.m == ms[i] && !cell.cert) {
        t.passed = false;
        t.precision_failure = true;
        t.detail = "a=" + std::to_string(cell.a) + ": " + cell.error;
        break;
      }
    b.tasks.push_back(t);
  }
  return b;
}

ReportBundle cmd_table12(const RunConfig& c) {
  ReportBundle b = start(c, "table12");
  const MParam m(c.m_lo);
  const int mv = m.value();
  const int rows = 3 * mv;
  BetaContext ctx(m, c.beta_bits);

  Table ic{"ic", {"k", "ic"}, {}};
  for (int a = 0; a < mv; ++a) ic.header.push_back("sign_a" + std::to_string(a));
  const auto seq = g_sequence(m, 0, rows);
  std::vector<std::vector<int>> signs(static_cast<std::size_t>(mv));
  for (int a = 0; a < mv; ++a)
    for (int k = 0; k <= rows; ++k) signs[static_cast<std::size_t>(a)].push_back(sign_of_g(m, a, k, ctx));
  json ic_json = json::array();
  for (int k = 0; k <= rows; ++k) {
    std::string vec = "(";
    json v = json::array();
    for (std::size_t i = 0; i < seq[static_cast<std::size_t>(k)].ic.size(); ++i) {
      vec += (i ? "," : "") + seq[static_cast<std::size_t>(k)].ic[i].get_str();
      v.push_back(seq[static_cast<std::size_t>(k)].ic[i].get_str());
    }
    vec += ")";
    std::vector<std::string> row{std::to_string(k), vec};
    std::string sign_str;
    for (int a = 0; a < mv; ++a) {
      const int s = signs[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)];
      row.push_back(s > 0 ? "+" : "-");
      sign_str += s > 0 ? '+' : '-';
    }
    ic.rows.push_back(row);
    ic_json.push_back({{"k", k}, {"ic", v}, {"signs", sign_str}});
  }
  b.results["ic"] = ic_json;

  SpectralSet roots = conjugate_enclosures(m, c.root_tol);
  const int n = rows + 1;
  Table summary{"summary", {"a", "abs_ic", "symbolic", "value", "tail", "total", "loose_total", "bound", "certified_bound"}, {}};
  json sum_json = json::array();
  for (int a : letters_for(c, mv)) {
    const HeadSum head = head_abs_sum(m, a, n, ctx);
    const auto abs_ic = head_abs_ic(m, a, head.signs);
    std::string ic_str = "(";
    for (std::size_t i = 0; i < abs_ic.size(); ++i) ic_str += (i ? "," : "") + abs_ic[i].get_str();
    ic_str += ")";
    const TailBound tail = tail_bound(m, a, n, roots);
    const mpq_class total = head.interval.upper() + tail.value;
    const mpq_class loose_total = head.interval.upper() + mpq_class(11, 10) * tail.value;
    mpz_class fl;
    const mpq_class twice = 2 * total;
    mpz_fdiv_q(fl.get_mpz_t(), twice.get_num_mpz_t(), twice.get_den_mpz_t());
    BetaContext cert_ctx(m, c.beta_bits);
    const BoundCertificate cert = certify_c_a_bound(m, a, cert_ctx, roots);
    summary.rows.push_back({std::to_string(a), ic_str, to_string(head.value), fixed(head.interval.mid_double(), 6),
                            fixed(tail.value.get_d(), 6), fixed(total.get_d(), 6), fixed(loose_total.get_d(), 6), fl.get_str(),
                            std::to_string(cert.bound)});
    sum_json.push_back({{"a", a}, {"abs_ic", ic_str}, {"symbolic", to_string(head.value)},
                        {"p", head.value.p.get_str()}, {"q", head.value.q.get_str()}, {"s", head.value.s},
                        {"value", head.interval.to_string(12)}, {"tail", tail.value.get_d()},
                        {"total", total.get_d()}, {"loose_total", loose_total.get_d()}, {"bound", fl.get_si()}, {"certified_bound", cert.bound}});
  }
  b.results["n"] = n;
  b.results["summary"] = sum_json;
  b.tables.push_back(std::move(ic));
  b.tables.push_back(std::move(summary));
  b.tasks.push_back({"table12 m=" + std::to_string(mv), true, false, "head over k < " + std::to_string(n)});
  return b;
}

namespace {

struct BruteDefaults {
  std::vector<std::size_t> lengths;
  std::size_t N = 0;
};

BruteDefaults brute_defaults(int m) {
  BruteDefaults d;
  auto range = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t L = lo; L <= hi; ++L) d.lengths.push_back(L);
  };
  if (m <= 3) {
    range(1, 2000);
    d.N = 1000000;
  } else if (m == 4) {
    range(3250, 3360);
    d.N = 1000000;
  } else if (m == 5) {
    range(1000, 1100);
    d.N = 4000000;
  } else {
    range(1, 500);
    d.N = 100000;
  }
  return d;
}

}  // namespace

ReportBundle cmd_brute(const RunConfig& c) {
  ReportBundle b = start(c, "brute");
  const std::vector<int> ms = m_values(c);
  // Every precondition is checked before the first scan.
  std::vector<BruteDefaults> plans;
  for (int m : ms) {
    if (m > kMaxWordAlphabet) throw ConfigError("brute force requires m <= " + std::to_string(kMaxWordAlphabet));
    BruteDefaults d = brute_defaults(m);
    if (!c.lengths.empty()) d.lengths = c.lengths;
    if (c.prefix_len) d.N = c.prefix_len;
    const std::size_t max_len = *std::max_element(d.lengths.begin(), d.lengths.end());
    if (max_len > d.N)
      throw ConfigError("prefix length " + std::to_string(d.N) + " is shorter than window length " +
                        std::to_string(max_len));
    plans.push_back(d);
  }

  Table spreads{"spreads", {"m", "L", "letter", "min", "max", "spread", "argmax", "argmin"}, {}, true, false};
  Table rollup{"rollup", {"m", "letter", "max_spread", "certified_bound"}, {}};
  json roll_json = json::array();
  Stopwatch clock;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const MParam m(ms[i]);
    const auto letters = letters_for(c, ms[i]);
    const SpreadTable table = brute_force_spreads(m, letters, plans[i].lengths, plans[i].N);
    b.timing.emplace_back("scan m=" + std::to_string(ms[i]), clock.seconds());
    for (const auto& r : table.rows)
      spreads.rows.push_back({std::to_string(ms[i]), std::to_string(r.length), std::to_string(r.letter),
                              std::to_string(r.min), std::to_string(r.max), std::to_string(r.spread()),
                              std::to_string(r.argmax), std::to_string(r.argmin)});
    std::optional<SpectralSet> roots;
    if (ms[i] <= 12) roots = conjugate_enclosures(m, c.root_tol);
    TaskResult task{"brute m=" + std::to_string(ms[i]), true, false, ""};
    std::ostringstream detail;
    for (int a : letters) {
      const std::uint32_t spread = table.max_spread(a);
      std::string cert_str = "";
      if (roots) {
        BetaContext ctx(m, c.beta_bits);
        const long bound = certify_c_a_bound(m, a, ctx, *roots).bound;
        cert_str = std::to_string(bound);
        if (static_cast<long>(spread) > bound) {
          task.passed = false;
          detail << "letter " << a << " spread " << spread << " exceeds certified " << bound << "; ";
        }
      }
      rollup.rows.push_back({std::to_string(ms[i]), std::to_string(a), std::to_string(spread), cert_str});
      roll_json.push_back({{"m", ms[i]}, {"letter", a}, {"max_spread", spread}, {"certified_bound", cert_str}});
    }
    task.detail = task.passed ? "N = " + std::to_string(plans[i].N) + ", " + std::to_string(plans[i].lengths.size()) +
                                    " lengths"
                              : detail.str();
    b.tasks.push_back(task);
  }
  b.results["rollup"] = roll_json;
  b.tables.push_back(std::move(spreads));
  b.tables.push_back(std::move(rollup));
  return b;
}

ReportBundle cmd_roots(const RunConfig& c) {
  ReportBundle b = start(c, "roots");
  const std::vector<int> ms = m_values(c);
  const Precision prec = 192;
  struct Outcome {
    std::optional<SpectralSet> set;
    LemmaCheck lemma;
    std::string error;
  };
  std::vector<Outcome> out(ms.size());
  parallel_for(ms.size(), [&](std::size_t i) {
    out[i].lemma = lemma_x0_check(MParam(ms[i]));
    try {
      out[i].set = conjugate_enclosures(MParam(ms[i]), c.root_tol);
    } catch (const PrecisionError& e) {
      out[i].error = e.what();
    }
  });

  Table roots{"roots", {"m", "j", "modulus", "argument", "re", "im", "in_window", "modulus_bound"}, {}};
  Table lemmas{"lemmas", {"m", "beta", "x0_sandwich", "windows", "modulus_bounds", "product"}, {}};
  json roots_json = json::array();
  const Interval pi = Interval::pi(prec);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const int m = ms[i];
    TaskResult task{"roots m=" + std::to_string(m), true, false, ""};
    if (!out[i].set) {
      task.passed = false;
      task.precision_failure = true;
      task.detail = out[i].error;
      lemmas.rows.push_back({std::to_string(m), "FAIL", yes_no(out[i].lemma.passed), "", "", ""});
      b.tasks.push_back(task);
      continue;
    }
    const SpectralSet& set = *out[i].set;
    bool windows_ok = true;
    bool bounds_ok = true;
    Interval product = set.beta.to_interval(prec);
    json mj{{"m", m}, {"beta", set.beta.to_interval(prec).to_string(20)}, {"x0_sandwich", out[i].lemma.passed}};
    json rj = json::array();
    for (const auto& r : set.roots) {
      const auto [wlo, whi] = argument_window(MParam(m), r.j);
      const Interval arg = r.argument(prec);
      const bool in_window = mpfr_cmp(arg.lo(), (Interval(wlo, prec) * pi).hi()) > 0 &&
                             mpfr_cmp(arg.hi(), (Interval(whi, prec) * pi).lo()) < 0;
      const mpq_class ub = modulus_upper_bound(MParam(m), r.j, r);
      const bool bound_ok = r.modulus_hi <= ub;
      windows_ok = windows_ok && in_window;
      bounds_ok = bounds_ok && bound_ok;
      product *= r.modulus(prec);
      const auto [re, im] = r.approx();
      roots.rows.push_back({std::to_string(m), std::to_string(r.j), fixed(r.modulus(prec).mid_double(), 12),
                            fixed(arg.mid_double(), 12), fixed(re, 12), fixed(im, 12), yes_no(in_window),
                            yes_no(bound_ok)});
      rj.push_back({{"j", r.j}, {"modulus", r.modulus(prec).to_string(15)}, {"argument", arg.to_string(15)},
                    {"in_window", in_window}, {"modulus_bound", format_decimal(ub, 12, MPFR_RNDU)},
                    {"modulus_bound_ok", bound_ok}});
    }
    const bool product_ok = product.subset_of(Interval(mpq_class(999999, 1000000), mpq_class(1000001, 1000000), prec));
    lemmas.rows.push_back({std::to_string(m), fixed(set.beta.to_interval(prec).mid_double(), 12),
                           yes_no(out[i].lemma.passed), yes_no(windows_ok), yes_no(bounds_ok), yes_no(product_ok)});
    mj["roots"] = rj;
    mj["product"] = product.to_string(12);
    roots_json.push_back(mj);
    task.passed = out[i].lemma.passed && windows_ok && bounds_ok && product_ok;
    task.detail = task.passed ? "all lemma checks pass" : out[i].lemma.detail;
    b.tasks.push_back(task);
  }
  b.results["roots"] = roots_json;
  b.tables.push_back(std::move(lemmas));
  b.tables.push_back(std::move(roots));
  return b;
}

ReportBundle cmd_global(const RunConfig& c) {
  ReportBundle b = start(c, "global");
  if (c.m_lo < 5) throw ConfigError("global bound requires m >= 5");
  const QuadratureResult A = quadrature_A(c.tol);
  const Interval kap = kappa(A);
  b.results["A"] = A.value.to_string(12);
  b.results["A_subdivisions"] = A.subdivisions;
  b.results["kappa"] = kap.to_string(12);
  const bool a_ok = mpfr_cmp_d(A.value.lo(), 0.9) > 0 && mpfr_cmp_d(A.value.hi(), 0.91) < 0;
  const bool k_ok = mpfr_cmp_d(kap.lo(), 0.57) > 0 && mpfr_cmp_d(kap.hi(), 0.59) < 0;
  b.tasks.push_back({"A in (0.9, 0.91)", a_ok, false, A.value.to_string(10)});
  b.tasks.push_back({"kappa in (0.57, 0.59)", k_ok, false, kap.to_string(10)});

  const std::vector<int> ms = m_values(c);
  struct Row {
    GlobalBound g;
    std::optional<long> c0;
    LetterPropagation prop;
    std::string error;
  };
  std::vector<Row> rows(ms.size());
  parallel_for(ms.size(), [&](std::size_t i) {
    const MParam m(ms[i]);
    rows[i].g = global_balance_bound(m, A);
    if (ms[i] > 64) return;
    try {
      const SpectralSet roots = conjugate_enclosures(m, c.root_tol);
      BetaContext ctx(m, c.beta_bits);
      rows[i].c0 = certify_c_a_bound(m, 0, ctx, roots).bound;
      rows[i].prop = propagate_letter_bounds(m, *rows[i].c0);
    } catch (const PrecisionError& e) {
      rows[i].error = e.what();
    }
  });
  Table t{"global", {"m", "analytic", "audit", "c0", "propagated", "reported"}, {}};
  json gj = json::array();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const Row& r = rows[i];
    long reported = r.g.bound;
    std::string c0 = "", prop = "";
    if (r.c0) {
      c0 = std::to_string(*r.c0);
      if (r.prop.applicable) {
        prop = std::to_string(r.prop.global);
        reported = std::min(reported, r.prop.global);
      }
    }
    t.rows.push_back({std::to_string(ms[i]), std::to_string(r.g.bound), fixed(r.g.audit.upper_double(), 6), c0, prop,
                      std::to_string(reported)});
    gj.push_back({{"m", ms[i]}, {"analytic", r.g.bound}, {"audit", r.g.audit.to_string(12)}, {"c0", c0},
                  {"propagated", prop}, {"reported", reported}});
    if (!r.error.empty()) b.tasks.push_back({"global m=" + std::to_string(ms[i]), false, true, r.error});
  }
  b.results["bounds"] = gj;
  b.tables.push_back(std::move(t));
  return b;
}

ReportBundle cmd_witness(const RunConfig& c) {
  ReportBundle b = start(c, "witness");
  require_m_range(c, 4, 5, "witness");
  Table recipes{"recipes", {"m", "name", "length", "counts", "quotient_valid", "factor_index", "haystack"}, {}};
  Table search{"search", {"m", "L", "letter", "v_start", "w_start", "difference"}, {}};
  json rj = json::array();
  json sj = json::array();
  for (int mv : m_values(c)) {
    const MParam m(mv);
    std::vector<WitnessReport> reports;
    for (const auto& recipe : published_witness_recipes(m)) {
      TaskResult task{"recipe m=" + std::to_string(mv) + " " + recipe.name, true, false, ""};
      try {
        reports.push_back(compose_witness(recipe));
      } catch (const RecipeError& e) {
        task.passed = false;
        task.detail = e.what();
        b.tasks.push_back(task);
        continue;
      }
      const WitnessReport& rep = reports.back();
      std::string counts;
      for (std::size_t a = 0; a < rep.counts.size(); ++a) counts += (a ? " " : "") + std::to_string(rep.counts[a]);
      const std::string idx = rep.factor_index ? std::to_string(*rep.factor_index) : "not-a-factor";
      recipes.rows.push_back({std::to_string(mv), rep.name, std::to_string(rep.length), counts,
                              yes_no(rep.quotient_valid), idx, std::to_string(rep.haystack_length)});
      rj.push_back({{"m", mv}, {"name", rep.name}, {"length", rep.length}, {"counts", rep.counts},
                    {"quotient_valid", rep.quotient_valid}, {"factor_index", idx},
                    {"haystack", rep.haystack_length}});
      task.passed = rep.quotient_valid && rep.factor_index.has_value();
      task.detail = "length " + std::to_string(rep.length) + ", factor at " + idx;
      b.tasks.push_back(task);
    }
    if (reports.size() == 2) {
      const long diff = static_cast<long>(reports[0].counts[1]) - static_cast<long>(reports[1].counts[1]);
      b.results["recipe_letter1_difference_m" + std::to_string(mv)] = diff;
    }

    std::size_t lo = 1, hi = mv == 4 ? 4000 : 16000;
    if (!c.lengths.empty()) {
      lo = *std::min_element(c.lengths.begin(), c.lengths.end());
      hi = *std::max_element(c.lengths.begin(), c.lengths.end());
    }
    const std::size_t N = c.prefix_len ? c.prefix_len : (mv == 4 ? 1000000 : 4000000);
    if (hi > N) throw ConfigError("prefix length " + std::to_string(N) + " is shorter than window length " + std::to_string(hi));
    const auto pair = search_spread3_witness(m, lo, hi, N);
    TaskResult task{"search m=" + std::to_string(mv), pair.has_value(), false, ""};
    if (pair) {
      search.rows.push_back({std::to_string(mv), std::to_string(pair->length), std::to_string(pair->letter),
                             std::to_string(pair->v_start), std::to_string(pair->w_start),
                             std::to_string(pair->difference)});
      sj.push_back({{"m", mv}, {"L", pair->length}, {"letter", pair->letter}, {"v_start", pair->v_start},
                    {"w_start", pair->w_start}, {"difference", pair->difference}});
      task.passed = pair->difference == 3 && pair->v.size() == pair->w.size();
      task.detail = "first spread 3 at L = " + std::to_string(pair->length);
    } else {
      task.detail = "no spread 3 in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
    }
    b.tasks.push_back(task);
  }
  b.results["recipes"] = rj;
  b.results["search"] = sj;
  b.tables.push_back(std::move(recipes));
  b.tables.push_back(std::move(search));
  return b;
}

namespace {

MBonacciSequence seeded_numbers(int m, std::size_t upto, const std::vector<mpz_class>& seed) {
  MBonacciSequence T;
  T.m = m;
  T.values = seed;
  while (T.values.size() <= upto) {
    mpz_class s = 0;
    for (int i = 1; i <= m; ++i) s += T.values[T.values.size() - static_cast<std::size_t>(i)];
    T.values.push_back(s);
  }
  return T;
}

// Seeds, recurrence and |phi^k(0)| = T_{k+m} against the materialized words.
TaskResult recurrence_check(const RunConfig& c) {
  TaskResult t{"recurrence", true, false, "m = 2..8, k <= 14"};
  for (int m = 2; m <= 8; ++m) {
    MBonacciSequence T = mbonacci_numbers(MParam(m), 40);
    if (c.inject_fault == "t-seed") {
      std::vector<mpz_class> seed(static_cast<std::size_t>(m), 0);
      seed.back() = 2;
      T = seeded_numbers(m, 40, seed);
    }
    for (int i = 0; i < m; ++i)
      if (T[static_cast<std::size_t>(i)] != (i == m - 1 ? 1 : 0)) {
        t.passed = false;
        t.detail = "m=" + std::to_string(m) + ": seed T_" + std::to_string(i) + " = " + T[static_cast<std::size_t>(i)].get_str();
        return t;
      }
    LetterWord w(MParam(m), {0});
    for (int k = 0; k <= 14; ++k) {
      if (mpz_class(static_cast<unsigned long>(w.size())) != T[static_cast<std::size_t>(k + m)]) {
        t.passed = false;
        t.detail = "m=" + std::to_string(m) + ": |phi^" + std::to_string(k) + "(0)| != T_" + std::to_string(k + m);
        return t;
      }
      w = apply_substitution(w);
    }
  }
  return t;
}

TaskResult guarded(const std::string& name, const std::function<TaskResult()>& body) {
  try {
    TaskResult t = body();
    t.name = name;
    return t;
  } catch (const PrecisionError& e) {
    return {name, false, true, e.what()};
  } catch (const std::exception& e) {
    return {name, false, false, e.what()};
  }
}

}  // namespace

ReportBundle cmd_verify_all(const RunConfig& c) {
  ReportBundle b = start(c, "verify-all");
  std::vector<std::pair<std::string, std::function<TaskResult()>>> checks;

  checks.emplace_back("recurrence", [&] { return recurrence_check(c); });
  checks.emplace_back("substitution matrix", [] {
    for (int m = 2; m <= 6; ++m) {
      const SubstitutionMatrix M{MParam(m)};
      const LetterWord u = fixed_point_prefix(MParam(m), 3000);
      for (std::size_t start = 0; start < 2900; start += 97) {
        const LetterWord f = u.substr(start, 1 + start % 50);
        if (parikh(apply_substitution(f)) != M.apply(parikh(f)))
          return TaskResult{"", false, false, "m=" + std::to_string(m) + ", f at " + std::to_string(start)};
      }
    }
    return TaskResult{"", true, false, "Parikh(phi(f)) = M Parikh(f) for m = 2..6"};
  });
  checks.emplace_back("prefix decomposition", [] {
    for (int m = 2; m <= 6; ++m) {
      const LetterWord u = fixed_point_prefix(MParam(m), 2000);
      for (std::uint64_t n = 0; n <= 2000; ++n)
        if (!(reconstruct(MParam(m), decompose_prefix(MParam(m), n)) == u.substr(0, n)))
          return TaskResult{"", false, false, "m=" + std::to_string(m) + ", n=" + std::to_string(n)};
    }
    return TaskResult{"", true, false, "u[n] rebuilt for n <= 2000, m = 2..6"};
  });
  checks.emplace_back("root lemmas", [&] {
    RunConfig rc = c;
    rc.m_lo = 2;
    rc.m_hi = 16;
    const ReportBundle r = cmd_roots(rc);
    for (const auto& t : r.tasks)
      if (!t.passed) return TaskResult{"", false, t.precision_failure, t.name + ": " + t.detail};
    return TaskResult{"", true, false, "m = 2..16"};
  });
  checks.emplace_back("soundness sandwich", [&] {
    for (int mv = 2; mv <= 6; ++mv) {
      const MParam m(mv);
      const SpectralSet roots = conjugate_enclosures(m, c.root_tol);
      std::vector<std::size_t> lengths;
      for (std::size_t L = 1; L <= 300; ++L) lengths.push_back(L);
      std::vector<int> letters;
      for (int a = 0; a < mv; ++a) letters.push_back(a);
      const SpreadTable table = brute_force_spreads(m, letters, lengths, 100000);
      for (int a = 0; a < mv; ++a) {
        BetaContext ctx(m, c.beta_bits);
        const BoundCertificate cert = certify_c_a_bound(m, a, ctx, roots);
        if (static_cast<long>(table.max_spread(a)) > cert.bound)
          return TaskResult{"", false, false, "m=" + std::to_string(mv) + " a=" + std::to_string(a) + ": spread above bound"};
        const DiscrepancyExtrema ext = discrepancy_extrema(m, a, 100000, ctx);
        if (ext.spread.upper() > total_upper(cert, ctx))
          return TaskResult{"", false, false, "m=" + std::to_string(mv) + " a=" + std::to_string(a) + ": extrema above head + tail"};
      }
    }
    return TaskResult{"", true, false, "m = 2..6, L <= 300, N = 1e5"};
  });
  checks.emplace_back("closed head sums", [&] {
    for (int mv = 4; mv <= 24; ++mv) {
      BetaContext ctx(MParam(mv), c.beta_bits);
      const ClosedHeadSum h = closed_head_sum(MParam(mv), ctx);
      if (!h.matches_direct || !h.below_five_quarters)
        return TaskResult{"", false, false, "m=" + std::to_string(mv)};
    }
    return TaskResult{"", true, false, "m = 4..24 below 5/4"};
  });
  checks.emplace_back("analytic tails", [&] {
    for (int mv : {4, 8, 12, 16}) {
      const AnalyticTailCheck t = analytic_tail_check(MParam(mv), conjugate_enclosures(MParam(mv), c.root_tol));
      if (!t.passed) return TaskResult{"", false, false, "m=" + std::to_string(mv)};
    }
    return TaskResult{"", true, false, "m = 4, 8, 12, 16"};
  });
  checks.emplace_back("quadrature", [&] {
    const QuadratureResult coarse = quadrature_A(mpq_class(1, 100));
    const QuadratureResult fine = quadrature_A(c.tol);
    const bool nested = fine.value.subset_of(coarse.value);
    const bool inside = mpfr_cmp_d(fine.value.lo(), 0.9) > 0 && mpfr_cmp_d(fine.value.hi(), 0.91) < 0;
    return TaskResult{"", nested && inside, false, "A = " + fine.value.to_string(10)};
  });
  checks.emplace_back("derivative maxima", [] {
    std::string detail;
    bool ok = true;
    for (const auto& d : derivative_max_checks()) {
      ok = ok && d.passed;
      detail += d.name + " " + fixed(d.bound, 6) + " < " + fixed(d.claim, 3) + "; ";
    }
    return TaskResult{"", ok, false, detail};
  });
  checks.emplace_back("riemann sums", [&] {
    const QuadratureResult A = quadrature_A(c.tol);
    for (int mv : {4, 8, 16}) {
      const RiemannCheck r = riemann_lemma_checks(MParam(mv), conjugate_enclosures(MParam(mv), c.root_tol), A);
      if (!r.passed) return TaskResult{"", false, false, "m=" + std::to_string(mv) + ": " + r.detail};
    }
    return TaskResult{"", true, false, "m = 4, 8, 16"};
  });
  checks.emplace_back("lift identities", [] {
    const CheckResult r = lift_letter_identity_check(MParam(4), 200);
    return TaskResult{"", r.passed, false, r.detail};
  });
  checks.emplace_back("witness recipes", [] {
    for (const auto& recipe : published_witness_recipes(MParam(4))) {
      const WitnessReport rep = compose_witness(recipe);
      if (!rep.quotient_valid || !rep.factor_index) return TaskResult{"", false, false, recipe.name};
    }
    return TaskResult{"", true, false, "m = 4 recipes are factors"};
  });
  checks.emplace_back("short prefix rejected", [&] {
    RunConfig bad = c;
    bad.m_lo = bad.m_hi = 3;
    bad.lengths = {500};
    bad.prefix_len = 100;
    try {
      (void)cmd_brute(bad);
    } catch (const ConfigError&) {
      return TaskResult{"", true, false, "ConfigError before scanning"};
    }
    return TaskResult{"", false, false, "short prefix accepted"};
  });

  std::vector<TaskResult> results(checks.size());
  Stopwatch clock;
  parallel_for(checks.size(), [&](std::size_t i) { results[i] = guarded(checks[i].first, checks[i].second); });
  b.timing.emplace_back("checks", clock.seconds());

  Table t{"checks", {"check", "status", "detail"}, {}};
  for (const auto& r : results) {
    t.rows.push_back({r.name, r.passed ? "pass" : "FAIL", r.detail});
    b.tasks.push_back(r);
  }
  b.tables.push_back(std::move(t));
  return b;
}

ReportBundle run_command(const RunConfig& c) {
  if (c.command == "bounds") return cmd_bounds(c);
  if (c.command == "table12") return cmd_table12(c);
  if (c.command == "brute") return cmd_brute(c);
  if (c.command == "roots") return cmd_roots(c);
  if (c.command == "global") return cmd_global(c);
  if (c.command == "witness") return cmd_witness(c);
  if (c.command == "verify-all") return cmd_verify_all(c);
  throw ConfigError("unknown command '" + c.command + "'");
}

BoundsGrid parse_bounds_markdown(std::string_view text) {
  BoundsGrid grid;
  std::istringstream in{std::string(text)};
  std::string line;
  bool in_bounds = false;
  while (std::getline(in, line)) {
    if (line.rfind("## ", 0) == 0) {
      in_bounds = line == "## bounds";
      continue;
    }
    if (!in_bounds || line.empty() || line[0] != '|') continue;
    std::vector<std::string> cells;
    std::istringstream ls(line.substr(1));
    std::string cell;
    while (std::getline(ls, cell, '|')) {
      const auto b = cell.find_first_not_of(' ');
      const auto e = cell.find_last_not_of(' ');
      cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    if (cells.empty() || cells[0] == "m" || cells[0].rfind("---", 0) == 0) continue;
    const int m = std::stoi(cells[0]);
    auto& row = grid[m];
    for (std::size_t k = 1; k < cells.size(); ++k) {
      if (cells[k] == "×")
        row.push_back(std::nullopt);
      else if (cells[k] == "FAIL")
        throw ConsistencyError("bounds grid contains a failed cell at m = " + std::to_string(m));
      else
        row.push_back(std::stol(cells[k]));
    }
  }
  return grid;
}

}  // namespace mbonacci
