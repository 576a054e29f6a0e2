#include <doctest.h>

#include <nlohmann/json.hpp>

#include "mbonacci/error.hpp"
#include "mbonacci/report.hpp"

using namespace mbonacci;

namespace {

RunConfig config(const std::string& command, int lo, int hi) {
  RunConfig c;
  c.command = command;
  c.m_lo = lo;
  c.m_hi = hi;
  return c;
}

}  // namespace

TEST_CASE("format names") {
  CHECK(parse_format("csv") == OutputFormat::csv);
  CHECK(parse_format("json") == OutputFormat::json);
  CHECK(parse_format("md") == OutputFormat::md);
  CHECK(to_string(OutputFormat::md) == "md");
  CHECK_THROWS_AS(parse_format("xml"), ConfigError);
}

TEST_CASE("configuration validation") {
  CHECK_NOTHROW(config("bounds", 2, 4).validate());
  CHECK_THROWS_AS(config("bounds", 1, 4).validate(), ConfigError);
  CHECK_THROWS_AS(config("bounds", 5, 4).validate(), ConfigError);
  RunConfig c = config("bounds", 2, 3);
  c.tol = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  RunConfig f = config("verify-all", 4, 4);
  f.inject_fault = "nonsense";
  CHECK_THROWS_AS(f.validate(), ConfigError);
  CHECK_THROWS_AS(run_command(config("nonsense", 4, 4)), ConfigError);
  CHECK_THROWS_AS(run_command(config("global", 4, 4)), ConfigError);
}

TEST_CASE("identical configurations render identical bytes") {
  for (const auto f : {OutputFormat::csv, OutputFormat::json, OutputFormat::md}) {
    RunConfig c = config("bounds", 2, 6);
    c.format = f;
    CHECK(render(run_command(c), f) == render(run_command(c), f));
  }
}

TEST_CASE("markdown bounds grid round trip") {
  const std::vector<std::vector<long>> expected = {{1, 1}, {2, 2, 2}, {2, 3, 3, 3}, {2, 3, 3, 3, 3}, {3, 3, 4, 4, 4, 4}};
  const ReportBundle b = run_command(config("bounds", 2, 6));
  CHECK(b.passed());
  CHECK(exit_code(b) == 0);
  const BoundsGrid grid = parse_bounds_markdown(render_markdown(b));
  REQUIRE(grid.size() == expected.size());
  for (int m = 2; m <= 6; ++m) {
    const auto& row = grid.at(m);
    for (std::size_t a = 0; a < row.size(); ++a) {
      if (a < static_cast<std::size_t>(m))
        CHECK(row[a] == std::optional<long>(expected[static_cast<std::size_t>(m - 2)][a]));
      else
        CHECK_FALSE(row[a].has_value());
    }
  }
}

TEST_CASE("failed cells are rejected by the parser") {
  const std::string md = "## bounds\n\n| m | a=0 |\n|---|---|\n| 2 | FAIL |\n";
  CHECK_THROWS_AS(parse_bounds_markdown(md), ConsistencyError);
}

TEST_CASE("json bundle shape") {
  RunConfig c = config("table12", 4, 4);
  const auto j = nlohmann::json::parse(render_json(run_command(c)));
  CHECK(j.at("version") == kToolVersion);
  CHECK(j.at("command") == "table12");
  CHECK(j.at("config").at("m") == nlohmann::json::array({4, 4}));
  CHECK(j.contains("results"));
  CHECK(j.contains("tasks"));
  CHECK_FALSE(j.contains("timing"));
}

TEST_CASE("exit codes") {
  ReportBundle b;
  CHECK(exit_code(b) == 0);
  b.tasks.push_back({"x", false, false, "failed"});
  CHECK(exit_code(b) == 1);
  b.tasks.back().precision_failure = true;
  CHECK(exit_code(b) == 3);
}

TEST_CASE("short prefixes fail before scanning") {
  RunConfig c = config("brute", 4, 4);
  c.prefix_len = 100;
  c.lengths = {200};
  CHECK_THROWS_AS(run_command(c), ConfigError);
}

TEST_CASE("injected recurrence fault is reported") {
  RunConfig c = config("verify-all", 4, 4);
  c.inject_fault = "t-seed";
  const ReportBundle b = run_command(c);
  CHECK_FALSE(b.passed());
  CHECK(exit_code(b) == 1);
}
