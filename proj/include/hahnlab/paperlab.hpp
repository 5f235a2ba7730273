#pragma once

#include <string>
#include <vector>

#include "hahnlab/series.hpp"

namespace hahnlab {

// Knobs shared by every scenario run.  prime selects the residue
// characteristic of the construction, levels the depth of each sampled
// witness family, budget the per-stream term budget.  The pinned expected
// strings of a few counting checks assume the default prime; running a
// scenario at another prime keeps every formula-derived expectation but
// reports those counts as honest mismatches.
struct ScenarioConfig {
  int prime = 3;
  int levels = 5;     // clamped to [2, 6]
  long budget = 10000;  // term budget per materialized stream
};

enum class CheckStatus { pass, fail, inconclusive };

// One verified claim.  expected and computed are rendered strings compared
// verbatim, so a report is self-contained evidence: the reader sees exactly
// what the kernel produced next to what the registry pinned.
struct CheckResult {
  std::string id;
  std::string description;
  std::string paper_ref;
  std::string expected;
  std::string computed;
  CheckStatus status = CheckStatus::fail;
};

struct Report {
  std::string scenario;
  ScenarioConfig config;
  std::vector<CheckResult> checks;
};

// Registered scenario ids, in listing order.
std::vector<std::string> scenario_ids();

// One-line summary for the listing command.  Throws std::invalid_argument
// for unknown ids.
std::string scenario_blurb(const std::string& id);

// Runs every check of the scenario.  Unknown ids throw
// std::invalid_argument.  Individual check failures never throw: a budget
// or refinement exhaustion inside a check marks it inconclusive, any other
// error marks it failed, and the report carries the message.
Report run_scenario(const std::string& id, const ScenarioConfig& config);

// format is "json" (stable key order, deterministic rendering, schema
// version 1) or "text" (one status line per check plus a summary).
std::string emit_report(const Report& r, const std::string& format);

// 0 when every check passed; 1 when any check failed; 2 when the only
// non-passes are inconclusive.
int report_exit_code(const Report& r);

// Series literal parser.  Grammar: terms joined by '+' or '-', each term
// either "[coef '*'] 't^(' exponent ')'" or a named constructor of the
// scenario (a(l), b(l), c(l), d(l), alpha, beta, theta where defined).
// Coefficients are integers or 'u'; exponents are sums of rationals and
// parenthesized rational multiples of basis symbols, "(-1/3)*pi" style.
// Malformed input throws ParseError with a byte offset.
HahnSeries parse_series_literal(const std::string& text, const std::string& scenario_id,
                                const ScenarioConfig& config);

}  // namespace hahnlab
