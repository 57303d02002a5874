#pragma once

// Declarative scenarios: a JSON document naming an ambient field, a base
// field K, a precision, named series and an ordered task list. Running a
// scenario yields a report document with sorted keys and exact values.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>  // vendored nlohmann/json

#include "ultragram/presentation.hpp"
#include "ultragram/series.hpp"

namespace ultragram {

using Json = nlohmann::json;

struct Scenario {
  Json doc;  // validated, canonical

  std::string name() const;
  /// Canonical text: sorted keys, two-space indent, trailing newline.
  std::string echo() const;
};

/// Parses and validates scenario text. ParseError carries line and column;
/// UnknownName and UnsupportedCombination report the offending entry.
Scenario parse_scenario(const std::string& text);

/// Built-in scenarios keyed "paper:<name>".
std::vector<std::string> builtin_names();
/// Throws UnknownName.
Scenario builtin_scenario(const std::string& name);

struct RunOptions {
  std::optional<std::string> ceiling;  // overrides precision.ceiling
  std::optional<std::size_t> max_terms;
  std::optional<std::size_t> degree_cap;
  std::uint64_t seed = 1;
  bool verify = false;
};

struct TaskTiming {
  std::string op;
  double milliseconds = 0;
};

struct Report {
  Json doc;
  std::vector<TaskTiming> timings;
  bool verified = true;  // every re-check passed (always true without --verify)
};

/// Executes every task in order. Task failures are recorded in the report.
Report run_scenario(const Scenario& scenario, const RunOptions& options = {});

enum class ReportFormat { Text, Structured };
std::string emit(const Report& report, ReportFormat format);

// --- Pieces shared with the runner and tests ----------------------------------

/// The objects a scenario describes.
struct ScenarioContext {
  Ambient ambient;
  SubfieldPresentation base;
  Precision precision;
  std::size_t degree_cap = 16;
  std::map<std::string, Series> elements;
};

ScenarioContext build_context(const Scenario& scenario, const RunOptions& options = {});

/// Group elements from "3", "-1/2", "(1,0)" or an array of coordinate strings;
/// to_json writes the parenthesized form back.
GroupElement parse_exponent(const OrderedGroup& group, const Json& spec, std::optional<std::size_t> index = {});
/// Series from a JSON builder description; `index` binds i inside templates.
Series build_series(const ScenarioContext& ctx, const Json& spec, std::optional<std::size_t> index = {});

Json to_json(const GroupElement& g);
Json to_json(const Series& x, const Precision& prec);

}  // namespace ultragram
