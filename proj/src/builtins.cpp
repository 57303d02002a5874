#include <utility>

#include "ultragram/error.hpp"
#include "ultragram/scenario.hpp"

namespace ultragram {

namespace {

const std::vector<std::pair<std::string, const char*>>& table() {
  static const std::vector<std::pair<std::string, const char*>> entries{
      {"paper:fpt-y", R"json({
  "name": "paper:fpt-y",
  "description": "y = s with transcendental residue over F3; W = Span of 1, t, t^2, t^3 over trivially valued F3. ty keeps distance 1 from W.",
  "ambient": {"group": {"group": "Z"}, "field": {"field": "Fp(s)", "p": 3}},
  "base_field": {"kind": "trivial", "residue": {"field": "Fp", "p": 3}},
  "precision": {"ceiling": "20", "max_terms": 8},
  "elements": {
    "one": [["0", "1"]],
    "t": [["1", "1"]],
    "t2": [["2", "1"]],
    "t3": [["3", "1"]],
    "y": {"constant": "s"},
    "ty": [["1", "s"]]
  },
  "tasks": [
    {"op": "independence", "family": ["one", "y"]},
    {"op": "independence", "family": ["ty"], "over": ["one", "t", "t2", "t3"]},
    {"op": "nearest_point", "target": "ty", "subspace": ["one", "t", "t2", "t3"]},
    {"op": "bounded_distance", "target": "ty", "subspace": ["one", "t", "t2", "t3"]},
    {"op": "immediacy", "probe": "y"}
  ]
})json"},
      {"paper:ti-minus-ti1", R"json({
  "name": "paper:ti-minus-ti1",
  "description": "Trivially valued Q; W spanned by t^i - t^(i+1). The distance from t grows with the number of generators.",
  "ambient": {"group": {"group": "Z"}, "field": {"field": "Q"}},
  "base_field": {"kind": "trivial"},
  "precision": {"ceiling": "40", "max_terms": 6},
  "elements": {
    "t": [["1", "1"]],
    "w1": [["1", "1"], ["2", "-1"]],
    "w2": [["2", "1"], ["3", "-1"]],
    "w3": [["3", "1"], ["4", "-1"]],
    "w4": [["4", "1"], ["5", "-1"]]
  },
  "tasks": [
    {"op": "independence", "family": ["w1", "w2", "w3", "w4"]},
    {"op": "nearest_point", "target": "t", "subspace": ["w1", "w2", "w3", "w4"]},
    {"op": "nearest_point", "target": "t", "stream": {"template": [["i", "1"], ["i+1", "-1"]], "from": 1}}
  ]
})json"},
      {"paper:notCA", R"json({
  "name": "paper:notCA",
  "description": "Z^2 lex over F3, K = F3(t); x = sum t^(3^i) + t^(1,0). v(x - K) has no maximum.",
  "ambient": {"group": {"group": "Z^n_lex", "n": 2}, "field": {"field": "Fp", "p": 3}},
  "base_field": {"kind": "rational_functions"},
  "precision": {"ceiling": "(2,0)", "max_terms": 5},
  "elements": {
    "one": [["(0,0)", "1"]],
    "x": {"sum": [{"builder": "artin_schreier", "p": 3}, [["(1,0)", "1"]]]}
  },
  "tasks": [
    {"op": "orthogonalize", "generators": ["one", "x"]},
    {"op": "independence", "family": ["one", "x"]}
  ]
})json"},
      {"paper:sqrt-t", R"json({
  "name": "paper:sqrt-t",
  "description": "F5(t)(t^(1/2)) inside F5((t^Q)): ramified of degree 2, defectless.",
  "ambient": {"group": {"group": "Q"}, "field": {"field": "Fp", "p": 5}},
  "base_field": {"kind": "rational_functions"},
  "precision": {"ceiling": "20", "max_terms": 8},
  "elements": {
    "one": [["0", "1"]],
    "r": [["1/2", "1"]],
    "r2": [["1/2", "2"]],
    "three": {"constant": "3"}
  },
  "tasks": [
    {"op": "analyze_extension", "generators": ["r"]},
    {"op": "independence", "family": ["one", "r"]},
    {"op": "normalize", "family": ["r2", "three"]},
    {"op": "check_normalized", "family": ["r2", "three"]},
    {"op": "orthogonalize", "generators": ["one", "r"]},
    {"op": "immediacy", "probe": "r"},
    {"op": "sample_min_equality", "family": ["one", "r"], "samples": 25}
  ]
})json"},
      {"paper:e2f2", R"json({
  "name": "paper:e2f2",
  "description": "Span of 1, r, y, ry with r = t^(1/2) and y = s over K = F5(t): e = 2, f = 2.",
  "ambient": {"group": {"group": "Q"}, "field": {"field": "Fp(s)", "p": 5}},
  "base_field": {"kind": "rational_functions", "residue": {"field": "Fp", "p": 5}},
  "precision": {"ceiling": "10", "max_terms": 8},
  "elements": {
    "one": [["0", "1"]],
    "r": [["1/2", "1"]],
    "y": {"constant": "s"},
    "ry": {"product": ["r", "y"]}
  },
  "tasks": [
    {"op": "analyze_extension", "generators": ["one", "r", "y", "ry"], "mode": "span"},
    {"op": "residue_profile", "family": ["one", "y", "r"], "target": "one"}
  ]
})json"},
      {"paper:artin-schreier", R"json({
  "name": "paper:artin-schreier",
  "description": "x = sum t^(3^i) over F3(t) in F3((t)) is immediate; no valuation basis of K(x) is found.",
  "ambient": {"group": {"group": "Z"}, "field": {"field": "Fp", "p": 3}},
  "base_field": {"kind": "rational_functions"},
  "precision": {"ceiling": "1000", "max_terms": 5, "degree_cap": 5},
  "elements": {
    "one": [["0", "1"]],
    "x": {"builder": "artin_schreier", "p": 3}
  },
  "tasks": [
    {"op": "analyze_extension", "generators": ["x"]},
    {"op": "immediacy", "probe": "x"},
    {"op": "nearest_point", "target": "x", "subspace": ["one"]}
  ]
})json"},
      {"paper:cofinal-approx", R"json({
  "name": "paper:cofinal-approx",
  "description": "Truncating completion coefficients into F3(t): u = (1, t^(11/2) + x + 1/(1-t)), b' = (1, u2 - (x + 1/(1-t))).",
  "ambient": {"group": {"group": "Q"}, "field": {"field": "Fp", "p": 3}},
  "base_field": {"kind": "rational_functions"},
  "precision": {"ceiling": "40", "max_terms": 8},
  "elements": {
    "zero": {"sum": []},
    "one": [["0", "1"]],
    "x": {"builder": "artin_schreier", "p": 3},
    "g": {"builder": "geometric"},
    "u2": {"sum": [[["11/2", "1"]], "x", "g"]},
    "c21": {"neg": {"sum": ["x", "g"]}}
  },
  "tasks": [
    {"op": "approximate", "u": ["one", "u2"], "coefficients": [["one", "zero"], ["c21", "one"]]}
  ]
})json"},
      {"paper:subext", R"json({
  "name": "paper:subext",
  "description": "Basis exchange and relative bases in a trivially valued F5 setting.",
  "ambient": {"group": {"group": "Q"}, "field": {"field": "Fp", "p": 5}},
  "base_field": {"kind": "trivial"},
  "precision": {"ceiling": "10", "max_terms": 8},
  "elements": {
    "one": [["0", "1"]],
    "r": [["1/2", "1"]],
    "t": [["1", "1"]],
    "one_plus_t": [["0", "1"], ["1", "1"]]
  },
  "tasks": [
    {"op": "exchange", "basis": ["one", "t"], "x": "one_plus_t"},
    {"op": "exchange", "basis": ["one", "t"], "x": "t"},
    {"op": "relative_basis", "basis": ["one", "r", "t"], "generators": ["one_plus_t"]},
    {"op": "relative_basis", "basis": ["one", "r", "t"], "generators": ["one", "r", "t"]}
  ]
})json"},
  };
  return entries;
}

}  // namespace

std::vector<std::string> builtin_names() {
  std::vector<std::string> out;
  for (const auto& [name, text] : table()) out.push_back(name);
  return out;
}

Scenario builtin_scenario(const std::string& name) {
  for (const auto& [key, text] : table()) {
    if (key == name) return parse_scenario(text);
  }
  throw Error(ErrorCode::UnknownName, "unknown built-in scenario \"" + name + "\"");
}

}  // namespace ultragram
