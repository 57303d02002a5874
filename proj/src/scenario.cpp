#include "ultragram/scenario.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "ultragram/error.hpp"

namespace ultragram {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ParseError, where + ": " + what);
}

const Json& require(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) bad(where, "missing \"" + key + "\"");
  return obj.at(key);
}

std::string as_text(const Json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  bad(where, "expected a string or integer, got " + v.dump());
}

std::size_t as_count(const Json& v, const std::string& where) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    bad(where, "expected a non-negative integer, got " + v.dump());
  }
  return v.get<std::size_t>();
}

OrderedGroup parse_group(const std::string& text) {
  if (text == "Z") return OrderedGroup::integers();
  if (text == "Q") return OrderedGroup::rationals();
  if (text.starts_with("Z^") && text.ends_with("_lex")) {
    const std::string n = text.substr(2, text.size() - 6);
    if (!n.empty() && std::all_of(n.begin(), n.end(), ::isdigit)) {
      const auto rank = std::stoul(n);
      if (rank >= 1 && rank <= 8) return OrderedGroup::lex(rank);
    }
  }
  throw Error(ErrorCode::UnknownName, "unknown value group \"" + text + "\" (expected Z, Q or Z^n_lex)");
}

ResidueField parse_field(const std::string& text) {
  if (text == "Q") return ResidueField::rationals();
  if (text.size() >= 2 && text[0] == 'F') {
    const bool functions = text.ends_with("(s)");
    const std::string digits = text.substr(1, text.size() - 1 - (functions ? 3 : 0));
    if (!digits.empty() && digits.size() < 10 && std::all_of(digits.begin(), digits.end(), ::isdigit)) {
      const auto p = std::stoull(digits);
      return functions ? ResidueField::rational_functions(p) : ResidueField::prime(p);
    }
  }
  throw Error(ErrorCode::UnknownName, "unknown field \"" + text + "\" (expected Q, Fp or Fp(s))");
}

// Descriptor objects {"group":"Z^n_lex","n":2} and {"field":"Fp","p":3}, or the short strings.
OrderedGroup group_descriptor(const Json& d, const std::string& where) {
  if (!d.is_object()) return parse_group(as_text(d, where));
  const std::string g = as_text(require(d, "group", where), where);
  if (g == "Z^n_lex") return parse_group("Z^" + std::to_string(as_count(require(d, "n", where), where)) + "_lex");
  return parse_group(g);
}

ResidueField field_descriptor(const Json& d, const std::string& where) {
  if (!d.is_object()) return parse_field(as_text(d, where));
  const std::string f = as_text(require(d, "field", where), where);
  if (f == "Fp" || f == "Fp(s)") {
    const std::string p = std::to_string(as_count(require(d, "p", where), where));
    return parse_field(f == "Fp" ? "F" + p : "F" + p + "(s)");
  }
  return parse_field(f);
}

Rational coordinate(const std::string& text, std::optional<std::size_t> index, const std::string& where) {
  if (!index && text.find('i') != std::string::npos) bad(where, "index variable i outside a template");
  return evaluate_index_expression(text, index.value_or(0));
}

FieldElement parse_coefficient(const ResidueField& field, const Json& v, const std::string& where) {
  return field.parse(as_text(v, where));
}

const std::set<std::string>& known_ops() {
  static const std::set<std::string> ops{"independence", "normalize",      "check_normalized", "residue_profile",
                                         "nearest_point", "bounded_distance", "orthogonalize",  "analyze_extension",
                                         "immediacy",    "approximate",    "exchange",         "relative_basis",
                                         "sample_min_equality"};
  return ops;
}

void require_names(const ScenarioContext& ctx, const Json& task, const std::string& key, bool list, bool optional,
                   const std::string& where) {
  if (!task.contains(key)) {
    if (optional) return;
    bad(where, "missing \"" + key + "\"");
  }
  auto check = [&](const Json& v) {
    if (!v.is_string()) bad(where, "\"" + key + "\" must name elements");
    if (!ctx.elements.contains(v.get<std::string>())) {
      throw Error(ErrorCode::UnknownName, where + ": unknown element \"" + v.get<std::string>() + "\"");
    }
  };
  const Json& v = task.at(key);
  if (!list) {
    check(v);
    return;
  }
  if (!v.is_array()) bad(where, "\"" + key + "\" must be a list");
  for (const auto& x : v) check(x);
}

void validate_task(const ScenarioContext& ctx, const Json& task, std::size_t k) {
  const std::string where = "tasks[" + std::to_string(k) + "]";
  if (!task.is_object()) bad(where, "task must be an object");
  const std::string op = as_text(require(task, "op", where), where);
  if (!known_ops().contains(op)) throw Error(ErrorCode::UnknownName, where + ": unknown op \"" + op + "\"");
  if (op == "independence" || op == "normalize" || op == "check_normalized" || op == "sample_min_equality") {
    require_names(ctx, task, "family", true, false, where);
    require_names(ctx, task, "over", true, true, where);
  } else if (op == "residue_profile") {
    require_names(ctx, task, "family", true, false, where);
    require_names(ctx, task, "target", false, false, where);
  } else if (op == "nearest_point") {
    require_names(ctx, task, "target", false, false, where);
    if (task.contains("stream")) {
      const Json& s = task.at("stream");
      require(s, "template", where + ".stream");
      (void)as_count(require(s, "from", where + ".stream"), where + ".stream.from");
      (void)build_series(ctx, s.at("template"), as_count(s.at("from"), where));
    } else {
      require_names(ctx, task, "subspace", true, false, where);
    }
  } else if (op == "bounded_distance") {
    require_names(ctx, task, "target", false, false, where);
    require_names(ctx, task, "subspace", true, false, where);
  } else if (op == "orthogonalize" || op == "analyze_extension") {
    require_names(ctx, task, "generators", true, false, where);
    if (task.contains("mode")) {
      const std::string mode = as_text(task.at("mode"), where);
      if (mode != "field" && mode != "span") bad(where, "mode must be \"field\" or \"span\"");
    }
  } else if (op == "immediacy") {
    require_names(ctx, task, "probe", false, false, where);
  } else if (op == "approximate") {
    require_names(ctx, task, "u", true, false, where);
    const Json& rows = require(task, "coefficients", where);
    if (!rows.is_array() || rows.size() != task.at("u").size()) bad(where, "coefficients must be a square matrix");
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != rows.size()) bad(where, "coefficients must be a square matrix");
      for (const auto& name : row) {
        if (!name.is_string() || !ctx.elements.contains(name.get<std::string>())) {
          throw Error(ErrorCode::UnknownName, where + ": unknown element " + name.dump());
        }
      }
    }
  } else if (op == "exchange") {
    require_names(ctx, task, "basis", true, false, where);
    require_names(ctx, task, "over", true, true, where);
    require_names(ctx, task, "x", false, false, where);
  } else if (op == "relative_basis") {
    require_names(ctx, task, "basis", true, false, where);
    require_names(ctx, task, "over", true, true, where);
    require_names(ctx, task, "generators", true, false, where);
  }
}

}  // namespace

// --- Exponents and series -------------------------------------------------------

GroupElement parse_exponent(const OrderedGroup& group, const Json& spec, std::optional<std::size_t> index) {
  const std::string where = "exponent " + spec.dump();
  std::vector<std::string> parts;
  if (spec.is_array()) {
    for (const auto& c : spec) parts.push_back(as_text(c, where));
  } else {
    std::string text = as_text(spec, where);
    if (!text.empty() && text.front() == '(') {
      if (text.back() != ')') bad(where, "unbalanced parentheses");
      text = text.substr(1, text.size() - 2);
      int depth = 0;
      std::string cur;
      for (char ch : text) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (ch == ',' && depth == 0) {
          parts.push_back(cur);
          cur.clear();
        } else {
          cur += ch;
        }
      }
      parts.push_back(cur);
    } else {
      parts.push_back(text);
    }
  }
  if (parts.size() != group.rank()) {
    bad(where, "expected " + std::to_string(group.rank()) + " coordinate(s) for " + group.name());
  }
  std::vector<Rational> coords;
  for (const auto& p : parts) coords.push_back(coordinate(p, index, where));
  try {
    return group.element(std::move(coords));
  } catch (const Error& e) {
    bad(where, e.what());
  }
}

namespace {

Series build(const ScenarioContext& ctx, const Json& spec, std::optional<std::size_t> index,
             const std::function<Series(const std::string&)>& lookup) {
  const Ambient& a = ctx.ambient;
  const std::string where = "series " + spec.dump().substr(0, 60);
  if (spec.is_string()) return lookup(spec.get<std::string>());
  if (spec.is_array()) return build(ctx, Json{{"terms", spec}}, index, lookup);
  if (!spec.is_object() || spec.size() == 0) bad(where, "expected a name or a builder object");
  auto one_of = [&](const char* key) { return spec.contains(key); };
  auto list = [&](const char* key) {
    const Json& v = spec.at(key);
    if (!v.is_array()) bad(where, std::string("\"") + key + "\" must be a list");
    std::vector<Series> out;
    for (const auto& x : v) out.push_back(build(ctx, x, index, lookup));
    return out;
  };
  if (one_of("terms")) {
    std::vector<Term> terms;
    for (const auto& t : spec.at("terms")) {
      if (!t.is_array() || t.size() != 2) bad(where, "terms are [exponent, coefficient] pairs");
      terms.push_back({parse_exponent(a.group, t[0], index), parse_coefficient(a.field, t[1], where)});
    }
    return Series::from_terms(a, std::move(terms));
  }
  if (one_of("builder")) {
    const std::string b = as_text(spec.at("builder"), where);
    if (b == "geometric") return geometric_series(a);
    if (b == "artin_schreier") return artin_schreier_series(a, as_count(require(spec, "p", where), where));
    if (b == "custom_powers") {
      const std::size_t start = spec.contains("start") ? as_count(spec.at("start"), where) : 0;
      return custom_power_series(a, as_text(require(spec, "exponents", where), where), start);
    }
    throw Error(ErrorCode::UnknownName, where + ": unknown builder \"" + b + "\"");
  }
  if (one_of("constant")) return Series::constant(a, parse_coefficient(a.field, spec.at("constant"), where));
  if (one_of("geometric")) return geometric_series(a);
  if (one_of("artin_schreier")) return artin_schreier_series(a, as_count(spec.at("artin_schreier"), where));
  if (one_of("powers")) {
    const std::size_t start = spec.contains("start") ? as_count(spec.at("start"), where) : 0;
    return custom_power_series(a, as_text(spec.at("powers"), where), start);
  }
  if (one_of("sum")) {
    Series acc = Series::zero(a);
    for (const auto& x : list("sum")) acc = acc + x;
    return acc;
  }
  if (one_of("product")) {
    Series acc = Series::constant(a, a.field.one());
    for (const auto& x : list("product")) acc = acc * x;
    return acc;
  }
  if (one_of("neg")) return -build(ctx, spec.at("neg"), index, lookup);
  if (one_of("inverse")) return invert(build(ctx, spec.at("inverse"), index, lookup), ctx.precision);
  if (one_of("scale")) {
    const FieldElement c = spec.contains("by") ? parse_coefficient(a.field, spec.at("by"), where) : a.field.one();
    const GroupElement shift = spec.contains("shift") ? parse_exponent(a.group, spec.at("shift"), index) : a.group.zero();
    return build(ctx, spec.at("scale"), index, lookup).scaled(c, shift);
  }
  if (one_of("truncate")) {
    return truncate(build(ctx, spec.at("truncate"), index, lookup),
                    parse_exponent(a.group, require(spec, "below", where), index));
  }
  throw Error(ErrorCode::UnknownName, where + ": unknown builder");
}

}  // namespace

Series build_series(const ScenarioContext& ctx, const Json& spec, std::optional<std::size_t> index) {
  return build(ctx, spec, index, [&](const std::string& name) {
    auto it = ctx.elements.find(name);
    if (it == ctx.elements.end()) throw Error(ErrorCode::UnknownName, "unknown element \"" + name + "\"");
    return it->second;
  });
}

// --- Context -------------------------------------------------------------------

ScenarioContext build_context(const Scenario& scenario, const RunOptions& options) {
  const Json& doc = scenario.doc;
  const Json& amb = require(doc, "ambient", "scenario");
  const Ambient ambient{group_descriptor(require(amb, "group", "ambient"), "ambient.group"),
                        field_descriptor(require(amb, "field", "ambient"), "ambient.field")};

  const Json& base = require(doc, "base_field", "scenario");
  const std::string kind = as_text(require(base, "kind", "base_field"), "base_field.kind");
  const ResidueField k =
      base.contains("residue") ? field_descriptor(base.at("residue"), "base_field.residue") : ambient.field.prime_subfield();
  auto make_base = [&]() {
    if (kind == "rational_functions") return SubfieldPresentation::rational_functions(ambient, k);
    if (kind == "completion") return SubfieldPresentation::completion(ambient, k);
    if (kind == "trivial") return SubfieldPresentation::trivial(ambient, k);
    throw Error(ErrorCode::UnknownName, "unknown base field kind \"" + kind + "\"");
  };

  const Json& p = require(doc, "precision", "scenario");
  Precision precision{parse_exponent(ambient.group, options.ceiling ? Json(*options.ceiling) : require(p, "ceiling", "precision")),
                      p.contains("max_terms") ? as_count(p.at("max_terms"), "precision.max_terms") : 8};
  if (p.contains("work_limit")) precision.work_limit = as_count(p.at("work_limit"), "precision.work_limit");
  if (options.max_terms) precision.max_terms = *options.max_terms;
  if (precision.max_terms == 0) bad("precision", "max_terms must be positive");
  std::size_t degree_cap = p.contains("degree_cap") ? as_count(p.at("degree_cap"), "precision.degree_cap") : 16;
  if (options.degree_cap) degree_cap = *options.degree_cap;
  if (degree_cap == 0) bad("precision", "degree_cap must be positive");

  ScenarioContext ctx{ambient, make_base(), precision, degree_cap, {}};

  // Elements may refer to each other in any order; resolve depth first.
  const Json elements = doc.contains("elements") ? doc.at("elements") : Json::object();
  if (!elements.is_object()) bad("elements", "must be an object of named series");
  std::set<std::string> active;
  std::function<Series(const std::string&)> resolve = [&](const std::string& name) -> Series {
    if (auto it = ctx.elements.find(name); it != ctx.elements.end()) return it->second;
    if (!elements.contains(name)) throw Error(ErrorCode::UnknownName, "unknown element \"" + name + "\"");
    if (!active.insert(name).second) bad("elements." + name, "cyclic definition");
    Series s = build(ctx, elements.at(name), std::nullopt, resolve);
    active.erase(name);
    ctx.elements.emplace(name, s);
    return s;
  };
  for (const auto& [name, spec] : elements.items()) resolve(name);
  return ctx;
}

// --- Parsing -------------------------------------------------------------------

std::string Scenario::name() const { return doc.value("name", std::string("unnamed")); }

std::string Scenario::echo() const { return doc.dump(2) + "\n"; }

Scenario parse_scenario(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!doc.is_object()) bad("scenario", "top level must be an object");
  static const std::set<std::string> keys{"ambient", "base_field", "description", "elements", "name", "precision", "tasks"};
  for (const auto& [key, value] : doc.items()) {
    if (!keys.contains(key)) bad("scenario", "unexpected key \"" + key + "\"");
  }
  if (doc.contains("tasks") && !doc.at("tasks").is_array()) bad("tasks", "must be a list");
  if (!doc.contains("tasks")) doc["tasks"] = Json::array();
  Scenario scenario{doc};
  const ScenarioContext ctx = build_context(scenario);
  for (std::size_t k = 0; k < doc.at("tasks").size(); ++k) validate_task(ctx, doc.at("tasks")[k], k);
  return scenario;
}

// --- JSON views ----------------------------------------------------------------

Json to_json(const GroupElement& g) { return g.to_string(); }

Json to_json(const Series& x, const Precision& prec) {
  Json out;
  Json terms = Json::array();
  bool more = false;
  try {
    WorkBudget budget(prec.work_limit);
    const auto listed = x.terms_below(prec.ceiling, prec.max_terms + 1);
    more = listed.size() > prec.max_terms;
    for (std::size_t i = 0; i < listed.size() && i < prec.max_terms; ++i) {
      terms.push_back(Json::array({to_json(listed[i].exponent), listed[i].coefficient.to_string()}));
    }
    out["text"] = x.to_string(prec.ceiling, prec.max_terms);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::PrecisionExhausted) throw;
    out["text"] = "?";
    out["incomplete"] = true;
  }
  out["terms"] = terms;
  out["more"] = more;
  return out;
}

}  // namespace ultragram
