#include <algorithm>
#include <chrono>
#include <random>
#include <sstream>

#include "ultragram/error.hpp"
#include "ultragram/extension.hpp"
#include "ultragram/scenario.hpp"

namespace ultragram {

namespace {

// --- Small JSON views ----------------------------------------------------------

Json valuation_json(const Valuation& v) {
  Json out;
  if (v.is_value()) {
    out["value"] = to_json(v.value);
  } else {
    out["zero_up_to"] = to_json(v.value);
    out["exhausted"] = v.exhausted;
    if (v.out_of_work) out["out_of_work"] = true;
  }
  return out;
}

Json values_json(const std::vector<GroupElement>& values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(to_json(v));
  return out;
}

Json family_json(const Family& f, const Precision& prec) {
  Json out = Json::array();
  for (const auto& x : f) out.push_back(to_json(x, prec));
  return out;
}

const char* outcome_name(IndependenceVerdict::Outcome o) {
  switch (o) {
    case IndependenceVerdict::Outcome::Independent: return "Independent";
    case IndependenceVerdict::Outcome::Dependent: return "Dependent";
    case IndependenceVerdict::Outcome::Inconclusive: return "Inconclusive";
  }
  return "?";
}

const char* kind_name(NearestPointResult::Kind k) {
  switch (k) {
    case NearestPointResult::Kind::Value: return "Value";
    case NearestPointResult::Kind::ExactMember: return "ExactMember";
    case NearestPointResult::Kind::Unbounded: return "Unbounded";
    case NearestPointResult::Kind::PrecisionExhausted: return "PrecisionExhausted";
  }
  return "?";
}

Json verdict_json(const IndependenceVerdict& v, const Precision& prec) {
  Json out;
  out["outcome"] = outcome_name(v.outcome);
  out["values"] = values_json(v.values);
  if (v.witness) {
    const Witness& w = *v.witness;
    out["witness"] = {{"claim", w.claim == Witness::Claim::ValueAbove ? "ValueAbove" : "ValueEquals"},
                      {"value", to_json(w.value)},
                      {"coefficients", family_json(w.coefficients, prec)},
                      {"elements", family_json(w.elements, prec)},
                      {"combination_valuation", valuation_json(valuation(w.combination(), prec))}};
  }
  if (!v.reason.empty()) out["reason"] = v.reason;
  return out;
}

Json nearest_json(const NearestPointResult& r, const Precision& prec) {
  Json out;
  out["outcome"] = kind_name(r.kind);
  if (r.value) out["value"] = to_json(*r.value);
  out["best"] = to_json(r.best, prec);
  out["coefficients"] = family_json(r.coefficients, prec);
  out["trace"] = values_json(r.trace);
  if (r.via_limit) out["via_limit"] = true;
  if (r.exact_solve) out["exact_solve"] = true;
  if (!r.note.empty()) out["note"] = r.note;
  return out;
}

// --- Re-checks for --verify ----------------------------------------------------

Series combination(const Ambient& a, const Family& coefficients, const Family& elements) {
  Series acc = Series::zero(a);
  for (std::size_t i = 0; i < elements.size() && i < coefficients.size(); ++i) acc = acc + coefficients[i] * elements[i];
  return acc;
}

bool strictly_above(const Valuation& v, const GroupElement& bound) {
  if (v.is_value()) return v.value > bound;
  return v.exhausted || (!v.out_of_work && v.value > bound);
}

bool vanishes(const Series& x, const Precision& prec) {
  const Valuation v = valuation(x, prec);
  return !v.is_value() && !v.out_of_work;
}

bool check_nearest(const SubfieldPresentation& K, const Series& b, const Family& W, const NearestPointResult& r,
                   const Precision& prec) {
  const Ambient& a = K.ambient();
  for (std::size_t k = 0; k < r.trace.size(); ++k) {
    if (k > 0 && !(r.trace[k - 1] < r.trace[k])) return false;
    if (k < r.trace_points.size()) {
      const Valuation v = valuation(b - r.trace_points[k], prec);
      if (!v.is_value() || v.value != r.trace[k]) return false;
    }
  }
  if (r.coefficients.size() == W.size() && !W.empty() && !vanishes(r.best - combination(a, r.coefficients, W), prec)) {
    return false;
  }
  switch (r.kind) {
    case NearestPointResult::Kind::Value: {
      const Valuation v = valuation(b - r.best, prec);
      return v.is_value() && r.value && v.value == *r.value;
    }
    case NearestPointResult::Kind::ExactMember:
      if (r.exact_solve) return vanishes(b - combination(a, r.coefficients, W), prec);
      return vanishes(b - r.best, prec);
    case NearestPointResult::Kind::Unbounded: return r.trace.size() >= 2;
    case NearestPointResult::Kind::PrecisionExhausted: return true;
  }
  return false;
}

bool check_verdict(const SubfieldPresentation& K, const Family& family, const IndependenceVerdict& v,
                   const Precision& prec) {
  switch (v.outcome) {
    case IndependenceVerdict::Outcome::Dependent: return v.witness && v.witness->recheck(prec);
    case IndependenceVerdict::Outcome::Independent: {
      if (family.empty()) return true;
      const NormalizedFamily n = normalize(K, family, prec);
      return check_normalized(K, n.elements, prec).pass;
    }
    case IndependenceVerdict::Outcome::Inconclusive: return true;
  }
  return false;
}

// --- Task execution ------------------------------------------------------------

struct TaskRun {
  Json out;
  bool verified = true;
};

class Runner {
 public:
  Runner(const ScenarioContext& ctx, const RunOptions& options) : ctx_(ctx), options_(options) {}

  TaskRun run(const Json& task) {
    const std::string op = task.at("op").get<std::string>();
    TaskRun r;
    r.out["op"] = op;
    try {
      WorkBudget budget(ctx_.precision.work_limit * 8);
      if (op == "independence") independence(task, r);
      else if (op == "normalize") normalize_task(task, r);
      else if (op == "check_normalized") check_task(task, r);
      else if (op == "residue_profile") profile_task(task, r);
      else if (op == "nearest_point") nearest_task(task, r);
      else if (op == "bounded_distance") bounded_task(task, r);
      else if (op == "orthogonalize") orthogonalize_task(task, r);
      else if (op == "analyze_extension") analyze_task(task, r);
      else if (op == "immediacy") immediacy_task(task, r);
      else if (op == "approximate") approximate_task(task, r);
      else if (op == "exchange") exchange_task(task, r);
      else if (op == "relative_basis") relative_task(task, r);
      else if (op == "sample_min_equality") sample_task(task, r);
    } catch (const Error& e) {
      r.out["outcome"] = "Error";
      r.out["error"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
      r.verified = true;
    }
    if (options_.verify) r.out["verified"] = r.verified;
    return r;
  }

 private:
  const Precision& prec() const { return ctx_.precision; }
  const SubfieldPresentation& K() const { return ctx_.base; }

  Family family(const Json& task, const char* key) const {
    Family out;
    if (!task.contains(key)) return out;
    for (const auto& name : task.at(key)) out.push_back(ctx_.elements.at(name.get<std::string>()));
    return out;
  }
  const Series& element(const Json& task, const char* key) const {
    return ctx_.elements.at(task.at(key).get<std::string>());
  }

  void independence(const Json& task, TaskRun& r) {
    const Family B = family(task, "family");
    const Family W = family(task, "over");
    const IndependenceVerdict v =
        task.contains("over") ? is_valuation_independent_over(K(), B, W, prec()) : is_valuation_independent(K(), B, prec());
    r.out.update(verdict_json(v, prec()));
    if (options_.verify) {
      Family all = W;
      all.insert(all.end(), B.begin(), B.end());
      r.verified = check_verdict(K(), all, v, prec());
    }
  }

  void normalize_task(const Json& task, TaskRun& r) {
    const Family B = family(task, "family");
    const NormalizedFamily n = normalize(K(), B, prec());
    r.out["outcome"] = "Normalized";
    r.out["elements"] = family_json(n.elements, prec());
    r.out["scalings"] = family_json(n.scalings, prec());
    if (options_.verify) {
      bool ok = check_normalized(K(), n.elements, prec()).pass;
      for (std::size_t i = 0; ok && i < B.size(); ++i) ok = vanishes(n.elements[i] - n.scalings[i] * B[i], prec());
      r.verified = ok;
    }
  }

  void check_task(const Json& task, TaskRun& r) {
    const NormalizationCheck c = check_normalized(K(), family(task, "family"), prec());
    r.out["outcome"] = c.pass ? "Pass" : "Fail";
    if (!c.pass) {
      r.out["condition"] = c.condition;
      r.out["indices"] = c.indices;
      r.out["detail"] = c.detail;
    }
  }

  void profile_task(const Json& task, TaskRun& r) {
    const ResidueProfile p = residue_profile(family(task, "family"), element(task, "target"), prec());
    r.out["outcome"] = "Profile";
    Json entries = Json::array();
    for (const auto& e : p.entries) entries.push_back(e.to_string());
    r.out["entries"] = entries;
  }

  Family stage_family(const Json& stream, std::size_t n) const {
    Family W;
    const std::size_t from = stream.at("from").get<std::size_t>();
    for (std::size_t i = from; i < from + n; ++i) W.push_back(build_series(ctx_, stream.at("template"), i));
    return W;
  }

  void nearest_task(const Json& task, TaskRun& r) {
    const Series& b = element(task, "target");
    if (!task.contains("stream")) {
      const Family W = family(task, "subspace");
      const NearestPointResult np = nearest_point(K(), b, W, prec());
      r.out.update(nearest_json(np, prec()));
      if (options_.verify) r.verified = check_nearest(K(), b, W, np, prec());
      return;
    }
    const Json& stream = task.at("stream");
    const auto s = nearest_point_stream(K(), b, [&](std::size_t n) { return stage_family(stream, n); }, prec());
    r.out.update(nearest_json(s.result, prec()));
    Json stages = Json::array();
    for (const auto& st : s.stages) stages.push_back(nearest_json(st, prec()));
    r.out["stages"] = stages;
    if (options_.verify) {
      bool ok = true;
      for (std::size_t k = 0; ok && k < s.stages.size(); ++k) {
        const Family W = stage_family(stream, k + 1);
        Precision inner = prec();
        inner.max_terms += W.size();
        ok = check_nearest(K(), b, W, s.stages[k], inner);
      }
      for (std::size_t k = 1; ok && k < s.result.trace.size(); ++k) ok = s.result.trace[k - 1] < s.result.trace[k];
      r.verified = ok;
    }
  }

  // Exhaustive search over all coefficient tuples from a finite trivially valued K.
  void bounded_task(const Json& task, TaskRun& r) {
    if (K().kind() != SubfieldPresentation::Kind::Trivial ||
        K().residue_subfield().kind() != ResidueField::Kind::PrimeField) {
      throw Error(ErrorCode::UnsupportedCombination, "bounded_distance needs a finite trivially valued base field");
    }
    const Series& b = element(task, "target");
    const Family W = family(task, "subspace");
    const std::uint64_t p = K().residue_subfield().characteristic();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < W.size(); ++i) {
      total *= p;
      if (total > 200000) throw Error(ErrorCode::InvalidArgument, "too many combinations to enumerate");
    }
    std::optional<Valuation> best;
    std::vector<std::uint64_t> best_digits;
    std::vector<std::uint64_t> digits(W.size(), 0);
    for (std::uint64_t m = 0; m < total; ++m) {
      std::uint64_t rest = m;
      Series a = Series::zero(ctx_.ambient);
      for (std::size_t i = 0; i < W.size(); ++i) {
        digits[i] = rest % p;
        rest /= p;
        if (digits[i]) a = a + W[i].scaled(ctx_.ambient.field.from_integer(static_cast<long>(digits[i])), ctx_.ambient.group.zero());
      }
      const Valuation v = valuation(b - a, prec());
      const bool better = !best || (best->is_value() && (!v.is_value() || v.value > best->value));
      if (better) {
        best = v;
        best_digits = digits;
      }
    }
    r.out["outcome"] = best->is_value() ? "Bounded" : "ZeroUpTo";
    r.out["combinations"] = total;
    r.out["max"] = valuation_json(*best);
    r.out["attained_by"] = best_digits;
    if (options_.verify) {
      Series a = Series::zero(ctx_.ambient);
      for (std::size_t i = 0; i < W.size(); ++i) {
        a = a + W[i].scaled(ctx_.ambient.field.from_integer(static_cast<long>(best_digits[i])), ctx_.ambient.group.zero());
      }
      const Valuation v = valuation(b - a, prec());
      r.verified = v.is_value() == best->is_value() && v.value == best->value;
    }
  }

  void orthogonalize_task(const Json& task, TaskRun& r) {
    const Family gens = family(task, "generators");
    const OrthogonalizationResult o = orthogonalize(K(), gens, prec());
    r.out["outcome"] = o.kind == OrthogonalizationResult::Kind::Basis ? "Basis" : "Obstruction";
    r.out["basis"] = family_json(o.basis, prec());
    r.out["skipped"] = o.skipped;
    if (o.obstruction_index) r.out["obstruction_index"] = *o.obstruction_index;
    if (o.obstruction) r.out["evidence"] = nearest_json(*o.obstruction, prec());
    if (!options_.verify) return;
    bool ok = o.basis.empty() || (is_valuation_independent(K(), o.basis, prec()).independent() &&
                                  check_normalized(K(), o.basis, prec()).pass);
    if (o.kind == OrthogonalizationResult::Kind::Obstruction) {
      ok = ok && check_nearest(K(), gens[*o.obstruction_index], o.basis, *o.obstruction, prec());
    } else {
      for (const auto& g : gens) {
        ok = ok && nearest_point(K(), g, o.basis, prec()).kind == NearestPointResult::Kind::ExactMember;
      }
    }
    r.verified = ok;
  }

  void analyze_task(const Json& task, TaskRun& r) {
    const Family gens = family(task, "generators");
    const ClosureMode mode = task.value("mode", std::string("field")) == "span" ? ClosureMode::Span : ClosureMode::Field;
    const ExtensionReport rep = analyze_extension(K(), gens, prec(), ctx_.degree_cap, mode);
    switch (rep.verdict) {
      case ExtensionReport::Verdict::VsDefectless: r.out["outcome"] = "VsDefectless"; break;
      case ExtensionReport::Verdict::Obstructed: r.out["outcome"] = "Obstructed"; break;
      case ExtensionReport::Verdict::Inconclusive: r.out["outcome"] = "Inconclusive"; break;
    }
    r.out["n"] = rep.n;
    r.out["basis"] = family_json(rep.closure.basis, prec());
    r.out["monomials"] = rep.closure.monomials;
    if (rep.ramification) {
      r.out["e"] = rep.ramification->e;
      r.out["f"] = rep.ramification->f;
      r.out["value_index"] = rep.ramification->value_index.to_string();
    }
    if (rep.defect_index) r.out["defect_index"] = rational_to_string(*rep.defect_index);
    if (rep.standard) {
      r.out["standard_basis"] = {{"X", family_json(rep.standard->X, prec())},
                                 {"Y", family_json(rep.standard->Y, prec())},
                                 {"products", family_json(rep.standard->products, prec())},
                                 {"certified", rep.standard->certificate.independent()},
                                 {"spans", rep.standard->spans}};
    }
    if (rep.closure.obstruction_at) r.out["obstruction_at"] = *rep.closure.obstruction_at;
    if (rep.closure.evidence && rep.verdict == ExtensionReport::Verdict::Obstructed) {
      r.out["evidence"] = nearest_json(*rep.closure.evidence, prec());
    }
    if (!rep.note.empty()) r.out["note"] = rep.note;
    if (!options_.verify) return;
    bool ok = true;
    if (rep.verdict == ExtensionReport::Verdict::VsDefectless) {
      ok = rep.standard && is_valuation_independent(K(), rep.standard->products, prec()).independent() &&
           rep.n == rep.ramification->e * rep.ramification->f && rep.standard->products.size() == rep.n;
    } else if (rep.verdict == ExtensionReport::Verdict::Obstructed) {
      ok = rep.closure.evidence && rep.closure.obstruction_candidate &&
           check_nearest(K(), *rep.closure.obstruction_candidate, rep.closure.basis, *rep.closure.evidence, prec());
    }
    r.verified = ok;
  }

  void immediacy_task(const Json& task, TaskRun& r) {
    const Series& probe = element(task, "probe");
    const ImmediacyResult res = immediacy_evidence(K(), probe, prec());
    switch (res.kind) {
      case ImmediacyResult::Kind::NotImmediateWitness: r.out["outcome"] = "NotImmediateWitness"; break;
      case ImmediacyResult::Kind::ImmediateEvidence: r.out["outcome"] = "ImmediateEvidence"; break;
      case ImmediacyResult::Kind::Inconclusive: r.out["outcome"] = "Inconclusive"; break;
    }
    r.out["nearest"] = nearest_json(res.nearest, prec());
    if (options_.verify) {
      const Family one{K().residue_section(K().residue_subfield().one())};
      r.verified = check_nearest(K(), probe, one, res.nearest, prec());
    }
  }

  void approximate_task(const Json& task, TaskRun& r) {
    const Family u = family(task, "u");
    std::vector<Family> c;
    for (const auto& row : task.at("coefficients")) {
      Family f;
      for (const auto& name : row) f.push_back(ctx_.elements.at(name.get<std::string>()));
      c.push_back(std::move(f));
    }
    const Approximation ap = complete_and_approximate(K(), u, c, prec());
    r.out["outcome"] = ap.certificate.independent() && ap.inequality_holds ? "Certified" : "NotCertified";
    r.out["target_values"] = values_json(ap.target_values);
    Json bounds = Json::array(), tails = Json::array(), truncated = Json::array();
    for (std::size_t i = 0; i < u.size(); ++i) {
      bounds.push_back(values_json(ap.bounds[i]));
      Json t = Json::array();
      for (const auto& v : ap.tail_values[i]) t.push_back(valuation_json(v));
      tails.push_back(t);
      truncated.push_back(family_json(ap.truncated[i], prec()));
    }
    r.out["bounds"] = bounds;
    r.out["tail_values"] = tails;
    r.out["truncated"] = truncated;
    r.out["b_star"] = family_json(ap.b_star, prec());
    r.out["inequality_holds"] = ap.inequality_holds;
    r.out["close"] = ap.close;
    r.out["completion_values"] = values_json(ap.completion_certificate.values);
    r.out["values"] = values_json(ap.certificate.values);
    if (!options_.verify) return;
    bool ok = true;
    for (std::size_t i = 0; i < u.size(); ++i) {
      for (std::size_t j = 0; j < u.size(); ++j) {
        ok = ok && strictly_above(valuation((ap.truncated[i][j] - c[i][j]) * u[j], prec()), ap.target_values[i]);
        ok = ok && ap.truncated[i][j].is_finite();
      }
    }
    const IndependenceVerdict again = is_valuation_independent(K(), ap.b_star, prec());
    auto sorted = [](std::vector<GroupElement> v) {
      std::sort(v.begin(), v.end());
      return v;
    };
    r.verified = ok && again.independent() && sorted(again.values) == sorted(ap.completion_certificate.values);
  }

  void exchange_task(const Json& task, TaskRun& r) {
    const Family B = family(task, "basis");
    const Family W = family(task, "over");
    const Series& x = element(task, "x");
    const ExchangeResult ex = basis_exchange(K(), B, W, x, prec());
    r.out["outcome"] = "Exchanged";
    r.out["removed"] = ex.removed;
    r.out["shift"] = to_json(ex.shift, prec());
    r.out["expansion"] = family_json(ex.expansion, prec());
    r.out["certificate"] = verdict_json(ex.certificate, prec());
    if (!options_.verify) return;
    Family all = W;
    all.insert(all.end(), B.begin(), B.end());
    Family base = W;
    base.push_back(x - ex.shift);
    r.verified = vanishes(x - combination(ctx_.ambient, ex.expansion, all), prec()) &&
                 is_valuation_independent_over(K(), ex.remaining, base, prec()).independent();
  }

  void relative_task(const Json& task, TaskRun& r) {
    const Family B = family(task, "basis");
    const Family W = family(task, "over");
    const RelativeBasis rb = relative_basis(K(), B, W, family(task, "generators"), prec());
    r.out["outcome"] = "RelativeBasis";
    r.out["A"] = family_json(rb.A, prec());
    r.out["kept"] = rb.kept;
    r.out["A_certificate"] = verdict_json(rb.A_certificate, prec());
    r.out["B_certificate"] = verdict_json(rb.B_certificate, prec());
    if (!options_.verify) return;
    Family base = W;
    base.insert(base.end(), rb.A.begin(), rb.A.end());
    r.verified = is_valuation_independent_over(K(), rb.A, W, prec()).independent() &&
                 is_valuation_independent_over(K(), rb.B_prime, base, prec()).independent();
  }

  // min-equality v(sum c_i b_i) = min v(c_i b_i) on random K-coefficients.
  void sample_task(const Json& task, TaskRun& r) {
    const Family B = family(task, "family");
    const std::size_t samples = task.value("samples", std::size_t{20});
    std::mt19937_64 rng(options_.seed);
    std::size_t failures = 0;
    std::size_t undecided = 0;
    for (std::size_t s = 0; s < samples; ++s) {
      Family c;
      for (std::size_t i = 0; i < B.size(); ++i) c.push_back(K().sample(rng, -2, 3));
      std::optional<GroupElement> lowest;
      bool witnessed = true;
      for (std::size_t i = 0; i < B.size(); ++i) {
        const Valuation v = valuation(c[i] * B[i], prec());
        if (!v.is_value()) {
          witnessed = false;
          break;
        }
        if (!lowest || v.value < *lowest) lowest = v.value;
      }
      if (!witnessed || !lowest) {
        ++undecided;
        continue;
      }
      const Valuation total = valuation(combination(ctx_.ambient, c, B), prec());
      if (!total.is_value() || total.value != *lowest) ++failures;
    }
    r.out["outcome"] = failures == 0 ? "Holds" : "Fails";
    r.out["samples"] = samples;
    r.out["failures"] = failures;
    r.out["undecided"] = undecided;
    r.out["seed"] = options_.seed;
  }

  const ScenarioContext& ctx_;
  const RunOptions& options_;
};

// --- Text rendering ------------------------------------------------------------

std::string text_value(const Json& v) {
  if (v.is_object() && v.contains("text") && v.contains("terms")) return v.at("text").get<std::string>();
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + text_value(v[i]);
    return s + "]";
  }
  if (v.is_object()) {
    std::string s = "{";
    bool first = true;
    for (const auto& [k, x] : v.items()) {
      s += (first ? "" : ", ") + k + ": " + text_value(x);
      first = false;
    }
    return s + "}";
  }
  return v.dump();
}

}  // namespace

Report run_scenario(const Scenario& scenario, const RunOptions& options) {
  const ScenarioContext ctx = build_context(scenario, options);
  Report report;
  Json& doc = report.doc;
  doc["schema"] = "ultragram/1";
  doc["scenario"] = scenario.name();
  doc["ambient"] = ctx.ambient.name();
  doc["base_field"] = ctx.base.name();
  doc["precision"] = {{"ceiling", to_json(ctx.precision.ceiling)},
                      {"max_terms", ctx.precision.max_terms},
                      {"degree_cap", ctx.degree_cap},
                      {"work_limit", ctx.precision.work_limit}};
  doc["seed"] = options.seed;
  doc["tasks"] = Json::array();
  Runner runner(ctx, options);
  for (const auto& task : scenario.doc.at("tasks")) {
    const auto start = std::chrono::steady_clock::now();
    TaskRun r = runner.run(task);
    const auto stop = std::chrono::steady_clock::now();
    r.out["index"] = doc["tasks"].size();
    if (task.contains("label")) r.out["label"] = task.at("label");
    report.verified = report.verified && r.verified;
    report.timings.push_back({task.at("op").get<std::string>(),
                              std::chrono::duration<double, std::milli>(stop - start).count()});
    doc["tasks"].push_back(std::move(r.out));
  }
  if (options.verify) doc["verified"] = report.verified;
  return report;
}

std::string emit(const Report& report, ReportFormat format) {
  const Json& doc = report.doc;
  if (format == ReportFormat::Structured) return doc.dump(2) + "\n";
  std::ostringstream os;
  os << "scenario " << doc.value("scenario", std::string()) << "\n";
  os << "  ambient " << doc.value("ambient", std::string()) << ", base field " << doc.value("base_field", std::string())
     << ", ceiling " << text_value(doc.at("precision").at("ceiling")) << ", max_terms "
     << doc.at("precision").at("max_terms") << "\n";
  const Json& tasks = doc.at("tasks");
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    const Json& t = tasks[k];
    os << "[" << k << "] " << t.at("op").get<std::string>();
    if (t.contains("label")) os << " (" << text_value(t.at("label")) << ")";
    os << ": " << t.value("outcome", std::string("?"));
    if (k < report.timings.size()) {
      os.setf(std::ios::fixed);
      os.precision(2);
      os << "  [" << report.timings[k].milliseconds << " ms]";
    }
    os << "\n";
    for (const auto& [key, value] : t.items()) {
      if (key == "op" || key == "outcome" || key == "index" || key == "label") continue;
      os << "    " << key << ": " << text_value(value) << "\n";
    }
  }
  if (doc.contains("verified")) os << "verified: " << (doc.at("verified").get<bool>() ? "yes" : "NO") << "\n";
  return os.str();
}

}  // namespace ultragram
