#include "ultragram/extension.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "ultragram/error.hpp"

namespace ultragram {

namespace {

enum class Step { Added, Member, Stalled };

struct StepResult {
  Step step;
  std::optional<NearestPointResult> evidence;
};

// Adjoins g to a normalized basis when it is not a member of its span.
StepResult extend(const SubfieldPresentation& K, Family& basis, const Series& g, const Precision& prec) {
  NearestPointResult np = nearest_point(K, g, basis, prec);
  switch (np.kind) {
    case NearestPointResult::Kind::Value: {
      Family next = basis;
      next.push_back(np.best.is_known_zero() ? g : g - np.best);
      basis = normalize(K, next, prec).elements;
      return {Step::Added, std::move(np)};
    }
    case NearestPointResult::Kind::ExactMember: return {Step::Member, std::move(np)};
    case NearestPointResult::Kind::Unbounded:
    case NearestPointResult::Kind::PrecisionExhausted: break;
  }
  return {Step::Stalled, std::move(np)};
}

std::string monomial_label(const std::vector<unsigned>& exps) {
  std::string out;
  for (std::size_t k = 0; k < exps.size(); ++k) {
    if (exps[k] == 0) continue;
    if (!out.empty()) out += "*";
    out += "a" + std::to_string(k);
    if (exps[k] > 1) out += "^" + std::to_string(exps[k]);
  }
  return out.empty() ? "1" : out;
}

bool strictly_above(const Valuation& v, const GroupElement& bound) {
  if (v.is_value()) return v.value > bound;
  return v.exhausted || (!v.out_of_work && v.value > bound);
}

SubfieldPresentation completion_of(const SubfieldPresentation& K) {
  if (K.kind() == SubfieldPresentation::Kind::RationalFunctions) {
    return SubfieldPresentation::completion(K.ambient(), K.residue_subfield());
  }
  return K;
}

GroupElement witnessed_value(const Series& x, const Precision& prec, const std::string& what) {
  const Valuation v = valuation(x, prec);
  if (v.exhausted) throw Error(ErrorCode::ZeroElementInFamily, what + " is zero");
  if (!v.is_value()) throw Error(ErrorCode::PrecisionExhausted, "no term of " + what + " below " + prec.ceiling.to_string());
  return v.value;
}

}  // namespace

SpanClosure span_closure_basis(const SubfieldPresentation& K, std::span<const Series> generators,
                               const Precision& prec, std::size_t degree_cap, ClosureMode mode) {
  if (degree_cap == 0) throw Error(ErrorCode::InvalidArgument, "degree cap must be positive");
  struct Candidate {
    Series value;
    std::vector<unsigned> exps;
    std::string label;
  };
  SpanClosure out;
  std::deque<Candidate> queue;
  std::set<std::vector<unsigned>> seen;
  if (mode == ClosureMode::Field) {
    std::vector<unsigned> zero(generators.size(), 0);
    queue.push_back({K.residue_section(K.residue_subfield().one()), zero, "1"});
    seen.insert(zero);
  } else {
    for (std::size_t k = 0; k < generators.size(); ++k) queue.push_back({generators[k], {}, "g" + std::to_string(k)});
  }
  while (!queue.empty()) {
    Candidate c = std::move(queue.front());
    queue.pop_front();
    if (out.basis.size() >= degree_cap) {
      out.kind = SpanClosure::Kind::Inconclusive;
      out.note = "degree cap " + std::to_string(degree_cap) + " reached before " + c.label + " was reduced";
      return out;
    }
    StepResult r = extend(K, out.basis, c.value, prec);
    if (r.step == Step::Member) continue;
    if (r.step == Step::Stalled) {
      out.kind = SpanClosure::Kind::Obstruction;
      out.obstruction_at = c.label;
      out.obstruction_candidate = c.value;
      out.evidence = std::move(r.evidence);
      out.note = "v(" + c.label + " - span) has no witnessed maximum";
      return out;
    }
    out.monomials.push_back(c.label);
    if (mode != ClosureMode::Field) continue;
    for (std::size_t k = 0; k < generators.size(); ++k) {
      std::vector<unsigned> next = c.exps;
      ++next[k];
      if (!seen.insert(next).second) continue;
      queue.push_back({c.value * generators[k], next, monomial_label(next)});
    }
  }
  out.kind = SpanClosure::Kind::Basis;
  return out;
}

RamificationResidue ramification_and_residue(const SubfieldPresentation& K, std::span<const Series> B,
                                             const Precision& prec) {
  const NormalizationCheck check = check_normalized(K, B, prec);
  if (!check.pass) throw Error(ErrorCode::NotNormalized, "basis fails " + check.condition + ": " + check.detail);
  std::vector<GroupElement> values;
  for (const auto& b : B) values.push_back(valuation(b, prec).value);

  // Coset classes; after normalization equal cosets carry equal values.
  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < B.size(); ++i) {
    auto it = std::find_if(classes.begin(), classes.end(),
                           [&](const auto& c) { return coset_equal(values[c.front()], values[i], K.value_subgroup()); });
    if (it == classes.end()) {
      classes.push_back({i});
    } else {
      it->push_back(i);
    }
  }
  std::stable_sort(classes.begin(), classes.end(), [&](const auto& a, const auto& b) {
    return K.value_subgroup().contains(values[a.front()]) && !K.value_subgroup().contains(values[b.front()]);
  });

  RamificationResidue out;
  out.e = classes.size();
  for (const auto& c : classes) out.X.push_back(B[c.front()]);
  const std::vector<std::size_t>* residue_class = nullptr;
  if (!classes.empty() && K.value_subgroup().contains(values[classes.front().front()])) {
    residue_class = &classes.front();
  } else {
    for (const auto& c : classes) {
      if (!residue_class || c.size() > residue_class->size()) residue_class = &c;
    }
  }
  if (residue_class) {
    for (std::size_t i : *residue_class) out.Y.push_back(B[i]);
  }
  out.f = out.Y.size();

  std::vector<GroupElement> gens = K.value_subgroup().generators();
  gens.insert(gens.end(), values.begin(), values.end());
  out.value_index = subgroup_index(K.value_subgroup(), Subgroup(K.ambient().group, gens));
  return out;
}

StandardBasis standard_basis(const SubfieldPresentation& K, std::span<const Series> B, const Precision& prec) {
  const RamificationResidue rr = ramification_and_residue(K, B, prec);
  StandardBasis out;
  out.X = rr.X;
  out.Y = rr.Y;
  for (std::size_t i = 0; i < out.X.size(); ++i) {
    for (std::size_t j = 0; j < out.Y.size(); ++j) {
      const Series p = out.X[i] * out.Y[j];
      const NearestPointResult np = nearest_point(K, p, B, prec);
      if (np.kind != NearestPointResult::Kind::ExactMember) {
        throw Error(ErrorCode::NotFieldClosed, "product of X[" + std::to_string(i) + "] and Y[" + std::to_string(j) +
                                                   "] leaves the span");
      }
      out.products.push_back(p);
    }
  }
  out.certificate = is_valuation_independent(K, out.products, prec);
  out.spans = out.certificate.independent() && out.products.size() == B.size();
  return out;
}

ExtensionReport analyze_extension(const SubfieldPresentation& K, std::span<const Series> generators,
                                  const Precision& prec, std::size_t degree_cap, ClosureMode mode) {
  ExtensionReport report;
  report.closure = span_closure_basis(K, generators, prec, degree_cap, mode);
  report.n = report.closure.basis.size();
  switch (report.closure.kind) {
    case SpanClosure::Kind::Obstruction:
      report.verdict = ExtensionReport::Verdict::Obstructed;
      report.note = report.closure.note;
      return report;
    case SpanClosure::Kind::Inconclusive:
      report.verdict = ExtensionReport::Verdict::Inconclusive;
      report.note = report.closure.note;
      return report;
    case SpanClosure::Kind::Basis: break;
  }
  const Family& basis = report.closure.basis;
  report.ramification = ramification_and_residue(K, basis, prec);
  const std::size_t ef = report.ramification->e * report.ramification->f;
  report.defect_index = Rational(static_cast<long>(report.n), static_cast<long>(ef));
  report.defect_index->canonicalize();
  try {
    report.standard = standard_basis(K, basis, prec);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotFieldClosed) throw;
    report.note = e.what();
  }
  if (report.n == ef && report.standard && report.standard->spans) {
    report.verdict = ExtensionReport::Verdict::VsDefectless;
  } else {
    report.verdict = ExtensionReport::Verdict::Inconclusive;
    if (report.note.empty()) report.note = "valuation basis found but n != e*f; the span is not a field";
  }
  return report;
}

Approximation complete_and_approximate(const SubfieldPresentation& K, std::span<const Series> u,
                                       const std::vector<Family>& coefficients, const Precision& prec) {
  const std::size_t n = u.size();
  if (coefficients.size() != n ||
      std::any_of(coefficients.begin(), coefficients.end(), [&](const Family& row) { return row.size() != n; })) {
    throw Error(ErrorCode::InvalidArgument, "coefficient matrix must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  const SubfieldPresentation Khat = completion_of(K);
  Approximation out;

  std::vector<GroupElement> u_values;
  for (std::size_t j = 0; j < n; ++j) u_values.push_back(witnessed_value(u[j], prec, "u" + std::to_string(j)));
  for (std::size_t i = 0; i < n; ++i) {
    Series b = Series::zero(K.ambient());
    for (std::size_t j = 0; j < n; ++j) b = b + coefficients[i][j] * u[j];
    out.b_prime.push_back(b);
    out.target_values.push_back(witnessed_value(b, prec, "b'" + std::to_string(i)));
  }

  std::vector<GroupElement> gens = K.value_subgroup().generators();
  gens.insert(gens.end(), u_values.begin(), u_values.end());
  gens.insert(gens.end(), out.target_values.begin(), out.target_values.end());
  if (!is_cofinal(K.value_subgroup(), Subgroup(K.ambient().group, gens))) {
    throw Error(ErrorCode::NotCofinal, "vK is not cofinal in the value group of the space");
  }
  out.completion_certificate = is_valuation_independent(Khat, out.b_prime, prec);
  if (!out.completion_certificate.independent()) {
    throw Error(ErrorCode::NotIndependent, "the completion-side family is not certified independent");
  }

  out.inequality_holds = true;
  for (std::size_t i = 0; i < n; ++i) {
    Family row;
    std::vector<GroupElement> bounds;
    std::vector<Valuation> tails;
    Series star = Series::zero(K.ambient());
    for (std::size_t j = 0; j < n; ++j) {
      const Series& c = coefficients[i][j];
      // Truncation below d leaves a tail of value >= d, so d + v(u_j) > v(b_i') suffices.
      const auto d = K.value_subgroup().element_above(out.target_values[i] - u_values[j]);
      if (!d) throw Error(ErrorCode::NotCofinal, "no element of vK above " + (out.target_values[i] - u_values[j]).to_string());
      const Series cut = c.is_finite() ? c : truncate(c, *d);
      const Valuation tail = valuation((cut - c) * u[j], prec);
      out.inequality_holds = out.inequality_holds && strictly_above(tail, out.target_values[i]);
      bounds.push_back(*d);
      tails.push_back(tail);
      row.push_back(cut);
      star = star + cut * u[j];
    }
    out.truncated.push_back(std::move(row));
    out.bounds.push_back(std::move(bounds));
    out.tail_values.push_back(std::move(tails));
    out.b_star.push_back(star);
  }
  out.close = true;
  for (std::size_t i = 0; i < n; ++i) {
    out.close = out.close && strictly_above(valuation(out.b_star[i] - out.b_prime[i], prec), out.target_values[i]);
  }
  out.certificate = is_valuation_independent(K, out.b_star, prec);
  return out;
}

}  // namespace ultragram
