#include "ultragram/valued_space.hpp"

#include <algorithm>

#include "ultragram/error.hpp"

namespace ultragram {

namespace {

// Valuations and leading coefficients of a family, all witnessed.
struct Leads {
  std::vector<GroupElement> values;
  std::vector<FieldElement> coefficients;
};

struct LeadsOrReason {
  std::optional<Leads> leads;
  std::string reason;
};

LeadsOrReason witness_leads(std::span<const Series> B, const Precision& prec) {
  Leads out;
  for (std::size_t i = 0; i < B.size(); ++i) {
    const Valuation v = valuation(B[i], prec);
    if (!v.is_value()) {
      if (v.exhausted) throw Error(ErrorCode::ZeroElementInFamily, "element " + std::to_string(i) + " is zero");
      return {std::nullopt, "no term of element " + std::to_string(i) + " below " + prec.ceiling.to_string() +
                                (v.out_of_work ? " within the work limit" : "")};
    }
    out.values.push_back(v.value);
    out.coefficients.push_back(B[i].term(0, prec.ceiling).term->coefficient);
  }
  return {std::move(out), {}};
}

// Partition of indices by coset of the value modulo vK; the first member of
// each class (lowest index) is its representative.
std::vector<std::vector<std::size_t>> coset_classes(const SubfieldPresentation& K, const std::vector<GroupElement>& values) {
  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto it = std::find_if(classes.begin(), classes.end(), [&](const std::vector<std::size_t>& c) {
      return coset_equal(values[c.front()], values[i], K.value_subgroup());
    });
    if (it == classes.end()) {
      classes.push_back({i});
    } else {
      it->push_back(i);
    }
  }
  return classes;
}

// Residues res(t^delta b_m / b_rep) of a class; the monomial section has
// coefficient 1, so these are ratios of leading coefficients.
std::vector<FieldElement> class_ratios(const Leads& leads, const std::vector<std::size_t>& members) {
  std::vector<FieldElement> out;
  const FieldElement& rep = leads.coefficients[members.front()];
  for (std::size_t m : members) out.push_back(leads.coefficients[m] / rep);
  return out;
}

Series combine(const Ambient& ambient, const Family& coefficients, std::span<const Series> elements) {
  Series acc = Series::zero(ambient);
  for (std::size_t i = 0; i < elements.size(); ++i) acc = acc + coefficients[i] * elements[i];
  return acc;
}

bool above(const Valuation& v, const GroupElement& bound) {
  if (v.is_value()) return v.value > bound;
  return v.exhausted || (!v.out_of_work && v.value > bound);
}

Family concat(std::span<const Series> a, std::span<const Series> b) {
  Family out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

// --- Witness -------------------------------------------------------------------

Series Witness::combination() const {
  if (elements.empty()) throw Error(ErrorCode::InvalidArgument, "empty witness");
  return combine(elements.front().ambient(), coefficients, elements);
}

bool Witness::recheck(const Precision& prec) const {
  if (coefficients.size() != elements.size() || elements.empty()) return false;
  std::optional<GroupElement> lowest;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const Valuation vc = valuation(coefficients[i], prec);
    const Valuation vb = valuation(elements[i], prec);
    if (!vc.is_value() || !vb.is_value()) return false;
    const GroupElement v = vc.value + vb.value;
    if (!lowest || v < *lowest) lowest = v;
  }
  const Valuation total = valuation(combination(), prec);
  switch (claim) {
    case Claim::ValueAbove: return *lowest == value && above(total, value);
    case Claim::ValueEquals: return total.is_value() && total.value == value;
  }
  return false;
}

// --- Independence --------------------------------------------------------------

IndependenceVerdict is_valuation_independent(const SubfieldPresentation& K, std::span<const Series> B,
                                             const Precision& prec) {
  IndependenceVerdict verdict;
  if (B.empty()) {
    verdict.outcome = IndependenceVerdict::Outcome::Independent;
    return verdict;
  }
  auto witnessed = witness_leads(B, prec);
  if (!witnessed.leads) {
    verdict.reason = witnessed.reason;
    return verdict;
  }
  const Leads& leads = *witnessed.leads;
  verdict.values = leads.values;
  const auto classes = coset_classes(K, leads.values);
  for (const auto& members : classes) {
    const auto ratios = class_ratios(leads, members);
    const auto rows = coordinates_over(K.residue_subfield(), ratios);
    const RankResult rank = linear_rank(K.residue_subfield(), rows);
    if (rank.kernel.empty()) continue;
    // sum kappa_m t^delta_m b_m has vanishing leading coefficient.
    const auto& kappa = rank.kernel.front();
    const GroupElement& top = leads.values[members.front()];
    Family coefficients;
    Family elements;
    for (std::size_t k = 0; k < members.size(); ++k) {
      if (kappa[k].is_zero()) continue;
      const std::size_t m = members[k];
      coefficients.push_back(K.element(kappa[k], top - leads.values[m]));
      elements.push_back(B[m]);
    }
    verdict.outcome = IndependenceVerdict::Outcome::Dependent;
    verdict.witness = Witness{std::move(coefficients), std::move(elements), Witness::Claim::ValueAbove, top};
    return verdict;
  }
  verdict.outcome = IndependenceVerdict::Outcome::Independent;
  verdict.scalings.assign(B.size(), K.residue_section(K.residue_subfield().one()));
  verdict.scaled.assign(B.begin(), B.end());
  for (const auto& members : classes) {
    const GroupElement& top = leads.values[members.front()];
    for (std::size_t m : members) {
      if (leads.values[m] == top) continue;
      verdict.scalings[m] = K.monomial_section(top - leads.values[m]);
      verdict.scaled[m] = B[m].scaled(K.ambient().field.one(), top - leads.values[m]);
    }
  }
  return verdict;
}

IndependenceVerdict is_valuation_independent_over(const SubfieldPresentation& K, std::span<const Series> B,
                                                  std::span<const Series> W, const Precision& prec) {
  const IndependenceVerdict base = is_valuation_independent(K, W, prec);
  if (!base.independent()) {
    throw Error(ErrorCode::UncertifiedSubspace, "the family spanning W is not certified independent");
  }
  const Family all = concat(W, B);
  return is_valuation_independent(K, all, prec);
}

ResidueProfile residue_profile(std::span<const Series> U, const Series& a, const Precision& prec) {
  const auto lead = leading_term(a, prec);
  if (!lead) throw Error(ErrorCode::LeadingTermUnknown, "residue profile needs a witnessed value of a");
  ResidueProfile profile;
  for (const auto& u : U) {
    const auto lu = leading_term(u, prec);
    if (lu && lu->exponent == lead->exponent) profile.entries.push_back(lu->coefficient / lead->coefficient);
  }
  return profile;
}

// --- Normalization -------------------------------------------------------------

NormalizedFamily normalize(const SubfieldPresentation& K, std::span<const Series> B, const Precision& prec) {
  const IndependenceVerdict verdict = is_valuation_independent(K, B, prec);
  if (verdict.outcome == IndependenceVerdict::Outcome::Dependent) {
    throw Error(ErrorCode::NotIndependent, "family is valuation dependent");
  }
  if (verdict.outcome == IndependenceVerdict::Outcome::Inconclusive) {
    throw Error(ErrorCode::PrecisionExhausted, "cannot normalize: " + verdict.reason);
  }
  const Leads leads = *witness_leads(B, prec).leads;
  const FieldElement one = K.ambient().field.one();
  NormalizedFamily out;
  out.elements.assign(B.begin(), B.end());
  out.scalings.assign(B.size(), K.residue_section(K.residue_subfield().one()));
  for (const auto& members : coset_classes(K, leads.values)) {
    const GroupElement& rep_value = leads.values[members.front()];
    const bool in_vk = K.value_subgroup().contains(rep_value);
    const GroupElement target = in_vk ? K.ambient().group.zero() : rep_value;
    for (std::size_t m : members) {
      const GroupElement delta = target - leads.values[m];
      FieldElement c = one;
      if (target.is_zero() && K.in_residue_subfield(leads.coefficients[m])) c = leads.coefficients[m].inverse();
      if (delta.is_zero() && c.is_one()) continue;
      out.elements[m] = B[m].scaled(c, delta);
      out.scalings[m] = K.element(K.to_residue(c), delta);
    }
  }
  return out;
}

NormalizationCheck check_normalized(const SubfieldPresentation& K, std::span<const Series> B, const Precision& prec) {
  NormalizationCheck check;
  LeadsOrReason witnessed;
  try {
    witnessed = witness_leads(B, prec);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ZeroElementInFamily) throw;
    witnessed.reason = e.what();
  }
  if (!witnessed.leads) {
    return {false, "valuation", {}, witnessed.reason};
  }
  const Leads& leads = *witnessed.leads;
  for (std::size_t i = 0; i < B.size(); ++i) {
    for (std::size_t j = i + 1; j < B.size(); ++j) {
      if (coset_equal(leads.values[i], leads.values[j], K.value_subgroup()) && leads.values[i] != leads.values[j]) {
        return {false, "N1", {i, j},
                "values " + leads.values[i].to_string() + " and " + leads.values[j].to_string() +
                    " share a coset but differ"};
      }
    }
  }
  for (const auto& members : coset_classes(K, leads.values)) {
    const auto ratios = class_ratios(leads, members);
    const RankResult rank = linear_rank(K.residue_subfield(), coordinates_over(K.residue_subfield(), ratios));
    if (rank.rank < members.size()) {
      return {false, "N2", members,
              "residues of the class of value " + leads.values[members.front()].to_string() + " have rank " +
                  std::to_string(rank.rank) + " < " + std::to_string(members.size())};
    }
  }
  for (std::size_t i = 0; i < B.size(); ++i) {
    if (K.value_subgroup().contains(leads.values[i]) && !leads.values[i].is_zero()) {
      return {false, "N3", {i}, "value " + leads.values[i].to_string() + " lies in vK but is not 0"};
    }
  }
  for (std::size_t i = 0; i < B.size(); ++i) {
    const FieldElement& c = leads.coefficients[i];
    if (leads.values[i].is_zero() && K.in_residue_subfield(c) && !c.is_one()) {
      return {false, "N4", {i}, "residue " + c.to_string() + " lies in Kv but is not 1"};
    }
  }
  return check;
}

// --- Exact span membership -----------------------------------------------------

namespace {

// gamma = rep + m * unit with m read off the unit coordinate.
std::pair<GroupElement, Integer> split_along_unit(const SubfieldPresentation& K, const GroupElement& gamma) {
  if (K.kind() == SubfieldPresentation::Kind::Trivial) return {gamma, Integer(0)};
  const Rational& last = gamma.coordinates().back();
  Integer m;
  mpz_fdiv_q(m.get_mpz_t(), last.get_num_mpz_t(), last.get_den_mpz_t());
  return {gamma - m * gamma.group().unit(), m};
}

Series polynomial_in_t(const SubfieldPresentation& K, const FpPoly& poly) {
  std::vector<Term> terms;
  const OrderedGroup& g = K.ambient().group;
  for (std::size_t i = 0; i < poly.coeffs.size(); ++i) {
    if (poly.coeffs[i] == 0) continue;
    terms.push_back({Integer(static_cast<unsigned long>(i)) * g.unit(),
                     K.ambient().field.from_integer(static_cast<long>(poly.coeffs[i]))});
  }
  return Series::from_terms(K.ambient(), terms);
}

}  // namespace

ExactSpan exact_span_coefficients(const SubfieldPresentation& K, const Series& b, std::span<const Series> W,
                                  Family* coefficients) {
  if (!b.is_finite() || std::any_of(W.begin(), W.end(), [](const Series& w) { return !w.is_finite(); })) {
    return ExactSpan::Unsupported;
  }
  const bool trivial = K.kind() == SubfieldPresentation::Kind::Trivial;
  const ResidueField& k = K.residue_subfield();
  if (!trivial && k.kind() != ResidueField::Kind::PrimeField) return ExactSpan::Unsupported;

  std::vector<std::vector<Term>> all;
  all.push_back(b.all_terms());
  for (const auto& w : W) all.push_back(w.all_terms());

  std::vector<FieldElement> coeffs;
  for (const auto& terms : all) {
    for (const auto& t : terms) coeffs.push_back(t.coefficient);
  }
  if (coeffs.empty()) {
    if (coefficients) coefficients->assign(W.size(), Series::zero(K.ambient()));
    return ExactSpan::Member;
  }
  const auto coords = coordinates_over(k, coeffs);
  const std::size_t width = coords.front().size();

  // Columns are (coset representative, coordinate) pairs.
  std::vector<GroupElement> reps;
  Integer lowest = 0;
  bool have_lowest = false;
  struct Entry {
    std::size_t column;
    Integer power;
    FieldVector coords;
  };
  std::vector<std::vector<Entry>> entries(all.size());
  std::size_t idx = 0;
  for (std::size_t v = 0; v < all.size(); ++v) {
    for (const auto& t : all[v]) {
      auto [rep, m] = split_along_unit(K, t.exponent);
      auto it = std::find(reps.begin(), reps.end(), rep);
      const std::size_t r = static_cast<std::size_t>(it - reps.begin());
      if (it == reps.end()) reps.push_back(rep);
      if (!have_lowest || m < lowest) lowest = m;
      have_lowest = true;
      entries[v].push_back({r, m, coords[idx++]});
    }
  }
  const std::size_t columns = reps.size() * width;
  const ResidueField F = trivial ? k : ResidueField::rational_functions(k.characteristic());
  std::vector<FieldVector> vectors;
  for (const auto& list : entries) {
    if (trivial) {
      FieldVector vec(columns, F.zero());
      for (const auto& e : list) {
        for (std::size_t c = 0; c < width; ++c) vec[e.column * width + c] = vec[e.column * width + c] + e.coords[c];
      }
      vectors.push_back(std::move(vec));
      continue;
    }
    std::vector<FpPoly> polys(columns);
    for (const auto& e : list) {
      const std::size_t shift = Integer(e.power - lowest).get_ui();
      for (std::size_t c = 0; c < width; ++c) {
        FpPoly mono;
        mono.coeffs.assign(shift + 1, 0);
        mono.coeffs[shift] = e.coords[c].residue();
        polys[e.column * width + c] = fppoly::add(polys[e.column * width + c], mono, k.characteristic());
      }
    }
    FieldVector vec;
    for (auto& p : polys) vec.push_back(F.fraction(std::move(p), fppoly::constant(1, k.characteristic())));
    vectors.push_back(std::move(vec));
  }
  const FieldVector target = vectors.front();
  const std::vector<FieldVector> basis(vectors.begin() + 1, vectors.end());
  const auto solution = solve_in_span(F, target, basis);
  if (!solution) return K.is_complete() ? ExactSpan::Unsupported : ExactSpan::NotMember;
  if (coefficients) {
    coefficients->clear();
    for (const auto& kappa : *solution) {
      if (trivial) {
        coefficients->push_back(K.residue_section(kappa));
        continue;
      }
      const Series num = polynomial_in_t(K, kappa.fraction().num);
      const Series den = polynomial_in_t(K, kappa.fraction().den);
      if (num.is_known_zero()) {
        coefficients->push_back(Series::zero(K.ambient()));
      } else if (kappa.fraction().den.degree() == 0) {
        coefficients->push_back(num);
      } else {
        const GroupElement past = Integer(static_cast<unsigned long>(kappa.fraction().den.coeffs.size())) * K.ambient().group.unit();
        coefficients->push_back(num * invert(den, Precision{past, 1}));
      }
    }
  }
  return ExactSpan::Member;
}

// --- Nearest point -------------------------------------------------------------

namespace {

void require_normalized(const SubfieldPresentation& K, std::span<const Series> W, const Precision& prec) {
  const NormalizationCheck check = check_normalized(K, W, prec);
  if (check.pass) return;
  if (!is_valuation_independent(K, W, prec).independent()) {
    throw Error(ErrorCode::UncertifiedSubspace, "subspace family is not certified independent");
  }
  throw Error(ErrorCode::NotNormalized, "subspace family fails " + check.condition + ": " + check.detail);
}

NearestPointResult make_result(const Ambient& ambient, std::size_t n) {
  return NearestPointResult{NearestPointResult::Kind::PrecisionExhausted, Series::zero(ambient),
                            Family(n, Series::zero(ambient)), std::nullopt, {}, {}, false, false, {}};
}

}  // namespace

NearestPointResult nearest_point(const SubfieldPresentation& K, const Series& b, std::span<const Series> W,
                                 const Precision& prec) {
  require_normalized(K, W, prec);
  const Ambient& ambient = K.ambient();
  NearestPointResult result = make_result(ambient, W.size());

  Family exact;
  const ExactSpan membership = exact_span_coefficients(K, b, W, &exact);
  if (membership == ExactSpan::Member) {
    result.kind = NearestPointResult::Kind::ExactMember;
    result.coefficients = std::move(exact);
    result.best = b;
    result.exact_solve = true;
    return result;
  }

  const Leads leads = *witness_leads(W, prec).leads;
  // After normalization, coset classes of W are value classes.
  const auto classes = coset_classes(K, leads.values);
  const ResidueField& kv = K.residue_subfield();
  // Chains in k((t)) converge when t^n tends to 0 in the ambient group.
  const bool converges = K.is_complete() && (ambient.group.kind() != GroupKind::LexProduct || ambient.group.rank() == 1);

  WorkBudget budget(prec.work_limit);
  Series r = b;
  Series a = Series::zero(ambient);
  try {
    while (true) {
      const Valuation v = valuation(r, prec);
      if (!v.is_value()) {
        result.best = a;
        if (v.exhausted) {
          result.kind = NearestPointResult::Kind::ExactMember;
        } else if (converges && !v.out_of_work) {
          result.kind = NearestPointResult::Kind::ExactMember;
          result.via_limit = true;
          result.note = "b - best vanishes below " + prec.ceiling.to_string() + " over a complete K";
        } else {
          result.kind = NearestPointResult::Kind::PrecisionExhausted;
          result.value = prec.ceiling;
          result.note = v.out_of_work ? "work limit reached" : "no term below the ceiling";
        }
        return result;
      }
      result.trace.push_back(v.value);
      result.trace_points.push_back(a);

      auto cls = std::find_if(classes.begin(), classes.end(), [&](const std::vector<std::size_t>& c) {
        return coset_equal(v.value, leads.values[c.front()], K.value_subgroup());
      });
      std::optional<FieldVector> kappa;
      if (cls != classes.end()) {
        const FieldElement target = r.term(0, prec.ceiling).term->coefficient / leads.coefficients[cls->front()];
        std::vector<FieldElement> elems{target};
        const auto ratios = class_ratios(leads, *cls);
        elems.insert(elems.end(), ratios.begin(), ratios.end());
        const auto rows = coordinates_over(kv, elems);
        const std::vector<FieldVector> span_rows(rows.begin() + 1, rows.end());
        kappa = solve_in_span(kv, rows.front(), span_rows);
      }
      if (!kappa) {
        result.kind = NearestPointResult::Kind::Value;
        result.value = v.value;
        result.best = a;
        return result;
      }
      const GroupElement delta = v.value - leads.values[cls->front()];
      Series step = Series::zero(ambient);
      for (std::size_t k = 0; k < cls->size(); ++k) {
        if ((*kappa)[k].is_zero()) continue;
        const std::size_t m = (*cls)[k];
        result.coefficients[m] = result.coefficients[m] + K.element((*kappa)[k], delta);
        step = step + W[m].scaled(K.to_ambient((*kappa)[k]), delta);
      }
      r = r - step;
      a = a + step;
      charge_work();
      if (!converges && result.trace.size() >= prec.max_terms) {
        result.kind = NearestPointResult::Kind::Unbounded;
        result.best = a;
        return result;
      }
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::PrecisionExhausted) throw;
    result.kind = NearestPointResult::Kind::PrecisionExhausted;
    result.value = prec.ceiling;
    result.best = a;
    result.note = e.what();
    return result;
  }
}

StreamedNearestPoint nearest_point_stream(const SubfieldPresentation& K, const Series& b,
                                          const std::function<Family(std::size_t)>& stage, const Precision& prec) {
  StreamedNearestPoint out{make_result(K.ambient(), 0), {}};
  for (std::size_t n = 1; n <= prec.max_terms; ++n) {
    const Family W = stage(n);
    // Each stage may need one reduction step per member of its family.
    Precision inner = prec;
    inner.max_terms = prec.max_terms + W.size();
    NearestPointResult r = nearest_point(K, b, W, inner);
    const bool increasing = r.kind == NearestPointResult::Kind::Value &&
                            (out.stages.empty() || *out.stages.back().value < *r.value);
    out.stages.push_back(r);
    if (!increasing) {
      out.result = r;
      return out;
    }
  }
  NearestPointResult& res = out.result;
  res.kind = NearestPointResult::Kind::Unbounded;
  for (const auto& s : out.stages) {
    res.trace.push_back(*s.value);
    res.trace_points.push_back(s.best);
  }
  res.best = out.stages.back().best;
  res.note = "maxima over " + std::to_string(out.stages.size()) + " growing stages";
  return out;
}

// --- Orthogonalization ---------------------------------------------------------

OrthogonalizationResult orthogonalize(const SubfieldPresentation& K, std::span<const Series> generators,
                                      const Precision& prec) {
  OrthogonalizationResult out;
  for (std::size_t k = 0; k < generators.size(); ++k) {
    const Series& g = generators[k];
    const Valuation v = valuation(g, prec);
    if (v.exhausted) throw Error(ErrorCode::ZeroElementInFamily, "generator " + std::to_string(k) + " is zero");
    if (out.basis.empty() && v.is_value()) {
      out.basis = normalize(K, std::span<const Series>(&g, 1), prec).elements;
      continue;
    }
    NearestPointResult np = nearest_point(K, g, out.basis, prec);
    switch (np.kind) {
      case NearestPointResult::Kind::Value: {
        Family next = out.basis;
        next.push_back(g - np.best);
        out.basis = normalize(K, next, prec).elements;
        break;
      }
      case NearestPointResult::Kind::ExactMember:
        out.skipped.push_back(k);
        break;
      case NearestPointResult::Kind::Unbounded:
      case NearestPointResult::Kind::PrecisionExhausted:
        out.kind = OrthogonalizationResult::Kind::Obstruction;
        out.obstruction_index = k;
        out.obstruction = std::move(np);
        return out;
    }
  }
  return out;
}

// --- Exchange ------------------------------------------------------------------

namespace {

struct Expansion {
  Family coefficients;  // over the original family
};

// Coefficients of x over `family` (independent), via the normalized family.
Expansion expand(const SubfieldPresentation& K, std::span<const Series> family, const Series& x, const Precision& prec) {
  const NormalizedFamily nf = normalize(K, family, prec);
  const NearestPointResult np = nearest_point(K, x, nf.elements, prec);
  if (np.kind != NearestPointResult::Kind::ExactMember) {
    throw Error(ErrorCode::NotInSpan, "element does not expand over the given basis");
  }
  Expansion out;
  for (std::size_t i = 0; i < family.size(); ++i) out.coefficients.push_back(np.coefficients[i] * nf.scalings[i]);
  return out;
}

}  // namespace

ExchangeResult basis_exchange(const SubfieldPresentation& K, std::span<const Series> B, std::span<const Series> W,
                              const Series& x, const Precision& prec) {
  const Family all = concat(W, B);
  const Expansion ex = expand(K, all, x, prec);
  std::optional<std::size_t> chosen;
  std::optional<GroupElement> chosen_value;
  for (std::size_t j = 0; j < B.size(); ++j) {
    const Valuation vc = valuation(ex.coefficients[W.size() + j], prec);
    if (!vc.is_value()) continue;
    const GroupElement summand = vc.value + valuation(B[j], prec).value;
    if (!chosen_value || summand < *chosen_value) {
      chosen = j;
      chosen_value = summand;
    }
  }
  if (!chosen) throw Error(ErrorCode::NotInSpan, "element lies in W; nothing to exchange");
  Family w_coeffs(ex.coefficients.begin(), ex.coefficients.begin() + static_cast<std::ptrdiff_t>(W.size()));
  ExchangeResult out{*chosen, combine(K.ambient(), w_coeffs, W), ex.coefficients, {}, {}};
  for (std::size_t j = 0; j < B.size(); ++j) {
    if (j != *chosen) out.remaining.push_back(B[j]);
  }
  Family base(W.begin(), W.end());
  base.push_back(x - out.shift);
  out.certificate = is_valuation_independent_over(K, out.remaining, base, prec);
  return out;
}

RelativeBasis relative_basis(const SubfieldPresentation& K, std::span<const Series> B, std::span<const Series> W,
                             std::span<const Series> W_prime_generators, const Precision& prec) {
  RelativeBasis out;
  std::vector<std::size_t> kept(B.size());
  for (std::size_t i = 0; i < B.size(); ++i) kept[i] = i;
  Family current(B.begin(), B.end());
  for (const auto& x : W_prime_generators) {
    Family base(W.begin(), W.end());
    base.insert(base.end(), out.A.begin(), out.A.end());
    const Family all = concat(base, current);
    const Expansion ex = expand(K, all, x, prec);
    const bool in_base = std::all_of(ex.coefficients.begin() + static_cast<std::ptrdiff_t>(base.size()),
                                     ex.coefficients.end(),
                                     [&](const Series& c) { return !valuation(c, prec).is_value(); });
    if (in_base) continue;
    ExchangeResult step = basis_exchange(K, current, base, x, prec);
    out.A.push_back(x - step.shift);
    current = std::move(step.remaining);
    kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(step.removed));
  }
  out.B_prime = current;
  out.kept = kept;
  out.A_certificate = is_valuation_independent_over(K, out.A, W, prec);
  Family base(W.begin(), W.end());
  base.insert(base.end(), out.A.begin(), out.A.end());
  out.B_certificate = is_valuation_independent_over(K, out.B_prime, base, prec);
  return out;
}

// --- Immediacy -----------------------------------------------------------------

ImmediacyResult immediacy_evidence(const SubfieldPresentation& K, const Series& probe, const Precision& prec) {
  const Family one{K.residue_section(K.residue_subfield().one())};
  NearestPointResult np = nearest_point(K, probe, one, prec);
  ImmediacyResult::Kind kind = ImmediacyResult::Kind::Inconclusive;
  switch (np.kind) {
    case NearestPointResult::Kind::ExactMember: throw Error(ErrorCode::ProbeInK, "probe lies in " + K.name());
    case NearestPointResult::Kind::Value: kind = ImmediacyResult::Kind::NotImmediateWitness; break;
    case NearestPointResult::Kind::Unbounded: kind = ImmediacyResult::Kind::ImmediateEvidence; break;
    case NearestPointResult::Kind::PrecisionExhausted: break;
  }
  return ImmediacyResult{kind, std::move(np)};
}

}  // namespace ultragram
