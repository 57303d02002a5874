#include <gtest/gtest.h>

#include "ultragram/error.hpp"
#include "ultragram/valued_space.hpp"

using namespace ultragram;

namespace {

using Outcome = IndependenceVerdict::Outcome;
using NPKind = NearestPointResult::Kind;

Ambient over(const ResidueField& f, const OrderedGroup& g = OrderedGroup::integers()) { return {g, f}; }

Series mono(const Ambient& a, const Rational& e, long c = 1) {
  return Series::monomial(a, a.group.element({e}), a.field.from_integer(c));
}

Series poly(const Ambient& a, std::initializer_list<std::pair<long, long>> terms) {
  std::vector<Term> out;
  for (auto [e, c] : terms) out.push_back({a.group.element(e), a.field.from_integer(c)});
  return Series::from_terms(a, out);
}

Precision prec(const Ambient& a, long ceiling, std::size_t max_terms = 8) {
  return {a.group.element(ceiling), max_terms};
}

}  // namespace

TEST(Independence, SingletonAndEmpty) {
  const auto a = over(ResidueField::prime(3));
  const auto K = SubfieldPresentation::rational_functions(a, a.field);
  const Family one{Series::constant(a, a.field.one())};
  EXPECT_TRUE(is_valuation_independent(K, one, prec(a, 10)).independent());
  EXPECT_TRUE(is_valuation_independent(K, Family{}, prec(a, 10)).independent());
}

TEST(Independence, TranscendentalResidue) {
  const auto a = over(ResidueField::rational_functions(7));
  const auto K = SubfieldPresentation::rational_functions(a, ResidueField::prime(7));
  const Family B{Series::constant(a, a.field.one()), Series::constant(a, a.field.variable())};
  EXPECT_TRUE(is_valuation_independent(K, B, prec(a, 10)).independent());
}

TEST(Independence, DependentWitnessRechecks) {
  const auto a = over(ResidueField::prime(5));
  const auto K = SubfieldPresentation::rational_functions(a, a.field);
  const Family B{Series::constant(a, a.field.one()), poly(a, {{0, 1}, {1, 1}})};
  const auto verdict = is_valuation_independent(K, B, prec(a, 10));
  ASSERT_EQ(verdict.outcome, Outcome::Dependent);
  ASSERT_TRUE(verdict.witness.has_value());
  EXPECT_EQ(verdict.witness->value, a.group.zero());
  EXPECT_TRUE(verdict.witness->recheck(prec(a, 10)));
  EXPECT_EQ(valuation(verdict.witness->combination(), prec(a, 10)).value, a.group.element(1));
}

TEST(Independence, DistinctCosets) {
  const auto a = over(ResidueField::prime(5), OrderedGroup::rationals());
  const auto K = SubfieldPresentation::rational_functions(a, a.field);
  const Family B{Series::constant(a, a.field.one()), mono(a, Rational(1, 2))};
  EXPECT_TRUE(is_valuation_independent(K, B, prec(a, 10)).independent());
  const Family W{Series::constant(a, a.field.one())};
  const Family Bp{mono(a, Rational(1, 2))};
  EXPECT_TRUE(is_valuation_independent_over(K, Bp, W, prec(a, 10)).independent());
}

TEST(Independence, OverUncertifiedSubspaceThrows) {
  const auto a = over(ResidueField::prime(5));
  const auto K = SubfieldPresentation::rational_functions(a, a.field);
  const Family W{Series::constant(a, a.field.one()), poly(a, {{0, 1}, {1, 1}})};
  const Family B{mono(a, 3)};
  try {
    is_valuation_independent_over(K, B, W, prec(a, 10));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UncertifiedSubspace);
  }
}

TEST(Independence, ZeroElementRejected) {
  const auto a = over(ResidueField::prime(5));
  const auto K = SubfieldPresentation::rational_functions(a, a.field);
  const Family B{Series::zero(a)};
  try {
    is_valuation_independent(K, B, prec(a, 10));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroElementInFamily);
  }
}

TEST(Independence, UnwitnessedIsInconclusive) {
  const auto a = over(ResidueField::prime(5));
  const auto K = SubfieldPresentation::rational_functions(a, a.field);
  const Family B{mono(a, 20)};
  EXPECT_EQ(is_valuation_independent(K, B, prec(a, 10)).outcome, Outcome::Inconclusive);
}

TEST(ResidueProfile, KeepsRepetition) {
  const auto a = over(ResidueField::prime(5));
  const Family U{mono(a, 1), mono(a, 1, 2), mono(a, 2)};
  const auto p = residue_profile(U, mono(a, 1), prec(a, 10));
  ASSERT_EQ(p.entries.size(), 2u);
  EXPECT_EQ(p.entries[1], a.field.from_integer(2));
  const Family V{poly(a, {{1, 1}, {2, 1}}), poly(a, {{1, 1}, {2, -1}})};
  const auto q = residue_profile(V, mono(a, 1), prec(a, 10));
  ASSERT_EQ(q.entries.size(), 2u);
  EXPECT_TRUE(q.entries[0].is_one() && q.entries[1].is_one());
}

TEST(Normalize, RejectsDependentConstants) {
  const auto a = over(ResidueField::prime(5));
  const auto K = SubfieldPresentation::rational_functions(a, a.field);
  const Family B{mono(a, 2), Series::constant(a, a.field.from_integer(3))};
  try {
    normalize(K, B, prec(a, 10));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotIndependent);
  }
}

TEST(Normalize, ScalesToCanonicalValues) {
  const auto a = over(ResidueField::prime(5), OrderedGroup::rationals());
  const auto K = SubfieldPresentation::rational_functions(a, a.field);
  const Family B{mono(a, Rational(1, 2), 2), Series::constant(a, a.field.from_integer(3))};
  const auto n = normalize(K, B, prec(a, 10));
  EXPECT_TRUE(check_normalized(K, n.elements, prec(a, 10)).pass);
  ASSERT_EQ(n.elements.size(), 2u);
  EXPECT_EQ(valuation(n.elements[1], prec(a, 10)).value, a.group.zero());
  EXPECT_TRUE(leading_term(n.elements[1], prec(a, 10))->coefficient.is_one());
  EXPECT_EQ(valuation(n.elements[0], prec(a, 10)).value, a.group.element({Rational(1, 2)}));
  for (std::size_t i = 0; i < B.size(); ++i) {
    EXPECT_TRUE(equal_up_to(n.elements[i], n.scalings[i] * B[i], a.group.element(10)));
  }
}

TEST(Normalize, IdempotentOnNormalizedInput) {
  const auto a = over(ResidueField::prime(5), OrderedGroup::rationals());
  const auto K = SubfieldPresentation::rational_functions(a, a.field);
  const Family B{Series::constant(a, a.field.one()), mono(a, Rational(1, 2))};
  const auto n = normalize(K, B, prec(a, 10));
  for (std::size_t i = 0; i < B.size(); ++i) EXPECT_TRUE(n.elements[i].same_node(B[i]));
}

TEST(CheckNormalized, ReportsFailingCondition) {
  const auto a = over(ResidueField::prime(5), OrderedGroup::rationals());
  const auto K = SubfieldPresentation::rational_functions(a, a.field);
  const Family one{Series::constant(a, a.field.one())};
  EXPECT_TRUE(check_normalized(K, one, prec(a, 10)).pass);

  const Family n2{mono(a, 1), mono(a, 1) * poly(a, {{0, 1}, {1, 1}})};
  const auto c2 = check_normalized(K, n2, prec(a, 10));
  EXPECT_FALSE(c2.pass);
  EXPECT_EQ(c2.condition, "N2");

  const Family n1{mono(a, Rational(1, 2)), mono(a, Rational(3, 2))};
  const auto c1 = check_normalized(K, n1, prec(a, 10));
  EXPECT_FALSE(c1.pass);
  EXPECT_EQ(c1.condition, "N1");

  const Family n3{mono(a, 2)};
  EXPECT_EQ(check_normalized(K, n3, prec(a, 10)).condition, "N3");
  const Family n4{Series::constant(a, a.field.from_integer(2))};
  EXPECT_EQ(check_normalized(K, n4, prec(a, 10)).condition, "N4");
}

TEST(NearestPoint, TelescopingDifferences) {
  const auto a = over(ResidueField::rationals());
  const auto K = SubfieldPresentation::trivial(a, a.field);
  const Family W{poly(a, {{1, 1}, {2, -1}}), poly(a, {{2, 1}, {3, -1}})};
  const auto r = nearest_point(K, mono(a, 1), W, prec(a, 20));
  ASSERT_EQ(r.kind, NPKind::Value);
  EXPECT_EQ(*r.value, a.group.element(3));
  EXPECT_TRUE(equal_up_to(r.best, poly(a, {{1, 1}, {3, -1}}), a.group.element(20)));
  EXPECT_EQ(valuation(mono(a, 1) - r.best, prec(a, 20)).value, *r.value);
}

TEST(NearestPoint, StreamedTelescopingIsUnbounded) {
  const auto a = over(ResidueField::rationals());
  const auto K = SubfieldPresentation::trivial(a, a.field);
  const auto stage = [&](std::size_t n) {
    Family W;
    for (std::size_t i = 1; i <= n; ++i) {
      const long e = static_cast<long>(i);
      W.push_back(poly(a, {{e, 1}, {e + 1, -1}}));
    }
    return W;
  };
  const auto s = nearest_point_stream(K, mono(a, 1), stage, prec(a, 40, 6));
  ASSERT_EQ(s.result.kind, NPKind::Unbounded);
  ASSERT_EQ(s.result.trace.size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(s.result.trace[i], a.group.element(static_cast<long>(i) + 2));
}

TEST(NearestPoint, ExactMember) {
  const auto a = over(ResidueField::prime(5));
  const auto K = SubfieldPresentation::rational_functions(a, a.field);
  const Family W{Series::constant(a, a.field.one())};
  const Series b = poly(a, {{0, 2}, {1, 3}, {4, 1}});
  const auto r = nearest_point(K, b, W, prec(a, 20));
  ASSERT_EQ(r.kind, NPKind::ExactMember);
  EXPECT_TRUE(equal_up_to(r.coefficients[0] * W[0], b, a.group.element(30)));
}

TEST(NearestPoint, ArtinSchreierElementIsUnbounded) {
  const auto a = over(ResidueField::prime(3));
  const auto K = SubfieldPresentation::rational_functions(a, a.field);
  const Family W{Series::constant(a, a.field.one())};
  const auto r = nearest_point(K, artin_schreier_series(a, 3), W, prec(a, 1000, 5));
  ASSERT_EQ(r.kind, NPKind::Unbounded);
  const std::vector<long> expected{1, 3, 9, 27, 81};
  ASSERT_EQ(r.trace.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(r.trace[i], a.group.element(expected[i]));
    EXPECT_EQ(valuation(artin_schreier_series(a, 3) - r.trace_points[i], prec(a, 1000)).value, r.trace[i]);
  }
}

TEST(NearestPoint, CompletionConvergesToMember) {
  const auto a = over(ResidueField::prime(3));
  const auto K = SubfieldPresentation::completion(a, a.field);
  const Family W{Series::constant(a, a.field.one())};
  const auto r = nearest_point(K, artin_schreier_series(a, 3), W, prec(a, 100));
  EXPECT_EQ(r.kind, NPKind::ExactMember);
  EXPECT_TRUE(r.via_limit);
}

TEST(NearestPoint, RejectsUnnormalizedSubspace) {
  const auto a = over(ResidueField::prime(5));
  const auto K = SubfieldPresentation::rational_functions(a, a.field);
  const Family W{mono(a, 2)};
  try {
    nearest_point(K, mono(a, 1), W, prec(a, 10));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotNormalized);
  }
}

TEST(NearestPoint, TranscendentalResidueBoundsDistance) {
  const auto a = over(ResidueField::rational_functions(3));
  const auto K = SubfieldPresentation::trivial(a, ResidueField::prime(3));
  Family W;
  for (long i = 0; i < 4; ++i) W.push_back(mono(a, i));
  const Series ty = Series::monomial(a, a.group.element(1), a.field.variable());
  const Family B{ty};
  EXPECT_TRUE(is_valuation_independent_over(K, B, W, prec(a, 10)).independent());
  const auto r = nearest_point(K, ty, W, prec(a, 10));
  ASSERT_EQ(r.kind, NPKind::Value);
  EXPECT_EQ(*r.value, a.group.element(1));
}

TEST(Orthogonalize, Examples) {
  const auto q = over(ResidueField::prime(5), OrderedGroup::rationals());
  const auto Kq = SubfieldPresentation::rational_functions(q, q.field);
  const Family g1{Series::constant(q, q.field.one()), mono(q, Rational(1, 2))};
  const auto o1 = orthogonalize(Kq, g1, prec(q, 10));
  EXPECT_EQ(o1.kind, OrthogonalizationResult::Kind::Basis);
  EXPECT_EQ(o1.basis.size(), 2u);

  const auto z = over(ResidueField::prime(5));
  const auto Kz = SubfieldPresentation::rational_functions(z, z.field);
  const Family g2{Series::constant(z, z.field.one()), poly(z, {{0, 1}, {1, 1}})};
  const auto o2 = orthogonalize(Kz, g2, prec(z, 10));
  EXPECT_EQ(o2.kind, OrthogonalizationResult::Kind::Basis);
  EXPECT_EQ(o2.basis.size(), 1u);
  EXPECT_EQ(o2.skipped, std::vector<std::size_t>{1});
}

TEST(Orthogonalize, LexCounterexampleIsObstructed) {
  const auto a = over(ResidueField::prime(3), OrderedGroup::lex(2));
  const auto K = SubfieldPresentation::rational_functions(a, a.field);
  const Series u = Series::monomial(a, a.group.element({1, 0}), a.field.one());
  const Series x = artin_schreier_series(a, 3) + u;
  const Family gens{Series::constant(a, a.field.one()), x};
  const Precision p{a.group.element({2, 0}), 5};
  const auto o = orthogonalize(K, gens, p);
  ASSERT_EQ(o.kind, OrthogonalizationResult::Kind::Obstruction);
  EXPECT_EQ(*o.obstruction_index, 1u);
  ASSERT_EQ(o.obstruction->kind, NPKind::Unbounded);
  EXPECT_EQ(o.obstruction->trace.back(), a.group.element({0, 81}));
}

TEST(Exchange, RemovesMinimalSummand) {
  const auto a = over(ResidueField::prime(5));
  const auto K = SubfieldPresentation::trivial(a, a.field);
  const Family B{Series::constant(a, a.field.one()), mono(a, 1)};
  const auto r = basis_exchange(K, B, Family{}, poly(a, {{0, 1}, {1, 1}}), prec(a, 10));
  EXPECT_EQ(r.removed, 0u);
  EXPECT_TRUE(r.shift.is_known_zero() || valuation(r.shift, prec(a, 10)).exhausted);
  EXPECT_TRUE(r.certificate.independent());
  ASSERT_EQ(r.remaining.size(), 1u);

  const auto same = basis_exchange(K, B, Family{}, mono(a, 1), prec(a, 10));
  EXPECT_EQ(same.removed, 1u);
}

TEST(Exchange, TieRemovesLowestIndex) {
  const auto a = over(ResidueField::rational_functions(5));
  const auto K = SubfieldPresentation::trivial(a, ResidueField::prime(5));
  const Family B{Series::constant(a, a.field.one()), Series::constant(a, a.field.variable())};
  const auto r = basis_exchange(K, B, Family{}, Series::constant(a, a.field.one() + a.field.variable()), prec(a, 10));
  EXPECT_EQ(r.removed, 0u);
  EXPECT_TRUE(r.certificate.independent());
}

TEST(Exchange, OutsideSpanThrows) {
  const auto a = over(ResidueField::prime(5));
  const auto K = SubfieldPresentation::trivial(a, a.field);
  const Family B{Series::constant(a, a.field.one())};
  try {
    basis_exchange(K, B, Family{}, mono(a, 1), prec(a, 10));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotInSpan);
  }
}

TEST(RelativeBasis, Examples) {
  const auto a = over(ResidueField::prime(5), OrderedGroup::rationals());
  const auto K = SubfieldPresentation::trivial(a, a.field);
  const Family B{Series::constant(a, a.field.one()), mono(a, Rational(1, 2)), mono(a, 1)};
  const Series x = Series::constant(a, a.field.one()) + mono(a, 1);
  const Family gens{x};
  const auto r = relative_basis(K, B, Family{}, gens, prec(a, 10));
  ASSERT_EQ(r.A.size(), 1u);
  EXPECT_EQ(r.B_prime.size(), 2u);
  EXPECT_TRUE(r.A_certificate.independent());
  EXPECT_TRUE(r.B_certificate.independent());

  const auto none = relative_basis(K, B, Family{}, Family{}, prec(a, 10));
  EXPECT_TRUE(none.A.empty());
  EXPECT_EQ(none.B_prime.size(), 3u);

  const auto all = relative_basis(K, B, Family{}, B, prec(a, 10));
  EXPECT_EQ(all.A.size(), 3u);
  EXPECT_TRUE(all.B_prime.empty());
}

TEST(Immediacy, Examples) {
  const auto a = over(ResidueField::prime(3));
  const auto K = SubfieldPresentation::rational_functions(a, a.field);
  const auto e = immediacy_evidence(K, artin_schreier_series(a, 3), prec(a, 1000, 5));
  EXPECT_EQ(e.kind, ImmediacyResult::Kind::ImmediateEvidence);

  const auto s = over(ResidueField::rational_functions(3));
  const auto Ks = SubfieldPresentation::rational_functions(s, ResidueField::prime(3));
  EXPECT_EQ(immediacy_evidence(Ks, Series::constant(s, s.field.variable()), prec(s, 10)).kind,
            ImmediacyResult::Kind::NotImmediateWitness);

  const auto q = over(ResidueField::prime(5), OrderedGroup::rationals());
  const auto Kq = SubfieldPresentation::rational_functions(q, q.field);
  EXPECT_EQ(immediacy_evidence(Kq, mono(q, Rational(1, 2)), prec(q, 10)).kind,
            ImmediacyResult::Kind::NotImmediateWitness);

  try {
    immediacy_evidence(K, poly(a, {{0, 1}, {2, 1}}), prec(a, 10));
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::ProbeInK);
  }
}
