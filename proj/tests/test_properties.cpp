// Randomized laws of valuation independence. Seeds are fixed; every property
// runs at least 200 cases.

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "ultragram/valued_space.hpp"

using namespace ultragram;

namespace {

constexpr std::size_t kCases = 200;

struct Setting {
  Ambient a{OrderedGroup::rationals(), ResidueField::rational_functions(5)};
  SubfieldPresentation K = SubfieldPresentation::rational_functions(a, ResidueField::prime(5));
  Precision prec{a.group.element(30), 8};
};

const std::vector<std::string> kCoefficients{"1", "2", "3", "4", "s", "s+1", "2*s", "s^2", "3*s^2+s", "1/s"};

FieldElement random_coefficient(const Setting& st, std::mt19937_64& rng) {
  return st.a.field.parse(kCoefficients[rng() % kCoefficients.size()]);
}

GroupElement random_exponent(const Setting& st, std::mt19937_64& rng, long lo, long hi) {
  const long den = 1 + static_cast<long>(rng() % 3);
  const long num = lo * den + static_cast<long>(rng() % static_cast<std::uint64_t>((hi - lo) * den + 1));
  return st.a.group.element({Rational(num, den)});
}

Series random_element(const Setting& st, std::mt19937_64& rng) {
  std::vector<Term> terms;
  const std::size_t n = 1 + rng() % 3;
  for (std::size_t i = 0; i < n; ++i) terms.push_back({random_exponent(st, rng, -2, 4), random_coefficient(st, rng)});
  Series x = Series::from_terms(st.a, terms);
  if (x.is_known_zero() || valuation(x, st.prec).exhausted) return Series::constant(st.a, st.a.field.one());
  return x;
}

Family random_family(const Setting& st, std::mt19937_64& rng, std::size_t max_size = 3) {
  Family out;
  const std::size_t n = 1 + rng() % max_size;
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_element(st, rng));
  return out;
}

// Independent families drawn by rejection.
template <class Check>
void for_independent_families(const Setting& st, std::uint64_t seed, Check check) {
  std::mt19937_64 rng(seed);
  std::size_t found = 0;
  for (std::size_t attempt = 0; attempt < 50 * kCases && found < kCases; ++attempt) {
    Family B = random_family(st, rng);
    const IndependenceVerdict v = is_valuation_independent(st.K, B, st.prec);
    if (!v.independent()) continue;
    ++found;
    check(B, v, rng);
  }
  ASSERT_EQ(found, kCases);
}

Series combination(const Setting& st, const Family& c, const Family& B) {
  Series acc = Series::zero(st.a);
  for (std::size_t i = 0; i < B.size(); ++i) acc = acc + c[i] * B[i];
  return acc;
}

}  // namespace

TEST(Properties, MinEqualityOnIndependentFamilies) {
  const Setting st;
  for_independent_families(st, 11, [&](const Family& B, const IndependenceVerdict&, std::mt19937_64& rng) {
    Family c;
    for (std::size_t i = 0; i < B.size(); ++i) c.push_back(st.K.sample(rng, -2, 3));
    std::optional<GroupElement> lowest;
    for (std::size_t i = 0; i < B.size(); ++i) {
      const Valuation v = valuation(c[i] * B[i], st.prec);
      ASSERT_TRUE(v.is_value());
      if (!lowest || v.value < *lowest) lowest = v.value;
    }
    const Valuation total = valuation(combination(st, c, B), st.prec);
    ASSERT_TRUE(total.is_value());
    EXPECT_EQ(total.value, *lowest);
  });
}

TEST(Properties, ScalingInvariance) {
  const Setting st;
  std::mt19937_64 rng(12);
  for (std::size_t k = 0; k < kCases; ++k) {
    const Family B = random_family(st, rng);
    Family scaled;
    for (const auto& b : B) scaled.push_back(st.K.sample(rng, -3, 3) * b);
    const auto before = is_valuation_independent(st.K, B, st.prec);
    const auto after = is_valuation_independent(st.K, scaled, st.prec);
    ASSERT_NE(before.outcome, IndependenceVerdict::Outcome::Inconclusive);
    EXPECT_EQ(before.outcome, after.outcome) << "case " << k;
  }
}

TEST(Properties, Transitivity) {
  // B u B' is independent over W iff B is over W and B' is over W + Span(B).
  const Setting st;
  std::mt19937_64 rng(13);
  std::size_t cases = 0;
  std::size_t independent_unions = 0;
  for (std::size_t attempt = 0; attempt < 50 * kCases && cases < kCases; ++attempt) {
    const Family W = random_family(st, rng, 2);
    if (!is_valuation_independent(st.K, W, st.prec).independent()) continue;
    const Family B = random_family(st, rng, 2);
    const Family B2 = random_family(st, rng, 2);
    Family both = B;
    both.insert(both.end(), B2.begin(), B2.end());
    Family base = W;
    base.insert(base.end(), B.begin(), B.end());
    const bool first = is_valuation_independent_over(st.K, B, W, st.prec).independent();
    const bool second = first && is_valuation_independent_over(st.K, B2, base, st.prec).independent();
    const bool joint = is_valuation_independent_over(st.K, both, W, st.prec).independent();
    EXPECT_EQ(second, joint) << "case " << cases;
    independent_unions += joint;
    ++cases;
  }
  ASSERT_EQ(cases, kCases);
  EXPECT_GT(independent_unions, kCases / 20);
}

TEST(Properties, DependentWitnessesRecheck) {
  const Setting st;
  std::mt19937_64 rng(19);
  std::size_t dependent = 0;
  for (std::size_t attempt = 0; attempt < 50 * kCases && dependent < kCases; ++attempt) {
    const Family B = random_family(st, rng);
    const IndependenceVerdict v = is_valuation_independent(st.K, B, st.prec);
    if (v.outcome != IndependenceVerdict::Outcome::Dependent) continue;
    ++dependent;
    ASSERT_TRUE(v.witness.has_value());
    EXPECT_TRUE(v.witness->recheck(st.prec));
    const Valuation sum = valuation(v.witness->combination(), st.prec);
    EXPECT_TRUE(!sum.is_value() || sum.value > v.witness->value);
  }
  ASSERT_EQ(dependent, kCases);
}

TEST(Properties, IndependentFamiliesHaveNoLinearRelations) {
  // Brute force over all nonzero coefficient tuples of a trivially valued F3.
  const Ambient a{OrderedGroup::integers(), ResidueField::rational_functions(3)};
  const auto K = SubfieldPresentation::trivial(a, ResidueField::prime(3));
  const Precision prec{a.group.element(20), 8};
  const std::vector<std::string> coefficients{"1", "2", "s", "s+1", "2*s^2", "s^2+s"};
  std::mt19937_64 rng(20);
  std::size_t found = 0;
  for (std::size_t attempt = 0; attempt < 50 * kCases && found < kCases; ++attempt) {
    Family B;
    for (std::size_t i = 0, n = 1 + rng() % 3; i < n; ++i) {
      std::vector<Term> terms;
      for (std::size_t j = 0, m = 1 + rng() % 2; j < m; ++j) {
        terms.push_back({a.group.element(static_cast<long>(rng() % 3)), a.field.parse(coefficients[rng() % coefficients.size()])});
      }
      B.push_back(Series::from_terms(a, terms));
    }
    bool zero = false;
    for (const auto& b : B) zero = zero || valuation(b, prec).exhausted;
    if (zero || !is_valuation_independent(K, B, prec).independent()) continue;
    ++found;
    std::size_t total = 1;
    for (std::size_t i = 0; i < B.size(); ++i) total *= 3;
    for (std::size_t m = 1; m < total; ++m) {
      Series acc = Series::zero(a);
      for (std::size_t i = 0, rest = m; i < B.size(); ++i, rest /= 3) {
        acc = acc + B[i].scaled(a.field.from_integer(static_cast<long>(rest % 3)), a.group.zero());
      }
      EXPECT_TRUE(valuation(acc, prec).is_value()) << "relation " << m;
    }
  }
  ASSERT_EQ(found, kCases);
}

TEST(Properties, NormalizationIsIdempotentAndSatisfiesN1ToN4) {
  const Setting st;
  for_independent_families(st, 14, [&](const Family& B, const IndependenceVerdict&, std::mt19937_64&) {
    const NormalizedFamily n = normalize(st.K, B, st.prec);
    const NormalizationCheck c = check_normalized(st.K, n.elements, st.prec);
    EXPECT_TRUE(c.pass) << c.condition << " " << c.detail;
    for (std::size_t i = 0; i < B.size(); ++i) {
      EXPECT_FALSE(valuation(n.elements[i] - n.scalings[i] * B[i], st.prec).is_value());
    }
    const NormalizedFamily again = normalize(st.K, n.elements, st.prec);
    for (std::size_t i = 0; i < B.size(); ++i) EXPECT_TRUE(again.elements[i].same_node(n.elements[i]));
  });
}

TEST(Properties, SmallPerturbationsKeepIndependence) {
  const Setting st;
  const std::vector<Rational> gaps{Rational(1, 3), Rational(1, 2), Rational(1), Rational(2)};
  for_independent_families(st, 15, [&](const Family& B, const IndependenceVerdict&, std::mt19937_64& rng) {
    const Family U = normalize(st.K, B, st.prec).elements;
    const IndependenceVerdict v = is_valuation_independent(st.K, U, st.prec);
    Family perturbed;
    for (std::size_t i = 0; i < U.size(); ++i) {
      const GroupElement e = v.values[i] + st.a.group.element({gaps[rng() % gaps.size()]});
      perturbed.push_back(U[i] + Series::monomial(st.a, e, random_coefficient(st, rng)));
    }
    const IndependenceVerdict w = is_valuation_independent(st.K, perturbed, st.prec);
    EXPECT_TRUE(w.independent());
    EXPECT_EQ(w.values, v.values);
    const NormalizationCheck c = check_normalized(st.K, perturbed, st.prec);
    EXPECT_TRUE(c.pass) << c.condition << " " << c.detail;
  });
}

TEST(Properties, ValueSetIsValueGroupPlusBasisValues) {
  const Setting st;
  const Subgroup& vK = st.K.value_subgroup();
  for_independent_families(st, 16, [&](const Family& B, const IndependenceVerdict& v, std::mt19937_64& rng) {
    // Every value of V lies in vK + v(B).
    Family c;
    for (std::size_t i = 0; i < B.size(); ++i) c.push_back(st.K.sample(rng, -2, 3));
    const Valuation total = valuation(combination(st, c, B), st.prec);
    ASSERT_TRUE(total.is_value());
    bool found = false;
    for (const auto& value : v.values) found = found || vK.contains(total.value - value);
    EXPECT_TRUE(found);
    // Every element of vK + v(B) is a value of V.
    const std::size_t j = rng() % B.size();
    const GroupElement delta = st.a.group.element(static_cast<long>(rng() % 7) - 3);
    const Valuation hit = valuation(st.K.monomial_section(delta) * B[j], st.prec);
    ASSERT_TRUE(hit.is_value());
    EXPECT_EQ(hit.value, delta + v.values[j]);
  });
}

TEST(Properties, NearestPointMatchesExhaustiveSearchOverFp) {
  std::mt19937_64 rng(17);
  for (std::size_t k = 0; k < kCases; ++k) {
    const long p = k % 2 ? 2 : 3;
    const Ambient a{OrderedGroup::integers(), ResidueField::prime(p)};
    const auto K = SubfieldPresentation::trivial(a, a.field);
    const Precision prec{a.group.element(20), 8};
    auto draw = [&]() {
      oracle::FpPoly f;
      const std::size_t n = 1 + rng() % 4;
      for (std::size_t i = 0; i < n; ++i) f[static_cast<long>(rng() % 7)] = 1 + static_cast<long>(rng() % (p - 1));
      return f;
    };
    auto to_series = [&](const oracle::FpPoly& f) {
      std::vector<Term> terms;
      for (const auto& [e, c] : f) terms.push_back({a.group.element(e), a.field.from_integer(c)});
      return Series::from_terms(a, terms);
    };
    std::vector<oracle::FpPoly> W;
    Family gens;
    for (std::size_t i = 0, n = 1 + rng() % 3; i < n; ++i) {
      W.push_back(draw());
      gens.push_back(to_series(W.back()));
    }
    const oracle::FpPoly b = draw();
    const auto basis = orthogonalize(K, gens, prec);
    ASSERT_EQ(basis.kind, OrthogonalizationResult::Kind::Basis);
    const auto r = nearest_point(K, to_series(b), basis.basis, prec);
    const auto expected = oracle::max_order_over_fp(b, W, p);
    if (!expected) {
      EXPECT_EQ(r.kind, NearestPointResult::Kind::ExactMember) << "case " << k;
    } else {
      ASSERT_EQ(r.kind, NearestPointResult::Kind::Value) << "case " << k;
      EXPECT_EQ(*r.value, a.group.element(*expected)) << "case " << k;
    }
  }
}

TEST(Properties, NearestPointMatchesLinearAlgebraOverQ) {
  std::mt19937_64 rng(18);
  const Ambient a{OrderedGroup::integers(), ResidueField::rationals()};
  const auto K = SubfieldPresentation::trivial(a, a.field);
  const Precision prec{a.group.element(20), 8};
  for (std::size_t k = 0; k < kCases; ++k) {
    auto draw = [&]() {
      oracle::QPoly f;
      const std::size_t n = 1 + rng() % 4;
      for (std::size_t i = 0; i < n; ++i) {
        long c = static_cast<long>(rng() % 7) - 3;
        f[static_cast<long>(rng() % 7)] = c == 0 ? 1 : c;
      }
      return f;
    };
    auto to_series = [&](const oracle::QPoly& f) {
      std::vector<Term> terms;
      for (const auto& [e, c] : f) terms.push_back({a.group.element(e), a.field.from_rational(c)});
      return Series::from_terms(a, terms);
    };
    std::vector<oracle::QPoly> W;
    Family gens;
    for (std::size_t i = 0, n = 1 + rng() % 4; i < n; ++i) {
      W.push_back(draw());
      gens.push_back(to_series(W.back()));
    }
    const oracle::QPoly b = draw();
    const auto basis = orthogonalize(K, gens, prec);
    ASSERT_EQ(basis.kind, OrthogonalizationResult::Kind::Basis);
    const auto r = nearest_point(K, to_series(b), basis.basis, prec);
    const auto expected = oracle::max_order_over_q(b, W);
    if (!expected) {
      EXPECT_EQ(r.kind, NearestPointResult::Kind::ExactMember) << "case " << k;
    } else {
      ASSERT_EQ(r.kind, NearestPointResult::Kind::Value) << "case " << k;
      EXPECT_EQ(*r.value, a.group.element(*expected)) << "case " << k;
    }
  }
}
