#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "ultragram/extension.hpp"

using namespace ultragram;

namespace {

std::vector<GroupElement> sorted(std::vector<GroupElement> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST(ExtensionLaws, FundamentalInequalityAndDefectlessness) {
  // Fields generated over F5(t) by sums of t^(k/d), d <= 3, inside F5((t^Q)).
  const Ambient a{OrderedGroup::rationals(), ResidueField::prime(5)};
  const auto K = SubfieldPresentation::rational_functions(a, a.field);
  const Precision prec{a.group.element(30), 8};
  std::mt19937_64 rng(31);
  std::size_t defectless = 0;
  for (std::size_t k = 0; k < 200; ++k) {
    Family gens;
    for (std::size_t i = 0, n = 1 + rng() % 2; i < n; ++i) {
      std::vector<Term> terms;
      for (std::size_t j = 0, m = 1 + rng() % 2; j < m; ++j) {
        const long den = 1 + static_cast<long>(rng() % 3);
        terms.push_back({a.group.element({Rational(static_cast<long>(rng() % 7) - 2, den)}),
                         a.field.from_integer(1 + static_cast<long>(rng() % 4))});
      }
      const Series g = Series::from_terms(a, terms);
      if (!valuation(g, prec).exhausted) gens.push_back(g);
    }
    if (gens.empty()) continue;
    const ExtensionReport r = analyze_extension(K, gens, prec, 16, ClosureMode::Field);
    ASSERT_TRUE(r.ramification.has_value()) << "case " << k << ": " << r.note;
    const std::size_t ef = r.ramification->e * r.ramification->f;
    EXPECT_GE(r.n, ef) << "case " << k;
    EXPECT_EQ(r.verdict == ExtensionReport::Verdict::VsDefectless, r.n == ef) << "case " << k << ": " << r.note;
    if (r.verdict == ExtensionReport::Verdict::VsDefectless) {
      ++defectless;
      ASSERT_TRUE(r.standard.has_value());
      EXPECT_EQ(r.standard->products.size(), ef);
      EXPECT_TRUE(is_valuation_independent(K, r.standard->products, prec).independent());
    }
  }
  EXPECT_GT(defectless, 100u);
}

TEST(ExtensionLaws, StandardFamiliesStayIndependentOverTheCompletion) {
  // t^(i/e) * s^j over F3(t) remain independent over F3((t)), with
  // coefficients sampled from the completion.
  const Ambient a{OrderedGroup::rationals(), ResidueField::rational_functions(3)};
  const auto K = SubfieldPresentation::rational_functions(a, ResidueField::prime(3));
  const auto M = SubfieldPresentation::completion(a, ResidueField::prime(3));
  const Precision prec{a.group.element(20), 8};
  std::mt19937_64 rng(32);
  for (std::size_t k = 0; k < 200; ++k) {
    const long e = 1 + static_cast<long>(rng() % 3);
    const long f = 1 + static_cast<long>(rng() % 3);
    Family B;
    FieldElement s_power = a.field.one();
    for (long j = 0; j < f; ++j, s_power = s_power * a.field.variable()) {
      for (long i = 0; i < e; ++i) B.push_back(Series::monomial(a, a.group.element({Rational(i, e)}), s_power));
    }
    ASSERT_TRUE(is_valuation_independent(K, B, prec).independent());
    ASSERT_TRUE(is_valuation_independent(M, B, prec).independent()) << "e=" << e << " f=" << f;
    Family c;
    for (std::size_t i = 0; i < B.size(); ++i) c.push_back(M.sample(rng, -2, 2));
    std::optional<GroupElement> lowest;
    Series sum = Series::zero(a);
    for (std::size_t i = 0; i < B.size(); ++i) {
      const Valuation v = valuation(c[i] * B[i], prec);
      ASSERT_TRUE(v.is_value());
      if (!lowest || v.value < *lowest) lowest = v.value;
      sum = sum + c[i] * B[i];
    }
    const Valuation total = valuation(sum, prec);
    ASSERT_TRUE(total.is_value());
    EXPECT_EQ(total.value, *lowest);
  }
}

TEST(ExtensionLaws, ApproximationKeepsCompletionValues) {
  // u = (1, t^gamma + z) with z in the completion and gamma outside vK;
  // b' = (1, u2 - z) has values (0, gamma).
  const Ambient a{OrderedGroup::rationals(), ResidueField::prime(3)};
  const auto K = SubfieldPresentation::rational_functions(a, a.field);
  const auto M = SubfieldPresentation::completion(a, a.field);
  const Precision prec{a.group.element(40), 8};
  const Series one = Series::constant(a, a.field.one());
  const Series as = artin_schreier_series(a, 3);
  std::mt19937_64 rng(33);
  for (std::size_t k = 0; k < 200; ++k) {
    const long den = 2 + static_cast<long>(rng() % 2);
    long num = static_cast<long>(rng() % 30) - 5;
    if (num % den == 0) ++num;
    const GroupElement gamma = a.group.element({Rational(num, den)});
    const Series z = (rng() % 2 ? as : one) * M.sample(rng, 0, 3);
    const Series u2 = Series::monomial(a, gamma, a.field.one()) + z;
    const Family u{one, u2};
    const std::vector<Family> c{{one, Series::zero(a)}, {-z, one}};
    const Approximation r = complete_and_approximate(K, u, c, prec);
    ASSERT_TRUE(r.completion_certificate.independent()) << "case " << k;
    EXPECT_TRUE(r.inequality_holds) << "case " << k;
    ASSERT_TRUE(r.certificate.independent()) << "case " << k;
    EXPECT_EQ(sorted(r.certificate.values), sorted(r.completion_certificate.values)) << "case " << k;
    EXPECT_EQ(r.target_values[1], gamma);
  }
}
