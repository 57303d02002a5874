#include <gtest/gtest.h>

#include <random>

#include "ultragram/error.hpp"
#include "ultragram/value_group.hpp"

using namespace ultragram;

namespace {

GroupElement q(const char* text) { return OrderedGroup::rationals().element({parse_rational(text)}); }
GroupElement z2(long a, long b) { return OrderedGroup::lex(2).element({Rational(a), Rational(b)}); }

}  // namespace

TEST(ValueGroup, CompareLex) {
  EXPECT_EQ(compare(z2(1, 2), z2(1, 2)), std::strong_ordering::equal);
  EXPECT_EQ(compare(z2(1, -5), z2(0, 100)), std::strong_ordering::greater);
  EXPECT_EQ(compare(q("1/2"), q("1/3")), std::strong_ordering::greater);
}

TEST(ValueGroup, Arithmetic) {
  EXPECT_EQ(q("1/2") + q("1/2"), q("1"));
  EXPECT_TRUE((q("3/7") + -q("3/7")).is_zero());
  EXPECT_EQ(z2(1, 0) + z2(0, 3), z2(1, 3));
  EXPECT_EQ(z2(1, 3).to_string(), "(1,3)");
  EXPECT_EQ(q("-2/4").to_string(), "-1/2");
}

TEST(ValueGroup, MismatchedGroupsThrow) {
  try {
    (void)compare(q("1"), z2(0, 1));
    FAIL() << "expected MismatchedGroups";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MismatchedGroups);
  }
}

TEST(ValueGroup, IntegerLineRejectsFractions) {
  EXPECT_THROW((void)OrderedGroup::integers().element({Rational(1, 2)}), Error);
}

TEST(ValueGroup, CosetEqual) {
  const Subgroup h = Subgroup::unit_line(OrderedGroup::rationals());
  EXPECT_TRUE(coset_equal(q("1/2"), q("1/2"), h));
  EXPECT_TRUE(coset_equal(q("1/2"), q("3/2"), h));
  EXPECT_FALSE(coset_equal(q("1/2"), q("1/3"), h));
  EXPECT_FALSE(coset_equal(q("1/2"), q("0"), h));
}

TEST(ValueGroup, SubgroupIndex) {
  const auto zg = OrderedGroup::integers();
  const Subgroup two(zg, {zg.element(2)});
  const Subgroup one(zg, {zg.element(1)});
  const auto idx = subgroup_index(two, one);
  EXPECT_TRUE(idx.finite);
  EXPECT_EQ(idx.value, 2);
  EXPECT_EQ(subgroup_index(one, one).value, 1);

  const auto lex = OrderedGroup::lex(2);
  const Subgroup vertical = Subgroup::unit_line(lex);
  const Subgroup full(lex, {z2(1, 0), z2(0, 1)});
  EXPECT_FALSE(subgroup_index(vertical, full).finite);
  EXPECT_EQ(subgroup_index(vertical, full).to_string(), "infinite");

  try {
    (void)subgroup_index(one, two);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotASubgroup);
  }
}

TEST(ValueGroup, IndexOfRationalLattices) {
  const auto qg = OrderedGroup::rationals();
  const Subgroup z = Subgroup::unit_line(qg);
  const Subgroup half(qg, {q("1/2"), q("1")});
  EXPECT_EQ(subgroup_index(z, half).value, 2);
  const Subgroup sixth(qg, {q("1/2"), q("1/3")});
  EXPECT_EQ(subgroup_index(z, sixth).value, 6);
}

TEST(ValueGroup, IndexMatchesCosetEnumeration) {
  // Lattices in Z^2_lex; the index equals the number of distinct cosets
  // among the box of small vectors when the box covers a fundamental domain.
  const auto lex = OrderedGroup::lex(2);
  const Subgroup h(lex, {z2(2, 1), z2(0, 3)});
  const Subgroup g(lex, {z2(1, 0), z2(0, 1)});
  const auto idx = subgroup_index(h, g);
  ASSERT_TRUE(idx.finite);
  std::vector<GroupElement> reps;
  for (long a = 0; a < 6; ++a) {
    for (long b = 0; b < 6; ++b) {
      const auto x = z2(a, b);
      bool seen = false;
      for (const auto& r : reps) seen = seen || coset_equal(r, x, h);
      if (!seen) reps.push_back(x);
    }
  }
  EXPECT_EQ(Integer(static_cast<long>(reps.size())), idx.value);
}

TEST(ValueGroup, Cofinality) {
  const auto qg = OrderedGroup::rationals();
  EXPECT_TRUE(is_cofinal(Subgroup::unit_line(qg), Subgroup(qg, {q("1/2")})));
  const auto lex = OrderedGroup::lex(2);
  const Subgroup full(lex, {z2(1, 0), z2(0, 1)});
  EXPECT_FALSE(is_cofinal(Subgroup::unit_line(lex), full));
  EXPECT_TRUE(is_cofinal(full, full));
}

TEST(ValueGroup, ElementAbove) {
  const auto qg = OrderedGroup::rationals();
  const Subgroup z = Subgroup::unit_line(qg);
  EXPECT_EQ(*z.element_above(q("11/2")), q("6"));
  EXPECT_EQ(*z.element_above(q("6")), q("7"));
  EXPECT_TRUE(*z.element_above(q("-3")) > q("-3"));
  const auto lex = OrderedGroup::lex(2);
  EXPECT_FALSE(Subgroup::unit_line(lex).element_above(z2(1, 0)).has_value());
}

TEST(ValueGroupLaws, OrderAndCosets) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> d(-20, 20);
  const auto lex = OrderedGroup::lex(3);
  const Subgroup h(lex, {lex.element({Rational(0), Rational(2), Rational(1)}), lex.element({Rational(0), Rational(0), Rational(3)})});
  auto rand_elem = [&] { return lex.element({Rational(d(rng)), Rational(d(rng)), Rational(d(rng))}); };
  for (int i = 0; i < 300; ++i) {
    const auto a = rand_elem(), b = rand_elem(), c = rand_elem();
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ((a + b) + c, a + (b + c));
    if (a < b) EXPECT_TRUE(a + c < b + c);
    if (a < b && b < c) EXPECT_TRUE(a < c);
    EXPECT_EQ(coset_equal(a, b, h), coset_equal(b, a, h));
    if (coset_equal(a, b, h)) EXPECT_TRUE(coset_equal(a + c, b + c, h));
    if (coset_equal(a, b, h) && coset_equal(b, c, h)) EXPECT_TRUE(coset_equal(a, c, h));
  }
}

TEST(ValueGroup, ParseRational) {
  EXPECT_EQ(parse_rational(" -6/4 "), Rational(-3, 2));
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("abc"), Error);
}
