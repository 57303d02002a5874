#include <gtest/gtest.h>

#include "ultragram/error.hpp"
#include "ultragram/residue_field.hpp"

using namespace ultragram;

TEST(ResidueField, PrimeFieldOps) {
  const auto f3 = ResidueField::prime(3);
  EXPECT_EQ(f3.from_integer(2).inverse(), f3.from_integer(2));
  EXPECT_EQ(f3.from_integer(-1), f3.from_integer(2));
  EXPECT_EQ(f3.parse("1/2"), f3.from_integer(2));
  EXPECT_THROW((void)f3.zero().inverse(), Error);
  EXPECT_THROW((void)ResidueField::prime(4), Error);
}

TEST(ResidueField, RationalOps) {
  const auto q = ResidueField::rationals();
  EXPECT_EQ(q.parse("1/2") + q.parse("1/3"), q.parse("5/6"));
  EXPECT_EQ(q.parse("-1/2").to_string(), "-1/2");
}

TEST(ResidueField, RationalFunctionOps) {
  const auto f5s = ResidueField::rational_functions(5);
  const auto s = f5s.variable();
  const auto one = f5s.one();
  EXPECT_EQ((s + one) * (s + one).inverse(), one);
  const auto x = f5s.parse("(s+1)/(s^2+2)");
  EXPECT_EQ(x * f5s.parse("s^2+2"), s + one);
  EXPECT_EQ(f5s.parse("2*s^2+s+1").to_string(), "2*s^2+s+1");
  EXPECT_EQ(f5s.parse("(2*s+2)/(2*s^2+4)"), x);
  EXPECT_EQ(x.to_string(), "(s+1)/(s^2+2)");
  EXPECT_TRUE(f5s.parse("3").in_prime_subfield());
  EXPECT_FALSE(s.in_prime_subfield());
  EXPECT_EQ(f5s.parse("3").to_prime_subfield(), ResidueField::prime(5).from_integer(3));
}

TEST(ResidueField, ParseErrors) {
  EXPECT_THROW((void)ResidueField::prime(3).parse("s"), Error);
  EXPECT_THROW((void)ResidueField::rationals().parse("1+"), Error);
}

TEST(LinearAlgebra, IdentityFullRank) {
  const auto f3 = ResidueField::prime(3);
  std::vector<FieldVector> rows = {{f3.one(), f3.zero()}, {f3.zero(), f3.one()}};
  const auto r = linear_rank(f3, rows);
  EXPECT_EQ(r.rank, 2u);
  EXPECT_TRUE(r.kernel.empty());
}

TEST(LinearAlgebra, KernelWitness) {
  const auto f5 = ResidueField::prime(5);
  std::vector<FieldVector> rows = {{f5.from_integer(1), f5.from_integer(2)}, {f5.from_integer(2), f5.from_integer(4)}};
  const auto r = linear_rank(f5, rows);
  EXPECT_EQ(r.rank, 1u);
  ASSERT_EQ(r.kernel.size(), 1u);
  const auto& k = r.kernel[0];
  // Proportional to (2, -1).
  EXPECT_EQ(k[0] * f5.from_integer(-1), k[1] * f5.from_integer(2));
  for (std::size_t c = 0; c < 2; ++c) EXPECT_TRUE((k[0] * rows[0][c] + k[1] * rows[1][c]).is_zero());
}

TEST(LinearAlgebra, SubfieldIndependence) {
  const auto f3s = ResidueField::rational_functions(3);
  const auto f3 = ResidueField::prime(3);
  std::vector<FieldElement> elems = {f3s.one(), f3s.variable()};
  const auto coords = coordinates_over(f3, elems);
  EXPECT_EQ(linear_rank(f3, coords).rank, 2u);
  std::vector<FieldElement> dependent = {f3s.parse("1/(s+1)"), f3s.parse("2/(s+1)"), f3s.parse("s/(s+1)")};
  const auto c2 = coordinates_over(f3, dependent);
  EXPECT_EQ(linear_rank(f3, c2).rank, 2u);
}

TEST(LinearAlgebra, SolveInSpan) {
  const auto f3 = ResidueField::prime(3);
  std::vector<FieldVector> basis = {{f3.one(), f3.one()}};
  EXPECT_FALSE(solve_in_span(f3, {f3.one(), f3.from_integer(2)}, basis).has_value());
  const auto unit = solve_in_span(f3, {f3.one(), f3.one()}, basis);
  ASSERT_TRUE(unit.has_value());
  EXPECT_EQ((*unit)[0], f3.one());
  const auto zero = solve_in_span(f3, {f3.zero(), f3.zero()}, basis);
  ASSERT_TRUE(zero.has_value());
  EXPECT_TRUE((*zero)[0].is_zero());
}

TEST(LinearAlgebra, RankInvariantUnderPermutationAndScaling) {
  const auto f7 = ResidueField::prime(7);
  std::vector<FieldVector> rows;
  for (long i = 0; i < 4; ++i) rows.push_back({f7.from_integer(i), f7.from_integer(i * i), f7.from_integer(1)});
  const auto base = linear_rank(f7, rows).rank;
  std::swap(rows[0], rows[3]);
  for (auto& x : rows[1]) x = x * f7.from_integer(3);
  EXPECT_EQ(linear_rank(f7, rows).rank, base);
  rows.push_back({f7.from_integer(2), f7.from_integer(5), f7.from_integer(2)});
  const auto r = linear_rank(f7, rows);
  EXPECT_EQ(r.rank, base);
  EXPECT_FALSE(r.kernel.empty());
}
