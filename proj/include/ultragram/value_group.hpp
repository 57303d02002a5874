#pragma once

// Exact ordered abelian groups used as value groups: Z, Q and Z^n with the
// lexicographic order (most significant coordinate first), together with
// finitely generated subgroups and their coset/index arithmetic.

#include <compare>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace ultragram {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "3", "-1/2" into a canonical rational; throws ParseError.
Rational parse_rational(const std::string& text);
std::string rational_to_string(const Rational& q);

enum class GroupKind { IntegerLine, RationalLine, LexProduct };

class GroupElement;

class OrderedGroup {
 public:
  static OrderedGroup integers();
  static OrderedGroup rationals();
  static OrderedGroup lex(std::size_t rank);

  GroupKind kind() const { return kind_; }
  std::size_t rank() const { return rank_; }

  GroupElement zero() const;
  /// The direction of the uniformizer t: 1 in Z/Q, (0,...,0,1) in Z^n_lex.
  GroupElement unit() const;
  /// Validates length and integrality; throws InvalidArgument.
  GroupElement element(std::vector<Rational> coordinates) const;
  GroupElement element(long value) const;

  /// "Z", "Q" or "Z^2_lex".
  std::string name() const;

  bool operator==(const OrderedGroup&) const = default;

 private:
  OrderedGroup(GroupKind kind, std::size_t rank) : kind_(kind), rank_(rank) {}

  GroupKind kind_;
  std::size_t rank_;
};

class GroupElement {
 public:
  const OrderedGroup& group() const { return group_; }
  std::span<const Rational> coordinates() const { return coords_; }
  const Rational& operator[](std::size_t i) const { return coords_[i]; }

  bool is_zero() const;
  bool is_integral() const;

  /// Index of the first nonzero coordinate; rank() for the identity.
  std::size_t leading_index() const;

  GroupElement operator-() const;
  friend GroupElement operator+(const GroupElement& g, const GroupElement& h);
  friend GroupElement operator-(const GroupElement& g, const GroupElement& h);
  friend GroupElement operator*(const Integer& n, const GroupElement& g);

  /// Total order; throws MismatchedGroups when the groups differ.
  friend std::strong_ordering operator<=>(const GroupElement& g, const GroupElement& h);
  friend bool operator==(const GroupElement& g, const GroupElement& h);

  /// "1/2" for rank one groups, "(1,0)" for lexicographic products.
  std::string to_string() const;

 private:
  friend class OrderedGroup;
  GroupElement(OrderedGroup group, std::vector<Rational> coords)
      : group_(group), coords_(std::move(coords)) {}

  OrderedGroup group_;
  std::vector<Rational> coords_;
};

inline std::ostream& operator<<(std::ostream& os, const GroupElement& g) { return os << g.to_string(); }

std::strong_ordering compare(const GroupElement& g, const GroupElement& h);
const GroupElement& min(const GroupElement& g, const GroupElement& h);
const GroupElement& max(const GroupElement& g, const GroupElement& h);

/// A finitely generated subgroup H of an ordered group. Membership is
/// decided on a Hermite normal form of the generator lattice after
/// clearing denominators.
class Subgroup {
 public:
  Subgroup(OrderedGroup ambient, std::vector<GroupElement> generators);
  static Subgroup trivial(OrderedGroup ambient);
  /// The subgroup generated by unit(): Z inside Z or Q, {0}^(n-1) x Z in Z^n_lex.
  static Subgroup unit_line(OrderedGroup ambient);

  const OrderedGroup& ambient() const { return ambient_; }
  const std::vector<GroupElement>& generators() const { return generators_; }

  bool contains(const GroupElement& g) const;
  std::size_t rank() const { return basis_.size(); }
  bool is_trivial() const { return basis_.empty(); }

  /// Smallest leading index among nonzero elements; ambient rank when trivial.
  std::size_t leading_index() const;

  /// Some h in H with h > g, if one exists.
  std::optional<GroupElement> element_above(const GroupElement& g) const;

  /// Coordinates of g with respect to the HNF basis, or nullopt if g is not a member.
  std::optional<std::vector<Integer>> basis_coordinates(const GroupElement& g) const;
  /// HNF basis rows as group elements.
  std::vector<GroupElement> basis() const;

 private:
  OrderedGroup ambient_;
  std::vector<GroupElement> generators_;
  Integer denominator_;                    // common denominator of generator coordinates
  std::vector<std::vector<Integer>> basis_;  // HNF rows of denominator_ * generators
};

bool coset_equal(const GroupElement& g, const GroupElement& h, const Subgroup& subgroup);

struct SubgroupIndex {
  bool finite = true;
  Integer value;  // meaningful when finite
  std::string to_string() const;
};

/// Index (G : H); Infinite when the ranks differ. Throws NotASubgroup unless H <= G.
SubgroupIndex subgroup_index(const Subgroup& sub, const Subgroup& group);

/// Whether every element of G lies below some element of H. Throws NotASubgroup unless H <= G.
bool is_cofinal(const Subgroup& sub, const Subgroup& group);

/// Row-style Hermite normal form of an integer matrix; zero rows dropped.
std::vector<std::vector<Integer>> hermite_normal_form(std::vector<std::vector<Integer>> rows);

}  // namespace ultragram
