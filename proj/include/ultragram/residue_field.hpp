#pragma once

// Residue fields: prime fields F_p, the rationals Q, and rational function
// fields F_p(s). Elements are kept in canonical form, so equality is
// syntactic.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ultragram/value_group.hpp"

namespace ultragram {

/// Dense polynomial over F_p, coefficients low to high, no trailing zeros.
struct FpPoly {
  std::vector<std::uint64_t> coeffs;

  bool is_zero() const { return coeffs.empty(); }
  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  bool operator==(const FpPoly&) const = default;
};

class FieldElement;

class ResidueField {
 public:
  enum class Kind { PrimeField, Rationals, RationalFunctions };

  /// Throws InvalidArgument unless p is a prime below 2^31.
  static ResidueField prime(std::uint64_t p);
  static ResidueField rationals();
  static ResidueField rational_functions(std::uint64_t p);

  Kind kind() const { return kind_; }
  std::uint64_t characteristic() const { return p_; }

  /// F_p inside F_p and F_p(s); Q inside Q.
  ResidueField prime_subfield() const;
  /// Whether `sub` is this field or its prime subfield.
  bool has_subfield(const ResidueField& sub) const;

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement from_integer(long n) const;
  FieldElement from_rational(const Rational& q) const;
  /// The transcendental s of F_p(s).
  FieldElement variable() const;
  FieldElement fraction(FpPoly num, FpPoly den) const;

  /// Parses "3", "-1/2", "s", "2*s^2+s+1", "(s+1)/(s^2+2)".
  FieldElement parse(const std::string& text) const;

  /// "F3", "Q", "F5(s)".
  std::string name() const;

  bool operator==(const ResidueField&) const = default;

 private:
  ResidueField(Kind kind, std::uint64_t p) : kind_(kind), p_(p) {}

  Kind kind_;
  std::uint64_t p_;
};

class FieldElement {
 public:
  struct Fraction {
    FpPoly num;
    FpPoly den;  // monic, coprime to num
    bool operator==(const Fraction&) const = default;
  };

  const ResidueField& field() const { return field_; }

  bool is_zero() const;
  bool is_one() const;
  /// Membership in the prime subfield (constants of F_p(s)).
  bool in_prime_subfield() const;
  /// Image in the prime subfield; throws InvalidArgument when not a constant.
  FieldElement to_prime_subfield() const;
  /// Re-embeds a prime-field element into `target` (F_p -> F_p(s)).
  FieldElement embed_into(const ResidueField& target) const;

  std::uint64_t residue() const { return std::get<std::uint64_t>(value_); }
  const Rational& rational() const { return std::get<Rational>(value_); }
  const Fraction& fraction() const { return std::get<Fraction>(value_); }

  FieldElement operator-() const;
  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  /// Throws DivisionByZero.
  FieldElement inverse() const;
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b);
  friend bool operator==(const FieldElement& a, const FieldElement& b);

  std::string to_string() const;

 private:
  friend class ResidueField;
  using Value = std::variant<std::uint64_t, Rational, Fraction>;
  FieldElement(ResidueField field, Value value) : field_(field), value_(std::move(value)) {}

  ResidueField field_;
  Value value_;
};

using FieldVector = std::vector<FieldElement>;

// --- F_p[s] helpers -------------------------------------------------------

namespace fppoly {
FpPoly add(const FpPoly& a, const FpPoly& b, std::uint64_t p);
FpPoly sub(const FpPoly& a, const FpPoly& b, std::uint64_t p);
FpPoly mul(const FpPoly& a, const FpPoly& b, std::uint64_t p);
FpPoly scale(const FpPoly& a, std::uint64_t c, std::uint64_t p);
/// Quotient and remainder; b nonzero.
std::pair<FpPoly, FpPoly> divmod(const FpPoly& a, const FpPoly& b, std::uint64_t p);
FpPoly gcd(FpPoly a, FpPoly b, std::uint64_t p);
FpPoly constant(std::uint64_t c, std::uint64_t p);
std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t p);
}  // namespace fppoly

// --- Linear algebra --------------------------------------------------------

struct RankResult {
  std::size_t rank = 0;
  /// Basis of {c : sum_i c_i * rows[i] = 0}; empty when the rows are independent.
  std::vector<FieldVector> kernel;
};

/// Exact rank of a list of equal-length row vectors over `field`.
RankResult linear_rank(const ResidueField& field, std::span<const FieldVector> rows);

/// Coefficients c with sum_i c_i * basis[i] = target, or nullopt.
std::optional<FieldVector> solve_in_span(const ResidueField& field, const FieldVector& target,
                                         std::span<const FieldVector> basis);

/// Coordinate vectors over `sub` of elements of a field containing it, such
/// that sub-linear relations among `elements` and among the vectors coincide.
/// For F_p inside F_p(s): clear denominators, then read polynomial coefficients.
std::vector<FieldVector> coordinates_over(const ResidueField& sub, std::span<const FieldElement> elements);

/// Multiset of residues, order-preserving with respect to its generating family.
struct ResidueProfile {
  FieldVector entries;
};

}  // namespace ultragram
