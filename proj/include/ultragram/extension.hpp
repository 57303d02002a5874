#pragma once

// Finite-extension diagnostics for the field (or space) generated over K by
// given series inside the ambient field: dimension by orthogonalization,
// ramification index, residue degree, standard bases, and the truncation
// algorithm that turns a valuation basis over the completion into one over K.

#include <optional>
#include <string>
#include <vector>

#include "ultragram/valued_space.hpp"

namespace ultragram {

enum class ClosureMode {
  Field,  // the K-algebra generated: products of powers of the generators
  Span,   // the K-span of the generators as given
};

struct SpanClosure {
  enum class Kind { Basis, Obstruction, Inconclusive };
  Kind kind = Kind::Inconclusive;
  Family basis;                            // normalized valuation basis found so far
  std::vector<std::string> monomials;      // the candidate behind each basis element, e.g. "a0^2"
  std::optional<std::string> obstruction_at;  // candidate at which reduction stalled
  std::optional<Series> obstruction_candidate;
  std::optional<NearestPointResult> evidence;
  std::string note;
};

/// Orthogonalizes 1, then power products of the generators (Field) or the
/// generators themselves (Span), until every candidate reduces to a member.
/// Inconclusive once the basis would exceed degree_cap.
SpanClosure span_closure_basis(const SubfieldPresentation& K, std::span<const Series> generators,
                               const Precision& prec, std::size_t degree_cap = 16,
                               ClosureMode mode = ClosureMode::Field);

struct RamificationResidue {
  std::size_t e = 0;           // number of value cosets mod vK met by the basis
  std::size_t f = 0;           // residue-independent elements in the class of vK
  SubgroupIndex value_index;   // (vK + v(B) : vK), for cross-checking e
  Family X;                    // one element per coset, starting with the class of vK
  Family Y;                    // the class of vK
};

/// Throws NotNormalized unless B passes check_normalized.
RamificationResidue ramification_and_residue(const SubfieldPresentation& K, std::span<const Series> B,
                                             const Precision& prec);

struct StandardBasis {
  Family X;
  Family Y;
  Family products;  // x * y, X-major
  IndependenceVerdict certificate;
  bool spans = false;  // |X| * |Y| equals the dimension of Span(B)
};

/// Products of coset representatives and residue lifts, each checked to lie
/// in Span(B); throws NotFieldClosed otherwise.
StandardBasis standard_basis(const SubfieldPresentation& K, std::span<const Series> B, const Precision& prec);

struct ExtensionReport {
  enum class Verdict { VsDefectless, Obstructed, Inconclusive };
  Verdict verdict = Verdict::Inconclusive;
  std::size_t n = 0;  // basis size reached
  std::optional<RamificationResidue> ramification;
  std::optional<Rational> defect_index;  // n / (e f)
  std::optional<StandardBasis> standard;
  SpanClosure closure;
  std::string note;
};

ExtensionReport analyze_extension(const SubfieldPresentation& K, std::span<const Series> generators,
                                  const Precision& prec, std::size_t degree_cap = 16,
                                  ClosureMode mode = ClosureMode::Field);

struct Approximation {
  std::vector<Family> truncated;                    // c_ij^alpha in K
  std::vector<std::vector<GroupElement>> bounds;    // truncation points d_ij in vK
  std::vector<std::vector<Valuation>> tail_values;  // v((c_ij^alpha - c_ij) u_j)
  std::vector<GroupElement> target_values;          // v(b_i')
  Family b_prime;                                   // sum_j c_ij u_j
  Family b_star;                                    // sum_j c_ij^alpha u_j
  bool inequality_holds = false;                    // every tail value exceeds v(b_i')
  bool close = false;                               // v(b_i* - b_i') > v(b_i') for all i
  IndependenceVerdict completion_certificate;       // b' over the completion
  IndependenceVerdict certificate;                  // b* over K
};

/// Given u_1..u_n and coefficients c_ij in the completion such that
/// b_i' = sum_j c_ij u_j is a valuation basis over the completion, truncates
/// every c_ij into K far enough that b_i* = sum_j c_ij^alpha u_j is a valuation
/// basis over K. Throws NotCofinal unless vK is cofinal in vK + v(u),
/// NotIndependent when b' is not certified over the completion.
Approximation complete_and_approximate(const SubfieldPresentation& K, std::span<const Series> u,
                                       const std::vector<Family>& coefficients, const Precision& prec);

}  // namespace ultragram
