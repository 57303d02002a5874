#pragma once

// Valuation independence of finite families of series over a presented
// subfield K, normalization, nearest points max v(b - W), ultrametric
// orthogonalization and basis exchange.
//
// Families are plain vectors of Series; a subspace W is always given by a
// family that is certified independent (and, where stated, normalized).

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ultragram/presentation.hpp"
#include "ultragram/series.hpp"

namespace ultragram {

using Family = std::vector<Series>;

/// A re-checkable claim about the combination sum_i coefficients[i] * elements[i].
struct Witness {
  enum class Claim {
    ValueAbove,   // v(sum) > value, while min_i v(c_i b_i) = value
    ValueEquals,  // v(sum) = value
  };
  Family coefficients;
  Family elements;
  Claim claim = Claim::ValueAbove;
  GroupElement value;

  Series combination() const;
  /// Re-evaluates the claim from scratch; false when it fails or cannot be decided.
  bool recheck(const Precision& prec) const;
};

struct IndependenceVerdict {
  enum class Outcome { Independent, Dependent, Inconclusive };
  Outcome outcome = Outcome::Inconclusive;
  std::vector<GroupElement> values;  // v(b_i), when witnessed
  Family scalings;                   // Independent: c_i in K with c_i b_i satisfying N1
  Family scaled;                     // Independent: the N1-scaled family
  std::optional<Witness> witness;    // Dependent
  std::string reason;                // Inconclusive: what could not be witnessed

  bool independent() const { return outcome == Outcome::Independent; }
};

/// Decides K-valuation independence of B by coset classes and residue ranks.
/// Throws ZeroElementInFamily when some b_i is provably zero.
IndependenceVerdict is_valuation_independent(const SubfieldPresentation& K, std::span<const Series> B,
                                             const Precision& prec);

/// Independence of B over Span_K(W); W must itself be certified independent
/// (else UncertifiedSubspace). Witness indices refer to W followed by B.
IndependenceVerdict is_valuation_independent_over(const SubfieldPresentation& K, std::span<const Series> B,
                                                  std::span<const Series> W, const Precision& prec);

/// res(a'/a) for every a' in U with v(a') = v(a), in order, with repetition.
ResidueProfile residue_profile(std::span<const Series> U, const Series& a, const Precision& prec);

struct NormalizedFamily {
  Family elements;  // c_i * b_i
  Family scalings;  // c_i in K, nonzero
};

/// Scales an independent family to satisfy N1-N4. Elements that already do
/// are returned as the same Series objects with scaling 1.
/// Throws NotIndependent (or PrecisionExhausted when undecidable).
NormalizedFamily normalize(const SubfieldPresentation& K, std::span<const Series> B, const Precision& prec);

struct NormalizationCheck {
  bool pass = true;
  std::string condition;             // "N1".."N4", or "valuation" when some value is unwitnessed
  std::vector<std::size_t> indices;  // offending elements
  std::string detail;
};

NormalizationCheck check_normalized(const SubfieldPresentation& K, std::span<const Series> B, const Precision& prec);

struct NearestPointResult {
  enum class Kind { Value, ExactMember, Unbounded, PrecisionExhausted };
  Kind kind = Kind::PrecisionExhausted;
  Series best;                        // a in W realizing the reported outcome
  Family coefficients;                // best = sum coefficients[m] * W[m]
  std::optional<GroupElement> value;  // Value: v(b - best); PrecisionExhausted: the ceiling
  std::vector<GroupElement> trace;    // strictly increasing v(b - a_k)
  Family trace_points;                // the a_k realizing the trace
  bool via_limit = false;             // ExactMember certified by a convergent chain up to the ceiling
  bool exact_solve = false;           // ExactMember found by solving over K directly
  std::string note;
};

/// Greedy ultrametric reduction of b against a normalized independent family.
/// Throws UncertifiedSubspace or NotNormalized when W does not qualify.
NearestPointResult nearest_point(const SubfieldPresentation& K, const Series& b, std::span<const Series> W,
                                 const Precision& prec);

/// Runs nearest_point against the growing families stage(1), ..., stage(max_terms)
/// and reports the per-stage maxima as evidence; Unbounded when they increase
/// strictly through every stage, otherwise the result of the first stalled stage.
struct StreamedNearestPoint {
  NearestPointResult result;
  std::vector<NearestPointResult> stages;
};
StreamedNearestPoint nearest_point_stream(const SubfieldPresentation& K, const Series& b,
                                          const std::function<Family(std::size_t)>& stage, const Precision& prec);

struct OrthogonalizationResult {
  enum class Kind { Basis, Obstruction };
  Kind kind = Kind::Basis;
  Family basis;                                  // certified, normalized
  std::vector<std::size_t> skipped;              // generators found to be members
  std::optional<std::size_t> obstruction_index;  // 0-based generator index
  std::optional<NearestPointResult> obstruction;
};

OrthogonalizationResult orthogonalize(const SubfieldPresentation& K, std::span<const Series> generators,
                                      const Precision& prec);

struct ExchangeResult {
  std::size_t removed = 0;  // index into B
  Series shift;             // a in Span(W): the W-part of x
  Family expansion;         // coefficients of x over W followed by B
  Family remaining;         // B without the removed element
  IndependenceVerdict certificate;  // remaining over W plus Span(x - shift)
};

/// Exchanges x into the basis B of V over W. Throws NotInSpan unless x
/// expands exactly over W and B with some nonzero B-coefficient.
ExchangeResult basis_exchange(const SubfieldPresentation& K, std::span<const Series> B, std::span<const Series> W,
                              const Series& x, const Precision& prec);

struct RelativeBasis {
  Family A;                            // basis of W' over W
  Family B_prime;                      // subset of B, basis of V over W'
  std::vector<std::size_t> kept;       // indices of B_prime in B
  IndependenceVerdict A_certificate;   // A over W
  IndependenceVerdict B_certificate;   // B' over W plus A
};

RelativeBasis relative_basis(const SubfieldPresentation& K, std::span<const Series> B, std::span<const Series> W,
                             std::span<const Series> W_prime_generators, const Precision& prec);

struct ImmediacyResult {
  enum class Kind { NotImmediateWitness, ImmediateEvidence, Inconclusive };
  Kind kind = Kind::Inconclusive;
  NearestPointResult nearest;  // against Span_K(1)
};

/// Evidence about v(probe - K): a maximum witnesses non-immediacy. Throws ProbeInK.
ImmediacyResult immediacy_evidence(const SubfieldPresentation& K, const Series& probe, const Precision& prec);

/// Exact span membership over K for finite series, by linear algebra over
/// k(t) (k a prime field) or over k for trivially valued K. On Member the
/// coefficients over W are stored. A completion presentation never reports
/// NotMember, since its elements need not be rational.
enum class ExactSpan { Unsupported, Member, NotMember };
ExactSpan exact_span_coefficients(const SubfieldPresentation& K, const Series& b, std::span<const Series> W,
                                  Family* coefficients);

}  // namespace ultragram
