#pragma once

// Lazily evaluated generalized power series sum c_g t^g with exponents in an
// ordered group and coefficients in a residue field. Terms are produced on
// demand in strictly increasing exponent order and memoized, so a Series is a
// value that can be shared between many expressions and threads.
//
// Every query takes a ceiling: a node asked for its next term below C may
// answer "Beyond" (no term below C) instead of searching forever through
// cancellations. A thread-local work budget bounds the total effort of a
// computation and surfaces as Error(PrecisionExhausted).

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ultragram/residue_field.hpp"
#include "ultragram/value_group.hpp"

namespace ultragram {

/// The field k((t^G)) in which all series of a computation live.
struct Ambient {
  OrderedGroup group;
  ResidueField field;

  bool operator==(const Ambient&) const = default;
  std::string name() const;  // e.g. "F3((t^Z^2_lex))"
};

struct Term {
  GroupElement exponent;
  FieldElement coefficient;  // nonzero
};

/// Bounds on how much of an infinite object may be inspected.
struct Precision {
  GroupElement ceiling;  // exponents >= ceiling are never examined for valuations
  std::size_t max_terms = 8;
  std::size_t work_limit = 5'000'000;
};

// --- Work budget -------------------------------------------------------------

/// Scoped limit on elementary steps for the current thread. Nested budgets
/// are all charged; exceeding any of them throws Error(PrecisionExhausted).
class WorkBudget {
 public:
  explicit WorkBudget(std::size_t limit);
  ~WorkBudget();
  WorkBudget(const WorkBudget&) = delete;
  WorkBudget& operator=(const WorkBudget&) = delete;

  std::size_t used() const { return used_; }

 private:
  friend void charge_work(std::size_t);
  std::size_t limit_;
  std::size_t used_ = 0;
  WorkBudget* parent_;
};

void charge_work(std::size_t units = 1);

// --- Lazy nodes --------------------------------------------------------------

namespace detail {

struct Probe {
  enum class Kind { Found, Beyond, End };
  Kind kind;
  const Term* term = nullptr;  // valid while the node lives when Found
};

class Node;

}  // namespace detail

class Series {
 public:
  static Series zero(const Ambient& ambient);
  static Series monomial(const Ambient& ambient, const GroupElement& exponent, const FieldElement& coefficient);
  static Series constant(const Ambient& ambient, const FieldElement& coefficient);
  /// Terms may arrive in any order; equal exponents are added and zeros dropped.
  static Series from_terms(const Ambient& ambient, std::vector<Term> terms);
  /// Term stream given by index functions. `exponent` must be strictly
  /// increasing; zero coefficients are skipped. `count` bounds the raw index.
  static Series generated(const Ambient& ambient, std::function<GroupElement(std::size_t)> exponent,
                          std::function<FieldElement(std::size_t)> coefficient,
                          std::optional<std::size_t> count = std::nullopt);

  const Ambient& ambient() const;

  /// The i-th term if it exists. Beyond means it does not exist below `ceiling`.
  detail::Probe term(std::size_t i, const GroupElement& ceiling) const;

  /// Terms with exponent below `ceiling`, at most `max_terms` of them.
  std::vector<Term> terms_below(const GroupElement& ceiling, std::size_t max_terms) const;

  /// Structurally known to have finitely many terms (a generalized polynomial).
  bool is_finite() const;
  /// Every term of a finite series; throws InvalidArgument for other series.
  std::vector<Term> all_terms(std::size_t work_limit = 5'000'000) const;

  /// Structurally known to have no terms at all.
  bool is_known_zero() const;
  /// Lower bound for all exponents; nullopt for the structural zero.
  const std::optional<GroupElement>& floor() const;

  /// Rendering of the terms below `ceiling`, e.g. "t^1 + 2*t^3 + ..." .
  std::string to_string(const GroupElement& ceiling, std::size_t max_terms = 8) const;

  friend Series operator+(const Series& x, const Series& y);
  friend Series operator-(const Series& x, const Series& y);
  friend Series operator*(const Series& x, const Series& y);
  Series operator-() const;

  /// c * t^shift * x.
  Series scaled(const FieldElement& c, const GroupElement& shift) const;

  /// Identity of the underlying lazy node.
  bool same_node(const Series& other) const { return node_ == other.node_; }

 private:
  friend Series invert(const Series&, const Precision&);
  friend Series truncate(const Series&, const GroupElement&);
  friend Series drop_terms(const Series&, std::size_t);
  explicit Series(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}

  std::shared_ptr<detail::Node> node_;
};

/// Result of a valuation query.
struct Valuation {
  enum class Kind { Value, ZeroUpTo };
  Kind kind;
  GroupElement value;     // v(x) for Value, the ceiling for ZeroUpTo
  bool exhausted = false; // ZeroUpTo only: the series provably has no terms (v = infinity)
  bool out_of_work = false; // ZeroUpTo only: the work budget ran out before the ceiling

  bool is_value() const { return kind == Kind::Value; }
  std::string to_string() const;
};

/// v(x) below prec.ceiling. Budget exhaustion degrades to ZeroUpTo.
Valuation valuation(const Series& x, const Precision& prec);

/// Leading term below the ceiling, if witnessed.
std::optional<Term> leading_term(const Series& x, const Precision& prec);

/// Lazy inverse; throws LeadingTermUnknown unless v(x) is witnessed.
Series invert(const Series& x, const Precision& prec);

/// res(a/b); throws ValuationMismatch unless v(a) = v(b) are both witnessed.
FieldElement residue_ratio(const Series& a, const Series& b, const Precision& prec);

/// Drops every term with exponent >= gamma.
Series truncate(const Series& x, const GroupElement& gamma);

/// Drops the first `count` terms.
Series drop_terms(const Series& x, std::size_t count);

/// Whether the truncations at gamma coincide. Throws PrecisionExhausted when
/// the budget runs out before the comparison is decided.
bool equal_up_to(const Series& x, const Series& y, const GroupElement& gamma, std::size_t work_limit = 5'000'000);

// --- Named families ------------------------------------------------------------

/// sum_{i>=0} t^{i*step}, step = unit() by default.
Series geometric_series(const Ambient& ambient);
/// sum_{i>=0} t^{p^i}.
Series artin_schreier_series(const Ambient& ambient, unsigned long p);
/// Value at i of an exponent expression such as "2*i+1", "3^i" or "-1/2";
/// + - * / ^ and parentheses over integers and the variable i.
Rational evaluate_index_expression(const std::string& text, std::size_t i);

/// sum_{i>=start} t^{f(i)} with f given as "i^2", "3^i", "2*i+1" style text.
Series custom_power_series(const Ambient& ambient, const std::string& exponents, std::size_t start = 0);

}  // namespace ultragram
