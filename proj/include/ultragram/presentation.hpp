#pragma once

// A computable presentation of a subfield K of the ambient series field:
// its value group vK, its residue field Kv, and sections that produce
// elements of K with prescribed value (t^delta) or residue (constants).

#include <random>
#include <string>

#include "ultragram/series.hpp"

namespace ultragram {

class SubfieldPresentation {
 public:
  enum class Kind {
    RationalFunctions,  // k(t), vK generated by the exponent of t
    Completion,         // k((t)), same value group and residue field
    Trivial,            // k with the trivial valuation, vK = {0}
  };

  /// `k` must be the ambient coefficient field or its prime subfield.
  static SubfieldPresentation rational_functions(const Ambient& ambient, const ResidueField& k);
  static SubfieldPresentation completion(const Ambient& ambient, const ResidueField& k);
  static SubfieldPresentation trivial(const Ambient& ambient, const ResidueField& k);

  Kind kind() const { return kind_; }
  const Ambient& ambient() const { return ambient_; }
  const Subgroup& value_subgroup() const { return value_subgroup_; }
  const ResidueField& residue_subfield() const { return residue_; }
  bool is_complete() const { return kind_ == Kind::Completion; }

  /// t^delta; throws InvalidArgument unless delta lies in vK.
  Series monomial_section(const GroupElement& delta) const;
  /// The constant r (r in Kv, or an ambient coefficient lying in Kv).
  Series residue_section(const FieldElement& r) const;
  /// r * t^delta.
  Series element(const FieldElement& r, const GroupElement& delta) const;

  /// Whether an ambient coefficient lies in Kv.
  bool in_residue_subfield(const FieldElement& c) const;
  /// Image of an element of Kv among the ambient coefficients.
  FieldElement to_ambient(const FieldElement& r) const;
  /// Image of an ambient coefficient lying in Kv; throws InvalidArgument otherwise.
  FieldElement to_residue(const FieldElement& c) const;

  /// "F3(t)", "F3((t))" or "F3".
  std::string name() const;

  /// A random nonzero element of K whose leading exponent lies in [lo, hi]
  /// along the unit direction. Completion samples have infinite support.
  Series sample(std::mt19937_64& rng, long lo, long hi) const;

  /// A random element of Kv.
  FieldElement sample_residue(std::mt19937_64& rng, bool nonzero) const;

 private:
  SubfieldPresentation(Kind kind, Ambient ambient, ResidueField residue, Subgroup value_subgroup);

  Kind kind_;
  Ambient ambient_;
  ResidueField residue_;
  Subgroup value_subgroup_;
};

}  // namespace ultragram
