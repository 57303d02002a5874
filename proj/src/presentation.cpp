#include "ultragram/presentation.hpp"

#include "ultragram/error.hpp"

namespace ultragram {

namespace {

GroupElement unit_multiple(const OrderedGroup& g, long m) { return Integer(m) * g.unit(); }

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

FieldElement residue_from_bits(const ResidueField& k, std::uint64_t bits, bool nonzero) {
  if (k.kind() == ResidueField::Kind::Rationals) {
    long n = static_cast<long>(bits % 9) - 4;
    if (nonzero && n == 0) n = 1;
    const long d = 1 + static_cast<long>((bits >> 8) % 3);
    return k.from_rational(Rational(n, d));
  }
  const auto p = k.characteristic();
  auto c = bits % p;
  if (nonzero && c == 0) c = 1 + (bits >> 8) % (p - 1);
  return k.from_integer(static_cast<long>(c));
}

}  // namespace

SubfieldPresentation::SubfieldPresentation(Kind kind, Ambient ambient, ResidueField residue, Subgroup value_subgroup)
    : kind_(kind), ambient_(std::move(ambient)), residue_(std::move(residue)), value_subgroup_(std::move(value_subgroup)) {
  if (!ambient_.field.has_subfield(residue_)) {
    throw Error(ErrorCode::UnsupportedCombination,
                residue_.name() + " is not a subfield of the coefficient field " + ambient_.field.name());
  }
  if (residue_.kind() == ResidueField::Kind::RationalFunctions) {
    throw Error(ErrorCode::UnsupportedCombination, "residue field of K must be a prime field or Q");
  }
}

SubfieldPresentation SubfieldPresentation::rational_functions(const Ambient& ambient, const ResidueField& k) {
  return {Kind::RationalFunctions, ambient, k, Subgroup::unit_line(ambient.group)};
}

SubfieldPresentation SubfieldPresentation::completion(const Ambient& ambient, const ResidueField& k) {
  return {Kind::Completion, ambient, k, Subgroup::unit_line(ambient.group)};
}

SubfieldPresentation SubfieldPresentation::trivial(const Ambient& ambient, const ResidueField& k) {
  return {Kind::Trivial, ambient, k, Subgroup::trivial(ambient.group)};
}

Series SubfieldPresentation::monomial_section(const GroupElement& delta) const {
  if (!value_subgroup_.contains(delta)) {
    throw Error(ErrorCode::InvalidArgument, delta.to_string() + " is not a value of " + name());
  }
  return Series::monomial(ambient_, delta, ambient_.field.one());
}

Series SubfieldPresentation::residue_section(const FieldElement& r) const {
  return Series::constant(ambient_, r.field() == ambient_.field ? r : to_ambient(r));
}

Series SubfieldPresentation::element(const FieldElement& r, const GroupElement& delta) const {
  if (!value_subgroup_.contains(delta)) {
    throw Error(ErrorCode::InvalidArgument, delta.to_string() + " is not a value of " + name());
  }
  return Series::monomial(ambient_, delta, r.field() == ambient_.field ? r : to_ambient(r));
}

bool SubfieldPresentation::in_residue_subfield(const FieldElement& c) const {
  if (residue_ == ambient_.field) return true;
  return c.in_prime_subfield();
}

FieldElement SubfieldPresentation::to_ambient(const FieldElement& r) const { return r.embed_into(ambient_.field); }

FieldElement SubfieldPresentation::to_residue(const FieldElement& c) const {
  if (residue_ == ambient_.field) return c;
  return c.to_prime_subfield();
}

std::string SubfieldPresentation::name() const {
  switch (kind_) {
    case Kind::RationalFunctions: return residue_.name() + "(t)";
    case Kind::Completion: return residue_.name() + "((t))";
    case Kind::Trivial: return residue_.name();
  }
  return "?";
}

FieldElement SubfieldPresentation::sample_residue(std::mt19937_64& rng, bool nonzero) const {
  return residue_from_bits(residue_, rng(), nonzero);
}

Series SubfieldPresentation::sample(std::mt19937_64& rng, long lo, long hi) const {
  const OrderedGroup& g = ambient_.group;
  if (kind_ == Kind::Trivial) return residue_section(sample_residue(rng, true));
  std::uniform_int_distribution<long> lead(lo, hi);
  const long start = lead(rng);
  if (kind_ == Kind::Completion) {
    const std::uint64_t seed = rng();
    const ResidueField k = residue_;
    const Ambient ambient = ambient_;
    return Series::generated(
        ambient_, [g, start](std::size_t i) { return unit_multiple(g, start + static_cast<long>(i)); },
        [k, seed, ambient](std::size_t i) {
          return residue_from_bits(k, splitmix(seed ^ splitmix(i)), i == 0).embed_into(ambient.field);
        });
  }
  // A quotient of polynomials: leading monomial times (1 + ...) / (1 + ...).
  std::uniform_int_distribution<int> count(0, 3);
  std::uniform_int_distribution<long> gap(1, 3);
  auto tail = [&](long from) {
    std::vector<Term> terms;
    long e = from;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      e += gap(rng);
      terms.push_back({unit_multiple(g, e), to_ambient(sample_residue(rng, true))});
    }
    return terms;
  };
  auto num_terms = tail(start);
  num_terms.push_back({unit_multiple(g, start), to_ambient(sample_residue(rng, true))});
  Series x = Series::from_terms(ambient_, num_terms);
  if (rng() % 2 == 0) {
    auto den_terms = tail(0);
    den_terms.push_back({g.zero(), ambient_.field.one()});
    x = x * invert(Series::from_terms(ambient_, den_terms), Precision{g.unit(), 1});
  }
  return x;
}

}  // namespace ultragram
