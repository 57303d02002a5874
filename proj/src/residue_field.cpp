#include "ultragram/residue_field.hpp"

#include <algorithm>
#include <cctype>

#include "ultragram/error.hpp"

namespace ultragram {

namespace fppoly {

namespace {
void trim(FpPoly& a) {
  while (!a.coeffs.empty() && a.coeffs.back() == 0) a.coeffs.pop_back();
}
std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}
}  // namespace

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t p) {
  if (a % p == 0) throw Error(ErrorCode::DivisionByZero, "inverse of 0 mod " + std::to_string(p));
  // Fermat: a^(p-2).
  std::uint64_t result = 1, base = a % p, e = p - 2;
  while (e) {
    if (e & 1) result = mulmod(result, base, p);
    base = mulmod(base, base, p);
    e >>= 1;
  }
  return result;
}

FpPoly constant(std::uint64_t c, std::uint64_t p) {
  FpPoly out{{c % p}};
  trim(out);
  return out;
}

FpPoly add(const FpPoly& a, const FpPoly& b, std::uint64_t p) {
  FpPoly out;
  out.coeffs.resize(std::max(a.coeffs.size(), b.coeffs.size()), 0);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) out.coeffs[i] = a.coeffs[i];
  for (std::size_t i = 0; i < b.coeffs.size(); ++i) out.coeffs[i] = (out.coeffs[i] + b.coeffs[i]) % p;
  trim(out);
  return out;
}

FpPoly scale(const FpPoly& a, std::uint64_t c, std::uint64_t p) {
  FpPoly out;
  out.coeffs.reserve(a.coeffs.size());
  for (auto x : a.coeffs) out.coeffs.push_back(mulmod(x, c % p, p));
  trim(out);
  return out;
}

FpPoly sub(const FpPoly& a, const FpPoly& b, std::uint64_t p) { return add(a, scale(b, p - 1, p), p); }

FpPoly mul(const FpPoly& a, const FpPoly& b, std::uint64_t p) {
  if (a.is_zero() || b.is_zero()) return {};
  FpPoly out;
  out.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, 0);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) {
      out.coeffs[i + j] = (out.coeffs[i + j] + mulmod(a.coeffs[i], b.coeffs[j], p)) % p;
    }
  }
  trim(out);
  return out;
}

std::pair<FpPoly, FpPoly> divmod(const FpPoly& a, const FpPoly& b, std::uint64_t p) {
  if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "polynomial division by zero");
  FpPoly rem = a;
  FpPoly quot;
  if (a.coeffs.size() < b.coeffs.size()) return {quot, rem};
  quot.coeffs.assign(a.coeffs.size() - b.coeffs.size() + 1, 0);
  const std::uint64_t lead_inv = inverse_mod(b.coeffs.back(), p);
  while (!rem.is_zero() && rem.coeffs.size() >= b.coeffs.size()) {
    const std::size_t shift = rem.coeffs.size() - b.coeffs.size();
    const std::uint64_t factor = mulmod(rem.coeffs.back(), lead_inv, p);
    quot.coeffs[shift] = factor;
    for (std::size_t i = 0; i < b.coeffs.size(); ++i) {
      auto& slot = rem.coeffs[i + shift];
      slot = (slot + p - mulmod(factor, b.coeffs[i], p)) % p;
    }
    trim(rem);
  }
  trim(quot);
  return {quot, rem};
}

FpPoly gcd(FpPoly a, FpPoly b, std::uint64_t p) {
  while (!b.is_zero()) {
    auto r = divmod(a, b, p).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.is_zero()) a = scale(a, inverse_mod(a.coeffs.back(), p), p);
  return a;
}

}  // namespace fppoly

// ---------------------------------------------------------------------------

namespace {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint64_t reduce_mod(long n, std::uint64_t p) {
  const long m = static_cast<long>(p);
  long r = n % m;
  if (r < 0) r += m;
  return static_cast<std::uint64_t>(r);
}

std::uint64_t reduce_mod(const Integer& n, std::uint64_t p) {
  Integer r;
  mpz_fdiv_r_ui(r.get_mpz_t(), n.get_mpz_t(), p);
  return r.get_ui();
}

void require_same(const FieldElement& a, const FieldElement& b) {
  if (a.field() != b.field()) {
    throw Error(ErrorCode::MismatchedAmbient, a.field().name() + " vs " + b.field().name());
  }
}

}  // namespace

ResidueField ResidueField::prime(std::uint64_t p) {
  if (!is_prime(p) || p >= (1ULL << 31)) {
    throw Error(ErrorCode::InvalidArgument, "characteristic must be a prime below 2^31, got " + std::to_string(p));
  }
  return {Kind::PrimeField, p};
}

ResidueField ResidueField::rationals() { return {Kind::Rationals, 0}; }

ResidueField ResidueField::rational_functions(std::uint64_t p) {
  (void)prime(p);
  return {Kind::RationalFunctions, p};
}

ResidueField ResidueField::prime_subfield() const {
  if (kind_ == Kind::RationalFunctions) return prime(p_);
  return *this;
}

bool ResidueField::has_subfield(const ResidueField& sub) const { return sub == *this || sub == prime_subfield(); }

FieldElement ResidueField::zero() const { return from_integer(0); }
FieldElement ResidueField::one() const { return from_integer(1); }

FieldElement ResidueField::from_integer(long n) const {
  switch (kind_) {
    case Kind::PrimeField: return {*this, reduce_mod(n, p_)};
    case Kind::Rationals: return {*this, Rational(n)};
    case Kind::RationalFunctions:
      return {*this, FieldElement::Fraction{fppoly::constant(reduce_mod(n, p_), p_), fppoly::constant(1, p_)}};
  }
  return zero();
}

FieldElement ResidueField::from_rational(const Rational& q) const {
  if (kind_ == Kind::Rationals) {
    Rational c = q;
    c.canonicalize();
    return {*this, c};
  }
  const std::uint64_t num = reduce_mod(q.get_num(), p_);
  const std::uint64_t den = reduce_mod(q.get_den(), p_);
  if (den == 0) throw Error(ErrorCode::DivisionByZero, "denominator divisible by " + std::to_string(p_));
  const std::uint64_t v =
      static_cast<std::uint64_t>((static_cast<unsigned __int128>(num) * fppoly::inverse_mod(den, p_)) % p_);
  if (kind_ == Kind::PrimeField) return {*this, v};
  return {*this, FieldElement::Fraction{fppoly::constant(v, p_), fppoly::constant(1, p_)}};
}

FieldElement ResidueField::variable() const {
  if (kind_ != Kind::RationalFunctions) throw Error(ErrorCode::InvalidArgument, name() + " has no variable s");
  return {*this, FieldElement::Fraction{FpPoly{{0, 1}}, fppoly::constant(1, p_)}};
}

FieldElement ResidueField::fraction(FpPoly num, FpPoly den) const {
  if (kind_ != Kind::RationalFunctions) throw Error(ErrorCode::InvalidArgument, name() + " has no fractions of polynomials");
  for (auto& c : num.coeffs) c %= p_;
  for (auto& c : den.coeffs) c %= p_;
  num = fppoly::add(num, {}, p_);
  den = fppoly::add(den, {}, p_);
  if (den.is_zero()) throw Error(ErrorCode::DivisionByZero, "zero denominator");
  if (num.is_zero()) return zero();
  const FpPoly g = fppoly::gcd(num, den, p_);
  num = fppoly::divmod(num, g, p_).first;
  den = fppoly::divmod(den, g, p_).first;
  const std::uint64_t lead_inv = fppoly::inverse_mod(den.coeffs.back(), p_);
  return {*this, FieldElement::Fraction{fppoly::scale(num, lead_inv, p_), fppoly::scale(den, lead_inv, p_)}};
}

std::string ResidueField::name() const {
  switch (kind_) {
    case Kind::PrimeField: return "F" + std::to_string(p_);
    case Kind::Rationals: return "Q";
    case Kind::RationalFunctions: return "F" + std::to_string(p_) + "(s)";
  }
  return "?";
}

namespace {

// Recursive-descent parser for field expressions: + - * / ^ parentheses,
// integer literals and the variable s.
class ExpressionParser {
 public:
  ExpressionParser(const ResidueField& field, const std::string& text) : field_(field), text_(text) {}

  FieldElement parse() {
    FieldElement value = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return value;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCode::ParseError, "field element '" + text_ + "' at position " + std::to_string(pos_) + ": " + why);
  }
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  FieldElement expression() {
    FieldElement value = accept('-') ? -term() : term();
    while (true) {
      if (accept('+')) {
        value = value + term();
      } else if (accept('-')) {
        value = value - term();
      } else {
        return value;
      }
    }
  }
  FieldElement term() {
    FieldElement value = power();
    while (true) {
      if (accept('*')) {
        value = value * power();
      } else if (accept('/')) {
        value = value / power();
      } else {
        skip_space();
        // Implicit multiplication: "2s".
        if (pos_ < text_.size() && (text_[pos_] == 's' || text_[pos_] == '(')) {
          value = value * power();
        } else {
          return value;
        }
      }
    }
  }
  FieldElement power() {
    FieldElement base = atom();
    if (accept('^')) {
      skip_space();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      const unsigned long e = std::stoul(text_.substr(start, pos_ - start));
      FieldElement result = field_.one();
      for (unsigned long i = 0; i < e; ++i) result = result * base;
      return result;
    }
    return base;
  }
  FieldElement atom() {
    skip_space();
    if (accept('(')) {
      FieldElement inner = expression();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (pos_ < text_.size() && text_[pos_] == 's') {
      ++pos_;
      return field_.variable();
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected number, 's' or '('");
    return field_.from_rational(Rational(Integer(text_.substr(start, pos_ - start), 10)));
  }

  const ResidueField& field_;
  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

FieldElement ResidueField::parse(const std::string& text) const { return ExpressionParser(*this, text).parse(); }

// ---------------------------------------------------------------------------

bool FieldElement::is_zero() const {
  switch (field_.kind()) {
    case ResidueField::Kind::PrimeField: return residue() == 0;
    case ResidueField::Kind::Rationals: return rational() == 0;
    case ResidueField::Kind::RationalFunctions: return fraction().num.is_zero();
  }
  return false;
}

bool FieldElement::is_one() const { return *this == field_.one(); }

bool FieldElement::in_prime_subfield() const {
  if (field_.kind() != ResidueField::Kind::RationalFunctions) return true;
  return fraction().num.degree() == 0 && fraction().den.degree() == 0;
}

FieldElement FieldElement::to_prime_subfield() const {
  if (field_.kind() != ResidueField::Kind::RationalFunctions) return *this;
  if (!in_prime_subfield()) throw Error(ErrorCode::InvalidArgument, to_string() + " is not a constant");
  const std::uint64_t c = fraction().num.is_zero() ? 0 : fraction().num.coeffs[0];
  return field_.prime_subfield().from_integer(static_cast<long>(c));
}

FieldElement FieldElement::embed_into(const ResidueField& target) const {
  if (target == field_) return *this;
  if (target.kind() == ResidueField::Kind::RationalFunctions && field_ == target.prime_subfield()) {
    return target.from_integer(static_cast<long>(residue()));
  }
  throw Error(ErrorCode::MismatchedAmbient, "cannot embed " + field_.name() + " into " + target.name());
}

FieldElement FieldElement::operator-() const { return field_.zero() - *this; }

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  require_same(a, b);
  const auto p = a.field_.characteristic();
  switch (a.field_.kind()) {
    case ResidueField::Kind::PrimeField: return {a.field_, (a.residue() + b.residue()) % p};
    case ResidueField::Kind::Rationals: return {a.field_, Rational(a.rational() + b.rational())};
    case ResidueField::Kind::RationalFunctions: {
      const auto& x = a.fraction();
      const auto& y = b.fraction();
      return a.field_.fraction(fppoly::add(fppoly::mul(x.num, y.den, p), fppoly::mul(y.num, x.den, p), p),
                               fppoly::mul(x.den, y.den, p));
    }
  }
  return a;
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  require_same(a, b);
  const auto p = a.field_.characteristic();
  switch (a.field_.kind()) {
    case ResidueField::Kind::PrimeField: return {a.field_, (a.residue() + p - b.residue()) % p};
    case ResidueField::Kind::Rationals: return {a.field_, Rational(a.rational() - b.rational())};
    case ResidueField::Kind::RationalFunctions: {
      const auto& x = a.fraction();
      const auto& y = b.fraction();
      return a.field_.fraction(fppoly::sub(fppoly::mul(x.num, y.den, p), fppoly::mul(y.num, x.den, p), p),
                               fppoly::mul(x.den, y.den, p));
    }
  }
  return a;
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  require_same(a, b);
  const auto p = a.field_.characteristic();
  switch (a.field_.kind()) {
    case ResidueField::Kind::PrimeField:
      return {a.field_,
              static_cast<std::uint64_t>((static_cast<unsigned __int128>(a.residue()) * b.residue()) % p)};
    case ResidueField::Kind::Rationals: return {a.field_, Rational(a.rational() * b.rational())};
    case ResidueField::Kind::RationalFunctions: {
      const auto& x = a.fraction();
      const auto& y = b.fraction();
      return a.field_.fraction(fppoly::mul(x.num, y.num, p), fppoly::mul(x.den, y.den, p));
    }
  }
  return a;
}

FieldElement FieldElement::inverse() const {
  if (is_zero()) throw Error(ErrorCode::DivisionByZero, "inverse of zero in " + field_.name());
  switch (field_.kind()) {
    case ResidueField::Kind::PrimeField: return {field_, fppoly::inverse_mod(residue(), field_.characteristic())};
    case ResidueField::Kind::Rationals: return {field_, Rational(1 / rational())};
    case ResidueField::Kind::RationalFunctions: return field_.fraction(fraction().den, fraction().num);
  }
  return *this;
}

FieldElement operator/(const FieldElement& a, const FieldElement& b) { return a * b.inverse(); }

bool operator==(const FieldElement& a, const FieldElement& b) {
  return a.field_ == b.field_ && a.value_ == b.value_;
}

namespace {
std::string poly_to_string(const FpPoly& poly) {
  if (poly.is_zero()) return "0";
  std::string out;
  for (std::size_t i = poly.coeffs.size(); i-- > 0;) {
    const auto c = poly.coeffs[i];
    if (c == 0) continue;
    if (!out.empty()) out += "+";
    if (i == 0) {
      out += std::to_string(c);
      continue;
    }
    if (c != 1) out += std::to_string(c) + "*";
    out += "s";
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out;
}
std::size_t term_count(const FpPoly& poly) {
  return static_cast<std::size_t>(std::count_if(poly.coeffs.begin(), poly.coeffs.end(), [](auto c) { return c != 0; }));
}
}  // namespace

std::string FieldElement::to_string() const {
  switch (field_.kind()) {
    case ResidueField::Kind::PrimeField: return std::to_string(residue());
    case ResidueField::Kind::Rationals: return rational_to_string(rational());
    case ResidueField::Kind::RationalFunctions: {
      const auto& f = fraction();
      std::string num = poly_to_string(f.num);
      if (f.den.degree() == 0) return num;
      if (term_count(f.num) > 1) num = "(" + num + ")";
      std::string den = poly_to_string(f.den);
      if (term_count(f.den) > 1) den = "(" + den + ")";
      return num + "/" + den;
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------

namespace {

// Row reduction of [rows | identity]; returns reduced augmented matrix and pivot count.
struct Reduction {
  std::vector<FieldVector> rows;  // width + count columns
  std::size_t rank = 0;
};

Reduction reduce_augmented(const ResidueField& field, std::span<const FieldVector> rows, std::size_t width) {
  Reduction red;
  const std::size_t n = rows.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != width) throw Error(ErrorCode::InvalidArgument, "ragged rows in linear_rank");
    FieldVector row = rows[i];
    for (auto& x : row) {
      if (x.field() != field) x = x.embed_into(field);
    }
    for (std::size_t j = 0; j < n; ++j) row.push_back(i == j ? field.one() : field.zero());
    red.rows.push_back(std::move(row));
  }
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < width && pivot_row < n; ++col) {
    std::size_t pick = pivot_row;
    while (pick < n && red.rows[pick][col].is_zero()) ++pick;
    if (pick == n) continue;
    std::swap(red.rows[pivot_row], red.rows[pick]);
    const FieldElement inv = red.rows[pivot_row][col].inverse();
    for (auto& x : red.rows[pivot_row]) x = x * inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == pivot_row || red.rows[r][col].is_zero()) continue;
      const FieldElement factor = red.rows[r][col];
      for (std::size_t c = col; c < red.rows[r].size(); ++c) {
        red.rows[r][c] = red.rows[r][c] - factor * red.rows[pivot_row][c];
      }
    }
    ++pivot_row;
  }
  red.rank = pivot_row;
  return red;
}

}  // namespace

RankResult linear_rank(const ResidueField& field, std::span<const FieldVector> rows) {
  RankResult result;
  if (rows.empty()) return result;
  const std::size_t width = rows.front().size();
  Reduction red = reduce_augmented(field, rows, width);
  result.rank = red.rank;
  for (std::size_t r = red.rank; r < red.rows.size(); ++r) {
    result.kernel.emplace_back(red.rows[r].begin() + static_cast<std::ptrdiff_t>(width), red.rows[r].end());
  }
  return result;
}

std::optional<FieldVector> solve_in_span(const ResidueField& field, const FieldVector& target,
                                         std::span<const FieldVector> basis) {
  // A relation c_0*target + sum c_i*basis_i = 0 with c_0 != 0 yields the solution.
  std::vector<FieldVector> rows;
  rows.push_back(target);
  rows.insert(rows.end(), basis.begin(), basis.end());
  const RankResult rank = linear_rank(field, rows);
  // Reduce the kernel to find a vector with nonzero first entry.
  for (const auto& k : rank.kernel) {
    if (k[0].is_zero()) continue;
    const FieldElement scale = -(k[0].inverse());
    FieldVector coeffs;
    for (std::size_t i = 1; i < k.size(); ++i) coeffs.push_back(k[i] * scale);
    return coeffs;
  }
  if (target.empty() || std::all_of(target.begin(), target.end(), [](const FieldElement& x) { return x.is_zero(); })) {
    return FieldVector(basis.size(), field.zero());
  }
  return std::nullopt;
}

std::vector<FieldVector> coordinates_over(const ResidueField& sub, std::span<const FieldElement> elements) {
  std::vector<FieldVector> out;
  if (elements.empty()) return out;
  const ResidueField& field = elements.front().field();
  if (!field.has_subfield(sub)) {
    throw Error(ErrorCode::MismatchedAmbient, sub.name() + " is not a subfield of " + field.name());
  }
  if (sub == field) {
    for (const auto& e : elements) out.push_back({e});
    return out;
  }
  // F_p inside F_p(s).
  const auto p = field.characteristic();
  FpPoly common = fppoly::constant(1, p);
  for (const auto& e : elements) {
    const FpPoly& den = e.fraction().den;
    const FpPoly g = fppoly::gcd(common, den, p);
    common = fppoly::mul(common, fppoly::divmod(den, g, p).first, p);
  }
  std::vector<FpPoly> numerators;
  std::size_t width = 1;
  for (const auto& e : elements) {
    FpPoly scaled = fppoly::mul(e.fraction().num, fppoly::divmod(common, e.fraction().den, p).first, p);
    width = std::max(width, scaled.coeffs.size());
    numerators.push_back(std::move(scaled));
  }
  for (const auto& poly : numerators) {
    FieldVector row;
    for (std::size_t i = 0; i < width; ++i) {
      row.push_back(sub.from_integer(i < poly.coeffs.size() ? static_cast<long>(poly.coeffs[i]) : 0));
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace ultragram
