#include "ultragram/value_group.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

#include "ultragram/error.hpp"

namespace ultragram {

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (!s.empty() && s.front() == '+') s.erase(s.begin());
  auto valid = [](const std::string& part, bool allow_sign) {
    if (part.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && part[0] == '-') i = 1;
    if (i == part.size()) return false;
    return std::all_of(part.begin() + static_cast<std::ptrdiff_t>(i), part.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
  };
  const auto slash = s.find('/');
  const std::string num = s.substr(0, slash);
  const std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid(num, true) || !valid(den, false)) {
    throw Error(ErrorCode::ParseError, "not an exact rational: '" + text + "'");
  }
  Integer n(num, 10);
  Integer d(den, 10);
  if (d == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + text + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string rational_to_string(const Rational& q) { return q.get_str(10); }

// ---------------------------------------------------------------------------

OrderedGroup OrderedGroup::integers() { return {GroupKind::IntegerLine, 1}; }
OrderedGroup OrderedGroup::rationals() { return {GroupKind::RationalLine, 1}; }
OrderedGroup OrderedGroup::lex(std::size_t rank) {
  if (rank == 0) throw Error(ErrorCode::InvalidArgument, "lexicographic product needs rank >= 1");
  return {GroupKind::LexProduct, rank};
}

GroupElement OrderedGroup::zero() const { return {*this, std::vector<Rational>(rank_, Rational(0))}; }

GroupElement OrderedGroup::unit() const {
  std::vector<Rational> coords(rank_, Rational(0));
  coords.back() = 1;
  return {*this, std::move(coords)};
}

GroupElement OrderedGroup::element(std::vector<Rational> coordinates) const {
  if (coordinates.size() != rank_) {
    throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(rank_) +
                                                " coordinate(s) for an element of " + name());
  }
  if (kind_ != GroupKind::RationalLine) {
    for (const auto& c : coordinates) {
      if (c.get_den() != 1) {
        throw Error(ErrorCode::InvalidArgument, "non-integral coordinate " + rational_to_string(c) +
                                                    " in " + name());
      }
    }
  }
  return {*this, std::move(coordinates)};
}

GroupElement OrderedGroup::element(long value) const {
  std::vector<Rational> coords(rank_, Rational(0));
  coords.back() = value;
  return element(std::move(coords));
}

std::string OrderedGroup::name() const {
  switch (kind_) {
    case GroupKind::IntegerLine: return "Z";
    case GroupKind::RationalLine: return "Q";
    case GroupKind::LexProduct: return "Z^" + std::to_string(rank_) + "_lex";
  }
  return "?";
}

// ---------------------------------------------------------------------------

namespace {

void require_same(const GroupElement& g, const GroupElement& h) {
  if (g.group() != h.group()) {
    throw Error(ErrorCode::MismatchedGroups, g.group().name() + " vs " + h.group().name());
  }
}

}  // namespace

bool GroupElement::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const Rational& c) { return c == 0; });
}

bool GroupElement::is_integral() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const Rational& c) { return c.get_den() == 1; });
}

std::size_t GroupElement::leading_index() const {
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (coords_[i] != 0) return i;
  }
  return coords_.size();
}

GroupElement GroupElement::operator-() const {
  std::vector<Rational> out(coords_.size());
  for (std::size_t i = 0; i < coords_.size(); ++i) out[i] = -coords_[i];
  return {group_, std::move(out)};
}

GroupElement operator+(const GroupElement& g, const GroupElement& h) {
  require_same(g, h);
  std::vector<Rational> out(g.coords_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = g.coords_[i] + h.coords_[i];
  return {g.group_, std::move(out)};
}

GroupElement operator-(const GroupElement& g, const GroupElement& h) {
  require_same(g, h);
  std::vector<Rational> out(g.coords_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = g.coords_[i] - h.coords_[i];
  return {g.group_, std::move(out)};
}

GroupElement operator*(const Integer& n, const GroupElement& g) {
  std::vector<Rational> out(g.coords_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = Rational(n) * g.coords_[i];
  return {g.group_, std::move(out)};
}

std::strong_ordering operator<=>(const GroupElement& g, const GroupElement& h) {
  require_same(g, h);
  for (std::size_t i = 0; i < g.coords_.size(); ++i) {
    const int c = cmp(g.coords_[i], h.coords_[i]);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

bool operator==(const GroupElement& g, const GroupElement& h) {
  return (g <=> h) == std::strong_ordering::equal;
}

std::string GroupElement::to_string() const {
  if (coords_.size() == 1 && group_.kind() != GroupKind::LexProduct) return rational_to_string(coords_[0]);
  std::string out = "(";
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) out += ",";
    out += rational_to_string(coords_[i]);
  }
  return out + ")";
}

std::strong_ordering compare(const GroupElement& g, const GroupElement& h) { return g <=> h; }
const GroupElement& min(const GroupElement& g, const GroupElement& h) { return h < g ? h : g; }
const GroupElement& max(const GroupElement& g, const GroupElement& h) { return g < h ? h : g; }

// ---------------------------------------------------------------------------

std::vector<std::vector<Integer>> hermite_normal_form(std::vector<std::vector<Integer>> rows) {
  if (rows.empty()) return rows;
  const std::size_t cols = rows.front().size();
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < cols && pivot_row < rows.size(); ++col) {
    // Euclid on the column until a single nonzero entry remains at pivot_row.
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t r = pivot_row; r < rows.size(); ++r) {
        if (rows[r][col] == 0) continue;
        if (best == rows.size() || abs(rows[r][col]) < abs(rows[best][col])) best = r;
      }
      if (best == rows.size()) break;
      std::swap(rows[pivot_row], rows[best]);
      bool others = false;
      for (std::size_t r = pivot_row + 1; r < rows.size(); ++r) {
        if (rows[r][col] == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), rows[r][col].get_mpz_t(), rows[pivot_row][col].get_mpz_t());
        for (std::size_t c = col; c < cols; ++c) rows[r][c] -= q * rows[pivot_row][c];
        if (rows[r][col] != 0) others = true;
      }
      if (!others) break;
    }
    if (rows[pivot_row][col] == 0) continue;
    if (rows[pivot_row][col] < 0) {
      for (auto& x : rows[pivot_row]) x = -x;
    }
    for (std::size_t r = 0; r < pivot_row; ++r) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), rows[r][col].get_mpz_t(), rows[pivot_row][col].get_mpz_t());
      if (q == 0) continue;
      for (std::size_t c = col; c < cols; ++c) rows[r][c] -= q * rows[pivot_row][c];
    }
    ++pivot_row;
  }
  rows.resize(pivot_row);
  return rows;
}

namespace {

Integer lcm_denominators(const std::vector<GroupElement>& elems) {
  Integer d = 1;
  for (const auto& g : elems) {
    for (const auto& c : g.coordinates()) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), c.get_den_mpz_t());
  }
  return d;
}

std::optional<std::vector<Integer>> scaled_integral(const GroupElement& g, const Integer& denominator) {
  std::vector<Integer> out;
  out.reserve(g.coordinates().size());
  for (const auto& c : g.coordinates()) {
    Rational scaled = c * Rational(denominator);
    scaled.canonicalize();
    if (scaled.get_den() != 1) return std::nullopt;
    out.push_back(scaled.get_num());
  }
  return out;
}

std::size_t pivot_of(const std::vector<Integer>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i] != 0) return i;
  }
  return row.size();
}

Integer determinant(std::vector<std::vector<Integer>> m) {
  // Bareiss fraction-free elimination.
  const std::size_t n = m.size();
  if (n == 0) return 1;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

}  // namespace

Subgroup::Subgroup(OrderedGroup ambient, std::vector<GroupElement> generators) : ambient_(ambient) {
  for (auto& g : generators) {
    if (g.group() != ambient_) {
      throw Error(ErrorCode::MismatchedGroups, "generator " + g.to_string() + " not in " + ambient_.name());
    }
    const bool duplicate =
        std::any_of(generators_.begin(), generators_.end(), [&](const GroupElement& h) { return h == g; });
    if (!duplicate) generators_.push_back(std::move(g));
  }
  denominator_ = lcm_denominators(generators_);
  std::vector<std::vector<Integer>> rows;
  for (const auto& g : generators_) rows.push_back(*scaled_integral(g, denominator_));
  basis_ = hermite_normal_form(std::move(rows));
}

Subgroup Subgroup::trivial(OrderedGroup ambient) { return {ambient, {}}; }

Subgroup Subgroup::unit_line(OrderedGroup ambient) { return {ambient, {ambient.unit()}}; }

std::optional<std::vector<Integer>> Subgroup::basis_coordinates(const GroupElement& g) const {
  if (g.group() != ambient_) throw Error(ErrorCode::MismatchedGroups, "element outside " + ambient_.name());
  auto target = scaled_integral(g, denominator_);
  if (!target) return std::nullopt;
  std::vector<Integer> coords(basis_.size());
  for (std::size_t r = 0; r < basis_.size(); ++r) {
    const std::size_t col = pivot_of(basis_[r]);
    for (std::size_t c = 0; c < col; ++c) {
      if ((*target)[c] != 0) return std::nullopt;
    }
    if (!mpz_divisible_p((*target)[col].get_mpz_t(), basis_[r][col].get_mpz_t())) return std::nullopt;
    Integer q;
    mpz_divexact(q.get_mpz_t(), (*target)[col].get_mpz_t(), basis_[r][col].get_mpz_t());
    coords[r] = q;
    for (std::size_t c = col; c < target->size(); ++c) (*target)[c] -= q * basis_[r][c];
  }
  for (const auto& x : *target) {
    if (x != 0) return std::nullopt;
  }
  return coords;
}

bool Subgroup::contains(const GroupElement& g) const { return basis_coordinates(g).has_value(); }

std::vector<GroupElement> Subgroup::basis() const {
  std::vector<GroupElement> out;
  for (const auto& row : basis_) {
    std::vector<Rational> coords;
    for (const auto& x : row) {
      Rational q(x, denominator_);
      q.canonicalize();
      coords.push_back(q);
    }
    out.push_back(ambient_.element(std::move(coords)));
  }
  return out;
}

std::size_t Subgroup::leading_index() const {
  if (basis_.empty()) return ambient_.rank();
  return pivot_of(basis_.front());
}

std::optional<GroupElement> Subgroup::element_above(const GroupElement& g) const {
  if (g.group() != ambient_) throw Error(ErrorCode::MismatchedGroups, "element outside " + ambient_.name());
  const GroupElement zero = ambient_.zero();
  if (g < zero) return zero;
  if (basis_.empty()) return std::nullopt;
  const std::size_t k = leading_index();
  if (g.leading_index() < k) return std::nullopt;  // g > 0 dominates every element of H
  const GroupElement step = basis().front();    // positive pivot at coordinate k
  Rational ratio = g[k] / step[k];
  Integer m;
  mpz_fdiv_q(m.get_mpz_t(), ratio.get_num_mpz_t(), ratio.get_den_mpz_t());
  m += 1;
  if (m < 1) m = 1;
  return m * step;
}

bool coset_equal(const GroupElement& g, const GroupElement& h, const Subgroup& subgroup) {
  if (g.group() != h.group() || g.group() != subgroup.ambient()) {
    throw Error(ErrorCode::MismatchedGroups, "coset test across different groups");
  }
  return subgroup.contains(g - h);
}

std::string SubgroupIndex::to_string() const { return finite ? value.get_str() : "infinite"; }

SubgroupIndex subgroup_index(const Subgroup& sub, const Subgroup& group) {
  if (sub.ambient() != group.ambient()) throw Error(ErrorCode::MismatchedGroups, "index across groups");
  for (const auto& g : sub.generators()) {
    if (!group.contains(g)) {
      throw Error(ErrorCode::NotASubgroup, "generator " + g.to_string() + " is not in the larger group");
    }
  }
  if (sub.rank() != group.rank()) return {false, 0};
  std::vector<std::vector<Integer>> coords;
  for (const auto& row : sub.basis()) coords.push_back(*group.basis_coordinates(row));
  Integer det = determinant(std::move(coords));
  return {true, abs(det)};
}

bool is_cofinal(const Subgroup& sub, const Subgroup& group) {
  if (sub.ambient() != group.ambient()) throw Error(ErrorCode::MismatchedGroups, "cofinality across groups");
  for (const auto& g : sub.generators()) {
    if (!group.contains(g)) {
      throw Error(ErrorCode::NotASubgroup, "generator " + g.to_string() + " is not in the larger group");
    }
  }
  if (group.is_trivial()) return true;
  if (sub.is_trivial()) return false;
  return sub.leading_index() == group.leading_index();
}

}  // namespace ultragram
