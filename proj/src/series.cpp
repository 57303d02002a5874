#include "ultragram/series.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <mutex>
#include <queue>

#include "ultragram/error.hpp"

namespace ultragram {

std::string Ambient::name() const { return field.name() + "((t^" + group.name() + "))"; }

// --- Work budget -------------------------------------------------------------

namespace {
thread_local WorkBudget* current_budget = nullptr;
}

WorkBudget::WorkBudget(std::size_t limit) : limit_(limit), parent_(current_budget) { current_budget = this; }

WorkBudget::~WorkBudget() { current_budget = parent_; }

void charge_work(std::size_t units) {
  for (WorkBudget* b = current_budget; b != nullptr; b = b->parent_) {
    b->used_ += units;
    if (b->used_ > b->limit_) {
      throw Error(ErrorCode::PrecisionExhausted, "work limit of " + std::to_string(b->limit_) + " steps reached");
    }
  }
}

// --- Nodes -------------------------------------------------------------------

namespace detail {

class Node {
 public:
  Node(Ambient ambient, std::optional<GroupElement> floor, bool finite)
      : ambient_(std::move(ambient)), floor_(std::move(floor)), finite_(finite) {}
  virtual ~Node() = default;

  const Ambient& ambient() const { return ambient_; }
  const std::optional<GroupElement>& floor() const { return floor_; }
  /// Structurally guaranteed to have finitely many terms.
  bool finite() const { return finite_; }

  Probe at(std::size_t i, const GroupElement& ceiling) {
    std::lock_guard<std::recursive_mutex> lock(mutex_);
    while (memo_.size() <= i) {
      if (ended_) return {Probe::Kind::End};
      if (beyond_ && ceiling <= *beyond_) return {Probe::Kind::Beyond};
      Step step = next(ceiling);
      switch (step.kind) {
        case Probe::Kind::Found:
          memo_.push_back(std::move(*step.term));
          beyond_.reset();
          break;
        case Probe::Kind::End:
          ended_ = true;
          break;
        case Probe::Kind::Beyond:
          beyond_ = ceiling;
          return {Probe::Kind::Beyond};
      }
    }
    return {Probe::Kind::Found, &memo_[i]};
  }

 protected:
  struct Step {
    Probe::Kind kind;
    std::optional<Term> term;
  };
  static Step found(Term t) { return {Probe::Kind::Found, std::move(t)}; }
  static Step beyond() { return {Probe::Kind::Beyond, std::nullopt}; }
  static Step end() { return {Probe::Kind::End, std::nullopt}; }

  /// Produces memo_.size()-th term, or reports that none exists below `ceiling`.
  /// Must leave the node consistent if a child query throws.
  virtual Step next(const GroupElement& ceiling) = 0;

  std::deque<Term> memo_;  // deque: references stay valid on push_back

 private:
  Ambient ambient_;
  std::optional<GroupElement> floor_;
  bool finite_;
  std::recursive_mutex mutex_;
  bool ended_ = false;
  std::optional<GroupElement> beyond_;  // next term, if any, is >= this
};

namespace {

class TermsNode final : public Node {
 public:
  TermsNode(const Ambient& ambient, std::vector<Term> terms)
      : Node(ambient, terms.empty() ? std::nullopt : std::optional<GroupElement>(terms.front().exponent), true),
        terms_(std::move(terms)) {}

 protected:
  Step next(const GroupElement&) override {
    if (memo_.size() >= terms_.size()) return end();
    return found(terms_[memo_.size()]);
  }

 private:
  std::vector<Term> terms_;
};

class GeneratorNode final : public Node {
 public:
  GeneratorNode(const Ambient& ambient, std::function<GroupElement(std::size_t)> exponent,
                std::function<FieldElement(std::size_t)> coefficient, std::optional<std::size_t> count)
      : Node(ambient, exponent(0), count.has_value()), exponent_(std::move(exponent)), coefficient_(std::move(coefficient)), count_(count) {}

 protected:
  Step next(const GroupElement& ceiling) override {
    while (true) {
      charge_work();
      if (count_ && raw_ >= *count_) return end();
      if (!pending_) {
        GroupElement e = exponent_(raw_);
        if (last_ && e <= *last_) {
          throw Error(ErrorCode::InvalidArgument, "generated exponents must increase strictly (index " +
                                                      std::to_string(raw_) + ")");
        }
        pending_ = std::move(e);
      }
      if (*pending_ >= ceiling) return beyond();
      FieldElement c = coefficient_(raw_);
      ++raw_;
      last_ = pending_;
      GroupElement e = std::move(*pending_);
      pending_.reset();
      if (!c.is_zero()) return found({std::move(e), std::move(c)});
    }
  }

 private:
  std::function<GroupElement(std::size_t)> exponent_;
  std::function<FieldElement(std::size_t)> coefficient_;
  std::optional<std::size_t> count_;
  std::size_t raw_ = 0;
  std::optional<GroupElement> pending_;
  std::optional<GroupElement> last_;
};

std::optional<GroupElement> floor_min(const std::optional<GroupElement>& a, const std::optional<GroupElement>& b) {
  if (!a) return b;
  if (!b) return a;
  return min(*a, *b);
}

class SumNode final : public Node {
 public:
  SumNode(std::shared_ptr<Node> a, std::shared_ptr<Node> b)
      : Node(a->ambient(), floor_min(a->floor(), b->floor()), a->finite() && b->finite()), a_(std::move(a)), b_(std::move(b)) {}

 protected:
  Step next(const GroupElement& ceiling) override {
    while (true) {
      charge_work();
      const Probe pa = a_->at(ia_, ceiling);
      const Probe pb = b_->at(ib_, ceiling);
      const bool fa = pa.kind == Probe::Kind::Found;
      const bool fb = pb.kind == Probe::Kind::Found;
      if (!fa && !fb) {
        if (pa.kind == Probe::Kind::End && pb.kind == Probe::Kind::End) return end();
        return beyond();
      }
      if (fa && fb) {
        const auto order = pa.term->exponent <=> pb.term->exponent;
        if (order < 0) {
          ++ia_;
          return found(*pa.term);
        }
        if (order > 0) {
          ++ib_;
          return found(*pb.term);
        }
        FieldElement c = pa.term->coefficient + pb.term->coefficient;
        ++ia_;
        ++ib_;
        if (!c.is_zero()) return found({pa.term->exponent, std::move(c)});
        continue;
      }
      // Exactly one side has a known term; the other has ended or lies beyond the ceiling.
      const Probe& known = fa ? pa : pb;
      const Probe& other = fa ? pb : pa;
      if (other.kind == Probe::Kind::Beyond && known.term->exponent >= ceiling) return beyond();
      if (fa) {
        ++ia_;
      } else {
        ++ib_;
      }
      return found(*known.term);
    }
  }

 private:
  std::shared_ptr<Node> a_, b_;
  std::size_t ia_ = 0, ib_ = 0;
};

class ScaleNode final : public Node {
 public:
  ScaleNode(std::shared_ptr<Node> x, FieldElement c, GroupElement shift)
      : Node(x->ambient(), x->floor() ? std::optional<GroupElement>(*x->floor() + shift) : std::nullopt, x->finite()),
        x_(std::move(x)),
        c_(std::move(c)),
        shift_(std::move(shift)) {}

 protected:
  Step next(const GroupElement& ceiling) override {
    const Probe p = x_->at(memo_.size(), ceiling - shift_);
    if (p.kind != Probe::Kind::Found) return {p.kind, std::nullopt};
    return found({p.term->exponent + shift_, c_ * p.term->coefficient});
  }

 private:
  std::shared_ptr<Node> x_;
  FieldElement c_;
  GroupElement shift_;
};

class TruncateNode final : public Node {
 public:
  TruncateNode(std::shared_ptr<Node> x, GroupElement gamma)
      : Node(x->ambient(), x->floor(), true), x_(std::move(x)), gamma_(std::move(gamma)) {}

 protected:
  Step next(const GroupElement& ceiling) override {
    const bool capped = gamma_ <= ceiling;
    const Probe p = x_->at(memo_.size(), capped ? gamma_ : ceiling);
    if (p.kind == Probe::Kind::End) return end();
    if (p.kind == Probe::Kind::Beyond) return capped ? end() : beyond();
    if (p.term->exponent >= gamma_) return end();
    return found(*p.term);
  }

 private:
  std::shared_ptr<Node> x_;
  GroupElement gamma_;
};

class DropNode final : public Node {
 public:
  DropNode(std::shared_ptr<Node> x, std::size_t count, std::optional<GroupElement> floor)
      : Node(x->ambient(), std::move(floor), x->finite()), x_(std::move(x)), count_(count) {}

 protected:
  Step next(const GroupElement& ceiling) override {
    const Probe p = x_->at(memo_.size() + count_, ceiling);
    if (p.kind != Probe::Kind::Found) return {p.kind, std::nullopt};
    return found(*p.term);
  }

 private:
  std::shared_ptr<Node> x_;
  std::size_t count_;
};

// Enumerates the pairwise products a_i * b_j in nondecreasing exponent order.
// Popping (i, j) schedules (i, j+1), and (i+1, 0) when j == 0, which visits
// every pair exactly once because both exponent sequences increase.
class Frontier {
 public:
  enum class Status { Found, Beyond, End, Waiting };
  struct Answer {
    Status status;
    const Term* term = nullptr;
  };
  using Query = std::function<Answer(std::size_t, const GroupElement&)>;

  Frontier(Query a, Query b, GroupElement floor_a, const FieldElement& zero)
      : a_(std::move(a)), b_(std::move(b)), floor_a_(std::move(floor_a)), zero_(zero) {
    fresh_.push_back({0, 0, Status::Found});
  }

  /// The next nonzero coefficient of the product.
  std::optional<Term> next(const GroupElement& ceiling, bool& beyond) {
    beyond = false;
    for (auto& s : stalled_) fresh_.push_back(s);
    stalled_.clear();
    while (true) {
      charge_work();
      if (!fresh_.empty()) {
        resolve(fresh_.back(), ceiling);
        fresh_.pop_back();
        continue;
      }
      if (acc_exp_) {
        if (*acc_exp_ >= ceiling) {
          beyond = true;
          return std::nullopt;
        }
        if (!heap_.empty() && heap_.top().exponent == *acc_exp_) {
          Ready r = heap_.top();
          heap_.pop();
          acc_coeff_ = acc_coeff_ + r.coefficient;
          fresh_.push_back({r.i, r.j + 1, Status::Found});
          if (r.j == 0) fresh_.push_back({r.i + 1, 0, Status::Found});
          continue;
        }
        GroupElement e = std::move(*acc_exp_);
        acc_exp_.reset();
        if (!acc_coeff_.is_zero()) return Term{std::move(e), acc_coeff_};
        continue;
      }
      if (heap_.empty()) {
        beyond = std::any_of(stalled_.begin(), stalled_.end(), [](const Pair& p) { return p.status == Status::Beyond; });
        return std::nullopt;
      }
      if (heap_.top().exponent >= ceiling) {
        beyond = true;
        return std::nullopt;
      }
      acc_exp_ = heap_.top().exponent;
      acc_coeff_ = zero_;
    }
  }

 private:
  struct Pair {
    std::size_t i, j;
    Status status;
  };
  struct Ready {
    GroupElement exponent;
    std::size_t i, j;
    FieldElement coefficient;
  };
  struct Later {
    bool operator()(const Ready& x, const Ready& y) const { return x.exponent > y.exponent; }
  };

  // Either moves the pair to the heap, drops it, or parks it in stalled_.
  // Queries happen before any mutation so a throwing child leaves no trace.
  void resolve(const Pair& pair, const GroupElement& ceiling) {
    const Answer pb = b_(pair.j, ceiling - floor_a_);
    if (pb.status == Status::End) return;
    if (pb.status != Status::Found) {
      stalled_.push_back({pair.i, pair.j, pb.status});
      return;
    }
    const Answer pa = a_(pair.i, ceiling - pb.term->exponent);
    if (pa.status == Status::End) return;
    if (pa.status != Status::Found) {
      stalled_.push_back({pair.i, pair.j, pa.status});
      return;
    }
    heap_.push({pa.term->exponent + pb.term->exponent, pair.i, pair.j, pa.term->coefficient * pb.term->coefficient});
  }

  Query a_, b_;
  GroupElement floor_a_;
  FieldElement zero_;
  std::vector<Pair> fresh_;
  std::vector<Pair> stalled_;
  std::priority_queue<Ready, std::vector<Ready>, Later> heap_;
  std::optional<GroupElement> acc_exp_;
  FieldElement acc_coeff_ = zero_;
};

Frontier::Answer from_probe(const Probe& p) {
  switch (p.kind) {
    case Probe::Kind::Found: return {Frontier::Status::Found, p.term};
    case Probe::Kind::Beyond: return {Frontier::Status::Beyond};
    case Probe::Kind::End: return {Frontier::Status::End};
  }
  return {Frontier::Status::End};
}

class ProductNode final : public Node {
 public:
  ProductNode(std::shared_ptr<Node> a, std::shared_ptr<Node> b)
      : Node(a->ambient(), *a->floor() + *b->floor(), a->finite() && b->finite()),
        a_(std::move(a)),
        b_(std::move(b)),
        frontier_([this](std::size_t i, const GroupElement& c) { return from_probe(a_->at(i, c)); },
                  [this](std::size_t j, const GroupElement& c) { return from_probe(b_->at(j, c)); }, *a_->floor(),
                  a_->ambient().field.zero()) {}

 protected:
  Step next(const GroupElement& ceiling) override {
    bool is_beyond = false;
    auto term = frontier_.next(ceiling, is_beyond);
    if (term) return found(std::move(*term));
    return is_beyond ? beyond() : end();
  }

 private:
  std::shared_ptr<Node> a_, b_;
  Frontier frontier_;
};

// y = 1/(1+u) for v(u) > 0, via y = 1 - u*y. The product's pairs only ever
// need already-produced terms of y, except pairs parked as Waiting whose
// exponent exceeds the term under construction.
class InverseUnitNode final : public Node {
 public:
  explicit InverseUnitNode(std::shared_ptr<Node> u)
      : Node(u->ambient(), u->ambient().group.zero(), false),
        u_(std::move(u)),
        frontier_([this](std::size_t i, const GroupElement& c) { return from_probe(u_->at(i, c)); },
                  [this](std::size_t j, const GroupElement&) {
                    if (j < memo_.size()) return Frontier::Answer{Frontier::Status::Found, &memo_[j]};
                    return Frontier::Answer{Frontier::Status::Waiting};
                  },
                  *u_->floor(), u_->ambient().field.zero()) {
    memo_.push_back({ambient().group.zero(), ambient().field.one()});
  }

 protected:
  Step next(const GroupElement& ceiling) override {
    bool is_beyond = false;
    auto term = frontier_.next(ceiling, is_beyond);
    if (term) return found({std::move(term->exponent), -term->coefficient});
    return is_beyond ? beyond() : end();
  }

 private:
  std::shared_ptr<Node> u_;
  Frontier frontier_;
};

}  // namespace
}  // namespace detail

// --- Series ------------------------------------------------------------------

using detail::Node;
using detail::Probe;

namespace {

void require_same(const Series& x, const Series& y) {
  if (x.ambient() != y.ambient()) {
    throw Error(ErrorCode::MismatchedAmbient, x.ambient().name() + " vs " + y.ambient().name());
  }
}

}  // namespace

Series Series::zero(const Ambient& ambient) { return Series(std::make_shared<detail::TermsNode>(ambient, std::vector<Term>{})); }

Series Series::monomial(const Ambient& ambient, const GroupElement& exponent, const FieldElement& coefficient) {
  return from_terms(ambient, {Term{exponent, coefficient}});
}

Series Series::constant(const Ambient& ambient, const FieldElement& coefficient) {
  return monomial(ambient, ambient.group.zero(), coefficient);
}

Series Series::from_terms(const Ambient& ambient, std::vector<Term> terms) {
  for (const auto& t : terms) {
    if (t.exponent.group() != ambient.group || t.coefficient.field() != ambient.field) {
      throw Error(ErrorCode::MismatchedAmbient, "term outside " + ambient.name());
    }
  }
  std::stable_sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.exponent < b.exponent; });
  std::vector<Term> merged;
  for (auto& t : terms) {
    if (!merged.empty() && merged.back().exponent == t.exponent) {
      merged.back().coefficient = merged.back().coefficient + t.coefficient;
    } else {
      merged.push_back(std::move(t));
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coefficient.is_zero(); });
  return Series(std::make_shared<detail::TermsNode>(ambient, std::move(merged)));
}

Series Series::generated(const Ambient& ambient, std::function<GroupElement(std::size_t)> exponent,
                         std::function<FieldElement(std::size_t)> coefficient, std::optional<std::size_t> count) {
  if (count && *count == 0) return zero(ambient);
  return Series(std::make_shared<detail::GeneratorNode>(ambient, std::move(exponent), std::move(coefficient), count));
}

const Ambient& Series::ambient() const { return node_->ambient(); }

Probe Series::term(std::size_t i, const GroupElement& ceiling) const { return node_->at(i, ceiling); }

std::vector<Term> Series::terms_below(const GroupElement& ceiling, std::size_t max_terms) const {
  std::vector<Term> out;
  for (std::size_t i = 0; i < max_terms; ++i) {
    const Probe p = term(i, ceiling);
    if (p.kind != Probe::Kind::Found || p.term->exponent >= ceiling) break;
    out.push_back(*p.term);
  }
  return out;
}

bool Series::is_known_zero() const { return !node_->floor().has_value(); }

bool Series::is_finite() const { return node_->finite(); }

std::vector<Term> Series::all_terms(std::size_t work_limit) const {
  if (!is_finite()) throw Error(ErrorCode::InvalidArgument, "series is not known to be finite");
  WorkBudget budget(work_limit);
  const OrderedGroup& g = ambient().group;
  std::vector<Rational> top(g.rank(), Rational(0));
  top.front() = 1;
  // Ceilings (2^n, 0, ..., 0) eventually dominate every exponent.
  GroupElement ceiling = g.element(top);
  std::vector<Term> out;
  for (std::size_t i = 0;;) {
    const Probe p = term(i, ceiling);
    if (p.kind == Probe::Kind::End) return out;
    if (p.kind == Probe::Kind::Beyond) {
      charge_work();
      ceiling = Integer(2) * ceiling;
      continue;
    }
    out.push_back(*p.term);
    ++i;
  }
}

const std::optional<GroupElement>& Series::floor() const { return node_->floor(); }

namespace {

std::string term_to_string(const Term& t) {
  std::string c = t.coefficient.to_string();
  const bool compound = c.find_first_of("+/") != std::string::npos || (c.size() > 1 && c.find('-', 1) != std::string::npos);
  if (t.exponent.is_zero()) return c;
  std::string e = "t^" + t.exponent.to_string();
  if (t.coefficient.is_one()) return e;
  if (compound) c = "(" + c + ")";
  return c + "*" + e;
}

}  // namespace

std::string Series::to_string(const GroupElement& ceiling, std::size_t max_terms) const {
  const auto terms = terms_below(ceiling, max_terms);
  if (terms.empty()) {
    const Probe p = term(0, ceiling);
    return p.kind == Probe::Kind::End ? "0" : "O(t^" + ceiling.to_string() + ")";
  }
  std::string out;
  for (const auto& t : terms) {
    if (!out.empty()) out += " + ";
    out += term_to_string(t);
  }
  const Probe more = term(terms.size(), ceiling);
  if (more.kind == Probe::Kind::Found || more.kind == Probe::Kind::Beyond) out += " + ...";
  return out;
}

Series operator+(const Series& x, const Series& y) {
  require_same(x, y);
  if (x.is_known_zero()) return y;
  if (y.is_known_zero()) return x;
  return Series(std::make_shared<detail::SumNode>(x.node_, y.node_));
}

Series Series::operator-() const { return scaled(-ambient().field.one(), ambient().group.zero()); }

Series operator-(const Series& x, const Series& y) { return x + (-y); }

Series operator*(const Series& x, const Series& y) {
  require_same(x, y);
  if (x.is_known_zero() || y.is_known_zero()) return Series::zero(x.ambient());
  return Series(std::make_shared<detail::ProductNode>(x.node_, y.node_));
}

Series Series::scaled(const FieldElement& c, const GroupElement& shift) const {
  if (c.field() != ambient().field || shift.group() != ambient().group) {
    throw Error(ErrorCode::MismatchedAmbient, "scaling outside " + ambient().name());
  }
  if (c.is_zero() || is_known_zero()) return zero(ambient());
  if (c.is_one() && shift.is_zero()) return *this;
  return Series(std::make_shared<detail::ScaleNode>(node_, c, shift));
}

std::string Valuation::to_string() const {
  if (kind == Kind::Value) return value.to_string();
  if (exhausted) return "inf";
  return (out_of_work ? "?>=" : ">=") + value.to_string();
}

Valuation valuation(const Series& x, const Precision& prec) {
  WorkBudget budget(prec.work_limit);
  try {
    const Probe p = x.term(0, prec.ceiling);
    if (p.kind == Probe::Kind::Found && p.term->exponent < prec.ceiling) {
      return {Valuation::Kind::Value, p.term->exponent};
    }
    return {Valuation::Kind::ZeroUpTo, prec.ceiling, p.kind == Probe::Kind::End};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::PrecisionExhausted) throw;
    return {Valuation::Kind::ZeroUpTo, prec.ceiling, false, true};
  }
}

std::optional<Term> leading_term(const Series& x, const Precision& prec) {
  const Valuation v = valuation(x, prec);
  if (!v.is_value()) return std::nullopt;
  return *x.term(0, prec.ceiling).term;
}

Series drop_terms(const Series& x, std::size_t count) {
  if (count == 0) return x;
  return Series(std::make_shared<detail::DropNode>(x.node_, count, x.floor()));
}

Series invert(const Series& x, const Precision& prec) {
  const auto lead = leading_term(x, prec);
  if (!lead) throw Error(ErrorCode::LeadingTermUnknown, "cannot invert a series with unwitnessed leading term");
  const FieldElement c_inv = lead->coefficient.inverse();
  const GroupElement shift = -lead->exponent;
  const Series u = drop_terms(x, 1).scaled(c_inv, shift);
  // A monomial: the tail is empty as soon as it is inspected.
  if (u.term(0, lead->exponent).kind == Probe::Kind::End) return Series::monomial(x.ambient(), shift, c_inv);
  const Series unit_inverse(std::make_shared<detail::InverseUnitNode>(u.node_));
  return unit_inverse.scaled(c_inv, shift);
}

FieldElement residue_ratio(const Series& a, const Series& b, const Precision& prec) {
  const auto la = leading_term(a, prec);
  const auto lb = leading_term(b, prec);
  if (!la || !lb || la->exponent != lb->exponent) {
    throw Error(ErrorCode::ValuationMismatch, "residue ratio needs equal witnessed valuations");
  }
  return la->coefficient / lb->coefficient;
}

Series truncate(const Series& x, const GroupElement& gamma) {
  if (x.is_known_zero()) return x;
  return Series(std::make_shared<detail::TruncateNode>(x.node_, gamma));
}

bool equal_up_to(const Series& x, const Series& y, const GroupElement& gamma, std::size_t work_limit) {
  WorkBudget budget(work_limit);
  const Series diff = x - y;
  const Probe p = diff.term(0, gamma);
  return p.kind != Probe::Kind::Found || p.term->exponent >= gamma;
}

// --- Named families ------------------------------------------------------------

namespace {

GroupElement along_unit(const OrderedGroup& group, const Rational& q) {
  std::vector<Rational> coords(group.rank(), Rational(0));
  coords.back() = q;
  return group.element(std::move(coords));
}

// Evaluates integer expressions in one variable i: + - * / ^ and parentheses.
class IndexExpression {
 public:
  explicit IndexExpression(std::string text) : text_(std::move(text)) {
    std::size_t pos = 0;
    // Validate once by evaluating at 0.
    (void)eval_at(0, pos);
  }

  Rational operator()(std::size_t i) const {
    std::size_t pos = 0;
    return eval_at(i, pos);
  }

 private:
  Rational eval_at(std::size_t i, std::size_t& pos) const {
    pos = 0;
    Rational r = sum(i, pos);
    skip(pos);
    if (pos != text_.size()) fail(pos);
    return r;
  }
  [[noreturn]] void fail(std::size_t pos) const {
    throw Error(ErrorCode::ParseError, "bad exponent expression '" + text_ + "' at " + std::to_string(pos));
  }
  void skip(std::size_t& pos) const {
    while (pos < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos]))) ++pos;
  }
  bool accept(std::size_t& pos, char c) const {
    skip(pos);
    if (pos < text_.size() && text_[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  Rational sum(std::size_t i, std::size_t& pos) const {
    Rational r = accept(pos, '-') ? Rational(-product(i, pos)) : product(i, pos);
    while (true) {
      if (accept(pos, '+')) {
        r += product(i, pos);
      } else if (accept(pos, '-')) {
        r -= product(i, pos);
      } else {
        return r;
      }
    }
  }
  Rational product(std::size_t i, std::size_t& pos) const {
    Rational r = power(i, pos);
    while (true) {
      if (accept(pos, '*')) {
        r *= power(i, pos);
      } else if (accept(pos, '/')) {
        Rational d = power(i, pos);
        if (d == 0) fail(pos);
        r /= d;
      } else {
        return r;
      }
    }
  }
  Rational power(std::size_t i, std::size_t& pos) const {
    Rational base = atom(i, pos);
    if (!accept(pos, '^')) return base;
    Rational e = atom(i, pos);
    if (e.get_den() != 1 || e < 0 || e > 4096) fail(pos);
    Rational out = 1;
    for (unsigned long k = 0; k < e.get_num().get_ui(); ++k) out *= base;
    return out;
  }
  Rational atom(std::size_t i, std::size_t& pos) const {
    skip(pos);
    if (accept(pos, '(')) {
      Rational r = sum(i, pos);
      if (!accept(pos, ')')) fail(pos);
      return r;
    }
    if (pos < text_.size() && text_[pos] == 'i') {
      ++pos;
      return Rational(static_cast<unsigned long>(i));
    }
    const std::size_t start = pos;
    while (pos < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos]))) ++pos;
    if (start == pos) fail(pos);
    return Rational(Integer(text_.substr(start, pos - start), 10));
  }

  std::string text_;
};

}  // namespace

Rational evaluate_index_expression(const std::string& text, std::size_t i) { return IndexExpression(text)(i); }

Series geometric_series(const Ambient& ambient) {
  const OrderedGroup g = ambient.group;
  const FieldElement one = ambient.field.one();
  return Series::generated(
      ambient, [g](std::size_t i) { return along_unit(g, Rational(static_cast<unsigned long>(i))); },
      [one](std::size_t) { return one; });
}

Series artin_schreier_series(const Ambient& ambient, unsigned long p) {
  if (p < 2) throw Error(ErrorCode::InvalidArgument, "Artin-Schreier builder needs p >= 2");
  const OrderedGroup g = ambient.group;
  const FieldElement one = ambient.field.one();
  return Series::generated(
      ambient,
      [g, p](std::size_t i) {
        Integer e;
        mpz_ui_pow_ui(e.get_mpz_t(), p, i);
        return along_unit(g, Rational(e));
      },
      [one](std::size_t) { return one; });
}

Series custom_power_series(const Ambient& ambient, const std::string& exponents, std::size_t start) {
  const auto f = std::make_shared<IndexExpression>(exponents);
  const OrderedGroup g = ambient.group;
  const FieldElement one = ambient.field.one();
  return Series::generated(
      ambient, [g, f, start](std::size_t i) { return along_unit(g, (*f)(i + start)); },
      [one](std::size_t) { return one; });
}

}  // namespace ultragram
