#pragma once

// The poset P_f of finite conditions <a, h, i>: the * operation, validity,
// the order, neighbourhood sets U(alpha; b), restrictions, the relation
// "precedes", and the two one-point extension constructions.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "ordset.hpp"
#include "universe.hpp"

namespace pforce {

/// x * y for nonempty x, y with max x != max y.
inline OrdSet star(OrdSet x, OrdSet y) {
  if (x.empty() || y.empty()) throw Error(ErrorCode::EmptyOperand, "star of an empty set");
  const Ordinal mx = x.max();
  const Ordinal my = y.max();
  if (mx == my) throw Error(ErrorCode::EqualSup, "star with equal maxima " + std::to_string(mx));
  if (y.contains(mx)) return x - y;
  if (x.contains(my)) return y - x;
  return x & y;
}

/// A triple <a, h, i>. h is indexed by ordinal and i by unordered pair; unset
/// entries read as the empty set. Well-formedness (entries only on a and
/// [a]^2, values inside a) is a validity clause, not a representation
/// invariant, so parsed or hand-corrupted data can be represented and reported.
class Condition {
 public:
  Condition() = default;

  const OrdSet& domain() const { return a_; }
  void set_domain(OrdSet a) {
    a_ = a;
    if (!a.empty()) grow(a.max() + 1);
  }

  OrdSet h(Ordinal xi) const { return xi < h_.size() ? h_[xi] : OrdSet{}; }
  void set_h(Ordinal xi, OrdSet value) {
    grow(xi + 1);
    h_[xi] = value;
  }

  OrdSet i(Ordinal xi, Ordinal eta) const {
    if (xi == eta) return {};
    const auto [lo, hi] = std::minmax(xi, eta);
    const auto k = pair_index(lo, hi);
    return k < i_.size() ? i_[k] : OrdSet{};
  }
  void set_i(Ordinal xi, Ordinal eta, OrdSet value) {
    if (xi == eta) throw Error(ErrorCode::PreconditionViolated, "i is defined on pairs of distinct ordinals");
    const auto [lo, hi] = std::minmax(xi, eta);
    grow(hi + 1);
    i_[pair_index(lo, hi)] = value;
  }

  /// One past the largest ordinal that carries any entry.
  Ordinal extent() const { return static_cast<Ordinal>(h_.size()); }

  /// Union of h(nu) over nu in b.
  OrdSet h_union(OrdSet b) const {
    OrdSet out;
    for (Ordinal nu : b) out |= h(nu);
    return out;
  }

  /// Every ordinal mentioned anywhere, keys and values included.
  OrdSet support() const {
    OrdSet out = a_;
    for (Ordinal xi = 0; xi < h_.size(); ++xi)
      if (!h_[xi].empty()) out |= h_[xi] | OrdSet::single(xi);
    for (Ordinal hi = 1; hi < h_.size(); ++hi)
      for (Ordinal lo = 0; lo < hi; ++lo)
        if (!i_[pair_index(lo, hi)].empty()) out |= i_[pair_index(lo, hi)] | OrdSet{lo, hi};
    return out;
  }

  friend bool operator==(const Condition& p, const Condition& q) {
    if (p.a_ != q.a_) return false;
    const Ordinal n = std::max(p.extent(), q.extent());
    for (Ordinal xi = 0; xi < n; ++xi)
      if (p.h(xi) != q.h(xi)) return false;
    for (Ordinal hi = 1; hi < n; ++hi)
      for (Ordinal lo = 0; lo < hi; ++lo)
        if (p.i(lo, hi) != q.i(lo, hi)) return false;
    return true;
  }

 private:
  void grow(std::size_t n) {
    if (n > kMaxKappa) throw Error(ErrorCode::OutOfUniverse, "ordinal beyond the largest carrier");
    if (n <= h_.size()) return;
    h_.resize(n);
    i_.resize(pair_count(n));
  }

  OrdSet a_;
  std::vector<OrdSet> h_;
  std::vector<OrdSet> i_;
};

/// The single-point condition <{xi}, xi -> {xi}, empty>.
inline Condition point_condition(Ordinal xi) {
  Condition p;
  p.set_domain(OrdSet::single(xi));
  p.set_h(xi, OrdSet::single(xi));
  return p;
}

enum class Clause { I, II, III, IV };

constexpr std::string_view to_string(Clause c) {
  switch (c) {
    case Clause::I: return "i";
    case Clause::II: return "ii";
    case Clause::III: return "iii";
    case Clause::IV: return "iv";
  }
  return "?";
}

struct Violation {
  Clause clause;
  Ordinal xi;
  std::optional<Ordinal> eta;
  std::string detail;
};

struct ValidityReport {
  std::vector<Violation> violations;

  bool valid() const { return violations.empty(); }
  bool has(Clause c) const {
    return std::any_of(violations.begin(), violations.end(), [c](const Violation& v) { return v.clause == c; });
  }
};

/// Lists every violated clause (i)-(iv) of membership in P_f with its witness.
inline ValidityReport validate_condition(const PairFunction& f, const Condition& p) {
  f.universe().require(p.support(), "condition support");
  ValidityReport report;
  auto flag = [&](Clause c, Ordinal xi, std::optional<Ordinal> eta, std::string detail) {
    report.violations.push_back({c, xi, eta, std::move(detail)});
  };
  const OrdSet a = p.domain();

  // (i): h maps a into P(a), i maps [a]^2 into P(a), nothing outside.
  for (Ordinal xi = 0; xi < p.extent(); ++xi) {
    const OrdSet hx = p.h(xi);
    if (!a.contains(xi)) {
      if (!hx.empty()) flag(Clause::I, xi, std::nullopt, "h defined outside a");
    } else if (!hx.subset_of(a)) {
      flag(Clause::I, xi, std::nullopt, "h(xi)=" + hx.str() + " not inside a");
    }
  }
  for (Ordinal hi = 1; hi < p.extent(); ++hi)
    for (Ordinal lo = 0; lo < hi; ++lo) {
      const OrdSet v = p.i(lo, hi);
      if (v.empty()) continue;
      if (!a.contains(lo) || !a.contains(hi))
        flag(Clause::I, lo, hi, "i defined outside [a]^2");
      else if (!v.subset_of(a))
        flag(Clause::I, lo, hi, "i=" + v.str() + " not inside a");
    }

  // (ii): max h(xi) = xi.
  for (Ordinal xi : a) {
    const OrdSet hx = p.h(xi);
    if (hx.empty() || hx.max() != xi)
      flag(Clause::II, xi, std::nullopt, "max h(xi) != xi, h(xi)=" + hx.str());
  }

  // (iii) and (iv) on pairs of a.
  for (Ordinal eta : a)
    for (Ordinal xi : a.below_of(eta)) {
      const OrdSet v = p.i(xi, eta);
      if (!v.subset_of(f(xi, eta)))
        flag(Clause::III, xi, eta, "i=" + v.str() + " not inside f=" + f(xi, eta).str());
      const OrdSet hx = p.h(xi);
      const OrdSet he = p.h(eta);
      if (hx.empty() || he.empty() || hx.max() == he.max()) continue;  // already reported under (ii)
      const OrdSet s = star(hx, he);
      const OrdSet cover = p.h_union(v & a);
      if (!s.subset_of(cover))
        flag(Clause::IV, xi, eta, "h(xi)*h(eta)=" + s.str() + " not covered by " + cover.str());
    }
  return report;
}

inline bool is_valid(const PairFunction& f, const Condition& p) { return validate_condition(f, p).valid(); }

/// p <= q: p extends q. Both conditions are assumed valid over the same f.
inline bool leq(const Condition& p, const Condition& q) {
  const OrdSet aq = q.domain();
  if (!aq.subset_of(p.domain())) return false;
  for (Ordinal xi : aq)
    if ((p.h(xi) & aq) != q.h(xi)) return false;
  for (Ordinal eta : aq)
    for (Ordinal xi : aq.below_of(eta))
      if (p.i(xi, eta) != q.i(xi, eta)) return false;
  return true;
}

/// U^p(alpha; b) = h(alpha) minus the union of h(beta), beta in b.
inline OrdSet U(const Condition& p, Ordinal alpha, OrdSet b) {
  if (!p.domain().contains(alpha))
    throw Error(ErrorCode::AlphaNotInDomain, std::to_string(alpha) + " is not in a");
  if (!b.subset_of(p.domain().below_of(alpha)))
    throw Error(ErrorCode::BNotBelowAlpha, b.str() + " is not inside a & " + std::to_string(alpha));
  return p.h(alpha) - p.h_union(b);
}

/// p restricted to b: <b, xi -> h(xi) & b, i on [b]^2>. Not necessarily in P_f.
struct RestrictedCondition {
  Condition base;
  /// Domain of the condition it was cut from.
  OrdSet origin;
  /// base is a member of P_f, i.e. every i-value on [b]^2 lies inside b.
  bool is_condition = false;

  OrdSet b() const { return base.domain(); }
};

inline RestrictedCondition restrict(const Condition& p, OrdSet b) {
  if (!b.subset_of(p.domain())) throw Error(ErrorCode::NotSubset, b.str() + " is not inside a");
  RestrictedCondition r;
  r.origin = p.domain();
  r.base.set_domain(b);
  r.is_condition = true;
  for (Ordinal xi : b) r.base.set_h(xi, p.h(xi) & b);
  for (Ordinal eta : b)
    for (Ordinal xi : b.below_of(eta)) {
      const OrdSet v = p.i(xi, eta);
      if (!v.empty()) r.base.set_i(xi, eta, v);
      if (!v.subset_of(b)) r.is_condition = false;
    }
  return r;
}

/// A full condition viewed as its own restriction.
inline RestrictedCondition as_restriction(const Condition& p) { return restrict(p, p.domain()); }

/// r1 <= r2 on restrictions: b1 contains b2, h agrees on b2, i agrees on [b2]^2.
inline bool leq_restricted(const RestrictedCondition& r1, const RestrictedCondition& r2) {
  const OrdSet c = r2.b();
  if (!c.subset_of(r1.b())) return false;
  for (Ordinal xi : c)
    if ((r1.base.h(xi) & c) != (r2.base.h(xi) & c)) return false;
  for (Ordinal eta : c)
    for (Ordinal xi : c.below_of(eta))
      if (r1.base.i(xi, eta) != r2.base.i(xi, eta)) return false;
  return true;
}

inline bool leq_restricted(const Condition& p, const RestrictedCondition& r) {
  return leq_restricted(as_restriction(p), r);
}

/// Largest domain accepted by precedes(); the check enumerates 2^|a| sets.
inline constexpr std::size_t kPrecedesMaxDomain = 16;

/// p "precedes" p': same domain and U^p(alpha; b) inside U^p'(alpha; b) for all
/// alpha in a and all b inside a & alpha.
inline bool precedes(const Condition& p, const Condition& p_prime,
                     std::size_t max_domain = kPrecedesMaxDomain) {
  if (p.domain() != p_prime.domain())
    throw Error(ErrorCode::DomainMismatch, p.domain().str() + " vs " + p_prime.domain().str());
  if (p.domain().size() > max_domain)
    throw Error(ErrorCode::TooLarge, "domain of size " + std::to_string(p.domain().size()));
  const OrdSet a = p.domain();
  for (Ordinal alpha : a) {
    bool ok = true;
    for_each_subset(a.below_of(alpha), [&](OrdSet b) {
      if (ok && !U(p, alpha, b).subset_of(U(p_prime, alpha, b))) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

/// Adds alpha as an isolated new point: h(alpha) = {alpha}, i{alpha, .} empty.
inline Condition extend_with_point(const Condition& p, Ordinal alpha) {
  if (alpha >= kMaxKappa) throw Error(ErrorCode::OutOfUniverse, "alpha=" + std::to_string(alpha));
  if (p.domain().contains(alpha)) throw Error(ErrorCode::AlreadyPresent, std::to_string(alpha) + " is in a");
  Condition q = p;
  q.set_domain(p.domain() | OrdSet::single(alpha));
  q.set_h(alpha, OrdSet::single(alpha));
  return q;
}

/// Adds alpha < beta so that alpha lands in U^q(beta; b): alpha joins every
/// h(nu) that contains beta.
inline Condition extend_into_neighbourhood(const Condition& p, Ordinal beta, OrdSet b, Ordinal alpha) {
  const OrdSet a = p.domain();
  if (!a.contains(beta))
    throw Error(ErrorCode::PreconditionViolated, "beta=" + std::to_string(beta) + " is not in a");
  if (!b.subset_of(a.below_of(beta)))
    throw Error(ErrorCode::PreconditionViolated, "b=" + b.str() + " is not inside a & beta");
  if (a.contains(alpha)) throw Error(ErrorCode::AlreadyPresent, std::to_string(alpha) + " is in a");
  if (alpha >= beta)
    throw Error(ErrorCode::PreconditionViolated, "alpha=" + std::to_string(alpha) + " is not below beta");
  Condition q = p;
  q.set_domain(a | OrdSet::single(alpha));
  q.set_h(alpha, OrdSet::single(alpha));
  for (Ordinal nu : a)
    if (p.h(nu).contains(beta)) q.set_h(nu, p.h(nu) | OrdSet::single(alpha));
  return q;
}

}  // namespace pforce
