#pragma once

// Good twins, the amalgamation p + p' of good twins, and the layered
// insertion construction that places C = S - H^s(Q | E) into h(gamma_0).

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "ordset.hpp"
#include "poset.hpp"
#include "universe.hpp"

namespace pforce {

/// The order isomorphism e : a -> a' of two twins.
struct TwinWitness {
  std::vector<std::pair<Ordinal, Ordinal>> e;
  OrdSet common;

  Ordinal operator()(Ordinal xi) const {
    for (auto [from, to] : e)
      if (from == xi) return to;
    throw Error(ErrorCode::AlphaNotInDomain, std::to_string(xi) + " is not in the twin domain");
  }
  OrdSet image(OrdSet s) const {
    OrdSet out;
    for (Ordinal xi : s) out.insert((*this)(xi));
    return out;
  }
};

/// Which clause of the good-twins definition fails first.
enum class TwinClause {
  Size,           // |a| != |a'|
  H,              // 1(i):   h'(e(xi)) = e''h(xi)
  I,              // 1(ii):  i'{e xi, e eta} = e''i{xi,eta}
  Identity,       // 1(iii): e fixes a & a'
  CommonI,        // 2:      i = i' on [a & a']^2
  Good,           // 3:      a, a' good for f
};

constexpr std::string_view to_string(TwinClause c) {
  switch (c) {
    case TwinClause::Size: return "1:size";
    case TwinClause::H: return "1(i)";
    case TwinClause::I: return "1(ii)";
    case TwinClause::Identity: return "1(iii)";
    case TwinClause::CommonI: return "2";
    case TwinClause::Good: return "3";
  }
  return "?";
}

namespace detail {

inline std::optional<TwinClause> twin_failure(const Condition& p, const Condition& q, TwinWitness& out) {
  const OrdSet a = p.domain();
  const OrdSet a2 = q.domain();
  if (a.size() != a2.size()) return TwinClause::Size;
  out.e.clear();
  out.common = a & a2;
  auto it = a2.begin();
  for (Ordinal xi : a) out.e.emplace_back(xi, *it++);
  for (auto [xi, exi] : out.e)
    if (q.h(exi) != out.image(p.h(xi) & a)) return TwinClause::H;
  for (std::size_t m = 0; m < out.e.size(); ++m)
    for (std::size_t n = 0; n < m; ++n) {
      const auto [xi, exi] = out.e[n];
      const auto [eta, eeta] = out.e[m];
      if (q.i(exi, eeta) != out.image(p.i(xi, eta) & a)) return TwinClause::I;
    }
  for (auto [xi, exi] : out.e)
    if (out.common.contains(xi) && exi != xi) return TwinClause::Identity;
  return std::nullopt;
}

}  // namespace detail

/// The isomorphism witness when p and p' are twins.
inline std::optional<TwinWitness> are_twins(const Condition& p, const Condition& p_prime) {
  TwinWitness w;
  if (detail::twin_failure(p, p_prime, w)) return std::nullopt;
  return w;
}

/// First failing clause of "good twins", or nullopt when p, p' are good twins.
inline std::optional<TwinClause> good_twin_failure(const PairFunction& f, const Condition& p,
                                                   const Condition& p_prime) {
  TwinWitness w;
  if (auto c = detail::twin_failure(p, p_prime, w)) return c;
  const OrdSet common = w.common;
  for (Ordinal eta : common)
    for (Ordinal xi : common.below_of(eta))
      if (p.i(xi, eta) != p_prime.i(xi, eta)) return TwinClause::CommonI;
  if (!is_good_pair(f, p.domain(), p_prime.domain())) return TwinClause::Good;
  return std::nullopt;
}

inline bool are_good_twins(const PairFunction& f, const Condition& p, const Condition& p_prime) {
  return !good_twin_failure(f, p, p_prime).has_value();
}

/// delta_xi = min{ delta in a & a' : xi in h(delta) | h'(delta) }, when it exists.
inline std::optional<Ordinal> delta_xi(const Condition& p, const Condition& p_prime, Ordinal xi) {
  for (Ordinal delta : p.domain() & p_prime.domain())
    if (p.h(delta).contains(xi) || p_prime.h(delta).contains(xi)) return delta;
  return std::nullopt;
}

namespace detail {

/// {eta in others : delta_eta defined and in hx}
inline OrdSet delta_members(const Condition& p, const Condition& q, OrdSet others, OrdSet hx) {
  OrdSet out;
  for (Ordinal eta : others) {
    const auto d = delta_xi(p, q, eta);
    if (d && hx.contains(*d)) out.insert(eta);
  }
  return out;
}

}  // namespace detail

/// r = p + p' on b = a | a'.
inline Condition amalgamate(const PairFunction& f, const Condition& p, const Condition& p_prime) {
  if (auto c = good_twin_failure(f, p, p_prime))
    throw Error(ErrorCode::NotGoodTwins, "clause " + std::string(to_string(*c)) + " fails");
  const OrdSet a = p.domain();
  const OrdSet a2 = p_prime.domain();
  const OrdSet b = a | a2;
  const OrdSet common = a & a2;
  const OrdSet only_p = a - a2;
  const OrdSet only_q = a2 - a;

  Condition r;
  r.set_domain(b);
  for (Ordinal xi : b) {
    if (common.contains(xi))
      r.set_h(xi, p.h(xi) | p_prime.h(xi));
    else if (only_p.contains(xi))
      r.set_h(xi, p.h(xi) | detail::delta_members(p, p_prime, only_q, p.h(xi)));
    else
      r.set_h(xi, p_prime.h(xi) | detail::delta_members(p, p_prime, only_p, p_prime.h(xi)));
  }
  for (Ordinal eta : b)
    for (Ordinal xi : b.below_of(eta)) {
      OrdSet v;
      if (a.contains(xi) && a.contains(eta))
        v = p.i(xi, eta);
      else if (a2.contains(xi) && a2.contains(eta))
        v = p_prime.i(xi, eta);
      else
        v = f(xi, eta) & b;
      if (!v.empty()) r.set_i(xi, eta, v);
    }
  return r;
}

/// For every eta in a and delta in a & a':
///   eta in h(delta)  iff  delta_eta is defined and lies in h(delta),
/// and symmetrically for a' with h'.
inline bool verify_membership_equiv(const PairFunction& f, const Condition& p, const Condition& p_prime) {
  if (auto c = good_twin_failure(f, p, p_prime))
    throw Error(ErrorCode::NotGoodTwins, "clause " + std::string(to_string(*c)) + " fails");
  const OrdSet common = p.domain() & p_prime.domain();
  auto side = [&](const Condition& x) {
    for (Ordinal eta : x.domain())
      for (Ordinal delta : common) {
        const auto d = delta_xi(p, p_prime, eta);
        const bool rhs = d && x.h(delta).contains(*d);
        if (x.h(delta).contains(eta) != rhs) return false;
      }
    return true;
  };
  return side(p) && side(p_prime);
}

/// For xi in a & a' the three descriptions of g(xi) coincide:
///   h(xi) | h'(xi),
///   h(xi)  | {eta in a'-a : delta_eta in h(xi)},
///   h'(xi) | {eta in a-a' : delta_eta in h'(xi)}.
inline bool g_well_defined(const Condition& p, const Condition& p_prime) {
  const OrdSet a = p.domain();
  const OrdSet a2 = p_prime.domain();
  for (Ordinal xi : a & a2) {
    const OrdSet first = p.h(xi) | p_prime.h(xi);
    const OrdSet second = p.h(xi) | detail::delta_members(p, p_prime, a2 - a, p.h(xi));
    const OrdSet third = p_prime.h(xi) | detail::delta_members(p, p_prime, a - a2, p_prime.h(xi));
    if (first != second || first != third) return false;
  }
  return true;
}

/// a^s = S | E | F with S < E < F, E = {gamma_0 < ... < gamma_{k-1}} and
/// F = {gamma_{i,0}, gamma_{i,1} : i < k}; Q inside S.
struct InsertionLayout {
  OrdSet S, E, F, Q;
  /// (gamma_{i,0}, gamma_{i,1}) for the i-th element of E.
  std::vector<std::pair<Ordinal, Ordinal>> gamma_pairs;

  std::vector<Ordinal> gamma() const { return E.to_vector(); }
};

enum class InsertionHypothesis { Layout, SameHIntersection, SameF };

constexpr std::string_view to_string(InsertionHypothesis h) {
  switch (h) {
    case InsertionHypothesis::Layout: return "layout";
    case InsertionHypothesis::SameHIntersection: return "(i)";
    case InsertionHypothesis::SameF: return "(ii)";
  }
  return "?";
}

/// First failing hypothesis together with a message, or nullopt.
inline std::optional<std::pair<InsertionHypothesis, std::string>> insertion_failure(const PairFunction& f,
                                                                                   const Condition& s,
                                                                                   const InsertionLayout& l) {
  using H = InsertionHypothesis;
  auto fail = [](H h, std::string m) { return std::optional{std::pair{h, std::move(m)}}; };
  if (l.S.intersects(l.E) || l.S.intersects(l.F) || l.E.intersects(l.F))
    return fail(H::Layout, "S, E, F are not pairwise disjoint");
  if ((l.S | l.E | l.F) != s.domain()) return fail(H::Layout, "S | E | F differs from a^s");
  if (!l.Q.subset_of(l.S)) return fail(H::Layout, "Q is not inside S");
  if (!l.S.empty() && !l.E.empty() && l.S.max() > l.E.min()) return fail(H::Layout, "S is not below E");
  if (!l.E.empty() && !l.F.empty() && l.E.max() > l.F.min()) return fail(H::Layout, "E is not below F");
  if (!l.S.empty() && !l.F.empty() && l.S.max() > l.F.min()) return fail(H::Layout, "S is not below F");
  if (l.F.size() != 2 * l.E.size()) return fail(H::Layout, "|F| != 2|E|");
  if (l.gamma_pairs.size() != l.E.size()) return fail(H::Layout, "gamma_pairs not aligned with E");
  OrdSet seen;
  for (auto [g0, g1] : l.gamma_pairs) {
    if (g0 == g1 || !l.F.contains(g0) || !l.F.contains(g1) || seen.contains(g0) || seen.contains(g1))
      return fail(H::Layout, "gamma_pairs do not enumerate F");
    seen.insert(g0);
    seen.insert(g1);
  }

  const OrdSet cover = s.h_union(l.Q | l.E);
  const auto gamma = l.gamma();
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    const auto [g0, g1] = l.gamma_pairs[i];
    if ((s.h(g0) & s.h(g1)) != cover)
      return fail(H::SameHIntersection, "h(gamma_" + std::to_string(i) + ",0) & h(gamma_" + std::to_string(i) +
                                            ",1) != H(Q|E)");
    for (Ordinal xi : l.S)
      if (f(xi, gamma[i]) != f(xi, g0) || f(xi, gamma[i]) != f(xi, g1))
        return fail(H::SameF, "f differs at xi=" + std::to_string(xi) + ", i=" + std::to_string(i));
  }
  return std::nullopt;
}

/// r with a^r = S | E: h(gamma_i) gains C = S - H^s(Q | E) when gamma_0 is in
/// h^s(gamma_i); i^r copies i^s on [Q|E]^2 and [S]^2 and is f & a^r elsewhere.
inline Condition insertion_construction(const PairFunction& f, const Condition& s, const InsertionLayout& l) {
  if (auto bad = insertion_failure(f, s, l))
    throw Error(ErrorCode::HypothesisViolated, std::string(to_string(bad->first)) + ": " + bad->second);
  const OrdSet ar = l.S | l.E;
  const OrdSet qe = l.Q | l.E;
  const OrdSet c = l.S - s.h_union(qe);

  Condition r;
  r.set_domain(ar);
  for (Ordinal xi : ar) {
    OrdSet hx = s.h(xi);
    if (l.E.contains(xi) && hx.contains(l.E.min())) hx |= c;
    r.set_h(xi, hx);
  }
  for (Ordinal eta : ar)
    for (Ordinal xi : ar.below_of(eta)) {
      const bool inner = (qe.contains(xi) && qe.contains(eta)) || (l.S.contains(xi) && l.S.contains(eta));
      const OrdSet v = inner ? s.i(xi, eta) : f(xi, eta) & ar;
      if (!v.empty()) r.set_i(xi, eta, v);
    }
  return r;
}

}  // namespace pforce
