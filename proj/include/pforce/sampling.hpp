#pragma once

// Random generators for property testing: valid conditions on a prescribed
// domain, good-twin pairs, instances of the insertion construction, and
// goal schedules for the filter sampler. All draws come from an explicit Rng.

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "amalgam.hpp"
#include "filter.hpp"
#include "ordset.hpp"
#include "poset.hpp"
#include "rng.hpp"
#include "universe.hpp"

namespace pforce {

/// k distinct ordinals below n, uniformly; k <= n.
inline OrdSet random_k_subset(Rng& rng, Ordinal n, std::size_t k) {
  OrdSet out;
  while (out.size() < k) out.insert(static_cast<Ordinal>(rng.below(n)));
  return out;
}

inline std::vector<Ordinal> shuffled(Rng& rng, OrdSet s) {
  std::vector<Ordinal> v = s.to_vector();
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
  return v;
}

struct ConditionShape {
  /// Pairs of this set only receive i-values inside it (needed for the common
  /// part of twins).
  OrdSet closed_part;
  /// Chance that a pair's i-value is enlarged after construction.
  double enlarge_i = 0.3;
};

namespace detail {

/// Largest admissible i-value for the pair {xi, eta} of a condition on a.
inline OrdSet i_range(const PairFunction& f, OrdSet a, Ordinal xi, Ordinal eta, OrdSet closed) {
  OrdSet r = f(xi, eta) & a;
  if (closed.contains(xi) && closed.contains(eta)) r &= closed;
  return r;
}

/// Tries to add alpha with h(alpha) = {alpha} | extra and the widest
/// admissible i-values on the new pairs.
inline std::optional<Condition> add_with_h(const PairFunction& f, const Condition& p, Ordinal alpha, OrdSet extra,
                                           OrdSet closed) {
  Condition q = p;
  const OrdSet a = p.domain() | OrdSet::single(alpha);
  q.set_domain(a);
  q.set_h(alpha, extra | OrdSet::single(alpha));
  for (Ordinal nu : p.domain()) {
    const OrdSet v = i_range(f, a, nu, alpha, closed);
    if (!v.empty()) q.set_i(nu, alpha, v);
  }
  if (!is_valid(f, q)) return std::nullopt;
  return q;
}

}  // namespace detail

/// A valid condition with exactly the given domain, grown one point at a time
/// by a random mix of isolated points, neighbourhood insertions and points
/// with a random h-value.
inline Condition random_condition_on(const PairFunction& f, OrdSet domain, Rng& rng,
                                     const ConditionShape& shape = {}) {
  f.universe().require(domain, "domain");
  Condition p;
  for (Ordinal alpha : shuffled(rng, domain)) {
    const OrdSet a = p.domain();
    const OrdSet above = a - OrdSet::below(alpha + 1);
    const auto move = rng.below(3);
    if (move == 1 && !above.empty()) {
      const Ordinal beta = rng.pick(above);
      p = extend_into_neighbourhood(p, beta, rng.subset(a.below_of(beta), 0.3), alpha);
      continue;
    }
    if (move == 2 && !a.below_of(alpha).empty()) {
      if (auto q = detail::add_with_h(f, p, alpha, rng.subset(a.below_of(alpha)), shape.closed_part)) {
        p = std::move(*q);
        continue;
      }
    }
    p = extend_with_point(p, alpha);
  }
  const OrdSet a = p.domain();
  for (Ordinal eta : a)
    for (Ordinal xi : a.below_of(eta))
      if (rng.chance(shape.enlarge_i))
        p.set_i(xi, eta, p.i(xi, eta) | rng.subset(detail::i_range(f, a, xi, eta, shape.closed_part)));
  return p;
}

/// Calls fn on every candidate condition with domain a: h(xi) = {xi} | X for
/// X inside a & xi, and i{xi,eta} any subset of f{xi,eta} & a. Validity is
/// not checked; the candidate is reused between calls.
template <class Fn>
void for_each_candidate_on(const PairFunction& f, OrdSet a, Fn&& fn) {
  const auto points = a.to_vector();
  std::vector<std::pair<Ordinal, Ordinal>> pairs;
  for (std::size_t m = 0; m < points.size(); ++m)
    for (std::size_t k = 0; k < m; ++k) pairs.emplace_back(points[k], points[m]);
  Condition c;
  c.set_domain(a);
  auto fill_i = [&](auto&& self, std::size_t k) -> void {
    if (k == pairs.size()) {
      fn(static_cast<const Condition&>(c));
      return;
    }
    const auto [xi, eta] = pairs[k];
    for_each_subset(f(xi, eta) & a, [&](OrdSet v) {
      c.set_i(xi, eta, v);
      self(self, k + 1);
    });
    c.set_i(xi, eta, {});
  };
  auto fill_h = [&](auto&& self, std::size_t k) -> void {
    if (k == points.size()) {
      fill_i(fill_i, 0);
      return;
    }
    const Ordinal xi = points[k];
    for_each_subset(a.below_of(xi), [&](OrdSet x) {
      c.set_h(xi, x | OrdSet::single(xi));
      self(self, k + 1);
    });
  };
  fill_h(fill_h, 0);
}

/// Every valid condition whose domain lies inside `within`, grouped by domain
/// in ascending mask order.
inline std::vector<Condition> enumerate_valid_conditions(const PairFunction& f, OrdSet within) {
  f.universe().require(within, "enumeration range");
  std::vector<OrdSet> domains;
  for_each_subset(within, [&](OrdSet a) { domains.push_back(a); });
  std::sort(domains.begin(), domains.end());
  std::vector<Condition> out;
  for (OrdSet a : domains)
    for_each_candidate_on(f, a, [&](const Condition& c) {
      if (is_valid(f, c)) out.push_back(c);
    });
  return out;
}

/// Image of p under the order-preserving map e.
inline Condition relabel(const Condition& p, const TwinWitness& e) {
  Condition q;
  q.set_domain(e.image(p.domain()));
  for (Ordinal xi : p.domain()) q.set_h(e(xi), e.image(p.h(xi)));
  for (Ordinal eta : p.domain())
    for (Ordinal xi : p.domain().below_of(eta))
      if (!p.i(xi, eta).empty()) q.set_i(e(xi), e(eta), e.image(p.i(xi, eta)));
  return q;
}

struct TwinSample {
  PairFunction f;
  Condition p;
  Condition p_prime;
};

/// Good twins: a base condition on a, its relabelling onto a' fixing a & a',
/// and f enlarged just enough for p' to be valid and for a, a' to be good.
inline TwinSample sample_good_twins(Rng& rng, std::size_t max_kappa = 24, std::size_t max_size = 6) {
  const std::size_t n = rng.between(1, max_size);
  const std::size_t common = rng.chance(0.1) ? n : rng.between(0, n);
  const std::size_t merged = 2 * n - common;
  const std::size_t kappa = rng.between(std::max<std::size_t>(merged, 2), std::max(merged, max_kappa));

  // Labels along the merged order: 0 common, 1 only in a, 2 only in a'.
  std::vector<bool> is_common(n, false);
  for (Ordinal pos : random_k_subset(rng, static_cast<Ordinal>(n), common)) is_common[pos] = true;
  std::vector<int> labels;
  std::size_t pending = 0;
  auto flush = [&] {
    std::size_t xs = pending, ys = pending;
    while (xs + ys > 0) {
      if (ys == 0 || (xs > 0 && rng.chance(0.5))) {
        labels.push_back(1);
        --xs;
      } else {
        labels.push_back(2);
        --ys;
      }
    }
    pending = 0;
  };
  for (std::size_t pos = 0; pos < n; ++pos) {
    if (is_common[pos]) {
      flush();
      labels.push_back(0);
    } else {
      ++pending;
    }
  }
  flush();

  const OrdSet points = random_k_subset(rng, static_cast<Ordinal>(kappa), merged);
  OrdSet a, a2, shared;
  std::size_t k = 0;
  for (Ordinal x : points) {
    const int label = labels[k++];
    if (label != 2) a.insert(x);
    if (label != 1) a2.insert(x);
    if (label == 0) shared.insert(x);
  }
  TwinWitness e;
  e.common = shared;
  auto it = a2.begin();
  for (Ordinal x : a) e.e.emplace_back(x, *it++);

  TwinSample t{random_pair_function(kappa, rng.unit() * 0.6, rng.next()), {}, {}};
  t.p = random_condition_on(t.f, a, rng, {shared, 0.3});
  t.p_prime = relabel(t.p, e);
  for (Ordinal eta : a)
    for (Ordinal xi : a.below_of(eta)) t.f.enlarge(e(xi), e(eta), e.image(t.p.i(xi, eta)));
  for (Ordinal alpha : shared)
    for (Ordinal beta : a - a2)
      for (Ordinal gamma : a2 - a) {
        if (alpha < beta && alpha < gamma) t.f.enlarge(beta, gamma, OrdSet::single(alpha));
        if (alpha < beta) t.f.enlarge(beta, gamma, t.f(alpha, gamma));
        if (alpha < gamma) t.f.enlarge(beta, gamma, t.f(alpha, beta));
      }
  return t;
}

struct InsertionSample {
  PairFunction f;
  Condition s;
  InsertionLayout layout;
};

/// A condition s on S | E | F with |E| = k satisfying both hypotheses of the
/// insertion construction. F-points get h = {gamma} | H(Q | E); f and i on
/// pairs meeting F are set to cover exactly what clause (iv) requires, with f
/// copied from gamma_i to gamma_{i,0}, gamma_{i,1} on S.
inline InsertionSample sample_insertion(Rng& rng, std::size_t k, std::size_t max_kappa = 24) {
  const std::size_t m = rng.between(1, 6);
  const std::size_t total = m + 3 * k;
  const std::size_t kappa = rng.between(total, std::max(total, max_kappa));
  const auto pts = random_k_subset(rng, static_cast<Ordinal>(kappa), total).to_vector();

  InsertionSample out{random_pair_function(kappa, rng.unit() * 0.5, rng.next()), {}, {}};
  InsertionLayout& l = out.layout;
  for (std::size_t j = 0; j < total; ++j) (j < m ? l.S : j < m + k ? l.E : l.F).insert(pts[j]);
  l.Q = rng.subset(l.S, 0.3);
  const auto f_order = shuffled(rng, l.F);
  for (std::size_t i = 0; i < k; ++i) l.gamma_pairs.emplace_back(f_order[2 * i], f_order[2 * i + 1]);

  Condition t = random_condition_on(out.f, l.S | l.E, rng, {{}, 0.2});
  const OrdSet qe = l.Q | l.E;
  const OrdSet cover = t.h_union(qe);
  const OrdSet top = l.S | l.E;
  Condition& s = out.s;
  s = t;
  s.set_domain(top | l.F);
  for (Ordinal g : l.F) s.set_h(g, cover | OrdSet::single(g));

  const auto gamma = l.gamma();
  for (std::size_t i = 0; i < k; ++i) {
    const auto [g0, g1] = l.gamma_pairs[i];
    for (Ordinal xi : l.S) {
      const OrdSet need = star(s.h(xi), s.h(g0));
      out.f.enlarge(xi, gamma[i], need);
      out.f.set(xi, g0, out.f(xi, gamma[i]));
      out.f.set(xi, g1, out.f(xi, gamma[i]));
      const OrdSet extra = rng.subset(out.f(xi, gamma[i]) & s.domain(), 0.3);
      for (Ordinal g : {g0, g1})
        if (!(need | extra).empty()) s.set_i(xi, g, need | extra);
    }
  }
  for (Ordinal xi : l.E)
    for (Ordinal g : l.F) {
      const OrdSet need = star(s.h(xi), s.h(g));
      out.f.enlarge(xi, g, need);
      if (!need.empty()) s.set_i(xi, g, need);
    }
  for (Ordinal g : l.F)
    for (Ordinal g2 : l.F.below_of(g)) {
      out.f.enlarge(g2, g, qe);
      if (!qe.empty()) s.set_i(g2, g, qe);
    }
  return out;
}

struct ScheduleOptions {
  std::size_t neighbourhood_goals = 10;
  /// Chance that a neighbourhood goal reuses the first Z, when still safe.
  double fixed_z_share = 0.5;
};

/// Every point of the carrier as a point goal, in random order, interleaved
/// with neighbourhood goals that stay satisfiable whatever points earlier
/// goals insert. Z & beta keeps a point outside the issued point goals and
/// outside every Z & beta' used before, or else more points outside the
/// issued goals than there are earlier neighbourhood goals. Goals still owed
/// after the last point goal put beta in Z. Exactly
/// `opt.neighbourhood_goals` neighbourhood goals are issued.
inline std::vector<Goal> random_schedule(Rng& rng, std::size_t kappa, const ScheduleOptions& opt = {}) {
  const OrdSet carrier = OrdSet::below(static_cast<Ordinal>(kappa));
  const auto order = shuffled(rng, carrier);
  std::vector<Goal> goals;
  OrdSet issued;    // named by point goals so far; always in the domain
  OrdSet possible;  // points earlier neighbourhood goals may have inserted
  std::optional<OrdSet> fixed_z;
  std::size_t placed = 0;
  std::size_t next_point = 0;
  auto safe = [&](Ordinal beta, OrdSet z) {
    const OrdSet open = z.below_of(beta) - issued;
    return !(open - possible).empty() || open.size() > placed;
  };
  while (next_point < order.size() || placed < opt.neighbourhood_goals) {
    const bool points_left = next_point < order.size();
    if (placed < opt.neighbourhood_goals && (!points_left || rng.chance(0.4))) {
      std::vector<Ordinal> betas;
      for (Ordinal beta : issued)
        if (!(OrdSet::below(beta) - issued - possible).empty() || (fixed_z && safe(beta, *fixed_z)))
          betas.push_back(beta);
      if (!betas.empty()) {
        const Ordinal beta = betas[rng.below(betas.size())];
        OrdSet z;
        if (fixed_z && fixed_z->max() < beta && safe(beta, *fixed_z) && rng.chance(opt.fixed_z_share)) {
          z = *fixed_z;
        } else {
          const OrdSet fresh = OrdSet::below(beta) - issued - possible;
          if (fresh.empty()) {
            z = *fixed_z;
          } else {
            z = OrdSet::single(rng.pick(fresh)) | rng.subset(carrier, 0.15);
            if (!fixed_z) fixed_z = z.below_of(beta);
          }
        }
        goals.emplace_back(NbhdGoal{beta, rng.subset(issued.below_of(beta), 0.3), z});
        possible |= z.below_of(beta);
        ++placed;
        continue;
      }
      if (!points_left) {
        // Every point is named, so only a Z holding beta stays satisfiable: beta is always in U(beta; b).
        const Ordinal beta = rng.pick(issued);
        goals.emplace_back(NbhdGoal{beta, rng.subset(issued.below_of(beta), 0.3),
                                    OrdSet::single(beta) | rng.subset(carrier, 0.15)});
        ++placed;
        continue;
      }
    }
    const Ordinal x = order[next_point++];
    goals.emplace_back(PointGoal{x});
    issued.insert(x);
  }
  return goals;
}

}  // namespace pforce
