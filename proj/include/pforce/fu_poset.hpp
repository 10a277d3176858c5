#pragma once

// The poset Q(A, alpha) of pairs <s, C>, s finite inside A and C finite
// inside alpha, over an assembled space; and a finite simulation of the
// sequence it adds.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "ordset.hpp"
#include "rng.hpp"
#include "space.hpp"

namespace pforce {

struct FUCondition {
  OrdSet s;
  OrdSet C;
  bool operator==(const FUCondition&) const = default;
};

class FUPoset {
 public:
  FUPoset(const SpaceModel& space, OrdSet A, Ordinal alpha) : space_(&space), A_(A), alpha_(alpha) {
    if (alpha >= space.kappa || !A.subset_of(space.carrier()))
      throw Error(ErrorCode::OutOfUniverse, "ambient (A, alpha) outside the carrier");
  }

  OrdSet A() const { return A_; }
  Ordinal alpha() const { return alpha_; }
  const SpaceModel& space() const { return *space_; }

  bool contains(const FUCondition& q) const { return q.s.subset_of(A_) && q.C.subset_of(OrdSet::below(alpha_)); }

  /// U(alpha; C)
  OrdSet nbhd(OrdSet c) const { return space_->U(alpha_, c); }

  /// q1 <= q2 iff s1 contains s2, C1 contains C2, and s1 - s2 lies in U(alpha; C2).
  bool leq(const FUCondition& q1, const FUCondition& q2) const {
    require(q1);
    require(q2);
    return q2.s.subset_of(q1.s) && q2.C.subset_of(q1.C) && (q1.s - q2.s).subset_of(nbhd(q2.C));
  }

  /// <s1 | s2, C1 | C2> when q1 and q2 are compatible.
  ///
  /// Any common lower bound r has s_r - s1 inside U(alpha; C1) and s_r - s2
  /// inside U(alpha; C2), so the candidate is itself below both exactly when
  /// a common lower bound exists; compatibility reduces to that check.
  std::optional<FUCondition> meet(const FUCondition& q1, const FUCondition& q2) const {
    require(q1);
    require(q2);
    const FUCondition m{q1.s | q2.s, q1.C | q2.C};
    if (leq(m, q1) && leq(m, q2)) return m;
    return std::nullopt;
  }

 private:
  void require(const FUCondition& q) const {
    if (!contains(q))
      throw Error(ErrorCode::AmbientMismatch, "<" + q.s.str() + "," + q.C.str() + "> is not in Q(A, alpha)");
  }

  const SpaceModel* space_;
  OrdSet A_;
  Ordinal alpha_;
};

inline bool fu_leq(const FUPoset& q, const FUCondition& q1, const FUCondition& q2) { return q.leq(q1, q2); }

inline std::optional<FUCondition> fu_meet(const FUPoset& q, const FUCondition& q1, const FUCondition& q2) {
  return q.meet(q1, q2);
}

struct FUSimulation {
  /// Points of A in acquisition order.
  std::vector<Ordinal> sequence;
  /// The descending chain, starting from <{}, {}>.
  std::vector<FUCondition> chain;
};

/// For each C of the schedule, moves to <s | {x}, C_acc | C> with x a fresh
/// point of A inside U(alpha; C_acc | C). Every point taken after C has been
/// processed therefore lies in U(alpha; C).
inline FUSimulation fu_simulate(const SpaceModel& space, OrdSet A, Ordinal alpha,
                                const std::vector<OrdSet>& c_schedule, std::uint64_t seed) {
  const FUPoset poset(space, A, alpha);
  if (!closure(space, A).contains(alpha))
    throw Error(ErrorCode::PreconditionViolated, std::to_string(alpha) + " is not in the closure of A");
  Rng rng(seed);
  FUSimulation sim;
  FUCondition q;
  sim.chain.push_back(q);
  for (OrdSet c : c_schedule) {
    const FUCondition widened{q.s, q.C | c};
    if (!poset.contains(widened))
      throw Error(ErrorCode::AmbientMismatch, "scheduled C=" + c.str() + " is not below alpha");
    const OrdSet fresh = (A - q.s) & poset.nbhd(widened.C);
    if (fresh.empty())
      throw Error(ErrorCode::StuckNoFreshPoint, "U(alpha;" + widened.C.str() + ") & A exhausted at C=" + c.str());
    const Ordinal x = rng.pick(fresh);
    q = {q.s | OrdSet::single(x), widened.C};
    sim.sequence.push_back(x);
    sim.chain.push_back(q);
  }
  return sim;
}

}  // namespace pforce
