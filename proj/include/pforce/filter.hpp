#pragma once

// A finite stand-in for a generic filter: a descending chain of conditions
// that meets an explicit schedule of dense sets, one goal after another.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "error.hpp"
#include "ordset.hpp"
#include "poset.hpp"
#include "rng.hpp"
#include "universe.hpp"

namespace pforce {

/// D_alpha: alpha belongs to the domain.
struct PointGoal {
  Ordinal alpha;
  bool operator==(const PointGoal&) const = default;
};

/// D_{beta,b,Z}: U(beta; b) meets Z.
struct NbhdGoal {
  Ordinal beta;
  OrdSet b;
  OrdSet Z;
  bool operator==(const NbhdGoal&) const = default;
};

using Goal = std::variant<PointGoal, NbhdGoal>;

enum class GoalAction { Extended, AlreadySatisfied };

struct GoalLogEntry {
  Goal goal;
  GoalAction action;
  /// The ordinal added to the domain, for Extended entries.
  std::optional<Ordinal> inserted;
  /// Index of the first chain element that meets the goal.
  std::size_t chain_index;
};

struct FilterSample {
  std::size_t kappa = 1;
  std::vector<Condition> chain;
  std::vector<GoalLogEntry> schedule_log;

  const Condition& last() const { return chain.back(); }
};

/// How a neighbourhood goal picks the point it inserts.
enum class ChoicePolicy {
  Seeded,  // uniformly among eligible ordinals, driven by the seed
  Least,   // the least eligible ordinal
};

inline bool goal_met(const Condition& p, const Goal& goal) {
  if (const auto* pt = std::get_if<PointGoal>(&goal)) return p.domain().contains(pt->alpha);
  const auto& nb = std::get<NbhdGoal>(goal);
  if (!p.domain().contains(nb.beta) || !nb.b.subset_of(p.domain())) return false;
  return U(p, nb.beta, nb.b).intersects(nb.Z);
}

inline std::string describe(const Goal& goal) {
  if (const auto* pt = std::get_if<PointGoal>(&goal)) return "D_" + std::to_string(pt->alpha);
  const auto& nb = std::get<NbhdGoal>(goal);
  return "D_{" + std::to_string(nb.beta) + "," + nb.b.str() + "," + nb.Z.str() + "}";
}

/// Chain from the empty condition meeting every goal in order.
///
/// Point goals use extend_with_point. A neighbourhood goal (beta, b, Z) needs
/// beta and b already in the domain; when U(beta; b) misses Z it inserts some
/// alpha in Z & beta outside the domain via extend_into_neighbourhood, and
/// throws GoalUnsatisfiable when there is none.
inline FilterSample sample_filter(const PairFunction& f, std::size_t kappa, const std::vector<Goal>& goals,
                                  std::uint64_t seed, ChoicePolicy policy = ChoicePolicy::Seeded) {
  if (kappa < 1 || kappa > f.kappa())
    throw Error(ErrorCode::OutOfUniverse, "kappa=" + std::to_string(kappa) + " exceeds the pair-function");
  const Universe universe{kappa};
  FilterSample sample;
  sample.kappa = kappa;
  sample.chain.emplace_back();
  Rng rng(seed);

  for (const Goal& goal : goals) {
    const Condition& p = sample.chain.back();
    if (const auto* pt = std::get_if<PointGoal>(&goal)) {
      universe.require(OrdSet::single(pt->alpha), "point goal");
      if (p.domain().contains(pt->alpha)) {
        sample.schedule_log.push_back({goal, GoalAction::AlreadySatisfied, std::nullopt, sample.chain.size() - 1});
        continue;
      }
      sample.chain.push_back(extend_with_point(p, pt->alpha));
      sample.schedule_log.push_back({goal, GoalAction::Extended, pt->alpha, sample.chain.size() - 1});
      continue;
    }
    const auto& nb = std::get<NbhdGoal>(goal);
    universe.require(OrdSet::single(nb.beta) | nb.b | nb.Z, "neighbourhood goal");
    if (!nb.b.subset_of(OrdSet::below(nb.beta)))
      throw Error(ErrorCode::PreconditionViolated, describe(goal) + ": b is not below beta");
    if (!p.domain().contains(nb.beta) || !nb.b.subset_of(p.domain()))
      throw Error(ErrorCode::GoalUnsatisfiable, describe(goal) + ": beta or b not yet in the domain");
    if (U(p, nb.beta, nb.b).intersects(nb.Z)) {
      sample.schedule_log.push_back({goal, GoalAction::AlreadySatisfied, std::nullopt, sample.chain.size() - 1});
      continue;
    }
    const OrdSet eligible = (nb.Z - p.domain()).below_of(nb.beta);
    if (eligible.empty())
      throw Error(ErrorCode::GoalUnsatisfiable, describe(goal) + ": no fresh point of Z below beta");
    const Ordinal alpha = policy == ChoicePolicy::Least ? eligible.min() : rng.pick(eligible);
    sample.chain.push_back(extend_into_neighbourhood(p, nb.beta, nb.b, alpha));
    sample.schedule_log.push_back({goal, GoalAction::Extended, alpha, sample.chain.size() - 1});
  }
  return sample;
}

}  // namespace pforce
