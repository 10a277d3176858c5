#pragma once

// The space assembled from a filter sample: the family H(alpha), the final
// i-map, the topology generated by the H(alpha) and their complements, and
// the structural checks run against it.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "filter.hpp"
#include "ordset.hpp"
#include "poset.hpp"

namespace pforce {

struct SpaceModel {
  std::size_t kappa = 1;
  /// H[alpha] for alpha < kappa.
  std::vector<OrdSet> H;
  /// Final i-map; pairs outside the sampled domain read as empty.
  Condition i_final;

  OrdSet carrier() const { return OrdSet::below(static_cast<Ordinal>(kappa)); }
  OrdSet i(Ordinal a, Ordinal b) const { return i_final.i(a, b); }
  OrdSet H_union(OrdSet b) const {
    OrdSet out;
    for (Ordinal nu : b) out |= H[nu];
    return out;
  }
  /// U(alpha; b) = H(alpha) minus the union of H(beta), beta in b.
  OrdSet U(Ordinal alpha, OrdSet b) const { return H[alpha] - H_union(b); }

  /// Compares H and i pair by pair; the domain recorded in i_final is ignored.
  bool operator==(const SpaceModel& o) const {
    if (kappa != o.kappa || H != o.H) return false;
    for (Ordinal b = 0; b < kappa; ++b)
      for (Ordinal a = 0; a < b; ++a)
        if (i(a, b) != o.i(a, b)) return false;
    return true;
  }
};

/// Singleton family H(alpha) = {alpha} with empty i.
inline SpaceModel discrete_space(std::size_t kappa) {
  SpaceModel s;
  s.kappa = make_universe(kappa).kappa;
  for (Ordinal x = 0; x < kappa; ++x) s.H.push_back(OrdSet::single(x));
  return s;
}

/// H(alpha) is the union of h^p(alpha) along the chain; ordinals never added
/// to a condition keep H(alpha) = {alpha}. i comes from the last condition.
inline SpaceModel assemble_space(const FilterSample& sample) {
  if (sample.chain.empty()) throw Error(ErrorCode::PreconditionViolated, "empty chain");
  SpaceModel s = discrete_space(sample.kappa);
  for (const Condition& p : sample.chain)
    for (Ordinal alpha : p.domain()) {
      if (alpha >= s.kappa) throw Error(ErrorCode::OutOfUniverse, "chain leaves the carrier");
      s.H[alpha] |= p.h(alpha);
    }
  const Condition& last = sample.chain.back();
  s.i_final.set_domain(last.domain());
  for (Ordinal eta : last.domain())
    for (Ordinal xi : last.domain().below_of(eta))
      if (!last.i(xi, eta).empty()) s.i_final.set_i(xi, eta, last.i(xi, eta));
  return s;
}

struct PairCounterexample {
  Ordinal alpha;
  Ordinal beta;
  std::string detail;
};

struct CheckResult {
  bool ok = true;
  std::vector<PairCounterexample> counterexamples;
};

/// max H(alpha) = alpha for every alpha.
inline CheckResult check_right_separated(const SpaceModel& s) {
  CheckResult r;
  for (Ordinal a = 0; a < s.kappa; ++a)
    if (s.H[a].empty() || s.H[a].max() != a) {
      r.ok = false;
      r.counterexamples.push_back({a, a, "max H(alpha) != alpha"});
    }
  return r;
}

/// H(alpha) * H(beta) inside the union of H over i{alpha,beta}, for all pairs.
inline CheckResult check_star_containment(const SpaceModel& s) {
  CheckResult r;
  for (Ordinal b = 0; b < s.kappa; ++b)
    for (Ordinal a = 0; a < b; ++a) {
      const OrdSet ha = s.H[a];
      const OrdSet hb = s.H[b];
      if (ha.empty() || hb.empty() || ha.max() == hb.max()) {
        r.ok = false;
        r.counterexamples.push_back({a, b, "star undefined"});
        continue;
      }
      const OrdSet st = star(ha, hb);
      if (!st.subset_of(s.H_union(s.i(a, b)))) {
        r.ok = false;
        r.counterexamples.push_back({a, b, "H*H=" + st.str() + " not covered"});
      }
    }
  return r;
}

/// For beta < alpha: beta in H(alpha) gives H(beta) - H(alpha) covered by
/// H[i{alpha,beta}]; beta not in H(alpha) gives H(beta) & H(alpha) covered.
inline bool check_loc_comp_hypothesis(const SpaceModel& s) {
  for (Ordinal alpha = 0; alpha < s.kappa; ++alpha)
    for (Ordinal beta = 0; beta < alpha; ++beta) {
      const OrdSet cover = s.H_union(s.i(alpha, beta));
      const OrdSet part = s.H[alpha].contains(beta) ? s.H[beta] - s.H[alpha] : s.H[beta] & s.H[alpha];
      if (!part.subset_of(cover)) return false;
    }
  return true;
}

struct CompactnessReport {
  bool ok = true;
  /// (alpha, gamma) where the covering step of the argument breaks.
  std::optional<std::pair<Ordinal, Ordinal>> failure;
};

/// Runs the inductive covering argument for H(alpha): for each subbase set K
/// (some H(gamma) or its complement) containing alpha, H(alpha) - K must be
/// covered by H[i{alpha,gamma}] with every set used already compact; the
/// complement case with gamma < alpha instead uses compactness of H(gamma).
inline CompactnessReport compactness_by_subbase(const SpaceModel& s, Ordinal alpha) {
  if (alpha >= s.kappa) throw Error(ErrorCode::OutOfUniverse, "alpha=" + std::to_string(alpha));
  std::vector<std::optional<CompactnessReport>> memo(s.kappa);
  auto solve = [&](auto&& self, Ordinal x) -> CompactnessReport {
    if (memo[x]) return *memo[x];
    CompactnessReport rep;
    auto compact_all = [&](OrdSet used) {
      for (Ordinal beta : used) {
        if (beta >= x) return false;
        if (!self(self, beta).ok) return false;
      }
      return true;
    };
    for (Ordinal gamma = 0; gamma < s.kappa && rep.ok; ++gamma) {
      if (gamma == x) continue;
      const bool in_h = s.H[gamma].contains(x);
      if (in_h) {
        // K = H(gamma), gamma > x for right-separated families.
        const OrdSet used = s.i(x, gamma);
        if (gamma < x || !(s.H[x] - s.H[gamma]).subset_of(s.H_union(used)) || !compact_all(used))
          rep = {false, std::pair{x, gamma}};
      } else if (gamma > x) {
        // K = complement of H(gamma).
        const OrdSet used = s.i(x, gamma);
        if (!(s.H[x] & s.H[gamma]).subset_of(s.H_union(used)) || !compact_all(used))
          rep = {false, std::pair{x, gamma}};
      } else if (!self(self, gamma).ok) {
        rep = {false, std::pair{x, gamma}};
      }
    }
    memo[x] = rep;
    return rep;
  };
  return solve(solve, alpha);
}

/// beta in H(alpha) implies H(beta) inside H(alpha).
inline bool is_coherent(const SpaceModel& s) {
  for (Ordinal alpha = 0; alpha < s.kappa; ++alpha)
    for (Ordinal beta : s.H[alpha])
      if (!s.H[beta].subset_of(s.H[alpha])) return false;
  return true;
}

/// Intersection of all subbase sets containing x.
inline OrdSet minimal_neighbourhood(const SpaceModel& s, Ordinal x) {
  OrdSet n = s.carrier();
  for (Ordinal g = 0; g < s.kappa; ++g) n &= s.H[g].contains(x) ? s.H[g] : s.carrier() - s.H[g];
  return n;
}

inline std::vector<OrdSet> minimal_neighbourhoods(const SpaceModel& s) {
  std::vector<OrdSet> out;
  for (Ordinal x = 0; x < s.kappa; ++x) out.push_back(minimal_neighbourhood(s, x));
  return out;
}

/// Closure of Y in the topology generated by the H(gamma) and their complements.
inline OrdSet closure(const SpaceModel& s, OrdSet y) {
  if (!y.subset_of(s.carrier())) throw Error(ErrorCode::OutOfUniverse, "Y=" + y.str());
  OrdSet out;
  for (Ordinal x = 0; x < s.kappa; ++x)
    if (minimal_neighbourhood(s, x).intersects(y)) out.insert(x);
  return out;
}

/// Every cut leaves the closures of the head and of the tail disjoint.
inline bool is_free_sequence(const SpaceModel& s, const std::vector<Ordinal>& seq) {
  OrdSet seen;
  for (Ordinal x : seq) {
    if (x >= s.kappa) throw Error(ErrorCode::OutOfUniverse, "point " + std::to_string(x));
    if (seen.contains(x)) throw Error(ErrorCode::DuplicatePoints, "point " + std::to_string(x) + " repeats");
    seen.insert(x);
  }
  for (std::size_t k = 1; k < seq.size(); ++k) {
    OrdSet head, tail;
    for (std::size_t j = 0; j < seq.size(); ++j) (j < k ? head : tail).insert(seq[j]);
    if (closure(s, head).intersects(closure(s, tail))) return false;
  }
  return true;
}

struct CantorBendixson {
  /// rank[x], or nullopt for points of the perfect kernel.
  std::vector<std::optional<std::size_t>> rank;
  /// Points never isolated; empty for scattered spaces.
  OrdSet kernel;

  std::size_t height() const {
    std::size_t h = 0;
    for (const auto& r : rank)
      if (r) h = std::max(h, *r + 1);
    return h;
  }
  OrdSet level(std::size_t r) const {
    OrdSet out;
    for (Ordinal x = 0; x < rank.size(); ++x)
      if (rank[x] == r) out.insert(x);
    return out;
  }
};

/// Ranks by iterated removal of isolated points.
inline CantorBendixson cantor_bendixson(const SpaceModel& s) {
  const auto nbhd = minimal_neighbourhoods(s);
  CantorBendixson cb;
  cb.rank.assign(s.kappa, std::nullopt);
  OrdSet left = s.carrier();
  for (std::size_t stage = 0; !left.empty(); ++stage) {
    OrdSet isolated;
    for (Ordinal x : left)
      if ((nbhd[x] & left) == OrdSet::single(x)) isolated.insert(x);
    if (isolated.empty()) break;
    for (Ordinal x : isolated) cb.rank[x] = stage;
    left -= isolated;
  }
  cb.kernel = left;
  return cb;
}

/// Number of points per rank, kernel excluded.
inline std::map<std::size_t, std::size_t> rank_histogram(const CantorBendixson& cb) {
  std::map<std::size_t, std::size_t> hist;
  for (const auto& r : cb.rank)
    if (r) ++hist[*r];
  return hist;
}

/// For every scheduled D_{beta,b,Z}, the neighbourhood U(beta; b) of the
/// assembled space meets Z. Returns the goals that fail.
inline std::vector<NbhdGoal> unmet_neighbourhood_goals(const SpaceModel& s, const std::vector<Goal>& goals) {
  std::vector<NbhdGoal> bad;
  for (const Goal& g : goals)
    if (const auto* nb = std::get_if<NbhdGoal>(&g))
      if (!s.U(nb->beta, nb->b).intersects(nb->Z)) bad.push_back(*nb);
  return bad;
}

}  // namespace pforce
