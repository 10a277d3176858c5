#pragma once

// Named property suites over the library. A suite runs independent trials,
// each drawing from its own stream Rng::for_trial(seed, index); results are
// merged in trial order, so any --jobs value gives the same report.

#include <algorithm>
#include <atomic>
#include <bitset>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "amalgam.hpp"
#include "error.hpp"
#include "filter.hpp"
#include "fu_poset.hpp"
#include "ordset.hpp"
#include "poset.hpp"
#include "rng.hpp"
#include "sampling.hpp"
#include "serialize.hpp"
#include "space.hpp"
#include "universe.hpp"

namespace pforce {

struct PropertyTally {
  std::string name;
  std::size_t pass = 0;
  std::size_t fail = 0;
};

struct Witness {
  std::size_t trial;
  std::string property;
  Json payload;
};

/// Per-trial recorder. Keeps at most one witness per property.
class TrialLog {
 public:
  explicit TrialLog(std::size_t trial) : trial_(trial) {}

  /// `witness` is any callable returning Json; it runs only on the first failure.
  template <class W = std::nullptr_t>
  bool check(std::string_view property, bool ok, W&& witness = nullptr) {
    PropertyTally& t = tally(property);
    if (ok) {
      ++t.pass;
      return true;
    }
    if (t.fail++ == 0) {
      Json payload = Json::object();
      if constexpr (std::is_invocable_v<W&>) payload = witness();
      witnesses_.push_back({trial_, std::string(property), std::move(payload)});
    }
    return false;
  }

  void observe(std::string_view name, std::size_t n = 1) {
    for (auto& [k, v] : observations_)
      if (k == name) {
        v += n;
        return;
      }
    observations_.emplace_back(std::string(name), n);
  }

  std::size_t trial() const { return trial_; }
  const std::vector<PropertyTally>& tallies() const { return tallies_; }
  const std::vector<Witness>& witnesses() const { return witnesses_; }
  const std::vector<std::pair<std::string, std::size_t>>& observations() const { return observations_; }

 private:
  PropertyTally& tally(std::string_view property) {
    for (auto& t : tallies_)
      if (t.name == property) return t;
    tallies_.push_back({std::string(property), 0, 0});
    return tallies_.back();
  }

  std::size_t trial_;
  std::vector<PropertyTally> tallies_;
  std::vector<Witness> witnesses_;
  std::vector<std::pair<std::string, std::size_t>> observations_;
};

using Amalgamator = std::function<Condition(const PairFunction&, const Condition&, const Condition&)>;

struct SuiteOptions {
  /// 0 selects the suite default.
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  /// Replaces the random pair-function in suites that draw one freely.
  std::optional<PairFunction> f;
  /// Witnesses kept per property across the whole run.
  std::size_t witness_limit = 3;
  /// The map under test in twins-amalgam.
  Amalgamator amalgamator = [](const PairFunction& f, const Condition& p, const Condition& q) {
    return amalgamate(f, p, q);
  };
};

struct SuiteResult {
  std::string suite;
  std::size_t trials = 0;
  std::vector<PropertyTally> tallies;
  std::vector<Witness> witnesses;
  std::vector<std::pair<std::string, std::size_t>> observations;

  std::size_t failures() const {
    std::size_t n = 0;
    for (const auto& t : tallies) n += t.fail;
    return n;
  }
  bool ok() const { return failures() == 0; }
  const PropertyTally* find(std::string_view name) const {
    for (const auto& t : tallies)
      if (t.name == name) return &t;
    return nullptr;
  }
};

namespace props {

inline Json trial_ref(const SuiteOptions& o, std::size_t index) {
  Json j;
  j["seed"] = o.seed;
  j["trial"] = index;
  return j;
}

// ---- star-laws --------------------------------------------------------------

/// The three-case definition evaluated bit by bit, without OrdSet algebra.
inline std::uint64_t star_reference(std::uint64_t x, std::uint64_t y) {
  int mx = -1, my = -1;
  for (int e = 0; e < 64; ++e) {
    if ((x >> e) & 1U) mx = e;
    if ((y >> e) & 1U) my = e;
  }
  std::uint64_t out = 0;
  for (int e = 0; e < 64; ++e) {
    const bool in_x = (x >> e) & 1U;
    const bool in_y = (y >> e) & 1U;
    bool keep;
    if ((y >> mx) & 1U)
      keep = in_x && !in_y;
    else if ((x >> my) & 1U)
      keep = in_y && !in_x;
    else
      keep = in_x && in_y;
    if (keep) out |= std::uint64_t{1} << e;
  }
  return out;
}

inline void star_laws(std::size_t, Rng&, const SuiteOptions&, TrialLog& log) {
  const OrdSet range = OrdSet::below(6);
  for_each_subset(range, [&](OrdSet x) {
    for_each_subset(range, [&](OrdSet y) {
      auto w = [&] {
        Json j;
        j["x"] = to_json(x);
        j["y"] = to_json(y);
        return j;
      };
      auto throws = [&](ErrorCode code) {
        try {
          (void)star(x, y);
        } catch (const Error& e) {
          return e.code() == code;
        }
        return false;
      };
      if (x.empty() || y.empty()) {
        log.check("empty operand errors", throws(ErrorCode::EmptyOperand), w);
      } else if (x.max() == y.max()) {
        log.check("equal sup errors", throws(ErrorCode::EqualSup), w);
      } else {
        const OrdSet got = star(x, y);
        log.check("matches three-case definition", got.bits() == star_reference(x.bits(), y.bits()), w);
        log.check("max of star below both sups", got.empty() || got.max() < std::max(x.max(), y.max()), w);
      }
    });
  });
}

// ---- poset-laws -------------------------------------------------------------

namespace detail {

using Key = std::vector<std::uint64_t>;

inline Key key_of(const Condition& p) {
  Key k{p.domain().bits()};
  for (Ordinal xi : p.domain()) k.push_back(p.h(xi).bits());
  for (Ordinal eta : p.domain())
    for (Ordinal xi : p.domain().below_of(eta)) k.push_back(p.i(xi, eta).bits());
  return k;
}

/// The unique q with a^q = b that could lie above p.
inline Condition cut_down(const Condition& p, OrdSet b) {
  Condition q;
  q.set_domain(b);
  for (Ordinal xi : b) q.set_h(xi, p.h(xi) & b);
  for (Ordinal eta : b)
    for (Ordinal xi : b.below_of(eta))
      if (!p.i(xi, eta).empty()) q.set_i(xi, eta, p.i(xi, eta));
  return q;
}

}  // namespace detail

inline void poset_laws(std::size_t index, Rng& rng, const SuiteOptions& o, TrialLog& log) {
  const PairFunction f = o.f ? *o.f : random_pair_function(5, rng.unit() * 0.6, rng.next());
  const OrdSet within = OrdSet::below(static_cast<Ordinal>(std::min<std::size_t>(5, f.kappa())));
  const std::vector<Condition> all = enumerate_valid_conditions(f, within);
  log.observe("valid conditions enumerated", all.size());

  std::map<detail::Key, std::size_t> where;
  for (std::size_t n = 0; n < all.size(); ++n) where.emplace(detail::key_of(all[n]), n);

  auto w1 = [&](const Condition& p) {
    return [&] {
      Json j = trial_ref(o, index);
      j["f"] = to_json(f);
      j["p"] = to_json(p);
      return j;
    };
  };

  // up[n]: indices of all q >= all[n], found structurally.
  std::vector<std::vector<std::size_t>> up(all.size());
  for (std::size_t n = 0; n < all.size(); ++n) {
    const Condition& p = all[n];
    log.check("leq reflexive", leq(p, p), w1(p));
    for_each_subset(p.domain(), [&](OrdSet b) {
      const Condition q = detail::cut_down(p, b);
      const RestrictedCondition r = restrict(p, b);
      bool i_inside = true;
      for (Ordinal eta : b)
        for (Ordinal xi : b.below_of(eta))
          if (!p.i(xi, eta).subset_of(b)) i_inside = false;
      log.check("restrict flag agrees with i inside b", r.is_condition == i_inside, w1(p));
      log.check("restrict flag agrees with validity", r.is_condition == is_valid(f, q), w1(p));
      const auto it = where.find(detail::key_of(q));
      log.check("restriction is a condition iff enumerated", r.is_condition == (it != where.end()), w1(p));
      if (it != where.end()) {
        up[n].push_back(it->second);
        log.check("leq holds for restrictions", leq(p, q), w1(p));
      }
    });
    for (Ordinal beta = 0; beta <= within.max() + 1; ++beta)
      log.check("initial-segment restriction is a condition", restrict(p, p.domain().below_of(beta)).is_condition,
                w1(p));
  }

  // leq against the structural up-sets on random pairs, including non-comparable ones.
  for (std::size_t k = 0; k < std::min<std::size_t>(4000, all.size() * 4); ++k) {
    const std::size_t n = rng.below(all.size());
    const std::size_t m = rng.below(all.size());
    const bool above = std::find(up[n].begin(), up[n].end(), m) != up[n].end();
    log.check("leq matches structural order", leq(all[n], all[m]) == above, w1(all[n]));
  }

  for (std::size_t n = 0; n < all.size(); ++n)
    for (std::size_t m : up[n]) {
      if (m != n && std::find(up[m].begin(), up[m].end(), n) != up[m].end())
        log.check("leq antisymmetric", all[n] == all[m], w1(all[n]));
      for (std::size_t r : up[m]) log.check("leq transitive", leq(all[n], all[r]), w1(all[n]));
    }

  // precedes on fixed domains: reflexive everywhere, transitive on sampled triples.
  std::map<std::uint64_t, std::vector<std::size_t>> by_domain;
  for (std::size_t n = 0; n < all.size(); ++n) by_domain[all[n].domain().bits()].push_back(n);
  for (const auto& p : all) log.check("precedes reflexive", precedes(p, p), w1(p));
  for (const auto& [mask, group] : by_domain) {
    (void)mask;
    for (std::size_t k = 0; k < std::min<std::size_t>(200, group.size()); ++k) {
      const auto& p = all[group[rng.below(group.size())]];
      const auto& q = all[group[rng.below(group.size())]];
      const auto& r = all[group[rng.below(group.size())]];
      if (precedes(p, q) && precedes(q, r)) log.check("precedes transitive", precedes(p, r), w1(p));
    }
  }
}

// ---- extension --------------------------------------------------------------

inline void extension(std::size_t index, Rng& rng, const SuiteOptions& o, TrialLog& log) {
  const std::size_t kappa = o.f ? std::min<std::size_t>(o.f->kappa(), 24) : rng.between(2, 24);
  const PairFunction f = o.f ? *o.f : random_pair_function(kappa, rng.unit() * 0.6, rng.next());
  const OrdSet carrier = OrdSet::below(static_cast<Ordinal>(kappa));

  // A domain with a gap below one of its points, so both moves apply.
  OrdSet a;
  for (int tries = 0; tries < 64; ++tries) {
    a = random_k_subset(rng, static_cast<Ordinal>(kappa), rng.between(1, std::min<std::size_t>(6, kappa - 1)));
    if (a != OrdSet::below(static_cast<Ordinal>(a.size()))) break;
  }
  const Condition p = random_condition_on(f, a, rng);
  auto w = [&](const Condition& q, const Json& extra) {
    return [&] {
      Json j = trial_ref(o, index);
      j["f"] = to_json(f);
      j["p"] = to_json(p);
      j["q"] = to_json(q);
      j["move"] = extra;
      return j;
    };
  };
  log.check("input is valid", is_valid(f, p), w(p, Json::object()));

  const Ordinal fresh = rng.pick(carrier - a);
  const Condition q1 = extend_with_point(p, fresh);
  Json m1;
  m1["extend_with_point"] = fresh;
  log.check("extend_with_point valid", is_valid(f, q1), w(q1, m1));
  log.check("extend_with_point leq input", leq(q1, p), w(q1, m1));
  log.check("extend_with_point isolates alpha", q1.h(fresh) == OrdSet::single(fresh), w(q1, m1));

  std::vector<Ordinal> betas;
  for (Ordinal beta : a)
    if (!(OrdSet::below(beta) - a).empty()) betas.push_back(beta);
  if (betas.empty()) {
    log.observe("neighbourhood move not applicable");
    return;
  }
  const Ordinal beta = betas[rng.below(betas.size())];
  const OrdSet b = rng.subset(a.below_of(beta));
  const Ordinal alpha = rng.pick(OrdSet::below(beta) - a);
  const Condition q2 = extend_into_neighbourhood(p, beta, b, alpha);
  Json m2;
  m2["beta"] = beta;
  m2["b"] = to_json(b);
  m2["alpha"] = alpha;
  log.check("extend_into_neighbourhood valid", is_valid(f, q2), w(q2, m2));
  log.check("extend_into_neighbourhood leq input", leq(q2, p), w(q2, m2));
  log.check("alpha lands in U(q, beta, b)", U(q2, beta, b).contains(alpha), w(q2, m2));
}

// ---- twins-amalgam ----------------------------------------------------------

inline void twins_amalgam(std::size_t index, Rng& rng, const SuiteOptions& o, TrialLog& log) {
  const TwinSample t = sample_good_twins(rng);
  std::optional<Condition> r;
  auto w = [&] {
    Json j = trial_ref(o, index);
    j["f"] = to_json(t.f);
    j["p"] = to_json(t.p);
    j["q"] = to_json(t.p_prime);
    if (r) j["r"] = to_json(*r);
    return j;
  };
  if (t.p.domain() != t.p_prime.domain()) log.observe("twins with distinct domains");
  if ((t.p.domain() & t.p_prime.domain()).empty()) log.observe("twins with disjoint domains");
  if (!log.check("sampler yields good twins", are_good_twins(t.f, t.p, t.p_prime), w)) return;
  log.check("p valid", is_valid(t.f, t.p), w);
  log.check("p' valid", is_valid(t.f, t.p_prime), w);
  r = o.amalgamator(t.f, t.p, t.p_prime);
  log.check("amalgam valid", is_valid(t.f, *r), w);
  log.check("amalgam leq p", leq(*r, t.p), w);
  log.check("amalgam leq p'", leq(*r, t.p_prime), w);
  log.check("amalgam domain is a | a'", r->domain() == (t.p.domain() | t.p_prime.domain()), w);
  log.check("amalgamation symmetric", o.amalgamator(t.f, t.p_prime, t.p) == *r, w);
  log.check("membership equivalence", verify_membership_equiv(t.f, t.p, t.p_prime), w);
  log.check("g well-defined", g_well_defined(t.p, t.p_prime), w);
}

// ---- insertion --------------------------------------------------------------

inline void insertion(std::size_t index, Rng& rng, const SuiteOptions& o, TrialLog& log) {
  const std::size_t k = 1 + index % 2;
  const InsertionSample ins = sample_insertion(rng, k);
  const InsertionLayout& l = ins.layout;
  std::optional<Condition> r;
  auto w = [&] {
    Json j = trial_ref(o, index);
    j["f"] = to_json(ins.f);
    j["s"] = to_json(ins.s);
    j["layout"] = to_json(l);
    if (r) j["r"] = to_json(*r);
    return j;
  };
  if (!log.check("hypotheses hold", !insertion_failure(ins.f, ins.s, l), w)) return;
  log.check("s valid", is_valid(ins.f, ins.s), w);
  r = insertion_construction(ins.f, ins.s, l);
  const OrdSet c = l.S - ins.s.h_union(l.Q | l.E);
  if (!c.empty()) log.observe("instances with C nonempty");
  log.check("r valid", is_valid(ins.f, *r), w);
  log.check("(a) r leq s|S", leq_restricted(*r, restrict(ins.s, l.S)), w);
  log.check("(b) r leq s|(Q u E)", leq_restricted(*r, restrict(ins.s, l.Q | l.E)), w);
  log.check("(c) C inside h^r(gamma_0)", c.subset_of(r->h(l.E.min())), w);
  const RestrictedCondition top = restrict(ins.s, l.S | l.E);
  log.check("s|(S u E) is a condition", top.is_condition, w);
  log.check("(d) s|(S u E) precedes r", precedes(top.base, *r), w);
}

// ---- closure-laws -----------------------------------------------------------

inline bool closed_under(const PairFunction& f, OrdSet x, OrdSet k_prime) {
  for (Ordinal xi : x)
    for (Ordinal eta : x | k_prime)
      if (xi != eta && !f(xi, eta).subset_of(x)) return false;
  return true;
}

inline void closure_laws(std::size_t index, Rng& rng, const SuiteOptions& o, TrialLog& log) {
  static constexpr double kDensities[] = {0.0, 0.5, 1.0};
  const double density = kDensities[index % 3];
  const std::size_t kappa = o.f ? std::min<std::size_t>(o.f->kappa(), 5) : rng.between(1, 5);
  const PairFunction f = o.f ? *o.f : random_pair_function(kappa, density, rng.next());
  const OrdSet carrier = OrdSet::below(static_cast<Ordinal>(kappa));

  std::map<std::pair<std::uint64_t, std::uint64_t>, OrdSet> cl;
  for_each_subset(carrier, [&](OrdSet k) {
    for_each_subset(carrier, [&](OrdSet kp) { cl[{k.bits(), kp.bits()}] = cl_f(f, k, kp).closure; });
  });
  for (const auto& [key, c] : cl) {
    const OrdSet k = OrdSet::from_bits(key.first);
    const OrdSet kp = OrdSet::from_bits(key.second);
    auto w = [&] {
      Json j = trial_ref(o, index);
      j["f"] = to_json(f);
      j["K"] = to_json(k);
      j["K_prime"] = to_json(kp);
      j["closure"] = to_json(c);
      return j;
    };
    log.check("(a) K inside closure", k.subset_of(c), w);
    if (!k.empty()) log.check("(a) max closure = max K", c.max() == k.max(), w);
    if (k.empty()) log.check("empty K gives empty closure", c.empty(), w);
    log.check("(b) closed under f", closed_under(f, c, kp), w);
    bool least = true;
    for_each_subset(carrier, [&](OrdSet x) {
      if (k.subset_of(x) && closed_under(f, x, kp) && !c.subset_of(x)) least = false;
    });
    log.check("least closed superset", least, w);
    log.check("idempotent", cl_f(f, c, kp).closure == c, w);
    bool mono = true;
    for_each_subset(k, [&](OrdSet k1) {
      if (!cl[{k1.bits(), kp.bits()}].subset_of(c)) mono = false;
    });
    log.check("monotone in K", mono, w);
  }
}

// ---- space-checks -----------------------------------------------------------

template <class W>
inline void kuratowski(const SpaceModel& s, TrialLog& log, const W& w, std::string_view tag) {
  const std::string t(tag);
  std::vector<OrdSet> cl(std::size_t{1} << s.kappa);
  for_each_subset(s.carrier(), [&](OrdSet y) { cl[y.bits()] = closure(s, y); });
  log.check("closure of empty is empty" + t, cl[0].empty(), w);
  bool extensive = true, idem = true, additive = true;
  for_each_subset(s.carrier(), [&](OrdSet y) {
    if (!y.subset_of(cl[y.bits()])) extensive = false;
    if (cl[cl[y.bits()].bits()] != cl[y.bits()]) idem = false;
    for_each_subset(s.carrier(), [&](OrdSet z) {
      if (cl[(y | z).bits()] != (cl[y.bits()] | cl[z.bits()])) additive = false;
    });
  });
  log.check("closure extensive" + t, extensive, w);
  log.check("closure idempotent" + t, idem, w);
  log.check("closure additive" + t, additive, w);
}

inline void space_checks(std::size_t index, Rng& rng, const SuiteOptions& o, TrialLog& log) {
  const std::size_t max_kappa = o.f ? std::min<std::size_t>(o.f->kappa(), 16) : 16;
  const std::size_t kappa = index % 5 == 0 ? rng.between(2, std::min<std::size_t>(6, max_kappa))
                                           : rng.between(std::min<std::size_t>(7, max_kappa), max_kappa);
  const PairFunction f = o.f ? *o.f : random_pair_function(kappa, rng.unit() * 0.6, rng.next());
  const auto goals = random_schedule(rng, kappa);
  const std::uint64_t sample_seed = rng.next();
  const FilterSample sample = sample_filter(f, kappa, goals, sample_seed);
  const SpaceModel s = assemble_space(sample);
  auto w = [&] {
    Json j = trial_ref(o, index);
    j["f"] = to_json(f);
    j["schedule"] = to_json(goals);
    j["sample_seed"] = sample_seed;
    j["space"] = to_json(s);
    return j;
  };
  std::size_t nbhd = 0;
  for (const Goal& g : goals) nbhd += std::holds_alternative<NbhdGoal>(g);
  log.observe("neighbourhood goals scheduled", nbhd);
  log.check("ten neighbourhood goals scheduled", nbhd == ScheduleOptions{}.neighbourhood_goals, w);
  for (const auto& e : sample.schedule_log)
    if (std::holds_alternative<NbhdGoal>(e.goal) && e.action == GoalAction::Extended)
      log.observe("neighbourhood goals needing an insertion");
  if (is_coherent(s)) log.observe("coherent spaces");

  bool chain_ok = true;
  for (std::size_t k = 0; k < sample.chain.size(); ++k) {
    if (!is_valid(f, sample.chain[k])) chain_ok = false;
    if (k > 0 && !leq(sample.chain[k], sample.chain[k - 1])) chain_ok = false;
  }
  log.check("chain valid and descending", chain_ok, w);
  log.check("full domain reached", sample.last().domain() == s.carrier(), w);
  bool agrees = true;
  for (Ordinal x : sample.last().domain()) agrees &= s.H[x] == sample.last().h(x);
  log.check("H agrees with the last condition", agrees, w);
  log.check("max H(alpha) = alpha", check_right_separated(s).ok, w);
  log.check("star containment", check_star_containment(s).ok, w);
  log.check("loc-comp hypothesis", check_loc_comp_hypothesis(s), w);
  bool compact = true;
  for (Ordinal x = 0; x < s.kappa; ++x) compact &= compactness_by_subbase(s, x).ok;
  log.check("compact by subbase", compact, w);
  log.check("scheduled Z met by U(beta; b)", unmet_neighbourhood_goals(s, goals).empty(), w);

  const CantorBendixson cb = cantor_bendixson(s);
  log.check("CB ranks total", cb.kernel.empty(), w);
  const auto nb = minimal_neighbourhoods(s);
  bool discrete_levels = true;
  for (std::size_t r = 0; r < cb.height(); ++r) {
    const OrdSet lv = cb.level(r);
    for (Ordinal x : lv) discrete_levels &= (nb[x] & lv) == OrdSet::single(x);
  }
  log.check("CB levels discrete", discrete_levels, w);

  if (s.kappa <= 6) kuratowski(s, log, w, "");

  // A family that is not right-separated, so the closure is not discrete.
  SpaceModel rough;
  rough.kappa = 6;
  for (Ordinal x = 0; x < 6; ++x) rough.H.push_back(rng.subset(OrdSet::below(6), 0.4) | OrdSet::single(x));
  auto wr = [&] {
    Json j = trial_ref(o, index);
    j["space"] = to_json(rough);
    return j;
  };
  kuratowski(rough, log, wr, " (random family)");
  const CantorBendixson cbr = cantor_bendixson(rough);
  bool ranks_ok = true;
  OrdSet removed;
  const auto nbr = minimal_neighbourhoods(rough);
  for (std::size_t r = 0; r < cbr.height(); ++r) {
    const OrdSet lv = cbr.level(r);
    const OrdSet rest = rough.carrier() - removed;
    for (Ordinal x : rest) ranks_ok &= lv.contains(x) == ((nbr[x] & rest) == OrdSet::single(x));
    removed |= lv;
  }
  log.check("CB ranks are derivative stages (random family)", ranks_ok, wr);
}

// ---- fu-laws ----------------------------------------------------------------

/// Exhaustive meet check over every ambient Q(A, alpha) with |A| <= 4 and
/// alpha <= 4 of a space on at most 6 points.
template <class W>
inline void fu_meet_exhaustive(const SpaceModel& s, TrialLog& log, const W& w) {
  using Bits = std::bitset<256>;
  const Ordinal top = static_cast<Ordinal>(std::min<std::size_t>(s.kappa, 5));
  for (Ordinal alpha = 0; alpha < top; ++alpha)
    for_each_subset(s.carrier(), [&](OrdSet A) {
      if (A.size() > 4) return;
      const FUPoset q(s, A, alpha);
      std::vector<FUCondition> all;
      for_each_subset(A, [&](OrdSet x) {
        for_each_subset(OrdSet::below(alpha), [&](OrdSet c) { all.push_back({x, c}); });
      });
      const std::size_t n = all.size();
      // The order written out directly: v <= u iff s_v, C_v extend s_u, C_u
      // and the new points of s_v lie in U(alpha; C_u).
      std::vector<OrdSet> nbhd(std::size_t{1} << alpha);
      for (std::size_t c = 0; c < nbhd.size(); ++c) nbhd[c] = s.U(alpha, OrdSet::from_bits(c));
      std::vector<Bits> down(n);
      for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) {
          const FUCondition& hi = all[u];
          const FUCondition& lo = all[v];
          if (hi.s.subset_of(lo.s) && hi.C.subset_of(lo.C) && (lo.s - hi.s).subset_of(nbhd[hi.C.bits()]))
            down[u].set(v);
        }
      // Position in the enumeration order: subsets count up in compressed bits.
      auto idx = [&](const FUCondition& m) {
        std::size_t rank = 0, bit = 0;
        for (Ordinal x : A) rank |= std::size_t{m.s.contains(x)} << bit++;
        return (rank << alpha) | static_cast<std::size_t>(m.C.bits());
      };
      bool ok = true;
      for (std::size_t u = 0; u < n && ok; ++u)
        for (std::size_t v = 0; v < n && ok; ++v) {
          const Bits lb = down[u] & down[v];
          const auto m = q.meet(all[u], all[v]);
          if (lb.none()) {
            ok = !m.has_value();
          } else {
            const std::size_t mi = m ? idx(*m) : n;
            ok = mi < n && lb.test(mi) && (lb & ~down[mi]).none();
          }
        }
      log.check("meet is the greatest lower bound", ok, w);
    });
}

inline void fu_laws(std::size_t index, Rng& rng, const SuiteOptions& o, TrialLog& log) {
  // Small space for the exhaustive meet check.
  {
    const std::size_t kappa = rng.between(2, 6);
    const PairFunction f = random_pair_function(kappa, rng.unit() * 0.6, rng.next());
    const auto goals = random_schedule(rng, kappa, {3, 0.5});
    const SpaceModel s = assemble_space(sample_filter(f, kappa, goals, rng.next()));
    SpaceModel rough;
    rough.kappa = 6;
    for (Ordinal x = 0; x < 6; ++x) rough.H.push_back(rng.subset(OrdSet::below(x + 1), 0.5) | OrdSet::single(x));
    for (const SpaceModel* sp : {&s, static_cast<const SpaceModel*>(&rough)}) {
      auto w = [&] {
        Json j = trial_ref(o, index);
        j["space"] = to_json(*sp);
        return j;
      };
      fu_meet_exhaustive(*sp, log, w);
    }
  }

  // Simulation on a sampled space of up to 16 points.
  const std::size_t kappa = rng.between(4, 16);
  const PairFunction f = random_pair_function(kappa, rng.unit() * 0.6, rng.next());
  const auto goals = random_schedule(rng, kappa);
  const SpaceModel s = assemble_space(sample_filter(f, kappa, goals, rng.next()));
  const Ordinal alpha = static_cast<Ordinal>(rng.between(1, kappa - 1));
  const OrdSet A = s.H[alpha] | rng.subset(s.carrier(), 0.4) | OrdSet::single(alpha);
  std::vector<OrdSet> cs(rng.between(1, 6));
  OrdSet total;
  for (auto& c : cs) {
    c = rng.subset(OrdSet::below(alpha), 0.25);
    total |= c;
  }
  const std::size_t room = (A & s.U(alpha, total)).size();
  if (cs.size() > room) cs.resize(room);
  const std::uint64_t sim_seed = rng.next();
  auto w = [&] {
    Json j = trial_ref(o, index);
    j["space"] = to_json(s);
    j["A"] = to_json(A);
    j["alpha"] = alpha;
    Json c = Json::array();
    for (OrdSet x : cs) c.push_back(to_json(x));
    j["C"] = c;
    j["sim_seed"] = sim_seed;
    return j;
  };
  const FUSimulation sim = fu_simulate(s, A, alpha, cs, sim_seed);
  const FUPoset q(s, A, alpha);
  bool descends = true;
  for (std::size_t k = 1; k < sim.chain.size(); ++k) descends &= q.leq(sim.chain[k], sim.chain[k - 1]);
  log.check("simulation chain descends", descends, w);
  OrdSet seen;
  bool distinct = true;
  for (Ordinal x : sim.sequence) {
    distinct &= A.contains(x) && !seen.contains(x);
    seen.insert(x);
  }
  log.check("sequence is distinct points of A", distinct, w);
  bool suffix = true;
  for (std::size_t j = 0; j < cs.size(); ++j)
    for (std::size_t k = j; k < sim.sequence.size(); ++k) suffix &= s.U(alpha, cs[j]).contains(sim.sequence[k]);
  log.check("suffix converges into U(alpha; C)", suffix, w);
}

struct SuiteSpec {
  std::string_view name;
  std::size_t default_trials;
  /// Exhaustive suites run one trial whatever --trials says.
  bool exhaustive;
  void (*fn)(std::size_t, Rng&, const SuiteOptions&, TrialLog&);
};

inline const std::vector<SuiteSpec>& registry() {
  static const std::vector<SuiteSpec> suites = {
      {"star-laws", 1, true, star_laws},
      {"poset-laws", 20, false, poset_laws},
      {"extension", 500, false, extension},
      {"twins-amalgam", 500, false, twins_amalgam},
      {"insertion", 100, false, insertion},
      {"closure-laws", 150, false, closure_laws},
      {"space-checks", 50, false, space_checks},
      {"fu-laws", 50, false, fu_laws},
  };
  return suites;
}

}  // namespace props

inline std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& s : props::registry()) out.emplace_back(s.name);
  return out;
}

inline SuiteResult run_suite(std::string_view name, const SuiteOptions& opt) {
  const props::SuiteSpec* spec = nullptr;
  for (const auto& s : props::registry())
    if (s.name == name) spec = &s;
  if (!spec) throw Error(ErrorCode::UnknownSuite, "no suite named \"" + std::string(name) + "\"");

  const std::size_t trials = spec->exhaustive ? 1 : opt.trials ? opt.trials : spec->default_trials;
  std::vector<std::optional<TrialLog>> logs(trials);
  auto run_one = [&](std::size_t index) {
    TrialLog log(index);
    Rng rng = Rng::for_trial(opt.seed, index);
    try {
      spec->fn(index, rng, opt, log);
    } catch (const std::exception& e) {
      log.check("no unexpected error", false, [&] {
        Json j = props::trial_ref(opt, index);
        j["error"] = e.what();
        return j;
      });
    }
    logs[index] = std::move(log);
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(opt.jobs, trials));
  if (jobs == 1) {
    for (std::size_t k = 0; k < trials; ++k) run_one(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j)
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < trials; k = next++) run_one(k);
      });
    for (auto& t : pool) t.join();
  }

  SuiteResult out;
  out.suite = std::string(name);
  out.trials = trials;
  std::map<std::string, std::size_t> kept;
  for (const auto& log : logs) {
    for (const auto& t : log->tallies()) {
      auto it = std::find_if(out.tallies.begin(), out.tallies.end(), [&](const auto& x) { return x.name == t.name; });
      if (it == out.tallies.end()) {
        out.tallies.push_back(t);
      } else {
        it->pass += t.pass;
        it->fail += t.fail;
      }
    }
    for (const auto& w : log->witnesses())
      if (kept[w.property]++ < opt.witness_limit) out.witnesses.push_back(w);
    for (const auto& [k, v] : log->observations()) {
      auto it = std::find_if(out.observations.begin(), out.observations.end(),
                             [&](const auto& x) { return x.first == k; });
      if (it == out.observations.end())
        out.observations.emplace_back(k, v);
      else
        it->second += v;
    }
  }
  return out;
}

}  // namespace pforce
