#include "common.hpp"
#include "oracle/oracle.hpp"
#include "pforce/filter.hpp"
#include "pforce/fu_poset.hpp"
#include "pforce/sampling.hpp"
#include "pforce/serialize.hpp"
#include "pforce/space.hpp"

using namespace pforce;
using testing_util::code_of;
using testing_util::fixture;

namespace {

std::vector<Goal> load_schedule(const std::string& name) { return schedule_from_json(read_json_file(fixture(name))); }

SpaceModel family(std::initializer_list<OrdSet> hs) {
  SpaceModel s;
  s.kappa = hs.size();
  s.H.assign(hs.begin(), hs.end());
  return s;
}

SpaceModel nested(std::size_t kappa) {
  SpaceModel s = discrete_space(kappa);
  for (Ordinal a = 0; a < kappa; ++a) s.H[a] = OrdSet::below(a + 1);
  return s;
}

SpaceModel random_family(Rng& rng, std::size_t kappa, bool right_separated) {
  SpaceModel s = discrete_space(kappa);
  for (Ordinal a = 0; a < kappa; ++a) {
    const OrdSet pool = right_separated ? OrdSet::below(a) : s.carrier() - OrdSet::single(a);
    s.H[a] = rng.subset(pool) | OrdSet::single(a);
  }
  return s;
}

SpaceModel sampled_space(std::uint64_t seed, std::size_t kappa) {
  Rng rng(seed);
  const PairFunction f = random_pair_function(kappa, rng.unit(), rng.next());
  return assemble_space(sample_filter(f, kappa, random_schedule(rng, kappa), rng.next()));
}

}  // namespace

TEST(Filter, PointGoalsFillTheCarrier) {
  const PairFunction f = random_pair_function(8, 0.5, 1);
  const FilterSample s = sample_filter(f, 8, load_schedule("schedule_points8.json"), 3);
  EXPECT_EQ(s.last().domain(), OrdSet::below(8));
  EXPECT_EQ(s.chain.size(), 9u);
  for (std::size_t k = 1; k < s.chain.size(); ++k) {
    EXPECT_TRUE(is_valid(f, s.chain[k]));
    EXPECT_TRUE(leq(s.chain[k], s.chain[k - 1]));
  }
  const SpaceModel sp = assemble_space(s);
  EXPECT_TRUE(sp == discrete_space(8));
}

TEST(Filter, EmptyScheduleIsEmptyChain) {
  const FilterSample s = sample_filter(PairFunction(3), 3, load_schedule("schedule_empty.json"), 0);
  ASSERT_EQ(s.chain.size(), 1u);
  EXPECT_EQ(s.chain[0], Condition{});
  EXPECT_TRUE(s.schedule_log.empty());
  const SpaceModel sp = assemble_space(s);
  for (Ordinal a = 0; a < 3; ++a) EXPECT_EQ(sp.H[a], OrdSet::single(a));
}

TEST(Filter, NeighbourhoodGoalsMetWithLeastPolicy) {
  const PairFunction f = random_pair_function(8, 0.4, 11);
  const auto goals = load_schedule("schedule_nbhd8.json");
  const FilterSample s = sample_filter(f, 8, goals, 5, ChoicePolicy::Least);
  ASSERT_EQ(s.schedule_log.size(), goals.size());
  EXPECT_EQ(s.schedule_log[3].inserted, std::optional<Ordinal>{1});
  EXPECT_EQ(s.schedule_log[4].inserted, std::optional<Ordinal>{4});
  EXPECT_EQ(s.schedule_log[5].action, GoalAction::AlreadySatisfied);
  EXPECT_EQ(s.last().h(7), (OrdSet{1, 7}));
  EXPECT_EQ(s.last().h(5), (OrdSet{4, 5}));
  for (const auto& e : s.schedule_log) EXPECT_TRUE(goal_met(s.chain[e.chain_index], e.goal));
  const SpaceModel sp = assemble_space(s);
  EXPECT_TRUE(unmet_neighbourhood_goals(sp, goals).empty());
  EXPECT_EQ(sp.H[7], (OrdSet{1, 7}));
}

TEST(Filter, Errors) {
  const PairFunction f(8);
  EXPECT_EQ(code_of([&] { sample_filter(f, 8, load_schedule("schedule_unsatisfiable.json"), 0); }),
            ErrorCode::GoalUnsatisfiable);
  // Z & beta already used up.
  const std::vector<Goal> stuck{PointGoal{0}, PointGoal{3}, NbhdGoal{3, {0}, {0}}};
  EXPECT_EQ(code_of([&] { sample_filter(f, 8, stuck, 0); }), ErrorCode::GoalUnsatisfiable);
  EXPECT_EQ(code_of([&] { sample_filter(f, 8, {PointGoal{8}}, 0); }), ErrorCode::OutOfUniverse);
  EXPECT_EQ(code_of([&] { sample_filter(f, 9, {}, 0); }), ErrorCode::OutOfUniverse);
  const std::vector<Goal> bad_b{PointGoal{2}, PointGoal{5}, NbhdGoal{2, {5}, {1}}};
  EXPECT_EQ(code_of([&] { sample_filter(f, 8, bad_b, 0); }), ErrorCode::PreconditionViolated);
}

TEST(Filter, RandomSchedulesMeetEveryGoal) {
  Rng rng(606);
  std::size_t reused = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t kappa = rng.between(1, 20);
    const PairFunction f = random_pair_function(kappa, rng.unit(), rng.next());
    const auto goals = random_schedule(rng, kappa);
    std::size_t points = 0;
    for (const Goal& g : goals) points += std::holds_alternative<PointGoal>(g);
    EXPECT_EQ(points, kappa);
    EXPECT_EQ(goals.size() - points, 10u);
    const FilterSample s = sample_filter(f, kappa, goals, rng.next());
    EXPECT_EQ(s.last().domain(), OrdSet::below(static_cast<Ordinal>(kappa)));
    for (const auto& e : s.schedule_log) {
      EXPECT_TRUE(goal_met(s.chain[e.chain_index], e.goal));
      EXPECT_TRUE(goal_met(s.last(), e.goal));
      reused += e.action == GoalAction::AlreadySatisfied && std::holds_alternative<NbhdGoal>(e.goal);
    }
    EXPECT_TRUE(oracle::valid(oracle::of(f), oracle::of(s.last())));
    const SpaceModel sp = assemble_space(s);
    EXPECT_TRUE(unmet_neighbourhood_goals(sp, goals).empty());
    for (Ordinal a = 0; a < kappa; ++a) EXPECT_EQ(sp.H[a], s.last().h(a));
  }
  EXPECT_GT(reused, 0u);
}

TEST(Space, ChecksOnSampledSpaces) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const SpaceModel s = sampled_space(seed, 12);
    EXPECT_TRUE(check_right_separated(s).ok);
    EXPECT_TRUE(check_star_containment(s).ok) << "seed " << seed;
    EXPECT_TRUE(check_loc_comp_hypothesis(s));
    for (Ordinal a = 0; a < 12; ++a) EXPECT_TRUE(compactness_by_subbase(s, a).ok);
  }
}

TEST(Space, NestedFamily) {
  const SpaceModel s = nested(5);
  EXPECT_TRUE(is_coherent(s));
  EXPECT_TRUE(check_loc_comp_hypothesis(s));
  EXPECT_TRUE(check_star_containment(s).ok);
  EXPECT_TRUE(is_coherent(discrete_space(5)));
  EXPECT_TRUE(compactness_by_subbase(s, 0).ok);
  EXPECT_TRUE(space_from_json(read_json_file(fixture("space_nested3.json"))) == nested(3));
}

TEST(Space, CorruptionsAreDetected) {
  SpaceModel s = sampled_space(4, 10);
  // Two points whose H share everything but the top: needs a cover from i.
  SpaceModel bad = family({{0}, {0, 1}, {0, 2}});
  const CheckResult star_res = check_star_containment(bad);
  EXPECT_FALSE(star_res.ok);
  ASSERT_EQ(star_res.counterexamples.size(), 1u);
  EXPECT_EQ(star_res.counterexamples[0].alpha, 1u);
  EXPECT_EQ(star_res.counterexamples[0].beta, 2u);
  EXPECT_FALSE(check_loc_comp_hypothesis(bad));
  const CompactnessReport rep = compactness_by_subbase(bad, 2);
  EXPECT_FALSE(rep.ok);
  ASSERT_TRUE(rep.failure);
  bad.i_final.set_domain({0, 1, 2});
  bad.i_final.set_i(1, 2, {0});
  EXPECT_TRUE(check_star_containment(bad).ok);
  EXPECT_TRUE(check_loc_comp_hypothesis(bad));
  EXPECT_TRUE(compactness_by_subbase(bad, 2).ok);

  SpaceModel wrong_top = s;
  wrong_top.H[3] = {0, 1};
  EXPECT_FALSE(check_right_separated(wrong_top).ok);
  EXPECT_FALSE(check_star_containment(wrong_top).ok);
  EXPECT_EQ(code_of([&] { compactness_by_subbase(s, 10); }), ErrorCode::OutOfUniverse);
}

TEST(Space, LocCompAgreesWithStarContainment) {
  Rng rng(7);
  std::size_t held = 0;
  for (int t = 0; t < 500; ++t) {
    SpaceModel s = random_family(rng, rng.between(2, 9), true);
    s.i_final.set_domain(s.carrier());
    for (Ordinal b = 0; b < s.kappa; ++b)
      for (Ordinal a = 0; a < b; ++a)
        if (rng.chance(0.4)) s.i_final.set_i(a, b, rng.subset(OrdSet::below(a)));
    const bool star_ok = check_star_containment(s).ok;
    held += star_ok;
    EXPECT_EQ(star_ok, check_loc_comp_hypothesis(s));
    if (!star_ok) continue;
    for (Ordinal a = 0; a < s.kappa; ++a) EXPECT_TRUE(compactness_by_subbase(s, a).ok);
  }
  EXPECT_GT(held, 50u);
}

TEST(Space, ClosureMatchesGeneratedTopology) {
  Rng rng(21);
  for (int t = 0; t < 150; ++t) {
    const SpaceModel s = random_family(rng, rng.between(1, 6), rng.chance(0.5));
    const oracle::Topology top(s);
    for (int k = 0; k < 6; ++k) {
      const OrdSet y = rng.subset(s.carrier());
      const OrdSet cl = closure(s, y);
      EXPECT_EQ(oracle::of(cl), top.closure(oracle::of(y)));
      EXPECT_TRUE(y.subset_of(cl));
      EXPECT_EQ(closure(s, cl), cl);
    }
    const auto cb = cantor_bendixson(s);
    const auto expect = top.ranks();
    for (Ordinal x = 0; x < s.kappa; ++x) {
      EXPECT_EQ(cb.rank[x].has_value(), expect[x].has_value());
      if (cb.rank[x] && expect[x]) {
        EXPECT_EQ(*cb.rank[x], *expect[x]);
      }
    }
  }
}

TEST(Space, RightSeparatedFamiliesAreDiscrete) {
  Rng rng(33);
  for (int t = 0; t < 100; ++t) {
    const std::size_t kappa = rng.between(1, 12);
    const SpaceModel s = random_family(rng, kappa, true);
    for (Ordinal x = 0; x < kappa; ++x) EXPECT_EQ(minimal_neighbourhood(s, x), OrdSet::single(x));
    const auto cb = cantor_bendixson(s);
    EXPECT_EQ(cb.height(), kappa ? 1u : 0u);
    EXPECT_TRUE(cb.kernel.empty());
  }
  // The nested family is no exception: every rank is 0.
  const auto cb = cantor_bendixson(nested(5));
  EXPECT_EQ(cb.level(0), OrdSet::below(5));
  EXPECT_EQ(rank_histogram(cb), (std::map<std::size_t, std::size_t>{{0, 5}}));
}

TEST(Space, IndistinguishablePointsFormTheKernel) {
  // 0 and 1 are indistinguishable; 2 sees both.
  const SpaceModel s = family({{0, 1}, {0, 1}, {0, 1, 2}});
  EXPECT_EQ(closure(s, {0}), (OrdSet{0, 1}));
  const auto cb = cantor_bendixson(s);
  EXPECT_EQ(cb.rank[2], std::optional<std::size_t>{0});
  EXPECT_EQ(cb.kernel, (OrdSet{0, 1}));
  EXPECT_FALSE(is_free_sequence(s, {0, 1}));
  EXPECT_TRUE(is_free_sequence(s, {2, 0}));
}

TEST(Space, MinimalNeighbourhoodsPartitionTheCarrier) {
  // Complements are subbase sets too, so y in N(x) forces N(y) = N(x): the
  // derivative removes every singleton class at once and nothing is left to
  // isolate later. Heights never exceed 1.
  Rng rng(44);
  for (int t = 0; t < 200; ++t) {
    const SpaceModel s = random_family(rng, rng.between(1, 10), false);
    const auto n = minimal_neighbourhoods(s);
    OrdSet singles;
    for (Ordinal x = 0; x < s.kappa; ++x) {
      for (Ordinal y : n[x]) EXPECT_EQ(n[y], n[x]);
      if (n[x] == OrdSet::single(x)) singles.insert(x);
    }
    const auto cb = cantor_bendixson(s);
    EXPECT_LE(cb.height(), 1u);
    EXPECT_EQ(cb.level(0), singles);
    EXPECT_EQ(cb.kernel, s.carrier() - singles);
  }
}

TEST(Space, FreeSequences) {
  const SpaceModel s = sampled_space(2, 8);
  EXPECT_TRUE(is_free_sequence(s, {}));
  EXPECT_TRUE(is_free_sequence(s, {3}));
  EXPECT_TRUE(is_free_sequence(s, {7, 1, 4}));
  EXPECT_EQ(code_of([&] { is_free_sequence(s, {1, 1}); }), ErrorCode::DuplicatePoints);
  EXPECT_EQ(code_of([&] { is_free_sequence(s, {8}); }), ErrorCode::OutOfUniverse);
  EXPECT_EQ(code_of([&] { closure(s, {9}); }), ErrorCode::OutOfUniverse);
}

TEST(FU, OrderAndMeetExamples) {
  const SpaceModel s = nested(5);
  const FUPoset q(s, {0, 1, 2, 3}, 4);
  const FUCondition top{};
  const FUCondition q1{{0}, {}};
  EXPECT_TRUE(q.leq(top, top));
  EXPECT_TRUE(q.leq(q1, top));
  EXPECT_FALSE(q.leq(top, q1));
  // U(4; {1}) = {2,3,4}, so 0 cannot be added below <{}, {1}>.
  const FUCondition q2{{}, {1}};
  EXPECT_FALSE(q.leq(FUCondition{{0}, {1}}, q2));
  EXPECT_TRUE(q.leq(FUCondition{{2}, {1}}, q2));
  EXPECT_EQ(fu_meet(q, q1, q2), std::nullopt);
  EXPECT_EQ(fu_meet(q, FUCondition{{2}, {}}, q2), (FUCondition{{2}, {1}}));
  EXPECT_EQ(fu_meet(q, top, q1), q1);
  EXPECT_EQ(code_of([&] { q.leq(FUCondition{{4}, {}}, top); }), ErrorCode::AmbientMismatch);
  EXPECT_EQ(code_of([&] { q.leq(FUCondition{{}, {4}}, top); }), ErrorCode::AmbientMismatch);
  EXPECT_EQ(code_of([&] { FUPoset(s, {5}, 1); }), ErrorCode::OutOfUniverse);
}

TEST(FU, MeetIsGreatestLowerBoundOnSmallSpaces) {
  Rng rng(90);
  for (int t = 0; t < 25; ++t) {
    const SpaceModel s = random_family(rng, rng.between(3, 4), true);
    const auto alpha = static_cast<Ordinal>(s.kappa - 1);
    const OrdSet A = rng.subset(s.carrier(), 0.7);
    const FUPoset q(s, A, alpha);
    std::vector<FUCondition> all;
    for_each_subset(A, [&](OrdSet x) {
      for_each_subset(OrdSet::below(alpha), [&](OrdSet c) { all.push_back({x, c}); });
    });
    for (const auto& a : all)
      for (const auto& b : all) {
        std::vector<FUCondition> lower;
        for (const auto& r : all)
          if (q.leq(r, a) && q.leq(r, b)) lower.push_back(r);
        std::optional<FUCondition> glb;
        for (const auto& r : lower) {
          bool greatest = true;
          for (const auto& r2 : lower) greatest = greatest && q.leq(r2, r);
          if (greatest) glb = r;
        }
        const auto m = q.meet(a, b);
        EXPECT_EQ(m.has_value(), !lower.empty());
        EXPECT_EQ(glb, m);
        if (m) {
          EXPECT_EQ(*m, (FUCondition{a.s | b.s, a.C | b.C}));
        }
      }
  }
}

TEST(FU, SimulationFollowsTheSchedule) {
  const SpaceModel s = nested(6);
  const OrdSet A{1, 2, 3, 4, 5};
  const std::vector<OrdSet> sched{{}, {0}, {2}};
  const FUSimulation sim = fu_simulate(s, A, 5, sched, 17);
  ASSERT_EQ(sim.sequence.size(), sched.size());
  ASSERT_EQ(sim.chain.size(), sched.size() + 1);
  const FUPoset q(s, A, 5);
  for (std::size_t k = 1; k < sim.chain.size(); ++k) EXPECT_TRUE(q.leq(sim.chain[k], sim.chain[k - 1]));
  for (std::size_t k = 0; k < sched.size(); ++k)
    for (std::size_t j = k; j < sim.sequence.size(); ++j) EXPECT_TRUE(s.U(5, sched[k]).contains(sim.sequence[j]));
  EXPECT_EQ(fu_simulate(s, A, 5, sched, 17).sequence, sim.sequence);
}

TEST(FU, SimulationErrors) {
  const SpaceModel s = nested(6);
  EXPECT_EQ(code_of([&] { fu_simulate(s, {1, 2}, 5, {}, 0); }), ErrorCode::PreconditionViolated);
  EXPECT_EQ(code_of([&] { fu_simulate(s, {4, 5}, 5, {{}, {}, {}}, 0); }), ErrorCode::StuckNoFreshPoint);
  EXPECT_EQ(code_of([&] { fu_simulate(s, {4, 5}, 5, {{5}}, 0); }), ErrorCode::AmbientMismatch);
  EXPECT_EQ(code_of([&] { fu_simulate(s, {4, 5}, 6, {}, 0); }), ErrorCode::OutOfUniverse);
}
