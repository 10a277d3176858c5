#include "common.hpp"
#include "oracle/oracle.hpp"
#include "pforce/amalgam.hpp"
#include "pforce/props.hpp"
#include "pforce/sampling.hpp"
#include "pforce/serialize.hpp"

using namespace pforce;
using testing_util::code_of;
using testing_util::fixture;

namespace {

Condition load_condition(const std::string& name) { return condition_from_json(read_json_file(fixture(name))); }
PairFunction load_f(const std::string& name) { return pair_function_from_json(read_json_file(fixture(name))); }

Condition make(OrdSet a, std::initializer_list<std::pair<Ordinal, OrdSet>> h,
               std::initializer_list<std::tuple<Ordinal, Ordinal, OrdSet>> i = {}) {
  Condition p;
  p.set_domain(a);
  for (const auto& [x, v] : h) p.set_h(x, v);
  for (const auto& [x, y, v] : i) p.set_i(x, y, v);
  return p;
}

std::string thrown_message(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Twins, WorkedPair) {
  const Condition p = load_condition("twin_p.json");
  const Condition q = load_condition("twin_q.json");
  const auto w = are_twins(p, q);
  ASSERT_TRUE(w);
  EXPECT_EQ((*w)(0), 0u);
  EXPECT_EQ((*w)(1), 2u);
  EXPECT_EQ(w->common, (OrdSet{0}));
  EXPECT_EQ(delta_xi(p, q, 0), std::optional<Ordinal>{0});
  EXPECT_EQ(delta_xi(p, q, 1), std::optional<Ordinal>{});
  EXPECT_TRUE(are_good_twins(load_f("f_worked4.json"), p, q));
  // With f empty, 0 < 1, 2 and 0 is missing from f{1,2}.
  EXPECT_EQ(good_twin_failure(load_f("f_empty4.json"), p, q), std::optional{TwinClause::Good});
}

TEST(Twins, SelfIsIdentityWitness) {
  const Condition p = load_condition("amalgam_r.json");
  const auto w = are_twins(p, p);
  ASSERT_TRUE(w);
  for (auto [x, y] : w->e) EXPECT_EQ(x, y);
  EXPECT_TRUE(are_good_twins(PairFunction(4), p, p));
}

TEST(Twins, EachClauseNamed) {
  const PairFunction f(5);
  const Condition p = load_condition("twin_p.json");
  EXPECT_EQ(good_twin_failure(f, p, point_condition(0)), std::optional{TwinClause::Size});
  EXPECT_EQ(good_twin_failure(f, p, load_condition("twin_q_not_twin.json")), std::optional{TwinClause::H});
  EXPECT_EQ(good_twin_failure(f, make({0, 1}, {{0, {0}}, {1, {1}}}, {{0, 1, {0}}}),
                              make({0, 2}, {{0, {0}}, {2, {2}}})),
            std::optional{TwinClause::I});
  // e maps 0 to 1 and 1 to 2, moving the common point 1.
  EXPECT_EQ(good_twin_failure(f, make({0, 1}, {{0, {0}}, {1, {0, 1}}}), make({1, 2}, {{1, {1}}, {2, {1, 2}}})),
            std::optional{TwinClause::Identity});
  // Twins under e(1)=2 whose i differ on the common pair {3,4}.
  EXPECT_EQ(good_twin_failure(f, make({1, 3, 4}, {{1, {1}}, {3, {3}}, {4, {4}}}, {{3, 4, {1}}}),
                              make({2, 3, 4}, {{2, {2}}, {3, {3}}, {4, {4}}}, {{3, 4, {2}}})),
            std::optional{TwinClause::CommonI});
  EXPECT_EQ(to_string(TwinClause::H), "1(i)");
  EXPECT_EQ(to_string(TwinClause::Good), "3");
}

TEST(Twins, AgreesWithOracleUnderPerturbation) {
  Rng rng(404);
  std::size_t kept = 0;
  for (int t = 0; t < 600; ++t) {
    TwinSample s = sample_good_twins(rng, 16, 5);
    Condition q = s.p_prime;
    if (rng.chance(0.5) && !q.domain().empty()) {
      const Ordinal x = rng.pick(q.domain());
      if (rng.chance(0.5))
        q.set_h(x, rng.subset(q.domain().below_of(x)) | OrdSet::single(x));
      else if (x > 0) {
        const auto y = static_cast<Ordinal>(rng.below(x));
        s.f.set(y, x, rng.subset(OrdSet::below(y)));
      }
    }
    const bool got = are_good_twins(s.f, s.p, q);
    kept += got;
    EXPECT_EQ(got, oracle::good_twins(oracle::of(s.f), oracle::of(s.p), oracle::of(q)));
  }
  EXPECT_GT(kept, 200u);
  EXPECT_LT(kept, 600u);
}

TEST(Amalgamate, WorkedExample) {
  const PairFunction f = load_f("f_worked4.json");
  const Condition p = load_condition("twin_p.json");
  const Condition q = load_condition("twin_q.json");
  const Condition r = amalgamate(f, p, q);
  EXPECT_EQ(r, load_condition("amalgam_r.json"));
  EXPECT_EQ(r.i(1, 2), (OrdSet{0}));
  EXPECT_TRUE(is_valid(f, r));
  EXPECT_TRUE(leq(r, p));
  EXPECT_TRUE(leq(r, q));
  EXPECT_TRUE(verify_membership_equiv(f, p, q));
  EXPECT_TRUE(g_well_defined(p, q));
}

TEST(Amalgamate, SelfAndDisjointSingletons) {
  const PairFunction f = load_f("f_worked4.json");
  const Condition p = load_condition("amalgam_r.json");
  EXPECT_EQ(amalgamate(f, p, p), p);
  EXPECT_TRUE(verify_membership_equiv(f, p, p));

  const Condition r = amalgamate(f, point_condition(1), point_condition(2));
  EXPECT_EQ(r.domain(), (OrdSet{1, 2}));
  EXPECT_EQ(r.h(1), (OrdSet{1}));
  EXPECT_EQ(r.h(2), (OrdSet{2}));
  EXPECT_EQ(r.i(1, 2), f(1, 2) & OrdSet({1, 2}));
  EXPECT_TRUE(is_valid(f, r));
}

TEST(Amalgamate, RejectsNonTwinsNamingTheClause) {
  const PairFunction f = load_f("f_worked4.json");
  const Condition p = load_condition("twin_p.json");
  const Condition bad = load_condition("twin_q_not_twin.json");
  EXPECT_EQ(code_of([&] { amalgamate(f, p, bad); }), ErrorCode::NotGoodTwins);
  EXPECT_NE(thrown_message([&] { amalgamate(f, p, bad); }).find("1(i)"), std::string::npos);
  EXPECT_NE(thrown_message([&] { amalgamate(load_f("f_empty4.json"), p, load_condition("twin_q.json")); }).find("3"),
            std::string::npos);
  EXPECT_EQ(code_of([&] { verify_membership_equiv(f, p, bad); }), ErrorCode::NotGoodTwins);
}

TEST(Amalgamate, MatchesFormulaOracleOnSampledTwins) {
  Rng rng(55);
  for (int t = 0; t < 500; ++t) {
    const TwinSample s = sample_good_twins(rng);
    const auto F = oracle::of(s.f);
    const auto P = oracle::of(s.p), Q = oracle::of(s.p_prime);
    ASSERT_TRUE(oracle::good_twins(F, P, Q));
    const Condition r = amalgamate(s.f, s.p, s.p_prime);
    const auto R = oracle::of(r);
    EXPECT_TRUE(R == oracle::amalgamate(F, P, Q));
    EXPECT_TRUE(oracle::valid(F, R));
    EXPECT_TRUE(oracle::leq(R, P));
    EXPECT_TRUE(oracle::leq(R, Q));
  }
}

TEST(Amalgamate, InjectedBugIsCaughtWithReplayableWitness) {
  SuiteOptions opt;
  opt.seed = 9;
  opt.trials = 200;
  // Drops the cross-pair i-values, which clause (iv) needs.
  opt.amalgamator = [](const PairFunction& f, const Condition& p, const Condition& q) {
    Condition r = amalgamate(f, p, q);
    for (Ordinal eta : r.domain())
      for (Ordinal xi : r.domain().below_of(eta))
        if (!(p.domain().contains(xi) && p.domain().contains(eta)) &&
            !(q.domain().contains(xi) && q.domain().contains(eta)))
          r.set_i(xi, eta, {});
    return r;
  };
  const SuiteResult res = run_suite("twins-amalgam", opt);
  ASSERT_FALSE(res.ok());
  const PropertyTally* valid = res.find("amalgam valid");
  ASSERT_NE(valid, nullptr);
  EXPECT_GT(valid->fail, 0u);
  ASSERT_FALSE(res.witnesses.empty());
  const Witness& w = res.witnesses.front();
  const Json& payload = w.payload;
  const PairFunction f = pair_function_from_json(payload.at("f"));
  const Condition p = condition_from_json(payload.at("p"));
  const Condition q = condition_from_json(payload.at("q"));
  EXPECT_TRUE(are_good_twins(f, p, q));
  EXPECT_FALSE(is_valid(f, opt.amalgamator(f, p, q)));
  EXPECT_TRUE(is_valid(f, amalgamate(f, p, q)));
  EXPECT_EQ(condition_from_json(payload.at("r")), opt.amalgamator(f, p, q));
  // The recorded trial replays through its own stream.
  Rng replay = Rng::for_trial(opt.seed, w.trial);
  const TwinSample again = sample_good_twins(replay);
  EXPECT_EQ(again.p, p);
  EXPECT_EQ(again.f, f);
}

namespace {

// S={0}, E={1}, F={2,3}; h(2) & h(3) = H(Q u E).
struct Instance {
  PairFunction f{4};
  Condition s;
  InsertionLayout l;
};

Instance minimal(bool cover_s) {
  Instance in;
  in.l.S = {0};
  in.l.E = {1};
  in.l.F = {2, 3};
  in.l.gamma_pairs = {{2, 3}};
  if (cover_s) {
    in.l.Q = {0};
    in.f.set(2, 3, {0, 1});
    in.s = make({0, 1, 2, 3}, {{0, {0}}, {1, {1}}, {2, {0, 1, 2}}, {3, {0, 1, 3}}}, {{2, 3, {0, 1}}});
  } else {
    in.f.set(2, 3, {1});
    in.s = make({0, 1, 2, 3}, {{0, {0}}, {1, {1}}, {2, {1, 2}}, {3, {1, 3}}}, {{2, 3, {1}}});
  }
  return in;
}

}  // namespace

TEST(Insertion, MinimalInstanceAllConclusions) {
  const Instance in = minimal(false);
  ASSERT_TRUE(is_valid(in.f, in.s));
  ASSERT_FALSE(insertion_failure(in.f, in.s, in.l));
  const Condition r = insertion_construction(in.f, in.s, in.l);
  EXPECT_EQ(r.domain(), (OrdSet{0, 1}));
  EXPECT_EQ(r.h(1), (OrdSet{0, 1}));
  EXPECT_EQ(r.h(0), (OrdSet{0}));
  EXPECT_TRUE(is_valid(in.f, r));
  EXPECT_TRUE(leq_restricted(r, restrict(in.s, in.l.S)));
  EXPECT_TRUE(leq_restricted(r, restrict(in.s, in.l.Q | in.l.E)));
  EXPECT_TRUE(r.h(1).contains(0));
  const RestrictedCondition top = restrict(in.s, {0, 1});
  ASSERT_TRUE(top.is_condition);
  EXPECT_TRUE(precedes(top.base, r));
  EXPECT_FALSE(precedes(r, top.base));
}

TEST(Insertion, EmptyCIsTheRestriction) {
  const Instance in = minimal(true);
  ASSERT_TRUE(is_valid(in.f, in.s));
  const Condition r = insertion_construction(in.f, in.s, in.l);
  EXPECT_EQ(r, restrict(in.s, {0, 1}).base);
}

TEST(Insertion, HypothesesCheckedEagerly) {
  Instance in = minimal(false);
  InsertionLayout swapped = in.l;
  swapped.S = {1};
  swapped.E = {0};
  EXPECT_EQ(code_of([&] { insertion_construction(in.f, in.s, swapped); }), ErrorCode::HypothesisViolated);
  EXPECT_EQ(insertion_failure(in.f, in.s, swapped)->first, InsertionHypothesis::Layout);

  Condition s2 = in.s;
  s2.set_h(3, {3});
  EXPECT_EQ(insertion_failure(in.f, s2, in.l)->first, InsertionHypothesis::SameHIntersection);

  PairFunction wide(5);
  Instance big;
  big.l = {{0, 1}, {2}, {3, 4}, {}, {{3, 4}}};
  big.s = make({0, 1, 2, 3, 4}, {{0, {0}}, {1, {1}}, {2, {2}}, {3, {2, 3}}, {4, {2, 4}}});
  EXPECT_FALSE(insertion_failure(wide, big.s, big.l));
  wide.set(1, 2, {0});
  EXPECT_EQ(insertion_failure(wide, big.s, big.l)->first, InsertionHypothesis::SameF);

  InsertionLayout short_f = in.l;
  short_f.F = {2};
  EXPECT_EQ(insertion_failure(in.f, in.s, short_f)->first, InsertionHypothesis::Layout);
}

TEST(Insertion, SampledInstancesMeetConclusions) {
  Rng rng(8080);
  std::size_t with_c = 0;
  for (int t = 0; t < 200; ++t) {
    const InsertionSample ins = sample_insertion(rng, 1 + t % 2);
    const InsertionLayout& l = ins.layout;
    ASSERT_FALSE(insertion_failure(ins.f, ins.s, l));
    ASSERT_TRUE(oracle::valid(oracle::of(ins.f), oracle::of(ins.s)));
    const Condition r = insertion_construction(ins.f, ins.s, l);
    const OrdSet c = l.S - ins.s.h_union(l.Q | l.E);
    with_c += !c.empty();
    EXPECT_TRUE(oracle::valid(oracle::of(ins.f), oracle::of(r)));
    EXPECT_TRUE(c.subset_of(r.h(l.E.min())));
    // (a) and (b) through the oracle on the cut-down conditions.
    for (OrdSet b : {l.S, l.Q | l.E}) {
      const auto R = oracle::of(r);
      const auto B = oracle::of(restrict(ins.s, b).base);
      const auto bs = oracle::of(b);
      for (unsigned x : bs) EXPECT_EQ(oracle::meet(R.H(x), bs), B.H(x));
      for (unsigned x : bs)
        for (unsigned y : bs) {
          if (x < y) {
            EXPECT_EQ(R.I(x, y), B.I(x, y));
          }
        }
    }
    EXPECT_TRUE(oracle::precedes(oracle::of(restrict(ins.s, l.S | l.E).base), oracle::of(r)));
  }
  EXPECT_GT(with_c, 100u);
}
