// pforce: command-line front end. Every command prints a report to standard
// output; exit status 0 on success, 1 when a checked property fails, 2 on
// bad input.

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pforce/amalgam.hpp"
#include "pforce/error.hpp"
#include "pforce/filter.hpp"
#include "pforce/fu_poset.hpp"
#include "pforce/props.hpp"
#include "pforce/report.hpp"
#include "pforce/serialize.hpp"
#include "pforce/space.hpp"
#include "pforce/universe.hpp"

using namespace pforce;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

struct Common {
  std::uint64_t seed = 0;
  std::string out;
  bool quiet = false;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Json load(RunReport& rep, const std::string& name, const std::string& path) {
  const std::string text = slurp(path);
  rep.file(name, path, text);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

/// "1,3,4" -> {1,3,4}; the empty string is the empty set.
OrdSet parse_set(const std::string& text, const std::string& what) {
  OrdSet out;
  std::optional<Ordinal> prev;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find(',', pos), text.size());
    unsigned v = 0;
    const auto r = std::from_chars(text.data() + pos, text.data() + end, v);
    if (r.ec != std::errc{} || r.ptr != text.data() + end)
      throw Error(ErrorCode::ParseError, what + ": \"" + text + "\" is not a comma-separated ordinal list");
    if (v >= kMaxKappa) throw Error(ErrorCode::OutOfUniverse, what + ": ordinal " + std::to_string(v) + " >= 64");
    if (prev && v <= *prev) throw Error(ErrorCode::ParseError, what + ": members must be strictly ascending");
    prev = v;
    out.insert(v);
    pos = end + 1;
  }
  return out;
}

/// "0,1;2;" -> [{0,1}, {2}, {}]
std::vector<OrdSet> parse_set_list(const std::string& text, const std::string& what) {
  std::vector<OrdSet> out;
  if (text.empty()) return out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t end = std::min(text.find(';', pos), text.size());
    out.push_back(parse_set(text.substr(pos, end - pos), what));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

void emit(const RunReport& rep, const Common& c) {
  if (!c.quiet) std::cout << to_text(rep.to_json());
}

int finish(const RunReport& rep, const Common& c) {
  emit(rep, c);
  return rep.ok() ? 0 : kExitFail;
}

/// Writes the artifact to --out, or embeds it in the report.
void deliver(RunReport& rep, const Common& c, const std::string& key, const Json& doc) {
  if (c.out.empty()) {
    rep.result[key] = doc;
  } else {
    write_text_file(c.out, to_text(doc));
    rep.result["written"] = c.out;
  }
}

Json violations_json(const ValidityReport& v) {
  Json arr = Json::array();
  for (const auto& x : v.violations) {
    Json j;
    j["clause"] = std::string(to_string(x.clause));
    j["xi"] = x.xi;
    if (x.eta) j["eta"] = *x.eta;
    j["detail"] = x.detail;
    arr.push_back(j);
  }
  return arr;
}

void record_validity(RunReport& rep, const std::string& prefix, const ValidityReport& v) {
  for (Clause c : {Clause::I, Clause::II, Clause::III, Clause::IV}) {
    ValidityReport only;
    for (const auto& x : v.violations)
      if (x.clause == c) only.violations.push_back(x);
    Json w;
    w["violations"] = violations_json(only);
    rep.record(prefix + "clause (" + std::string(to_string(c)) + ")", only.valid(), w);
  }
}

Json histogram_json(const CantorBendixson& cb) {
  Json h = Json::array();
  for (const auto& [rank, n] : rank_histogram(cb)) h.push_back(Json::array({rank, n}));
  return h;
}

void space_report(RunReport& rep, const SpaceModel& s, const std::vector<Goal>* goals) {
  const CheckResult rs = check_right_separated(s);
  Json w1;
  Json bad = Json::array();
  for (const auto& x : rs.counterexamples) bad.push_back(x.alpha);
  w1["alpha"] = bad;
  rep.record("max H(alpha) = alpha", rs.ok, w1);
  const CheckResult st = check_star_containment(s);
  Json w2 = Json::array();
  for (const auto& x : st.counterexamples) w2.push_back(Json::array({x.alpha, x.beta, x.detail}));
  rep.record("star containment", st.ok, w2);
  rep.record("loc-comp hypothesis", check_loc_comp_hypothesis(s));
  for (Ordinal x = 0; x < s.kappa; ++x) {
    const CompactnessReport c = compactness_by_subbase(s, x);
    Json w;
    w["alpha"] = x;
    if (c.failure) w["at"] = Json::array({c.failure->first, c.failure->second});
    rep.record("compact by subbase", c.ok, w);
  }
  if (goals) {
    Json w = Json::array();
    const auto unmet = unmet_neighbourhood_goals(s, *goals);
    for (const auto& g : unmet) w.push_back(describe(Goal{g}));
    rep.record("scheduled Z met by U(beta; b)", unmet.empty(), w);
  }
  rep.result["coherent"] = is_coherent(s);
  const CantorBendixson cb = cantor_bendixson(s);
  rep.result["cb_histogram"] = histogram_json(cb);
  rep.result["cb_kernel"] = to_json(cb.kernel);
}

// ---- commands ---------------------------------------------------------------

struct GenF {
  std::size_t kappa = 1;
  double density = 0.5;
};

int cmd_gen_f(const GenF& g, const Common& c) {
  RunReport rep;
  rep.command = "gen-f";
  rep.seed = c.seed;
  rep.flag("kappa", g.kappa);
  rep.flag("density", g.density);
  rep.flag("seed", c.seed);
  const PairFunction f = random_pair_function(g.kappa, g.density, c.seed);
  std::size_t nonempty = 0;
  for (Ordinal b = 0; b < f.kappa(); ++b)
    for (Ordinal a = 0; a < b; ++a) nonempty += !f(a, b).empty();
  rep.result["nonempty_pairs"] = nonempty;
  deliver(rep, c, "f", to_json(f));
  return finish(rep, c);
}

struct Files {
  std::string f, cond, p, q, schedule, space, family;
};

PairFunction load_f(RunReport& rep, const Files& in) { return pair_function_from_json(load(rep, "f", in.f)); }

int cmd_validate(const Files& in, const Common& c) {
  RunReport rep;
  rep.command = "validate";
  rep.seed = c.seed;
  const PairFunction f = load_f(rep, in);
  const Condition p = condition_from_json(load(rep, "cond", in.cond));
  const ValidityReport v = validate_condition(f, p);
  record_validity(rep, "", v);
  rep.result["valid"] = v.valid();
  rep.result["violations"] = violations_json(v);
  return finish(rep, c);
}

int cmd_twins(const Files& in, const Common& c) {
  RunReport rep;
  rep.command = "twins";
  rep.seed = c.seed;
  const PairFunction f = load_f(rep, in);
  const Condition p = condition_from_json(load(rep, "p", in.p));
  const Condition q = condition_from_json(load(rep, "q", in.q));
  const auto bad = good_twin_failure(f, p, q);
  Json w;
  if (bad) w["clause"] = std::string(to_string(*bad));
  rep.record("good twins", !bad, w);
  if (auto e = are_twins(p, q)) {
    Json m = Json::array();
    for (auto [x, y] : e->e) m.push_back(Json::array({x, y}));
    rep.result["e"] = m;
    rep.result["common"] = to_json(e->common);
  }
  rep.result["failed_clause"] = bad ? Json(std::string(to_string(*bad))) : Json(nullptr);
  return finish(rep, c);
}

int cmd_amalgamate(const Files& in, const Common& c) {
  RunReport rep;
  rep.command = "amalgamate";
  rep.seed = c.seed;
  const PairFunction f = load_f(rep, in);
  const Condition p = condition_from_json(load(rep, "p", in.p));
  const Condition q = condition_from_json(load(rep, "q", in.q));
  if (const auto bad = good_twin_failure(f, p, q)) {
    Json w;
    w["clause"] = std::string(to_string(*bad));
    rep.record("good twins", false, w);
    rep.result["error"] = std::string(to_string(ErrorCode::NotGoodTwins)) + ": clause " + std::string(to_string(*bad));
    return finish(rep, c);
  }
  rep.record("good twins", true);
  const Condition r = amalgamate(f, p, q);
  record_validity(rep, "amalgam ", validate_condition(f, r));
  rep.record("amalgam leq p", leq(r, p));
  rep.record("amalgam leq q", leq(r, q));
  deliver(rep, c, "r", to_json(r));
  return finish(rep, c);
}

struct CloseArgs {
  std::string k, k_prime;
};

int cmd_close(const Files& in, const CloseArgs& a, const Common& c) {
  RunReport rep;
  rep.command = "close";
  rep.seed = c.seed;
  const PairFunction f = load_f(rep, in);
  rep.flag("K", a.k);
  rep.flag("K_prime", a.k_prime);
  const OrdSet k = parse_set(a.k, "--K");
  const OrdSet kp = parse_set(a.k_prime, "--K-prime");
  f.universe().require(k | kp, "K | K'");
  const ClosureResult r = cl_f(f, k, kp);
  rep.record("K inside closure", k.subset_of(r.closure));
  if (!k.empty()) rep.record("max closure = max K", r.closure.max() == k.max());
  bool closed = true;
  for (Ordinal xi : r.closure)
    for (Ordinal eta : r.closure | kp)
      if (xi != eta && !f(xi, eta).subset_of(r.closure)) closed = false;
  rep.record("closed under f", closed);
  rep.result["closure"] = to_json(r.closure);
  rep.result["iterations"] = r.iterations;
  return finish(rep, c);
}

struct LowerBoundArgs {
  std::size_t n = 2;
};

/// Family file: {"B": [...], "c": [[...], ...]}.
int cmd_lower_bound(const Files& in, const LowerBoundArgs& a, const Common& c) {
  RunReport rep;
  rep.command = "lower-bound";
  rep.seed = c.seed;
  const PairFunction f = load_f(rep, in);
  const Json fam = load(rep, "family", in.family);
  rep.flag("n", a.n);
  if (!fam.is_object() || !fam.contains("B") || !fam.contains("c") || !fam["c"].is_array())
    throw Error(ErrorCode::ParseError, "family: expected {\"B\": [...], \"c\": [[...], ...]}");
  const OrdSet b = ordset_from_json(fam["B"], "B");
  std::vector<OrdSet> cs;
  for (const auto& e : fam["c"]) cs.push_back(ordset_from_json(e, "c"));
  const auto found = search_common_lower_bound(f, cs, b, a.n);
  Json w;
  w["n"] = a.n;
  w["family_size"] = cs.size();
  rep.record("common lower bound found", found.has_value(), w);
  if (found) {
    Json idx = Json::array();
    for (auto k : *found) idx.push_back(k);
    rep.result["indices"] = idx;
  } else {
    rep.result["indices"] = nullptr;
  }
  return finish(rep, c);
}

struct SampleArgs {
  std::optional<std::size_t> kappa;
  bool least = false;
};

int cmd_sample_space(const Files& in, const SampleArgs& a, const Common& c) {
  RunReport rep;
  rep.command = "sample-space";
  rep.seed = c.seed;
  rep.flag("seed", c.seed);
  const PairFunction f = load_f(rep, in);
  const std::vector<Goal> goals = schedule_from_json(load(rep, "schedule", in.schedule));
  const std::size_t kappa = a.kappa.value_or(f.kappa());
  rep.flag("kappa", kappa);
  rep.flag("least", a.least);
  const FilterSample sample =
      sample_filter(f, kappa, goals, c.seed, a.least ? ChoicePolicy::Least : ChoicePolicy::Seeded);
  const SpaceModel s = assemble_space(sample);
  space_report(rep, s, &goals);
  Json log = Json::array();
  for (const auto& e : sample.schedule_log) {
    Json j;
    j["goal"] = describe(e.goal);
    j["action"] = e.action == GoalAction::Extended ? "extended" : "already satisfied";
    if (e.inserted) j["inserted"] = *e.inserted;
    log.push_back(j);
  }
  rep.result["schedule_log"] = log;
  rep.result["domain"] = to_json(sample.last().domain());
  deliver(rep, c, "space", to_json(s));
  return finish(rep, c);
}

int cmd_check_space(const Files& in, const Common& c) {
  RunReport rep;
  rep.command = "check-space";
  rep.seed = c.seed;
  const SpaceModel s = space_from_json(load(rep, "space", in.space));
  std::optional<std::vector<Goal>> goals;
  if (!in.schedule.empty()) goals = schedule_from_json(load(rep, "schedule", in.schedule));
  space_report(rep, s, goals ? &*goals : nullptr);
  return finish(rep, c);
}

struct FuArgs {
  std::string A, C;
  Ordinal alpha = 0;
};

int cmd_fu_sim(const Files& in, const FuArgs& a, const Common& c) {
  RunReport rep;
  rep.command = "fu-sim";
  rep.seed = c.seed;
  rep.flag("seed", c.seed);
  const SpaceModel s = space_from_json(load(rep, "space", in.space));
  rep.flag("A", a.A);
  rep.flag("alpha", a.alpha);
  rep.flag("C", a.C);
  const OrdSet A = parse_set(a.A, "--A");
  const std::vector<OrdSet> cs = parse_set_list(a.C, "--C");
  const FUSimulation sim = fu_simulate(s, A, a.alpha, cs, c.seed);
  const FUPoset q(s, A, a.alpha);
  bool descends = true;
  for (std::size_t k = 1; k < sim.chain.size(); ++k) descends &= q.leq(sim.chain[k], sim.chain[k - 1]);
  rep.record("chain descends", descends);
  for (std::size_t j = 0; j < cs.size(); ++j) {
    bool inside = true;
    for (std::size_t k = j; k < sim.sequence.size(); ++k) inside &= s.U(a.alpha, cs[j]).contains(sim.sequence[k]);
    Json w;
    w["step"] = j;
    rep.record("suffix converges into U(alpha; C)", inside, w);
  }
  Json seq = Json::array();
  for (Ordinal x : sim.sequence) seq.push_back(x);
  rep.result["sequence"] = seq;
  Json chain = Json::array();
  for (const auto& x : sim.chain) chain.push_back(Json::array({to_json(x.s), to_json(x.C)}));
  rep.result["chain"] = chain;
  return finish(rep, c);
}

struct PropsArgs {
  std::string suite;
  std::size_t trials = 0;
  std::size_t jobs = 1;
  bool random = false;
};

int cmd_props(const Files& in, const PropsArgs& a, const Common& c) {
  RunReport rep;
  rep.command = "props";
  rep.seed = c.seed;
  rep.flag("suite", a.suite);
  rep.flag("trials", a.trials);
  rep.flag("seed", c.seed);
  SuiteOptions opt;
  opt.seed = c.seed;
  opt.trials = a.trials;
  opt.jobs = a.jobs;
  if (!in.f.empty()) opt.f = load_f(rep, in);
  absorb(rep, run_suite(a.suite, opt));
  return finish(rep, c);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pforce: finite models of the pair-function forcing construction"};
  app.require_subcommand(1);
  Common common;
  Files files;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "RNG seed")->capture_default_str();
    sub->add_flag("--quiet", common.quiet, "suppress the report on standard output");
  };
  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", common.out, "output file"); };
  auto need_f = [&](CLI::App* sub) { sub->add_option("--f", files.f, "pair-function file")->required(); };

  GenF gen;
  auto* gen_f = app.add_subcommand("gen-f", "write a random pair-function");
  gen_f->add_option("--kappa", gen.kappa, "carrier size")->required()->check(CLI::Range(1, 64));
  gen_f->add_option("--density", gen.density, "per-ordinal inclusion chance")->check(CLI::Range(0.0, 1.0));
  add_common(gen_f);
  add_out(gen_f);

  auto* validate = app.add_subcommand("validate", "check a condition against every validity clause");
  need_f(validate);
  validate->add_option("--cond", files.cond, "condition file")->required();
  add_common(validate);

  auto* amalg = app.add_subcommand("amalgamate", "amalgamate two good twins");
  need_f(amalg);
  amalg->add_option("--p", files.p, "first condition")->required();
  amalg->add_option("--q", files.q, "second condition")->required();
  add_common(amalg);
  add_out(amalg);

  auto* twins = app.add_subcommand("twins", "report whether two conditions are good twins");
  need_f(twins);
  twins->add_option("--p", files.p, "first condition")->required();
  twins->add_option("--q", files.q, "second condition")->required();
  add_common(twins);

  CloseArgs close_args;
  auto* close = app.add_subcommand("close", "closure of K relative to K'");
  need_f(close);
  close->add_option("--K", close_args.k, "comma-separated ordinals")->required();
  close->add_option("--K-prime", close_args.k_prime, "comma-separated ordinals");
  add_common(close);

  LowerBoundArgs lb_args;
  auto* lower = app.add_subcommand("lower-bound", "search n indices of a family with pairwise good pairs");
  need_f(lower);
  lower->add_option("--family", files.family, "family file {\"B\", \"c\"}")->required();
  lower->add_option("--n", lb_args.n, "number of indices")->capture_default_str();
  add_common(lower);

  SampleArgs sample_args;
  auto* sample = app.add_subcommand("sample-space", "sample a filter along a schedule and assemble the space");
  need_f(sample);
  sample->add_option("--schedule", files.schedule, "goal schedule file")->required();
  sample->add_option("--kappa", sample_args.kappa, "carrier size (default: that of f)")->check(CLI::Range(1, 64));
  sample->add_flag("--least", sample_args.least, "insert the least eligible point instead of a seeded choice");
  add_common(sample);
  add_out(sample);

  auto* check = app.add_subcommand("check-space", "run the structural checks on a space file");
  check->add_option("--space", files.space, "space file")->required();
  check->add_option("--schedule", files.schedule, "schedule whose neighbourhood goals to check");
  add_common(check);

  FuArgs fu_args;
  auto* fu = app.add_subcommand("fu-sim", "simulate the sequence added by Q(A, alpha)");
  fu->add_option("--space", files.space, "space file")->required();
  fu->add_option("--A", fu_args.A, "comma-separated ordinals")->required();
  fu->add_option("--alpha", fu_args.alpha, "the point alpha")->required();
  fu->add_option("--C", fu_args.C, "schedule of C sets, ';'-separated, each comma-separated");
  add_common(fu);

  PropsArgs props_args;
  auto* props = app.add_subcommand("props", "run a named property suite");
  props->add_option("--suite", props_args.suite, "suite name")->required();
  props->add_option("--trials", props_args.trials, "number of trials (default: per suite)");
  props->add_option("--jobs", props_args.jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  auto* f_opt = props->add_option("--f", files.f, "fixed pair-function file");
  props->add_flag("--random", props_args.random, "draw pair-functions at random (default)")->excludes(f_opt);
  add_common(props);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*gen_f) return cmd_gen_f(gen, common);
    if (*validate) return cmd_validate(files, common);
    if (*amalg) return cmd_amalgamate(files, common);
    if (*twins) return cmd_twins(files, common);
    if (*close) return cmd_close(files, close_args, common);
    if (*lower) return cmd_lower_bound(files, lb_args, common);
    if (*sample) return cmd_sample_space(files, sample_args, common);
    if (*check) return cmd_check_space(files, common);
    if (*fu) return cmd_fu_sim(files, fu_args, common);
    if (*props) return cmd_props(files, props_args, common);
  } catch (const Error& e) {
    std::cerr << "pforce: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "pforce: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
