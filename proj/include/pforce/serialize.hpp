#pragma once

// JSON forms of pair-functions, conditions, spaces, goal schedules and
// insertion layouts. Parsing is strict: sets list ascending ordinals, pairs
// are written (alpha, beta) with alpha < beta, and every ordinal is checked
// against the relevant universe.

#include <fstream>
#include <sstream>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "amalgam.hpp"
#include "error.hpp"
#include "filter.hpp"
#include "ordset.hpp"
#include "poset.hpp"
#include "space.hpp"
#include "universe.hpp"

namespace pforce {

using Json = nlohmann::ordered_json;

namespace detail {

inline bool is_flat(const Json& j) {
  if (!j.is_array()) return false;
  for (const auto& e : j)
    if (e.is_structured() && !(e.is_array() && e.empty())) {
      // Arrays of flat arrays stay inline as well, e.g. [3, 5, [0, 1]].
      if (!e.is_array()) return false;
      for (const auto& x : e)
        if (x.is_structured()) return false;
    }
  return true;
}

inline void print(std::ostringstream& out, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out << "{}";
      return;
    }
    out << "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) out << ",\n";
      first = false;
      out << inner << Json(it.key()).dump() << ": ";
      print(out, it.value(), indent + 1);
    }
    out << "\n" << pad << "}";
  } else if (j.is_array() && !is_flat(j)) {
    out << "[\n";
    for (std::size_t k = 0; k < j.size(); ++k) {
      if (k) out << ",\n";
      out << inner;
      print(out, j[k], indent + 1);
    }
    out << "\n" << pad << "]";
  } else if (j.is_array()) {
    out << "[";
    for (std::size_t k = 0; k < j.size(); ++k) {
      if (k) out << ", ";
      print(out, j[k], indent + 1);
    }
    out << "]";
  } else {
    out << j.dump();
  }
}

[[noreturn]] inline void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline Ordinal ordinal(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    parse_fail(where + ": expected a non-negative integer");
  const auto v = j.get<unsigned long long>();
  if (v >= kMaxKappa) throw Error(ErrorCode::OutOfUniverse, where + ": ordinal " + std::to_string(v) + " >= 64");
  return static_cast<Ordinal>(v);
}

inline std::size_t count(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    parse_fail(where + ": expected a non-negative integer");
  return j.get<std::size_t>();
}

inline std::pair<Ordinal, Ordinal> pair_of(const Json& a, const Json& b, const std::string& where) {
  const Ordinal x = ordinal(a, where);
  const Ordinal y = ordinal(b, where);
  if (x >= y) parse_fail(where + ": pair must be written (alpha, beta) with alpha < beta");
  return {x, y};
}

/// Rejects pair lists that are not strictly ascending in (alpha, beta).
class PairOrder {
 public:
  explicit PairOrder(std::string where) : where_(std::move(where)) {}
  void next(std::pair<Ordinal, Ordinal> p) {
    if (prev_ && p <= *prev_) parse_fail(where_ + ": pairs must be listed once each, ascending in (alpha, beta)");
    prev_ = p;
  }

 private:
  std::string where_;
  std::optional<std::pair<Ordinal, Ordinal>> prev_;
};

}  // namespace detail

/// Indented text where arrays of scalars stay on one line.
inline std::string to_text(const Json& j) {
  std::ostringstream out;
  detail::print(out, j, 0);
  out << "\n";
  return out.str();
}

inline Json to_json(OrdSet s) {
  Json j = Json::array();
  for (Ordinal x : s) j.push_back(x);
  return j;
}

inline OrdSet ordset_from_json(const Json& j, const std::string& where = "set") {
  if (!j.is_array()) detail::parse_fail(where + ": expected an array");
  OrdSet out;
  std::optional<Ordinal> prev;
  for (const auto& e : j) {
    const Ordinal x = detail::ordinal(e, where);
    if (prev && x <= *prev) detail::parse_fail(where + ": members must be strictly ascending");
    prev = x;
    out.insert(x);
  }
  return out;
}

/// {"kappa": k, "f": [[alpha, beta, [...]], ...]} listing nonempty values.
inline Json to_json(const PairFunction& f) {
  Json j;
  j["kappa"] = f.kappa();
  Json vals = Json::array();
  for (Ordinal a = 0; a < f.kappa(); ++a)
    for (Ordinal b = a + 1; b < f.kappa(); ++b)
      if (!f(a, b).empty()) vals.push_back(Json::array({a, b, to_json(f(a, b))}));
  j["f"] = vals;
  return j;
}

inline PairFunction pair_function_from_json(const Json& j) {
  const std::size_t kappa = detail::count(detail::field(j, "kappa"), "kappa");
  if (kappa < 1 || kappa > kMaxKappa) throw Error(ErrorCode::OutOfUniverse, "kappa must be in [1, 64]");
  PairFunction f(kappa);
  const Json& vals = detail::field(j, "f");
  if (!vals.is_array()) detail::parse_fail("f: expected an array");
  detail::PairOrder order("f");
  for (const auto& e : vals) {
    if (!e.is_array() || e.size() != 3) detail::parse_fail("f: entries are [alpha, beta, set]");
    const auto [a, b] = detail::pair_of(e[0], e[1], "f");
    order.next({a, b});
    if (b >= kappa) throw Error(ErrorCode::OutOfUniverse, "f: pair above kappa");
    f.set(a, b, ordset_from_json(e[2], "f{" + std::to_string(a) + "," + std::to_string(b) + "}"));
  }
  return f;
}

/// {"a": [...], "h": [[xi, [...]], ...], "i": [[xi, eta, [...]], ...]} with
/// every point of a in h and every pair of [a]^2 in i.
inline Json to_json(const Condition& p) {
  Json j;
  j["a"] = to_json(p.domain());
  Json h = Json::array();
  for (Ordinal xi : p.domain()) h.push_back(Json::array({xi, to_json(p.h(xi))}));
  j["h"] = h;
  Json i = Json::array();
  for (Ordinal xi : p.domain())
    for (Ordinal eta : p.domain() - OrdSet::below(xi + 1)) i.push_back(Json::array({xi, eta, to_json(p.i(xi, eta))}));
  j["i"] = i;
  return j;
}

/// Entries of h or i outside the domain are rejected; omitted entries are empty.
inline Condition condition_from_json(const Json& j) {
  Condition p;
  const OrdSet a = ordset_from_json(detail::field(j, "a"), "a");
  p.set_domain(a);
  const Json& h = detail::field(j, "h");
  if (!h.is_array()) detail::parse_fail("h: expected an array");
  OrdSet seen;
  for (const auto& e : h) {
    if (!e.is_array() || e.size() != 2) detail::parse_fail("h: entries are [xi, set]");
    const Ordinal xi = detail::ordinal(e[0], "h");
    if (!a.contains(xi)) detail::parse_fail("h: " + std::to_string(xi) + " is not in a");
    if (!seen.empty() && xi <= seen.max()) detail::parse_fail("h: entries must be strictly ascending in xi");
    seen.insert(xi);
    p.set_h(xi, ordset_from_json(e[1], "h(" + std::to_string(xi) + ")"));
  }
  const Json& is = detail::field(j, "i");
  if (!is.is_array()) detail::parse_fail("i: expected an array");
  detail::PairOrder order("i");
  for (const auto& e : is) {
    if (!e.is_array() || e.size() != 3) detail::parse_fail("i: entries are [xi, eta, set]");
    const auto [x, y] = detail::pair_of(e[0], e[1], "i");
    order.next({x, y});
    if (!a.contains(x) || !a.contains(y)) detail::parse_fail("i: pair outside a");
    p.set_i(x, y, ordset_from_json(e[2], "i{" + std::to_string(x) + "," + std::to_string(y) + "}"));
  }
  return p;
}

/// {"kappa": k, "H": [[alpha, [...]], ...], "i": [[alpha, beta, [...]], ...]}.
inline Json to_json(const SpaceModel& s) {
  Json j;
  j["kappa"] = s.kappa;
  Json h = Json::array();
  for (Ordinal x = 0; x < s.kappa; ++x) h.push_back(Json::array({x, to_json(s.H[x])}));
  j["H"] = h;
  Json i = Json::array();
  for (Ordinal a = 0; a < s.kappa; ++a)
    for (Ordinal b = a + 1; b < s.kappa; ++b)
      if (!s.i(a, b).empty()) i.push_back(Json::array({a, b, to_json(s.i(a, b))}));
  j["i"] = i;
  return j;
}

inline SpaceModel space_from_json(const Json& j) {
  SpaceModel s;
  s.kappa = detail::count(detail::field(j, "kappa"), "kappa");
  if (s.kappa < 1 || s.kappa > kMaxKappa) throw Error(ErrorCode::OutOfUniverse, "kappa must be in [1, 64]");
  const Json& h = detail::field(j, "H");
  if (!h.is_array() || h.size() != s.kappa) detail::parse_fail("H: expected one entry per alpha < kappa");
  for (std::size_t x = 0; x < s.kappa; ++x) {
    const Json& e = h[x];
    if (!e.is_array() || e.size() != 2) detail::parse_fail("H: entries are [alpha, set]");
    if (detail::ordinal(e[0], "H") != x) detail::parse_fail("H: entries must list alpha = 0, 1, ... in order");
    const OrdSet v = ordset_from_json(e[1], "H(" + std::to_string(x) + ")");
    if (!v.subset_of(s.carrier())) throw Error(ErrorCode::OutOfUniverse, "H(" + std::to_string(x) + ") leaves kappa");
    s.H.push_back(v);
  }
  const Json& is = detail::field(j, "i");
  if (!is.is_array()) detail::parse_fail("i: expected an array");
  std::vector<std::tuple<Ordinal, Ordinal, OrdSet>> entries;
  detail::PairOrder order("i");
  for (const auto& e : is) {
    if (!e.is_array() || e.size() != 3) detail::parse_fail("i: entries are [alpha, beta, set]");
    const auto [a, b] = detail::pair_of(e[0], e[1], "i");
    order.next({a, b});
    const OrdSet v = ordset_from_json(e[2], "i");
    if (b >= s.kappa || !v.subset_of(s.carrier())) throw Error(ErrorCode::OutOfUniverse, "i: outside kappa");
    entries.emplace_back(a, b, v);
  }
  s.i_final.set_domain(s.carrier());
  for (const auto& [a, b, v] : entries) s.i_final.set_i(a, b, v);
  return s;
}

/// [{"point": alpha} | {"nbhd": {"beta": .., "b": [...], "Z": [...]}}, ...]
inline Json to_json(const std::vector<Goal>& goals) {
  Json j = Json::array();
  for (const Goal& g : goals) {
    Json e;
    if (const auto* pt = std::get_if<PointGoal>(&g)) {
      e["point"] = pt->alpha;
    } else {
      const auto& nb = std::get<NbhdGoal>(g);
      Json body;
      body["beta"] = nb.beta;
      body["b"] = to_json(nb.b);
      body["Z"] = to_json(nb.Z);
      e["nbhd"] = body;
    }
    j.push_back(e);
  }
  return j;
}

inline std::vector<Goal> schedule_from_json(const Json& j) {
  if (!j.is_array()) detail::parse_fail("schedule: expected an array");
  std::vector<Goal> goals;
  for (const auto& e : j) {
    if (e.is_object() && e.size() == 1 && e.contains("point")) {
      goals.emplace_back(PointGoal{detail::ordinal(e["point"], "point")});
    } else if (e.is_object() && e.size() == 1 && e.contains("nbhd")) {
      const Json& nb = e["nbhd"];
      goals.emplace_back(NbhdGoal{detail::ordinal(detail::field(nb, "beta"), "beta"),
                                  ordset_from_json(detail::field(nb, "b"), "b"),
                                  ordset_from_json(detail::field(nb, "Z"), "Z")});
    } else {
      detail::parse_fail("schedule: entries are {\"point\": ..} or {\"nbhd\": {..}}");
    }
  }
  return goals;
}

inline Json to_json(const InsertionLayout& l) {
  Json j;
  j["S"] = to_json(l.S);
  j["E"] = to_json(l.E);
  j["F"] = to_json(l.F);
  j["Q"] = to_json(l.Q);
  Json g = Json::array();
  for (auto [g0, g1] : l.gamma_pairs) g.push_back(Json::array({g0, g1}));
  j["gamma_pairs"] = g;
  return j;
}

inline InsertionLayout layout_from_json(const Json& j) {
  InsertionLayout l;
  l.S = ordset_from_json(detail::field(j, "S"), "S");
  l.E = ordset_from_json(detail::field(j, "E"), "E");
  l.F = ordset_from_json(detail::field(j, "F"), "F");
  l.Q = ordset_from_json(detail::field(j, "Q"), "Q");
  const Json& g = detail::field(j, "gamma_pairs");
  if (!g.is_array()) detail::parse_fail("gamma_pairs: expected an array");
  for (const auto& e : g) {
    if (!e.is_array() || e.size() != 2) detail::parse_fail("gamma_pairs: entries are [g0, g1]");
    l.gamma_pairs.emplace_back(detail::ordinal(e[0], "gamma_pairs"), detail::ordinal(e[1], "gamma_pairs"));
  }
  return l;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << text;
}

}  // namespace pforce
