#pragma once

// Ground-model combinatorics on a finite carrier {0, ..., kappa-1}:
// pair-functions, goodness of pairs of finite sets, the closure operator
// cl_f, and the common-lower-bound search.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "ordset.hpp"
#include "rng.hpp"

namespace pforce {

/// The finite carrier; every ordinal in play is below kappa.
struct Universe {
  std::size_t kappa = 1;

  OrdSet carrier() const { return OrdSet::below(static_cast<Ordinal>(kappa)); }
  bool contains(OrdSet s) const { return s.subset_of(carrier()); }

  void require(OrdSet s, const char* what) const {
    if (!contains(s))
      throw Error(ErrorCode::OutOfUniverse,
                  std::string(what) + " " + s.str() + " not below kappa=" + std::to_string(kappa));
  }

  bool operator==(const Universe&) const = default;
};

inline Universe make_universe(std::size_t kappa) {
  if (kappa < 1 || kappa > kMaxKappa)
    throw Error(ErrorCode::OutOfUniverse,
                "kappa must lie in [1, " + std::to_string(kMaxKappa) + "], got " + std::to_string(kappa));
  return Universe{kappa};
}

/// Total map on unordered pairs {alpha, beta} below kappa with f{alpha,beta}
/// contained in min(alpha, beta). Unset pairs hold the empty set.
class PairFunction {
 public:
  PairFunction() : PairFunction(1) {}
  explicit PairFunction(std::size_t kappa)
      : universe_(make_universe(kappa)), values_(pair_count(kappa)) {}

  std::size_t kappa() const { return universe_.kappa; }
  const Universe& universe() const { return universe_; }

  OrdSet operator()(Ordinal a, Ordinal b) const { return values_[index(a, b)]; }

  /// Throws PreconditionViolated unless value lies below min(a, b).
  void set(Ordinal a, Ordinal b, OrdSet value) {
    const auto i = index(a, b);
    if (!value.subset_of(OrdSet::below(std::min(a, b))))
      throw Error(ErrorCode::PreconditionViolated,
                  "f{" + std::to_string(a) + "," + std::to_string(b) + "}=" + value.str() +
                      " must lie below " + std::to_string(std::min(a, b)));
    values_[i] = value;
  }
  /// f{a,b} := f{a,b} | extra.
  void enlarge(Ordinal a, Ordinal b, OrdSet extra) { set(a, b, (*this)(a, b) | extra); }

  bool operator==(const PairFunction&) const = default;

 private:
  std::size_t index(Ordinal a, Ordinal b) const {
    if (a == b || a >= kappa() || b >= kappa())
      throw Error(ErrorCode::OutOfUniverse, "no pair {" + std::to_string(a) + "," + std::to_string(b) +
                                                "} below kappa=" + std::to_string(kappa()));
    return a < b ? pair_index(a, b) : pair_index(b, a);
  }

  Universe universe_;
  std::vector<OrdSet> values_;
};

/// Each gamma < min(alpha, beta) joins f{alpha,beta} with probability density.
inline PairFunction random_pair_function(std::size_t kappa, double density, std::uint64_t seed) {
  PairFunction f(kappa);
  Rng rng(seed);
  const auto k = static_cast<Ordinal>(kappa);
  for (Ordinal a = 0; a < k; ++a)
    for (Ordinal b = a + 1; b < k; ++b) f.set(a, b, rng.subset(OrdSet::below(a), density));
  return f;
}

/// Goodness of the pair (x, y) for f: for alpha in x&y, beta in x-y, gamma in y-x,
///   (a) alpha < beta, gamma  implies  alpha in f{beta,gamma}
///   (b) alpha < beta         implies  f{alpha,gamma} <= f{beta,gamma}
///   (c) alpha < gamma        implies  f{alpha,beta} <= f{gamma,beta}
inline bool is_good_pair(const PairFunction& f, OrdSet x, OrdSet y) {
  f.universe().require(x, "set");
  f.universe().require(y, "set");
  const OrdSet common = x & y;
  const OrdSet only_x = x - y;
  const OrdSet only_y = y - x;
  for (Ordinal alpha : common)
    for (Ordinal beta : only_x)
      for (Ordinal gamma : only_y) {
        const OrdSet f_bg = f(beta, gamma);
        if (alpha < beta && alpha < gamma && !f_bg.contains(alpha)) return false;
        if (alpha < beta && !f(alpha, gamma).subset_of(f_bg)) return false;
        if (alpha < gamma && !f(alpha, beta).subset_of(f_bg)) return false;
      }
  return true;
}

/// Lexicographically least (i, j), i < j, with family[i], family[j] good for f.
inline std::optional<std::pair<std::size_t, std::size_t>> find_good_pair(const PairFunction& f,
                                                                         const std::vector<OrdSet>& family) {
  for (OrdSet s : family) f.universe().require(s, "family member");
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = i + 1; j < family.size(); ++j)
      if (is_good_pair(f, family[i], family[j])) return std::pair{i, j};
  return std::nullopt;
}

struct ClosureResult {
  OrdSet closure;
  /// Rounds that added at least one ordinal.
  std::size_t iterations = 0;
};

/// Least fixed point of K -> K | U{ f{xi,eta} : xi in K, eta in K | K', xi != eta }.
inline ClosureResult cl_f(const PairFunction& f, OrdSet k, OrdSet k_prime) {
  f.universe().require(k, "K");
  f.universe().require(k_prime, "K'");
  ClosureResult result{k, 0};
  while (true) {
    const OrdSet stage = result.closure;
    OrdSet next = stage;
    const OrdSet partners = stage | k_prime;
    for (Ordinal xi : stage)
      for (Ordinal eta : partners)
        if (xi != eta) next |= f(xi, eta);
    if (next == stage) return result;
    result.closure = next;
    ++result.iterations;
  }
}

/// First index tuple i0 < ... < i(n-1), in lexicographic order, such that B is
/// contained in f{xi,eta} whenever xi and eta come from distinct chosen sets.
inline std::optional<std::vector<std::size_t>> search_common_lower_bound(const PairFunction& f,
                                                                         const std::vector<OrdSet>& c_list,
                                                                         OrdSet b, std::size_t n) {
  f.universe().require(b, "B");
  if (n < 1) throw Error(ErrorCode::PreconditionViolated, "n must be at least 1");
  for (std::size_t i = 0; i < c_list.size(); ++i) {
    f.universe().require(c_list[i], "c");
    if (!c_list[i].empty() && !b.empty() && b.max() >= c_list[i].min())
      throw Error(ErrorCode::BNotBelow, "max B must lie below min c[" + std::to_string(i) + "]");
    for (std::size_t j = i + 1; j < c_list.size(); ++j)
      if (c_list[i].intersects(c_list[j]))
        throw Error(ErrorCode::DisjointnessViolated,
                    "c[" + std::to_string(i) + "] and c[" + std::to_string(j) + "] intersect");
  }
  if (n > c_list.size()) return std::nullopt;

  const std::size_t m = c_list.size();
  auto compatible = [&](std::size_t i, std::size_t j) {
    for (Ordinal xi : c_list[i])
      for (Ordinal eta : c_list[j])
        if (!b.subset_of(f(xi, eta))) return false;
    return true;
  };
  std::vector<std::vector<char>> ok(m, std::vector<char>(m, 0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) ok[i][j] = ok[j][i] = compatible(i, j) ? 1 : 0;

  // Depth-first over increasing tuples visits them in lexicographic order.
  std::vector<std::size_t> chosen;
  chosen.reserve(n);
  auto extend = [&](auto&& self, std::size_t from) -> bool {
    if (chosen.size() == n) return true;
    for (std::size_t c = from; c + (n - chosen.size()) <= m; ++c) {
      bool fits = true;
      for (std::size_t prev : chosen)
        if (!ok[prev][c]) {
          fits = false;
          break;
        }
      if (!fits) continue;
      chosen.push_back(c);
      if (self(self, c + 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  if (extend(extend, 0)) return chosen;
  return std::nullopt;
}

}  // namespace pforce
