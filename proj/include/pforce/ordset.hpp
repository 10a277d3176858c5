#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

namespace pforce {

/// An ordinal of the finite carrier. Carriers never exceed kMaxKappa points.
using Ordinal = std::uint32_t;

inline constexpr std::size_t kMaxKappa = 64;

/// Finite set of ordinals below kMaxKappa, stored as a 64-bit mask.
///
/// Iteration is always ascending, which is the order every algorithm in
/// this library relies on.
class OrdSet {
 public:
  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = Ordinal;
    using difference_type = std::ptrdiff_t;
    using pointer = const Ordinal*;
    using reference = Ordinal;

    constexpr iterator() = default;
    constexpr explicit iterator(std::uint64_t rest) : rest_(rest) {}

    constexpr Ordinal operator*() const { return static_cast<Ordinal>(std::countr_zero(rest_)); }
    constexpr iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    constexpr iterator operator++(int) {
      iterator old = *this;
      ++*this;
      return old;
    }
    constexpr bool operator==(const iterator&) const = default;

   private:
    std::uint64_t rest_ = 0;
  };

  constexpr OrdSet() = default;
  constexpr OrdSet(std::initializer_list<Ordinal> xs) {
    for (Ordinal x : xs) insert(x);
  }

  static constexpr OrdSet from_bits(std::uint64_t bits) {
    OrdSet s;
    s.bits_ = bits;
    return s;
  }
  /// {0, ..., n-1}
  static constexpr OrdSet below(Ordinal n) {
    if (n >= 64) return from_bits(~std::uint64_t{0});
    return from_bits((std::uint64_t{1} << n) - 1);
  }
  /// {lo, ..., hi-1}
  static constexpr OrdSet range(Ordinal lo, Ordinal hi) {
    if (hi <= lo) return {};
    return below(hi) - below(lo);
  }
  static constexpr OrdSet single(Ordinal x) {
    return from_bits(std::uint64_t{1} << x);
  }

  constexpr std::uint64_t bits() const { return bits_; }

  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool contains(Ordinal x) const { return x < 64 && ((bits_ >> x) & 1U) != 0; }

  constexpr void insert(Ordinal x) { bits_ |= std::uint64_t{1} << x; }
  constexpr void erase(Ordinal x) { bits_ &= ~(std::uint64_t{1} << x); }

  /// Largest element. Undefined on the empty set; callers check empty() first.
  constexpr Ordinal max() const { return static_cast<Ordinal>(63 - std::countl_zero(bits_)); }
  constexpr Ordinal min() const { return static_cast<Ordinal>(std::countr_zero(bits_)); }
  constexpr std::optional<Ordinal> max_opt() const {
    if (empty()) return std::nullopt;
    return max();
  }

  constexpr bool subset_of(OrdSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool intersects(OrdSet other) const { return (bits_ & other.bits_) != 0; }

  /// Elements strictly below x.
  constexpr OrdSet below_of(Ordinal x) const { return *this & below(x); }

  constexpr OrdSet operator|(OrdSet o) const { return from_bits(bits_ | o.bits_); }
  constexpr OrdSet operator&(OrdSet o) const { return from_bits(bits_ & o.bits_); }
  constexpr OrdSet operator-(OrdSet o) const { return from_bits(bits_ & ~o.bits_); }
  constexpr OrdSet& operator|=(OrdSet o) {
    bits_ |= o.bits_;
    return *this;
  }
  constexpr OrdSet& operator&=(OrdSet o) {
    bits_ &= o.bits_;
    return *this;
  }
  constexpr OrdSet& operator-=(OrdSet o) {
    bits_ &= ~o.bits_;
    return *this;
  }

  constexpr bool operator==(const OrdSet&) const = default;
  /// Lexicographic by mask; only used for deterministic containers.
  constexpr bool operator<(const OrdSet& o) const { return bits_ < o.bits_; }

  constexpr iterator begin() const { return iterator(bits_); }
  constexpr iterator end() const { return iterator(0); }

  std::vector<Ordinal> to_vector() const { return {begin(), end()}; }

  /// "{1,2,5}"
  std::string str() const {
    std::string out = "{";
    bool first = true;
    for (Ordinal x : *this) {
      if (!first) out += ',';
      out += std::to_string(x);
      first = false;
    }
    out += '}';
    return out;
  }

 private:
  std::uint64_t bits_ = 0;
};

/// Calls fn(sub) for every subset of `set`, the empty set included.
template <typename Fn>
constexpr void for_each_subset(OrdSet set, Fn&& fn) {
  const std::uint64_t mask = set.bits();
  std::uint64_t sub = 0;
  while (true) {
    fn(OrdSet::from_bits(sub));
    if (sub == mask) break;
    sub = (sub - mask) & mask;
  }
}

/// Index of the unordered pair {lo, hi}, lo < hi, in a triangular table.
constexpr std::size_t pair_index(Ordinal lo, Ordinal hi) {
  return static_cast<std::size_t>(hi) * (hi - 1) / 2 + lo;
}
constexpr std::size_t pair_count(std::size_t n) { return n * (n - 1) / 2; }

}  // namespace pforce
