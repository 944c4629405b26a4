#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cartan {

/// Raised for malformed or inconsistent caller input (unknown ids, context
/// mismatches, violated preconditions).
class input_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Index of a groupoid element in file order.
using Elem = std::size_t;
inline constexpr Elem kNoElem = static_cast<Elem>(-1);

/// Subset of groupoid elements as a bit mask; bit i is element i.
using Support = std::uint64_t;
inline constexpr std::size_t kMaxElements = 64;

inline bool contains(Support s, Elem g) { return (s >> g) & 1U; }
inline Support bit(Elem g) { return Support{1} << g; }
inline std::size_t popcount(Support s) { return static_cast<std::size_t>(std::popcount(s)); }

template <typename F>
void for_each_bit(Support s, F&& f) {
  while (s != 0) {
    const auto g = static_cast<Elem>(std::countr_zero(s));
    f(g);
    s &= s - 1;
  }
}

/// A finite discrete groupoid given by explicit tables.
///
/// The tables may be inconsistent (e.g. loaded from a bad file); use
/// validate_groupoid() before relying on the axioms. Missing entries are kNoElem.
class FiniteGroupoid {
public:
  FiniteGroupoid() = default;

  FiniteGroupoid(std::vector<std::string> names, std::vector<bool> unit_flags,
                 std::vector<Elem> source, std::vector<Elem> range, std::vector<Elem> inverse,
                 std::vector<Elem> compose)
      : names_(std::move(names)),
        unit_(std::move(unit_flags)),
        source_(std::move(source)),
        range_(std::move(range)),
        inverse_(std::move(inverse)),
        compose_(std::move(compose)) {
    const std::size_t n = names_.size();
    if (n > kMaxElements) throw input_error("groupoid has more than 64 elements");
    if (unit_.size() != n || source_.size() != n || range_.size() != n || inverse_.size() != n ||
        compose_.size() != n * n)
      throw input_error("groupoid table sizes disagree with element count");
    for (Elem i = 0; i < n; ++i) {
      if (!index_.emplace(names_[i], i).second)
        throw input_error("duplicate element id '" + names_[i] + "'");
    }
  }

  [[nodiscard]] std::size_t size() const { return names_.size(); }
  [[nodiscard]] const std::string& name(Elem g) const { return names_.at(g); }
  [[nodiscard]] const std::vector<std::string>& names() const { return names_; }

  [[nodiscard]] std::optional<Elem> find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  [[nodiscard]] Elem at(const std::string& id) const {
    auto g = find(id);
    if (!g) throw input_error("unknown element id '" + id + "'");
    return *g;
  }

  [[nodiscard]] bool is_unit(Elem g) const { return unit_[g]; }
  [[nodiscard]] Elem source(Elem g) const { return source_[g]; }
  [[nodiscard]] Elem range(Elem g) const { return range_[g]; }
  [[nodiscard]] Elem inverse(Elem g) const { return inverse_[g]; }
  /// Product gh, or kNoElem when the table has no entry.
  [[nodiscard]] Elem compose(Elem g, Elem h) const { return compose_[g * size() + h]; }
  [[nodiscard]] bool composable(Elem g, Elem h) const { return source_[g] == range_[h]; }

  [[nodiscard]] std::vector<Elem> units() const {
    std::vector<Elem> out;
    for (Elem g = 0; g < size(); ++g)
      if (unit_[g]) out.push_back(g);
    return out;
  }
  [[nodiscard]] Support unit_mask() const {
    Support m = 0;
    for (Elem g = 0; g < size(); ++g)
      if (unit_[g]) m |= bit(g);
    return m;
  }
  [[nodiscard]] Support all_mask() const {
    return size() == 64 ? ~Support{0} : (Support{1} << size()) - 1;
  }

  /// Elements g with s(g) = u.
  [[nodiscard]] std::vector<Elem> source_fiber(Elem u) const {
    std::vector<Elem> out;
    for (Elem g = 0; g < size(); ++g)
      if (source_[g] == u) out.push_back(g);
    return out;
  }
  /// Isotropy at u: elements with s(g) = r(g) = u.
  [[nodiscard]] std::vector<Elem> isotropy(Elem u) const {
    std::vector<Elem> out;
    for (Elem g = 0; g < size(); ++g)
      if (source_[g] == u && range_[g] == u) out.push_back(g);
    return out;
  }

  [[nodiscard]] Support mask_of(const std::vector<std::string>& ids) const {
    Support m = 0;
    for (const auto& id : ids) m |= bit(at(id));
    return m;
  }
  [[nodiscard]] std::vector<std::string> ids_of(Support s) const {
    std::vector<std::string> out;
    for_each_bit(s, [&](Elem g) { out.push_back(names_[g]); });
    return out;
  }

  friend bool operator==(const FiniteGroupoid& a, const FiniteGroupoid& b) {
    return a.names_ == b.names_ && a.unit_ == b.unit_ && a.source_ == b.source_ &&
           a.range_ == b.range_ && a.inverse_ == b.inverse_ && a.compose_ == b.compose_;
  }

private:
  std::vector<std::string> names_;
  std::vector<bool> unit_;
  std::vector<Elem> source_, range_, inverse_, compose_;
  std::unordered_map<std::string, Elem> index_;
};

struct Violation {
  std::string axiom;
  std::vector<std::string> witness;
};

struct ValidationReport {
  std::vector<Violation> violations;
  [[nodiscard]] bool ok() const { return violations.empty(); }
};

inline std::string describe(const Violation& v) {
  std::ostringstream os;
  os << v.axiom << " (";
  for (std::size_t i = 0; i < v.witness.size(); ++i) os << (i ? ", " : "") << v.witness[i];
  os << ")";
  return os.str();
}

/// Checks every groupoid axiom and lists each violation with the offending
/// tuple. Never throws on malformed tables.
inline ValidationReport validate_groupoid(const FiniteGroupoid& g) {
  ValidationReport rep;
  const std::size_t n = g.size();
  auto nm = [&](Elem x) { return x == kNoElem ? std::string("<none>") : g.name(x); };
  auto add = [&](std::string axiom, std::vector<std::string> w) {
    rep.violations.push_back({std::move(axiom), std::move(w)});
  };

  if (n == 0) add("groupoid has no elements", {});
  bool tables_complete = true;
  for (Elem x = 0; x < n; ++x) {
    if (g.source(x) == kNoElem) { add("missing source entry", {nm(x)}); tables_complete = false; }
    if (g.range(x) == kNoElem) { add("missing range entry", {nm(x)}); tables_complete = false; }
    if (g.inverse(x) == kNoElem) { add("missing inverse entry", {nm(x)}); tables_complete = false; }
  }
  for (Elem x = 0; x < n; ++x) {
    if (g.source(x) != kNoElem && !g.is_unit(g.source(x)))
      add("source is not a unit", {nm(x), nm(g.source(x))});
    if (g.range(x) != kNoElem && !g.is_unit(g.range(x)))
      add("range is not a unit", {nm(x), nm(g.range(x))});
    if (g.is_unit(x) && (g.source(x) != x || g.range(x) != x))
      add("unit is not its own source and range", {nm(x)});
    if (g.is_unit(x) && g.inverse(x) != kNoElem && g.inverse(x) != x)
      add("unit is not its own inverse", {nm(x)});
    const Elem xi = g.inverse(x);
    if (xi != kNoElem && g.inverse(xi) != x) add("non-involutive inverse", {nm(x), nm(xi)});
  }
  if (!tables_complete) return rep;

  for (Elem x = 0; x < n; ++x) {
    const Elem xi = g.inverse(x);
    if (g.source(xi) != g.range(x) || g.range(xi) != g.source(x))
      add("inverse swaps source and range", {nm(x), nm(xi)});
  }
  for (Elem x = 0; x < n; ++x) {
    for (Elem y = 0; y < n; ++y) {
      const Elem xy = g.compose(x, y);
      if (!g.composable(x, y)) {
        if (xy != kNoElem) add("non-composable pair composed", {nm(x), nm(y)});
        continue;
      }
      if (xy == kNoElem) { add("composable pair not composed", {nm(x), nm(y)}); continue; }
      if (g.source(xy) != g.source(y)) add("source of product", {nm(x), nm(y), nm(xy)});
      if (g.range(xy) != g.range(x)) add("range of product", {nm(x), nm(y), nm(xy)});
    }
  }
  if (!rep.ok()) return rep;

  for (Elem x = 0; x < n; ++x) {
    const Elem xi = g.inverse(x);
    if (g.compose(xi, x) != g.source(x)) add("inverse law g^-1 g = s(g)", {nm(x)});
    if (g.compose(x, xi) != g.range(x)) add("inverse law g g^-1 = r(g)", {nm(x)});
    if (g.compose(g.range(x), x) != x) add("left unit law", {nm(x)});
    if (g.compose(x, g.source(x)) != x) add("right unit law", {nm(x)});
  }
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y) {
      if (!g.composable(x, y)) continue;
      for (Elem z = 0; z < n; ++z) {
        if (!g.composable(y, z)) continue;
        if (g.compose(g.compose(x, y), z) != g.compose(x, g.compose(y, z)))
          add("associativity", {nm(x), nm(y), nm(z)});
      }
    }
  return rep;
}

/// At most one element per source fiber and per range fiber.
inline bool is_bisection(const FiniteGroupoid& g, Support o) {
  Support seen_s = 0, seen_r = 0;
  bool ok = true;
  for_each_bit(o, [&](Elem x) {
    const Support s = bit(g.source(x)), r = bit(g.range(x));
    if ((seen_s & s) || (seen_r & r)) ok = false;
    seen_s |= s;
    seen_r |= r;
  });
  return ok;
}

inline bool is_bisection(const FiniteGroupoid& g, const std::vector<std::string>& ids) {
  return is_bisection(g, g.mask_of(ids));
}

/// Pointwise product set OU = {xy : x in O, y in U composable}.
inline Support product_set(const FiniteGroupoid& g, Support o, Support u) {
  Support out = 0;
  for_each_bit(o, [&](Elem x) {
    for_each_bit(u, [&](Elem y) {
      if (g.composable(x, y)) out |= bit(g.compose(x, y));
    });
  });
  return out;
}

inline Support inverse_set(const FiniteGroupoid& g, Support o) {
  Support out = 0;
  for_each_bit(o, [&](Elem x) { out |= bit(g.inverse(x)); });
  return out;
}

inline Support source_set(const FiniteGroupoid& g, Support o) {
  Support out = 0;
  for_each_bit(o, [&](Elem x) { out |= bit(g.source(x)); });
  return out;
}

inline Support range_set(const FiniteGroupoid& g, Support o) {
  Support out = 0;
  for_each_bit(o, [&](Elem x) { out |= bit(g.range(x)); });
  return out;
}

/// Effective (for discrete groupoids): isotropy is exactly the unit space.
inline bool is_effective(const FiniteGroupoid& g) {
  for (Elem x = 0; x < g.size(); ++x)
    if (g.source(x) == g.range(x) && !g.is_unit(x)) return false;
  return true;
}

/// All bisections, as masks, in lexicographic order of their element lists.
inline std::vector<Support> enumerate_bisections(const FiniteGroupoid& g) {
  std::vector<Support> out;
  const std::size_t n = g.size();
  auto rec = [&](auto&& self, Elem next, Support cur, Support used_s, Support used_r) -> void {
    out.push_back(cur);
    for (Elem x = next; x < n; ++x) {
      const Support s = bit(g.source(x)), r = bit(g.range(x));
      if ((used_s & s) || (used_r & r)) continue;
      self(self, x + 1, cur | bit(x), used_s | s, used_r | r);
    }
  };
  rec(rec, 0, 0, 0, 0);
  return out;
}

/// Disjoint union; names of b are prefixed when they collide with names of a.
inline FiniteGroupoid disjoint_union(const FiniteGroupoid& a, const FiniteGroupoid& b,
                                     const std::string& b_prefix = "") {
  const std::size_t na = a.size(), nb = b.size(), n = na + nb;
  std::vector<std::string> names = a.names();
  for (const auto& s : b.names()) names.push_back(b_prefix + s);
  std::vector<bool> unit(n);
  std::vector<Elem> src(n), rng(n), inv(n), comp(n * n, kNoElem);
  auto shift = [](Elem x, std::size_t off) { return x == kNoElem ? kNoElem : x + off; };
  for (Elem x = 0; x < na; ++x) {
    unit[x] = a.is_unit(x);
    src[x] = a.source(x);
    rng[x] = a.range(x);
    inv[x] = a.inverse(x);
    for (Elem y = 0; y < na; ++y) comp[x * n + y] = a.compose(x, y);
  }
  for (Elem x = 0; x < nb; ++x) {
    unit[na + x] = b.is_unit(x);
    src[na + x] = shift(b.source(x), na);
    rng[na + x] = shift(b.range(x), na);
    inv[na + x] = shift(b.inverse(x), na);
    for (Elem y = 0; y < nb; ++y) comp[(na + x) * n + na + y] = shift(b.compose(x, y), na);
  }
  return {std::move(names), std::move(unit), std::move(src), std::move(rng), std::move(inv),
          std::move(comp)};
}

}  // namespace cartan
