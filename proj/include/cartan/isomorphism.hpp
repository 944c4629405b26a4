#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "cartan/algebra.hpp"
#include "cartan/groupoid.hpp"

namespace cartan {

inline constexpr std::size_t kDefaultIsoBudget = 1'000'000;

enum class IsoOutcome { isomorphic, not_isomorphic, inconclusive };

inline const char* to_string(IsoOutcome o) {
  switch (o) {
    case IsoOutcome::isomorphic: return "isomorphic";
    case IsoOutcome::not_isomorphic: return "not_isomorphic";
    case IsoOutcome::inconclusive: return "inconclusive";
  }
  return "?";
}

struct IsoResult {
  IsoOutcome outcome = IsoOutcome::not_isomorphic;
  std::vector<Elem> bijection;  // bijection[g in a] = image in b; set iff isomorphic
  std::size_t nodes = 0;

  [[nodiscard]] bool found() const { return outcome == IsoOutcome::isomorphic; }
};

namespace detail {

/// Order of an isotropy element (smallest k with g^k a unit); 0 otherwise.
inline std::size_t element_order(const FiniteGroupoid& g, Elem x) {
  if (g.source(x) != g.range(x)) return 0;
  Elem p = x;
  for (std::size_t k = 1; k <= g.size(); ++k) {
    if (g.is_unit(p)) return k;
    p = g.compose(p, x);
  }
  return 0;
}

struct UnitSignature {
  std::size_t fiber = 0;
  std::vector<std::size_t> isotropy_orders;
  friend bool operator==(const UnitSignature&, const UnitSignature&) = default;
  friend auto operator<=>(const UnitSignature&, const UnitSignature&) = default;
};

inline std::vector<UnitSignature> unit_signatures(const FiniteGroupoid& g) {
  std::vector<UnitSignature> sig(g.size());
  for (Elem x = 0; x < g.size(); ++x) {
    if (!g.is_unit(x)) continue;
    sig[x].fiber = g.source_fiber(x).size();
    for (Elem y : g.isotropy(x)) sig[x].isotropy_orders.push_back(element_order(g, y));
    std::sort(sig[x].isotropy_orders.begin(), sig[x].isotropy_orders.end());
  }
  return sig;
}

class IsoSearch {
public:
  IsoSearch(const FiniteGroupoid& a, const FiniteGroupoid& b, std::size_t budget, const Cocycle* ca,
            const Cocycle* cb)
      : a_(a), b_(b), budget_(budget), ca_(ca), cb_(cb), map_(a.size(), kNoElem), used_(b.size(), false) {}

  IsoResult run() {
    IsoResult res;
    if (a_.size() != b_.size()) return res;
    sig_a_ = unit_signatures(a_);
    sig_b_ = unit_signatures(b_);
    std::vector<UnitSignature> ua, ub;
    for (Elem u : a_.units()) ua.push_back(sig_a_[u]);
    for (Elem u : b_.units()) ub.push_back(sig_b_[u]);
    std::sort(ua.begin(), ua.end());
    std::sort(ub.begin(), ub.end());
    if (ua != ub) return res;
    order_a_.resize(a_.size());
    order_b_.resize(b_.size());
    for (Elem x = 0; x < a_.size(); ++x) order_a_[x] = element_order(a_, x);
    for (Elem x = 0; x < b_.size(); ++x) order_b_[x] = element_order(b_, x);

    units_a_ = a_.units();
    for (Elem x = 0; x < a_.size(); ++x)
      if (!a_.is_unit(x)) rest_a_.push_back(x);

    const bool ok = map_units(0);
    res.nodes = nodes_;
    if (ok) {
      res.outcome = IsoOutcome::isomorphic;
      res.bijection = map_;
    } else if (exhausted_) {
      res.outcome = IsoOutcome::inconclusive;
    }
    return res;
  }

private:
  bool visit() {
    if (++nodes_ > budget_) exhausted_ = true;
    return !exhausted_;
  }

  bool map_units(std::size_t i) {
    if (i == units_a_.size()) return map_rest(0);
    const Elem u = units_a_[i];
    for (Elem v = 0; v < b_.size(); ++v) {
      if (!b_.is_unit(v) || used_[v] || !(sig_a_[u] == sig_b_[v])) continue;
      if (!visit()) return false;
      assign(u, v);
      if (consistent(u) && map_units(i + 1)) return true;
      unassign(u, v);
      if (exhausted_) return false;
    }
    return false;
  }

  bool map_rest(std::size_t i) {
    if (i == rest_a_.size()) return true;
    const Elem x = rest_a_[i];
    const Elem s = map_[a_.source(x)], r = map_[a_.range(x)];
    for (Elem y = 0; y < b_.size(); ++y) {
      if (used_[y] || b_.is_unit(y) || b_.source(y) != s || b_.range(y) != r) continue;
      if (order_a_[x] != order_b_[y]) continue;
      if (!visit()) return false;
      assign(x, y);
      if (consistent(x) && map_rest(i + 1)) return true;
      unassign(x, y);
      if (exhausted_) return false;
    }
    return false;
  }

  void assign(Elem x, Elem y) { map_[x] = y; used_[y] = true; }
  void unassign(Elem x, Elem y) { map_[x] = kNoElem; used_[y] = false; }

  /// Checks every constraint that involves x and only assigned elements.
  bool consistent(Elem x) const {
    const Elem xi = a_.inverse(x);
    if (map_[xi] != kNoElem && map_[xi] != b_.inverse(map_[x])) return false;
    for (Elem y = 0; y < a_.size(); ++y) {
      if (map_[y] == kNoElem) continue;
      for (auto [p, q] : {std::pair{x, y}, std::pair{y, x}}) {
        if (!a_.composable(p, q)) {
          if (b_.composable(map_[p], map_[q])) return false;
          continue;
        }
        if (!b_.composable(map_[p], map_[q])) return false;
        const Elem pq = a_.compose(p, q);
        if (map_[pq] != kNoElem && map_[pq] != b_.compose(map_[p], map_[q])) return false;
        if (ca_ && cb_ && ca_->at(p, q) != cb_->at(map_[p], map_[q])) return false;
      }
    }
    return true;
  }

  const FiniteGroupoid& a_;
  const FiniteGroupoid& b_;
  std::size_t budget_;
  const Cocycle* ca_;
  const Cocycle* cb_;
  std::vector<Elem> map_;
  std::vector<bool> used_;
  std::vector<UnitSignature> sig_a_, sig_b_;
  std::vector<std::size_t> order_a_, order_b_;
  std::vector<Elem> units_a_, rest_a_;
  std::size_t nodes_ = 0;
  bool exhausted_ = false;
};

}  // namespace detail

/// Searches for a structure-preserving bijection a -> b by backtracking over
/// unit bijections first (pruned by fiber sizes and isotropy element orders),
/// then over the remaining elements fiber by fiber. When both cocycles are
/// given, the bijection must also carry one cocycle exactly onto the other.
/// Exceeding `budget` node visits yields IsoOutcome::inconclusive.
inline IsoResult groupoids_isomorphic(const FiniteGroupoid& a, const FiniteGroupoid& b,
                                      std::size_t budget = kDefaultIsoBudget, const Cocycle* ca = nullptr,
                                      const Cocycle* cb = nullptr) {
  return detail::IsoSearch(a, b, budget, ca, cb).run();
}

/// Whether `phi` is a groupoid isomorphism a -> b (and carries ca to cb if given).
inline bool is_isomorphism(const FiniteGroupoid& a, const FiniteGroupoid& b, const std::vector<Elem>& phi,
                           const Cocycle* ca = nullptr, const Cocycle* cb = nullptr) {
  if (a.size() != b.size() || phi.size() != a.size()) return false;
  std::vector<bool> hit(b.size(), false);
  for (Elem x : phi) {
    if (x >= b.size() || hit[x]) return false;
    hit[x] = true;
  }
  for (Elem x = 0; x < a.size(); ++x) {
    if (a.is_unit(x) != b.is_unit(phi[x])) return false;
    if (phi[a.inverse(x)] != b.inverse(phi[x])) return false;
    for (Elem y = 0; y < a.size(); ++y) {
      if (a.composable(x, y) != b.composable(phi[x], phi[y])) return false;
      if (!a.composable(x, y)) continue;
      if (phi[a.compose(x, y)] != b.compose(phi[x], phi[y])) return false;
      if (ca && cb && ca->at(x, y) != cb->at(phi[x], phi[y])) return false;
    }
  }
  return true;
}

}  // namespace cartan
