#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cartan/algebra.hpp"
#include "cartan/groupoid.hpp"

namespace cartan {

/// Builds a groupoid from callbacks over element indices. `compose` is only
/// queried on composable pairs.
inline FiniteGroupoid make_groupoid(std::vector<std::string> names, const std::function<bool(Elem)>& is_unit,
                                    const std::function<Elem(Elem)>& source,
                                    const std::function<Elem(Elem)>& range,
                                    const std::function<Elem(Elem)>& inverse,
                                    const std::function<Elem(Elem, Elem)>& compose) {
  const std::size_t n = names.size();
  std::vector<bool> unit(n);
  std::vector<Elem> src(n), rng(n), inv(n), comp(n * n, kNoElem);
  for (Elem x = 0; x < n; ++x) {
    unit[x] = is_unit(x);
    src[x] = source(x);
    rng[x] = range(x);
    inv[x] = inverse(x);
  }
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y)
      if (src[x] == rng[y]) comp[x * n + y] = compose(x, y);
  return {std::move(names), std::move(unit), std::move(src), std::move(rng), std::move(inv), std::move(comp)};
}

/// Full equivalence relation on k points; element (i,j) has range (i,i) and
/// source (j,j). Elements are listed row-major.
inline FiniteGroupoid pair_groupoid(std::size_t k) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= k; ++i)
    for (std::size_t j = 1; j <= k; ++j) names.push_back("(" + std::to_string(i) + "," + std::to_string(j) + ")");
  auto idx = [k](std::size_t i, std::size_t j) { return i * k + j; };
  return make_groupoid(
      std::move(names), [k](Elem x) { return x / k == x % k; },
      [&](Elem x) { return idx(x % k, x % k); }, [&](Elem x) { return idx(x / k, x / k); },
      [&](Elem x) { return idx(x % k, x / k); }, [&](Elem x, Elem y) { return idx(x / k, y % k); });
}

/// Group as a one-unit groupoid from a multiplication table; element 0 is the identity.
inline FiniteGroupoid group_groupoid(std::vector<std::string> names, const std::function<Elem(Elem, Elem)>& mul) {
  const std::size_t n = names.size();
  return make_groupoid(
      std::move(names), [](Elem x) { return x == 0; }, [](Elem) { return Elem{0}; }, [](Elem) { return Elem{0}; },
      [&](Elem x) {
        for (Elem y = 0; y < n; ++y)
          if (mul(x, y) == 0) return y;
        return kNoElem;
      },
      mul);
}

/// Cyclic group Z_n with elements "e", "1", ..., "n-1".
inline FiniteGroupoid cyclic_group(std::size_t n) {
  std::vector<std::string> names{"e"};
  for (std::size_t i = 1; i < n; ++i) names.push_back(std::to_string(i));
  return group_groupoid(std::move(names), [n](Elem x, Elem y) { return (x + y) % n; });
}

/// Klein four-group Z2 x Z2 with elements "(a,b)"; index = 2a + b.
inline FiniteGroupoid klein_four() {
  return group_groupoid({"(0,0)", "(0,1)", "(1,0)", "(1,1)"}, [](Elem x, Elem y) { return x ^ y; });
}

/// The cocycle (-1)^{bc} on Z2 x Z2, whose twisted group algebra is M_2.
inline Cocycle pauli_cocycle(const FiniteGroupoid& v4) {
  Cocycle c(v4.size());
  for (Elem x = 0; x < 4; ++x)
    for (Elem y = 0; y < 4; ++y) {
      const std::size_t b = x & 1U, cc = (y >> 1U) & 1U;
      c.set(x, y, Phase(static_cast<std::int64_t>(b * cc), 2));
    }
  return c;
}

/// Transformation groupoid of Z2 acting on {1,2} by the swap. Element
/// "(t,x)" has source x and range t.x; index = 2*(x-1) + t.
inline FiniteGroupoid swap_groupoid() {
  std::vector<std::string> names{"(e,1)", "(t,1)", "(e,2)", "(t,2)"};
  auto point = [](Elem x) { return x / 2; };
  auto grp = [](Elem x) { return x % 2; };
  auto make = [](std::size_t pt, std::size_t t) { return Elem{2 * pt + t}; };
  return make_groupoid(
      std::move(names), [&](Elem x) { return grp(x) == 0; }, [&](Elem x) { return make(point(x), 0); },
      [&](Elem x) { return make(point(x) ^ grp(x), 0); },
      [&](Elem x) { return make(point(x) ^ grp(x), grp(x)); },
      [&](Elem x, Elem y) { return make(point(y), grp(x) ^ grp(y)); });
}

struct Fixture {
  std::string name;
  FiniteGroupoid groupoid;
  Cocycle cocycle;

  [[nodiscard]] ContextPtr context(double zero_tol = kDefaultZeroTol) const {
    return TwistContext::make(groupoid, cocycle, zero_tol);
  }
};

inline std::vector<Fixture> standard_fixtures() {
  std::vector<Fixture> out;
  auto add = [&](std::string name, FiniteGroupoid g) {
    Cocycle c = Cocycle::trivial(g);
    out.push_back({std::move(name), std::move(g), std::move(c)});
  };
  add("R2", pair_groupoid(2));
  add("R3", pair_groupoid(3));
  add("R4", pair_groupoid(4));
  add("Z2", cyclic_group(2));
  add("Z3", cyclic_group(3));
  add("Z4", cyclic_group(4));
  add("V4", klein_four());
  {
    auto v4 = klein_four();
    auto c = pauli_cocycle(v4);
    out.push_back({"V4_pauli", std::move(v4), std::move(c)});
  }
  add("swap", swap_groupoid());
  add("R2_disj_Z2", disjoint_union(pair_groupoid(2), cyclic_group(2)));
  return out;
}

inline Fixture fixture(const std::string& name) {
  for (auto& f : standard_fixtures())
    if (f.name == name) return f;
  throw input_error("unknown fixture '" + name + "'");
}

}  // namespace cartan
