#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string_view>
#include <vector>

#include "cartan/algebra.hpp"

namespace cartan {

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31U);
}

/// Deterministic random stream derived from a root seed and a stream name, so
/// that independent consumers never share or perturb each other's draws.
class Rng {
public:
  Rng(std::uint64_t seed, std::string_view stream) : seed_(splitmix64(seed ^ fnv1a64(stream))), eng_(seed_) {}

  /// Child stream; depends only on this stream's seed and the name.
  [[nodiscard]] Rng split(std::string_view name) const { return Rng(seed_, name); }

  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(eng_); }
  bool coin(double p = 0.5) { return uniform() < p; }
  Complex gaussian() { return {normal(), normal()}; }
  /// Nonzero coefficient with modulus in [0.25, 2] and uniform phase.
  Complex coefficient() { return std::polar(uniform(0.25, 2.0), uniform(0.0, kTwoPi)); }

  template <typename T>
  void shuffle(std::vector<T>& v) { std::shuffle(v.begin(), v.end(), eng_); }

private:
  std::uint64_t seed_;
  std::mt19937_64 eng_;
};

/// Dense element with independent complex Gaussian coefficients.
inline AlgebraElement random_element(const ContextPtr& ctx, Rng& rng) {
  AlgebraElement a(ctx);
  for (Elem g = 0; g < ctx->size(); ++g) a[g] = rng.gaussian();
  return a;
}

/// Element with random coefficients on exactly the given support.
inline AlgebraElement random_on(const ContextPtr& ctx, Support s, Rng& rng) {
  AlgebraElement a(ctx);
  for_each_bit(s, [&](Elem g) { a[g] = rng.coefficient(); });
  return a;
}

/// Random subset of `s`, each element kept with probability p.
inline Support random_subset(Support s, Rng& rng, double p = 0.5) {
  Support out = 0;
  for_each_bit(s, [&](Elem g) {
    if (rng.coin(p)) out |= bit(g);
  });
  return out;
}

/// Random nonempty bisection: elements visited in random order and kept
/// with probability p when they do not clash with earlier choices.
inline Support random_bisection(const FiniteGroupoid& g, Rng& rng, double p = 0.6) {
  std::vector<Elem> order(g.size());
  std::iota(order.begin(), order.end(), Elem{0});
  rng.shuffle(order);
  Support out = 0, used_s = 0, used_r = 0;
  for (Elem x : order) {
    const Support s = bit(g.source(x)), r = bit(g.range(x));
    if ((used_s & s) || (used_r & r)) continue;
    if (out != 0 && !rng.coin(p)) continue;
    out |= bit(x);
    used_s |= s;
    used_r |= r;
  }
  return out;
}

inline AlgebraElement random_monomial(const ContextPtr& ctx, Rng& rng) {
  return random_on(ctx, random_bisection(ctx->groupoid(), rng), rng);
}

inline AlgebraElement random_diagonal(const ContextPtr& ctx, Rng& rng) {
  AlgebraElement a(ctx);
  for (Elem u : ctx->units()) a[u] = rng.gaussian();
  return a;
}

}  // namespace cartan
