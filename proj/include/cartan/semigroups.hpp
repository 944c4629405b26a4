#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "cartan/algebra.hpp"
#include "cartan/random.hpp"

namespace cartan {

enum class SemigroupKind { monomial, basis_restricted, normalizers, explicit_patterns, compatible_sums };

inline const char* to_string(SemigroupKind k) {
  switch (k) {
    case SemigroupKind::monomial: return "monomial";
    case SemigroupKind::basis_restricted: return "basis-restricted";
    case SemigroupKind::normalizers: return "normalizers";
    case SemigroupKind::explicit_patterns: return "explicit";
    case SemigroupKind::compatible_sums: return "compatible-sums";
  }
  return "?";
}

/// Checks the closure conditions on a family of bisections used to restrict
/// the monomial semigroup: it contains the unit space, is closed under
/// subsets, and is closed under pointwise products and inverses.
inline ValidationReport validate_basis(const FiniteGroupoid& g, const std::vector<Support>& basis) {
  ValidationReport rep;
  const std::set<Support> set(basis.begin(), basis.end());
  for (Support o : set)
    if (!is_bisection(g, o)) rep.violations.push_back({"member is not a bisection", g.ids_of(o)});
  if (!set.contains(g.unit_mask())) rep.violations.push_back({"unit space missing", g.ids_of(g.unit_mask())});
  for (Support o : set) {
    // every subset obtained by dropping one element; closure under all subsets follows inductively
    for_each_bit(o, [&](Elem x) {
      if (!set.contains(o & ~bit(x))) rep.violations.push_back({"not closed under subsets", g.ids_of(o & ~bit(x))});
    });
    if (!set.contains(inverse_set(g, o))) rep.violations.push_back({"not closed under inverses", g.ids_of(o)});
    for (Support u : set)
      if (!set.contains(product_set(g, o, u))) {
        auto w = g.ids_of(o);
        w.push_back("*");
        for (auto& s : g.ids_of(u)) w.push_back(s);
        rep.violations.push_back({"not closed under products", w});
      }
  }
  return rep;
}

/// Closure of a family of bisections under products, inverses and subsets,
/// together with the unit space and its subsets' products.
inline std::vector<Support> close_patterns(const FiniteGroupoid& g, std::vector<Support> gens) {
  std::set<Support> set(gens.begin(), gens.end());
  set.insert(0);
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Support> cur(set.begin(), set.end());
    auto add = [&](Support s) {
      if (set.insert(s).second) grew = true;
    };
    for (Support o : cur) {
      add(inverse_set(g, o));
      for_each_bit(o, [&](Elem x) { add(o & ~bit(x)); });
      for (Support u : cur) add(product_set(g, o, u));
    }
  }
  return {set.begin(), set.end()};
}

/// Whether two elements are compatible: m*n and mn* both diagonal.
inline bool compatible(const AlgebraElement& m, const AlgebraElement& n) {
  return is_diagonal(adj(m) * n) && is_diagonal(m * adj(n));
}

/// Normaliser test: n b n* and n* b n diagonal for every unit delta b.
inline bool is_normalizer(const AlgebraElement& n) {
  const auto& ctx = n.context();
  const AlgebraElement ns = adj(n);
  for (Elem u : ctx->units()) {
    const auto du = AlgebraElement::delta(ctx, u);
    if (!is_diagonal(n * du * ns) || !is_diagonal(ns * du * n)) return false;
  }
  return true;
}

/// exp(a) by its power series, truncated once terms drop below 1e-18.
inline AlgebraElement exp_series(const AlgebraElement& a) {
  AlgebraElement sum = AlgebraElement::identity(a.context());
  AlgebraElement term = sum;
  for (int k = 1; k < 200; ++k) {
    term = (1.0 / k) * (term * a);
    sum += term;
    if (term.max_abs() < 1e-18) break;
  }
  return sum;
}

/// A *-semigroup inside the twisted convolution algebra, given as a
/// membership predicate plus a way to enumerate representative elements.
class SemigroupSpec {
public:
  static SemigroupSpec monomial(ContextPtr ctx) { return SemigroupSpec(SemigroupKind::monomial, std::move(ctx)); }

  static SemigroupSpec normalizers(ContextPtr ctx) { return SemigroupSpec(SemigroupKind::normalizers, std::move(ctx)); }

  /// Elements supported on a member of `basis`. Throws input_error when the
  /// basis violates its closure conditions.
  static SemigroupSpec basis_restricted(ContextPtr ctx, std::vector<Support> basis) {
    auto rep = validate_basis(ctx->groupoid(), basis);
    if (!rep.ok()) throw input_error("invalid bisection basis: " + describe(rep.violations.front()));
    SemigroupSpec s(SemigroupKind::basis_restricted, std::move(ctx));
    std::sort(basis.begin(), basis.end());
    basis.erase(std::unique(basis.begin(), basis.end()), basis.end());
    s.patterns_ = std::move(basis);
    return s;
  }

  /// Elements supported on a pattern of the closure of `generators` under
  /// products, inverses and subsets.
  static SemigroupSpec explicit_patterns(ContextPtr ctx, std::vector<Support> generators) {
    for (Support o : generators)
      if (!is_bisection(ctx->groupoid(), o)) throw input_error("explicit generator is not a bisection");
    SemigroupSpec s(SemigroupKind::explicit_patterns, std::move(ctx));
    s.patterns_ = close_patterns(s.ctx_->groupoid(), std::move(generators));
    return s;
  }

  static SemigroupSpec compatible_sums(const SemigroupSpec& inner) {
    SemigroupSpec s(SemigroupKind::compatible_sums, inner.ctx_);
    s.inner_ = std::make_shared<SemigroupSpec>(inner);
    if (inner.pattern_based()) {
      std::set<Support> singles;
      for (Support p : inner.patterns())
        for_each_bit(p, [&](Elem x) { singles.insert(bit(x)); });
      for (Support b : enumerate_bisections(s.ctx_->groupoid())) {
        bool ok = true;
        for_each_bit(b, [&](Elem x) { ok = ok && singles.contains(bit(x)); });
        if (ok) s.patterns_.push_back(b);
      }
    }
    return s;
  }

  [[nodiscard]] SemigroupKind kind() const { return kind_; }
  [[nodiscard]] const ContextPtr& context() const { return ctx_; }
  [[nodiscard]] const SemigroupSpec* inner() const { return inner_.get(); }

  /// Whether membership is decided by the support pattern alone.
  [[nodiscard]] bool pattern_based() const {
    return kind_ == SemigroupKind::monomial || kind_ == SemigroupKind::basis_restricted ||
           kind_ == SemigroupKind::explicit_patterns ||
           (kind_ == SemigroupKind::compatible_sums && inner_->pattern_based());
  }

  /// Support patterns of members (all bisections for the monomial kind).
  [[nodiscard]] std::vector<Support> patterns() const {
    if (kind_ == SemigroupKind::monomial || kind_ == SemigroupKind::normalizers)
      return enumerate_bisections(ctx_->groupoid());
    return patterns_;
  }

  [[nodiscard]] bool contains(const AlgebraElement& a) const {
    if (a.context() != ctx_) throw input_error("element belongs to a different context");
    switch (kind_) {
      case SemigroupKind::monomial: return is_monomial(a);
      case SemigroupKind::normalizers: return is_normalizer(a);
      case SemigroupKind::basis_restricted:
      case SemigroupKind::explicit_patterns:
        return std::binary_search(patterns_.begin(), patterns_.end(), a.support());
      case SemigroupKind::compatible_sums: return contains_compatible_sum(a);
    }
    return false;
  }

private:
  SemigroupSpec(SemigroupKind k, ContextPtr ctx) : kind_(k), ctx_(std::move(ctx)) {}

  /// Either a member of the inner semigroup, or a sum of its one-point
  /// restrictions, each a member and pairwise compatible.
  [[nodiscard]] bool contains_compatible_sum(const AlgebraElement& a) const {
    if (inner_->contains(a)) return true;
    std::vector<AlgebraElement> parts;
    bool ok = true;
    for_each_bit(a.support(), [&](Elem g) {
      if (!ok) return;
      auto piece = a.restricted(bit(g));
      if (!inner_->contains(piece)) { ok = false; return; }
      for (const auto& p : parts)
        if (!compatible(p, piece)) { ok = false; return; }
      parts.push_back(std::move(piece));
    });
    return ok;
  }

  SemigroupKind kind_;
  ContextPtr ctx_;
  std::vector<Support> patterns_;  // sorted
  std::shared_ptr<const SemigroupSpec> inner_;
};

inline bool membership(const SemigroupSpec& spec, const AlgebraElement& a) { return spec.contains(a); }

inline SemigroupSpec normalizer_semigroup(const ContextPtr& ctx) { return SemigroupSpec::normalizers(ctx); }

inline SemigroupSpec csum_closure(const SemigroupSpec& spec) {
  if (spec.kind() == SemigroupKind::compatible_sums) return spec;
  return SemigroupSpec::compatible_sums(spec);
}

/// Unitary exp(i(x + x*)) for a random x supported on the isotropy bundle.
/// Such elements commute with the diagonal and hence normalise it.
inline AlgebraElement random_isotropy_unitary(const ContextPtr& ctx, Rng& rng, double scale = 1.0) {
  const auto& G = ctx->groupoid();
  AlgebraElement x(ctx);
  for (Elem g = 0; g < G.size(); ++g)
    if (G.source(g) == G.range(g) && !G.is_unit(g)) x[g] = scale * rng.gaussian();
  return exp_series(Complex(0, 1) * (x + adj(x)));
}

/// Representative members: coefficient-one deltas in element order, one
/// all-ones element per pattern, then `draws` random members.
inline std::vector<AlgebraElement> sample_members(const SemigroupSpec& spec, Rng& rng, std::size_t draws) {
  const auto& ctx = spec.context();
  std::vector<AlgebraElement> out;
  for (Elem g = 0; g < ctx->size(); ++g) {
    auto d = AlgebraElement::delta(ctx, g);
    if (spec.contains(d)) out.push_back(std::move(d));
  }
  const auto pats = spec.patterns();
  for (Support p : pats) {
    if (popcount(p) < 2) continue;
    AlgebraElement a(ctx);
    for_each_bit(p, [&](Elem g) { a[g] = 1.0; });
    if (spec.contains(a)) out.push_back(std::move(a));
  }
  for (std::size_t i = 0; i < draws; ++i) {
    if (spec.kind() == SemigroupKind::normalizers && i % 2 == 1) {
      auto u = random_isotropy_unitary(ctx, rng);
      if (i % 4 == 3) u = u * random_on(ctx, pats[rng.index(pats.size())], rng);
      if (spec.contains(u)) out.push_back(std::move(u));
      continue;
    }
    if (pats.empty()) break;
    auto a = random_on(ctx, pats[rng.index(pats.size())], rng);
    if (spec.contains(a)) out.push_back(std::move(a));
  }
  return out;
}

struct AxiomResult {
  std::string name;
  bool passed = true;
  std::string detail;
  std::vector<AlgebraElement> witness;
};

/// Outcome of checking the Cartan semigroup axioms; each failure carries a
/// counterexample.
struct CartanReport {
  AxiomResult star_semigroup{"*-semigroup closure", true, {}, {}};
  AxiomResult dense_span{"dense span", true, {}, {}};
  AxiomResult positive_cone{"B = C*(N+) commutative", true, {}, {}};
  AxiomResult b_is_diagonal{"B is the diagonal", true, {}, {}};
  AxiomResult b_in_n{"B contained in N", true, {}, {}};
  AxiomResult stable{"stability E(n)n* in B", true, {}, {}};
  AxiomResult summable{"summability", true, {}, {}};

  [[nodiscard]] std::vector<const AxiomResult*> axioms() const {
    return {&star_semigroup, &dense_span, &positive_cone, &b_is_diagonal, &b_in_n, &stable};
  }
  /// All axioms of a Cartan semigroup (summability excluded).
  [[nodiscard]] bool is_cartan() const {
    for (const auto* a : axioms())
      if (!a->passed) return false;
    return true;
  }
  [[nodiscard]] const AxiomResult* first_failure() const {
    for (const auto* a : axioms())
      if (!a->passed) return a;
    return nullptr;
  }
};

inline std::size_t numeric_rank(const std::vector<AlgebraElement>& v, std::size_t dim) {
  if (v.empty()) return 0;
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(v.size()));
  for (std::size_t j = 0; j < v.size(); ++j)
    for (std::size_t i = 0; i < dim; ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v[j][i];
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
  lu.setThreshold(1e-9);
  return static_cast<std::size_t>(lu.rank());
}

/// Checks every Cartan semigroup axiom and summability on sampled members.
/// Closure under scalars and diagonal multiplication is exact for every kind,
/// so checks on pattern representatives plus random draws suffice.
inline CartanReport check_cartan(const SemigroupSpec& spec, Rng rng, std::size_t draws = 100) {
  const auto& ctx = spec.context();
  CartanReport rep;
  auto samples = sample_members(spec, rng, draws);
  auto fail = [](AxiomResult& r, std::string detail, std::vector<AlgebraElement> w) {
    if (!r.passed) return;
    r.passed = false;
    r.detail = std::move(detail);
    r.witness = std::move(w);
  };

  const std::size_t cap = std::min<std::size_t>(samples.size(), 80);
  for (std::size_t i = 0; i < cap; ++i) {
    if (!spec.contains(adj(samples[i]))) fail(rep.star_semigroup, "adjoint not a member", {samples[i]});
    for (std::size_t j = 0; j < cap; ++j)
      if (!spec.contains(samples[i] * samples[j]))
        fail(rep.star_semigroup, "product not a member", {samples[i], samples[j]});
  }

  const std::size_t rank = numeric_rank(samples, ctx->size());
  if (rank != ctx->size())
    rep.dense_span = {rep.dense_span.name, false,
                      "span dimension " + std::to_string(rank) + " < " + std::to_string(ctx->size()), {}};

  std::vector<AlgebraElement> cone;
  for (const auto& n : samples) {
    auto p = adj(n) * n;
    bool positive = is_diagonal(p);
    for (Elem u : ctx->units())
      if (p[u].real() < -ctx->zero_tol() || std::abs(p[u].imag()) > ctx->zero_tol()) positive = false;
    if (!positive) fail(rep.positive_cone, "n*n is not a positive diagonal element", {n});
    if (!spec.contains(p)) fail(rep.b_in_n, "n*n not a member", {n});
    const auto stab = diagonal(n) * adj(n);
    if (!is_diagonal(stab)) fail(rep.stable, "E(n)n* not diagonal", {n});
    cone.push_back(std::move(p));
  }
  for (std::size_t i = 0; i < std::min<std::size_t>(cone.size(), 40); ++i)
    for (std::size_t j = 0; j < std::min<std::size_t>(cone.size(), 40); ++j)
      if (distance(cone[i] * cone[j], cone[j] * cone[i]) > ctx->zero_tol())
        fail(rep.positive_cone, "positive elements do not commute", {cone[i], cone[j]});

  const std::size_t brank = numeric_rank(cone, ctx->size());
  if (brank != ctx->units().size())
    fail(rep.b_is_diagonal,
         "C*(N+) has dimension " + std::to_string(brank) + ", diagonal has " + std::to_string(ctx->units().size()), {});

  for (Elem u : ctx->units())
    if (!spec.contains(AlgebraElement::delta(ctx, u))) fail(rep.b_in_n, "unit delta not a member", {AlgebraElement::delta(ctx, u)});
  for (int i = 0; i < 10; ++i) {
    auto b = random_diagonal(ctx, rng);
    if (!spec.contains(b)) fail(rep.b_in_n, "diagonal element not a member", {b});
  }

  for (std::size_t i = 0; i < cap && rep.summable.passed; ++i)
    for (std::size_t j = i + 1; j < cap; ++j) {
      if (!compatible(samples[i], samples[j])) continue;
      if (!spec.contains(samples[i] + samples[j])) {
        fail(rep.summable, "compatible pair whose sum is not a member", {samples[i], samples[j]});
        break;
      }
    }
  return rep;
}

}  // namespace cartan
