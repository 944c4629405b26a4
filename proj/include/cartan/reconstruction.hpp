#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cartan/algebra.hpp"
#include "cartan/check.hpp"
#include "cartan/isomorphism.hpp"
#include "cartan/random.hpp"
#include "cartan/relations.hpp"
#include "cartan/semigroups.hpp"

namespace cartan {

inline constexpr double kAngleOracleTol = 1e-9;

// ---------------------------------------------------------------------------
// Ultrafilters

/// Ultrafilter of the domination order on N, in the point model: the
/// ultrafilter attached to g consists of the n with n(g) != 0.
class Ultrafilter {
public:
  Ultrafilter(ContextPtr ctx, Elem g) : ctx_(std::move(ctx)), g_(g) {}

  [[nodiscard]] const ContextPtr& context() const { return ctx_; }
  [[nodiscard]] Elem point() const { return g_; }
  [[nodiscard]] const std::string& name() const { return ctx_->groupoid().name(g_); }

  [[nodiscard]] bool contains(const AlgebraElement& n) const {
    if (n.context() != ctx_) throw input_error("element belongs to a different context");
    return std::abs(n[g_]) > ctx_->zero_tol();
  }

  friend bool operator==(const Ultrafilter& a, const Ultrafilter& b) { return a.ctx_ == b.ctx_ && a.g_ == b.g_; }

private:
  ContextPtr ctx_;
  Elem g_;
};

inline Ultrafilter ultrafilter_at(const ContextPtr& ctx, Elem g) {
  if (g >= ctx->size()) throw input_error("unknown element index " + std::to_string(g));
  return {ctx, g};
}

inline Ultrafilter ultrafilter_at(const ContextPtr& ctx, const std::string& id) {
  return {ctx, ctx->groupoid().at(id)};
}

/// The basic set {U : n in U}, as a set of points.
inline Support basic_set(const AlgebraElement& n) {
  Support s = 0;
  for (Elem g = 0; g < n.size(); ++g)
    if (ultrafilter_at(n.context(), g).contains(n)) s |= bit(g);
  return s;
}

struct FilterReport {
  PropertyCheck proper{"proper (0 not a member)"};
  PropertyCheck down_directed{"down-directed"};
  PropertyCheck up_closed{"up-closed"};
  PropertyCheck prime{"additively prime"};

  [[nodiscard]] std::vector<PropertyCheck> checks() const { return {proper, down_directed, up_closed, prime}; }
  [[nodiscard]] bool ok() const { return all_passed(checks()); }
};

/// Filter axioms on a finite sample from N: for members m, n the restriction
/// of m to the point is a member below both; members of the sample above a
/// member are members; m + n in U forces m or n in U.
inline FilterReport check_filter_axioms(const Ultrafilter& u, const std::vector<AlgebraElement>& sample) {
  FilterReport rep;
  const auto& ctx = u.context();
  rep.proper.expect(!u.contains(AlgebraElement(ctx)), [] { return "0 is a member"; });
  std::vector<const AlgebraElement*> mono;
  for (const auto& a : sample)
    if (is_monomial(a)) mono.push_back(&a);
  for (const auto* m : mono)
    for (const auto* n : mono) {
      const bool mu = u.contains(*m), nu = u.contains(*n);
      if (mu && nu) {
        const AlgebraElement l = m->restricted(bit(u.point()));
        rep.down_directed.expect(u.contains(l) && dominates(l, *m) && dominates(l, *n),
                                 [&] { return "no lower bound for " + format_element(*m) + ", " + format_element(*n); });
      }
      if (mu && dominates(*m, *n))
        rep.up_closed.expect(nu, [&] { return format_element(*n) + " lies above a member but is not one"; });
      const AlgebraElement sum = *m + *n;
      if (m != n && is_monomial(sum) && u.contains(sum))
        rep.prime.expect(mu || nu, [&] { return "sum of non-members " + format_element(*m) + ", " + format_element(*n); });
    }
  return rep;
}

struct ProductReport {
  std::optional<Ultrafilter> product;
  bool zero_in_product_set = false;  // some sampled m in T, n in U with mn = 0
  PropertyCheck criterion{"defined iff 0 not in TU"};
  PropertyCheck basic_sets{"U_mn = U_m U_n"};
  PropertyCheck closure{"T.U = (TU)^<"};
};

/// T.U, defined iff s(T) = r(U). Also tests the algebraic criterion 0 not in TU
/// and the basic-set identity on the point deltas plus sampled members.
inline ProductReport ultrafilter_product(const Ultrafilter& t, const Ultrafilter& u,
                                         const std::vector<AlgebraElement>& sample = {}) {
  const auto& ctx = t.context();
  const auto& G = ctx->groupoid();
  ProductReport rep;
  if (G.composable(t.point(), u.point())) rep.product = Ultrafilter(ctx, G.compose(t.point(), u.point()));

  std::vector<AlgebraElement> tm{AlgebraElement::delta(ctx, t.point())}, um{AlgebraElement::delta(ctx, u.point())};
  for (const auto& a : sample) {
    if (!is_monomial(a)) continue;
    if (t.contains(a)) tm.push_back(a);
    if (u.contains(a)) um.push_back(a);
  }
  for (const auto& m : tm)
    for (const auto& n : um) {
      const AlgebraElement mn = m * n;
      if (mn.is_zero()) rep.zero_in_product_set = true;
      rep.basic_sets.expect(basic_set(mn) == product_set(G, basic_set(m), basic_set(n)),
                            [&] { return "basic sets differ for " + format_element(m) + ", " + format_element(n); });
      if (rep.product)
        rep.closure.expect(rep.product->contains(mn), [&] { return "product " + format_element(mn) + " outside T.U"; });
    }
  rep.criterion.expect(rep.product.has_value() == !rep.zero_in_product_set, [&] {
    return t.name() + " . " + u.name() + (rep.product ? " defined but 0 in TU" : " undefined but 0 not in TU");
  });
  if (rep.product) {
    const AlgebraElement base = tm.front() * um.front();
    for (const auto& l : sample)
      if (is_monomial(l) && rep.product->contains(l))
        rep.closure.expect(dominates(base, l).has_value(),
                           [&] { return format_element(l) + " is in T.U but above no product"; });
  }
  return rep;
}

struct UnitReport {
  PropertyCheck unit_equivalence{"unit iff meets B iff idempotent"};
  PropertyCheck expectation_sets{"U_E(n) = U_n cap G0"};
  PropertyCheck complement{"G minus G0 = union of U_n with E(n) = 0"};
  PropertyCheck diagonal_sets{"U_n in G0 iff n in B"};
  PropertyCheck kernel_bijection{"h(U) = B minus U is a bijection onto character kernels"};

  [[nodiscard]] std::vector<PropertyCheck> checks() const {
    return {unit_equivalence, expectation_sets, complement, diagonal_sets, kernel_bijection};
  }
  [[nodiscard]] bool ok() const { return all_passed(checks()); }
};

/// Unit-space characterisations over every point of the groupoid, with
/// `sample` (monomials) feeding the per-element identities.
inline UnitReport unit_tests_for_units(const ContextPtr& ctx, const std::vector<AlgebraElement>& sample) {
  const auto& G = ctx->groupoid();
  UnitReport rep;
  std::vector<AlgebraElement> diag{AlgebraElement::identity(ctx)};
  for (Elem u : ctx->units()) diag.push_back(AlgebraElement::delta(ctx, u));

  std::vector<AlgebraElement> elems = sample;
  for (Elem g = 0; g < G.size(); ++g) elems.push_back(AlgebraElement::delta(ctx, g));

  for (Elem g = 0; g < G.size(); ++g) {
    const Ultrafilter U(ctx, g);
    bool meets_b = false;
    for (const auto& b : diag) meets_b = meets_b || U.contains(b);
    const auto p = ultrafilter_product(U, U);
    const bool idempotent = p.product && *p.product == U;
    rep.unit_equivalence.expect(meets_b == G.is_unit(g) && idempotent == G.is_unit(g),
                                [&] { return "point " + G.name(g); });
    if (!G.is_unit(g)) {
      bool found = false;
      for (const auto& n : elems) found = found || (U.contains(n) && diagonal(n).is_zero());
      rep.complement.expect(found, [&] { return "no member with E(n) = 0 at " + G.name(g); });
    }
  }
  for (const auto& n : elems) {
    if (!is_monomial(n)) continue;
    rep.expectation_sets.expect(basic_set(diagonal(n)) == (basic_set(n) & G.unit_mask()),
                                [&] { return format_element(n); });
    if (diagonal(n).is_zero())
      rep.complement.expect((basic_set(n) & G.unit_mask()) == 0, [&] { return format_element(n); });
    rep.diagonal_sets.expect(((basic_set(n) & ~G.unit_mask()) == 0) == is_diagonal(n),
                             [&] { return format_element(n); });
  }

  // Characters of the diagonal are evaluations at units; match each unit
  // ultrafilter with the character whose kernel is B minus U.
  Rng rng(0, "kernel-probe");
  std::vector<AlgebraElement> probes(diag.begin() + 1, diag.end());
  for (int i = 0; i < 8; ++i) {
    auto b = random_diagonal(ctx, rng);
    b[ctx->units()[rng.index(ctx->units().size())]] = 0.0;
    probes.push_back(std::move(b));
  }
  std::vector<int> hit(G.size(), 0);
  for (Elem u : ctx->units()) {
    const Ultrafilter U(ctx, u);
    std::size_t matches = 0;
    for (Elem v : ctx->units()) {
      bool same = true;
      for (const auto& b : probes) same = same && (!U.contains(b) == (std::abs(b[v]) <= ctx->zero_tol()));
      if (same) {
        ++matches;
        ++hit[v];
      }
    }
    rep.kernel_bijection.expect(matches == 1, [&] { return "unit " + G.name(u) + " matched " + std::to_string(matches); });
  }
  for (Elem v : ctx->units())
    rep.kernel_bijection.expect(hit[v] == 1, [&] { return "character at " + G.name(v) + " hit " + std::to_string(hit[v]); });
  return rep;
}

// ---------------------------------------------------------------------------
// States, magnitudes, angles

/// psi_U(b) = b(s(g)), the character of B whose kernel is B minus s(U).
inline Complex source_state(const Ultrafilter& u, const AlgebraElement& b) {
  if (!is_diagonal(b)) throw input_error("state argument is not diagonal");
  return b[u.context()->groupoid().source(u.point())];
}

/// psi^U(b) = b(r(g)).
inline Complex range_state(const Ultrafilter& u, const AlgebraElement& b) {
  if (!is_diagonal(b)) throw input_error("state argument is not diagonal");
  return b[u.context()->groupoid().range(u.point())];
}

inline void require_member(const Ultrafilter& u, const AlgebraElement& n) {
  if (!u.contains(n)) throw input_error(format_element(n) + " is not a member of the ultrafilter at " + u.name());
}

/// |psi^U(b) - psi_U(n*bn) / psi_U(n*n)| for n in U and diagonal b.
inline double state_quotient_residual(const Ultrafilter& u, const AlgebraElement& n, const AlgebraElement& b) {
  require_member(u, n);
  const AlgebraElement ns = adj(n);
  return std::abs(range_state(u, b) - source_state(u, ns * b * n) / source_state(u, ns * n));
}

/// |n|_U = sqrt(psi_U(n*n)).
inline double magnitude(const Ultrafilter& u, const AlgebraElement& n) {
  require_member(u, n);
  return std::sqrt(std::max(0.0, source_state(u, adj(n) * n).real()));
}

/// m(g) conj(n(g)) / |m(g) n(g)|, the phase read off directly.
inline Complex angle_oracle(const Ultrafilter& u, const AlgebraElement& m, const AlgebraElement& n) {
  const Complex z = m[u.point()] * std::conj(n[u.point()]);
  return z / std::abs(z);
}

/// <m,n>_U = psi_U(E(n*m)) / (|m|_U |n|_U). The direct phase is computed as
/// well; disagreement beyond 1e-9 throws std::logic_error.
inline Complex angle(const Ultrafilter& u, const AlgebraElement& m, const AlgebraElement& n) {
  require_member(u, m);
  require_member(u, n);
  require_monomial(m, "m");
  require_monomial(n, "n");
  const Complex a = source_state(u, diagonal(adj(n) * m)) / (magnitude(u, m) * magnitude(u, n));
  if (std::abs(a - angle_oracle(u, m, n)) > kAngleOracleTol)
    throw std::logic_error("angle formula disagrees with direct phase at " + u.name());
  return a;
}

/// m ~_U n: psi_U(E(n*m)) > 0, i.e. the angle is 1.
inline bool angle_equivalent(const Ultrafilter& u, const AlgebraElement& m, const AlgebraElement& n) {
  return std::abs(angle(u, m, n) - 1.0) <= kAngleOracleTol;
}

// ---------------------------------------------------------------------------
// Twist

/// The class [n]_U as (phase, point), phase = n(g)/|n(g)|.
struct TwistPoint {
  Complex phase{1.0, 0.0};
  Elem g = 0;

  [[nodiscard]] bool same(const TwistPoint& o, double tol = kAngleOracleTol) const {
    return g == o.g && std::abs(phase - o.phase) <= tol;
  }
};

inline TwistPoint twist_point(const AlgebraElement& n, const Ultrafilter& u) {
  require_member(u, n);
  const Complex z = n[u.point()];
  return {z / std::abs(z), u.point()};
}

/// (t,g)(u,h) = (t u sigma(g,h), gh), defined when g and h compose.
inline std::optional<TwistPoint> twist_product(const TwistContext& ctx, const TwistPoint& a, const TwistPoint& b) {
  const auto& G = ctx.groupoid();
  if (!G.composable(a.g, b.g)) return std::nullopt;
  return TwistPoint{a.phase * b.phase * ctx.sigma(a.g, b.g), G.compose(a.g, b.g)};
}

inline TwistPoint twist_inverse(const TwistContext& ctx, const TwistPoint& a) {
  const Elem gi = ctx.groupoid().inverse(a.g);
  return {std::conj(a.phase) * std::conj(ctx.sigma(a.g, gi)), gi};
}

struct CocycleRecovery {
  Cocycle cocycle;
  double residual = 0;  // max |sigma'(g,h) - sigma(g,h)| before rounding to a rational phase
};

/// sigma'(g,h) = <delta_g delta_h, delta_gh>_{U_gh} on every composable pair.
inline CocycleRecovery recover_cocycle(const ContextPtr& ctx) {
  const auto& G = ctx->groupoid();
  CocycleRecovery out{Cocycle(G.size()), 0.0};
  for (Elem g = 0; g < G.size(); ++g)
    for (Elem h = 0; h < G.size(); ++h) {
      if (!G.composable(g, h)) continue;
      const Elem gh = G.compose(g, h);
      const Complex z = angle(Ultrafilter(ctx, gh), AlgebraElement::delta(ctx, g) * AlgebraElement::delta(ctx, h),
                              AlgebraElement::delta(ctx, gh));
      out.residual = std::max(out.residual, std::abs(z - ctx->sigma(g, h)));
      out.cocycle.set(g, h, Phase::from_complex(z));
    }
  return out;
}

// ---------------------------------------------------------------------------
// Hat map

/// a^([n]_U) = psi_U(E(n*a)) / |n|_U at the canonical points (1, g), n = delta_g.
inline AlgebraElement hat(const AlgebraElement& a) {
  const auto& ctx = a.context();
  AlgebraElement out(ctx);
  for (Elem g = 0; g < ctx->size(); ++g) {
    const Ultrafilter U(ctx, g);
    const AlgebraElement n = AlgebraElement::delta(ctx, g);
    out[g] = source_state(U, diagonal(adj(n) * a)) / magnitude(U, n);
  }
  return out;
}

struct HatReport {
  PropertyCheck round_trip{"hat(a) = a"};
  PropertyCheck multiplicative{"hat(ab) = hat(a) hat(b)"};
  PropertyCheck involutive{"hat(a*) = hat(a)*"};
  PropertyCheck expectation{"E(hat(a)) = hat(E(a))"};
  PropertyCheck support{"supp(hat(n)) = U_n"};

  [[nodiscard]] std::vector<PropertyCheck> checks() const {
    return {round_trip, multiplicative, involutive, expectation, support};
  }
};

inline HatReport check_hat(const ContextPtr& ctx, Rng rng, std::size_t trials, double tol) {
  HatReport rep;
  for (std::size_t i = 0; i < trials; ++i) {
    const auto a = random_element(ctx, rng);
    const auto b = random_element(ctx, rng);
    const auto ha = hat(a);
    rep.round_trip.observe(distance(ha, a), tol, [&] { return format_element(a); });
    rep.multiplicative.observe(distance(hat(a * b), ha * hat(b)), tol, [&] { return format_element(a); });
    rep.involutive.observe(distance(hat(adj(a)), adj(ha)), tol, [&] { return format_element(a); });
    rep.expectation.observe(distance(diagonal(ha), hat(diagonal(a))), tol, [&] { return format_element(a); });
    const auto n = random_monomial(ctx, rng);
    rep.support.expect(hat(n).support() == basic_set(n), [&] { return format_element(n); });
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Reconstruction

/// The ultrafilter groupoid G_N with its recovered cocycle. Element i is the
/// ultrafilter at point[i]; names are "U(<id>)".
struct ReconstructedGroupoid {
  FiniteGroupoid groupoid;
  Cocycle cocycle;
  std::vector<Elem> point;
  double cocycle_residual = 0;
};

/// Builds G_N from algebraic data only: each ultrafilter is represented by a
/// member of N supported at its point; products are defined iff the
/// representatives multiply to a nonzero element, and land in the unique
/// ultrafilter containing that product; inverses, sources and ranges come from
/// n*, n*n and nn*; units are the ultrafilters meeting B.
inline ReconstructedGroupoid build_ultrafilter_groupoid(const SemigroupSpec& spec) {
  const auto& ctx = spec.context();
  const std::size_t n = ctx->size();
  std::vector<AlgebraElement> rep;
  for (Elem g = 0; g < n; ++g) {
    auto d = AlgebraElement::delta(ctx, g);
    if (!spec.contains(d)) throw std::logic_error("no member of N is supported at " + ctx->groupoid().name(g));
    rep.push_back(std::move(d));
  }
  auto locate = [&](const AlgebraElement& a) {
    Elem found = kNoElem;
    for (Elem k = 0; k < n; ++k)
      if (Ultrafilter(ctx, k).contains(a)) {
        if (found != kNoElem) throw std::logic_error("element lies in two point ultrafilters");
        found = k;
      }
    return found;
  };
  const AlgebraElement one = AlgebraElement::identity(ctx);
  std::vector<std::string> names;
  std::vector<bool> unit(n);
  std::vector<Elem> src(n), rng(n), inv(n), comp(n * n, kNoElem);
  for (Elem i = 0; i < n; ++i) {
    names.push_back("U(" + ctx->groupoid().name(i) + ")");
    unit[i] = Ultrafilter(ctx, i).contains(one);
    inv[i] = locate(adj(rep[i]));
    src[i] = locate(adj(rep[i]) * rep[i]);
    rng[i] = locate(rep[i] * adj(rep[i]));
    for (Elem j = 0; j < n; ++j) {
      const AlgebraElement p = rep[i] * rep[j];
      if (!p.is_zero()) comp[i * n + j] = locate(p);
    }
  }
  ReconstructedGroupoid out;
  out.groupoid = FiniteGroupoid(std::move(names), std::move(unit), std::move(src), std::move(rng), std::move(inv),
                                std::move(comp));
  out.point.resize(n);
  for (Elem i = 0; i < n; ++i) out.point[i] = i;
  out.cocycle = Cocycle(n);
  for (Elem i = 0; i < n; ++i)
    for (Elem j = 0; j < n; ++j) {
      const Elem k = out.groupoid.compose(i, j);
      if (!out.groupoid.composable(i, j) || k == kNoElem) continue;
      const Complex z = angle(Ultrafilter(ctx, k), rep[i] * rep[j], rep[k]);
      out.cocycle_residual = std::max(out.cocycle_residual, std::abs(z - ctx->sigma(i, j)));
      out.cocycle.set(i, j, Phase::from_complex(z));
    }
  return out;
}

struct ReconstructionReport {
  bool refused = false;
  std::string refusal;
  ReconstructedGroupoid reconstructed;
  IsoResult iso;              // reconstructed groupoid -> input groupoid, cocycles carried exactly
  double cocycle_residual = 0;
  double hat_residual = 0;
  bool summable = false;
  std::vector<PropertyCheck> checks;

  [[nodiscard]] bool passed() const { return !refused && iso.found() && all_passed(checks); }
};

/// Representative test elements for the image check: every support pattern
/// when the groupoid is tiny, random patterns and bisections otherwise.
inline std::vector<AlgebraElement> image_probe_elements(const ContextPtr& ctx, Rng& rng, std::size_t random_count) {
  std::vector<AlgebraElement> out;
  const std::size_t n = ctx->size();
  if (n <= 6) {
    for (Support s = 0; s < (Support{1} << n); ++s) out.push_back(random_on(ctx, s, rng));
    return out;
  }
  for (std::size_t i = 0; i < random_count; ++i) {
    const Support s = i % 2 == 0 ? random_subset(ctx->groupoid().all_mask(), rng, 0.3)
                                 : random_bisection(ctx->groupoid(), rng);
    out.push_back(random_on(ctx, s, rng));
  }
  return out;
}

/// Full round trip: Cartan axioms, ultrafilters as points, G_N and its cocycle,
/// isomorphism with the input, the hat map, and the image of N.
inline ReconstructionReport reconstruct(const SemigroupSpec& spec, Rng rng, std::size_t iso_budget = kDefaultIsoBudget,
                                        double tol = kDefaultZeroTol) {
  const auto& ctx = spec.context();
  const auto& G = ctx->groupoid();
  ReconstructionReport rep;
  const CartanReport cartan = check_cartan(spec, rng.split("cartan"));
  if (const auto* f = cartan.first_failure()) {
    rep.refused = true;
    rep.refusal = f->name + ": " + f->detail;
    return rep;
  }
  rep.summable = cartan.summable.passed;

  Rng samp = rng.split("samples");
  const auto members = sample_members(spec, samp, 60);
  PropertyCheck points("ultrafilters are points");
  for (Elem g = 0; g < G.size(); ++g) {
    const Ultrafilter U(ctx, g);
    points.expect(spec.contains(AlgebraElement::delta(ctx, g)), [&] { return "no member supported at " + G.name(g); });
    points.expect(check_filter_axioms(U, members).ok(), [&] { return "filter axioms fail at " + G.name(g); });
  }
  rep.checks.push_back(points);

  rep.reconstructed = build_ultrafilter_groupoid(spec);
  const auto valid = validate_groupoid(rep.reconstructed.groupoid);
  PropertyCheck axioms("ultrafilter groupoid axioms");
  axioms.expect(valid.ok(), [&] { return describe(valid.violations.front()); });
  rep.checks.push_back(axioms);

  rep.cocycle_residual = rep.reconstructed.cocycle_residual;
  PropertyCheck cocycle("cocycle recovery");
  cocycle.observe(rep.cocycle_residual, tol, [] { return "recovered cocycle differs"; });
  const auto cv = validate_cocycle(rep.reconstructed.groupoid, rep.reconstructed.cocycle);
  cocycle.expect(cv.ok(), [&] { return describe(cv.violations.front()); });
  rep.checks.push_back(cocycle);

  if (valid.ok())
    rep.iso = groupoids_isomorphic(rep.reconstructed.groupoid, G, iso_budget, &rep.reconstructed.cocycle,
                                   &ctx->cocycle());
  PropertyCheck iso("groupoid isomorphism");
  iso.expect(rep.iso.found(), [&] { return std::string("search outcome ") + to_string(rep.iso.outcome); });
  rep.checks.push_back(iso);

  const HatReport hr = check_hat(ctx, rng.split("hat"), 100, tol);
  for (const auto& c : hr.checks()) rep.checks.push_back(c);
  rep.hat_residual = hr.round_trip.residual;

  const SemigroupSpec image_spec = rep.summable ? spec : csum_closure(spec);
  PropertyCheck image(rep.summable ? "hat(N) is the monomial semigroup" : "hat(csum(N)) is the monomial semigroup");
  Rng probe = rng.split("image");
  auto probes = image_probe_elements(ctx, probe, 200);
  for (const auto& m : members) probes.push_back(m);
  for (const auto& a : probes)
    image.expect(image_spec.contains(a) == is_monomial(hat(a)), [&] { return format_element(a); });
  rep.checks.push_back(image);
  return rep;
}

}  // namespace cartan
