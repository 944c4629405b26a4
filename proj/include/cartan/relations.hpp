#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cartan/algebra.hpp"
#include "cartan/representation.hpp"

namespace cartan {

inline void require_monomial(const AlgebraElement& a, const char* what) {
  if (!is_monomial(a)) throw input_error(std::string(what) + " is not monomial (support is not a bisection)");
}

// ---------------------------------------------------------------------------
// Restriction

/// Diagonal b with m = mb = nb, if one exists. Right multiplication by a
/// diagonal element scales the source fiber of each unit, so b can be chosen
/// unit by unit: 1 where m lives (forcing m = n on that whole fiber), 0 elsewhere.
inline std::optional<AlgebraElement> restriction_witness(const AlgebraElement& m, const AlgebraElement& n) {
  m.check_same(n);
  const auto& ctx = m.context();
  const auto& G = ctx->groupoid();
  AlgebraElement b(ctx);
  const Support sm = m.support();
  for (Elem u : ctx->units()) {
    bool live = false;
    for (Elem g : G.source_fiber(u)) live = live || contains(sm, g);
    if (live) b[u] = 1.0;
  }
  if (distance(m * b, m) > ctx->zero_tol() || distance(n * b, m) > ctx->zero_tol()) return std::nullopt;
  return b;
}

/// m agrees with n on the support of m.
inline bool agrees_on_support(const AlgebraElement& m, const AlgebraElement& n) {
  m.check_same(n);
  bool ok = true;
  for_each_bit(m.support(), [&](Elem g) { ok = ok && std::abs(m[g] - n[g]) <= m.context()->zero_tol(); });
  return ok;
}

struct RestrictionCheck {
  bool witness_route = false;   // diagonal b with m = mb = nb found
  bool pointwise_route = false; // m agrees with n on supp(m)
};

inline RestrictionCheck restriction_routes(const AlgebraElement& m, const AlgebraElement& n) {
  require_monomial(m, "m");
  require_monomial(n, "n");
  return {restriction_witness(m, n).has_value(), agrees_on_support(m, n)};
}

/// m is a restriction of n. Both the diagonal-witness route and the pointwise
/// route are evaluated; a disagreement is a logic error.
inline bool restriction_le(const AlgebraElement& m, const AlgebraElement& n) {
  const auto r = restriction_routes(m, n);
  if (r.witness_route != r.pointwise_route) throw std::logic_error("restriction routes disagree");
  return r.witness_route;
}

/// m is a restriction of n for arbitrary (not necessarily monomial) n.
inline bool restricts_via_diagonal(const AlgebraElement& m, const AlgebraElement& n) {
  return restriction_witness(m, n).has_value();
}

// ---------------------------------------------------------------------------
// Domination

struct DominationWitness {
  AlgebraElement s;
  double residual = 0;  // largest certificate residual when issued
};

/// Largest violation of: sm, ms, sn, ns diagonal and nsm = m = msn.
inline double domination_residual(const AlgebraElement& m, const AlgebraElement& s, const AlgebraElement& n) {
  double r = 0;
  r = std::max(r, off_diagonal_mass(s * m));
  r = std::max(r, off_diagonal_mass(m * s));
  r = std::max(r, off_diagonal_mass(s * n));
  r = std::max(r, off_diagonal_mass(n * s));
  r = std::max(r, distance(n * s * m, m));
  r = std::max(r, distance(m * s * n, m));
  return r;
}

inline bool certifies(const AlgebraElement& m, const AlgebraElement& s, const AlgebraElement& n) {
  return domination_residual(m, s, n) <= m.context()->zero_tol();
}

/// Support-level oracle for domination: supp(m) is contained in supp(n).
inline bool dominates_by_support(const AlgebraElement& m, const AlgebraElement& n) {
  return (m.support() & ~n.support()) == 0;
}

/// Constructs s = P(m*m) (n*n)^+ n* by diagonal functional calculus and
/// returns it iff it certifies m <_s n. P is the support projection.
inline std::optional<DominationWitness> dominates(const AlgebraElement& m, const AlgebraElement& n) {
  require_monomial(m, "m");
  require_monomial(n, "n");
  m.check_same(n);
  const AlgebraElement s = diag_support_projection(adj(m) * m) * diag_pinv(adj(n) * n) * adj(n);
  const double r = domination_residual(m, s, n);
  if (r > m.context()->zero_tol()) return std::nullopt;
  return DominationWitness{s, r};
}

struct Interpolant {
  AlgebraElement l;
  DominationWitness lower;  // m <_s l with the input witness
  DominationWitness upper;  // l <_t n
};

/// Given m <_s n, returns l = n g(sn) with m <_s l < n, where
/// g(x) = min(|x|, 1/|x|) and t = h(sn) s with h(x) = 1/x.
inline Interpolant interpolate(const AlgebraElement& m, const AlgebraElement& n, const DominationWitness& w) {
  if (!certifies(m, w.s, n)) throw input_error("witness does not certify m < n");
  const double tol = m.context()->zero_tol();
  const AlgebraElement sn = diagonal(w.s * n);
  const auto g = diag_apply(sn, [tol](Complex z) {
    const double r = std::abs(z);
    return r <= tol ? Complex(0.0) : Complex(std::min(r, 1.0 / r));
  });
  const AlgebraElement l = n * g;
  const AlgebraElement t = diag_pinv(sn) * w.s;
  Interpolant out{l, {w.s, domination_residual(m, w.s, l)}, {t, domination_residual(l, t, n)}};
  if (out.lower.residual > tol || out.upper.residual > tol)
    throw std::logic_error("interpolation certificate failed");
  return out;
}

/// n_j = n f_j(n*n) with plateau f_j(x) = clamp(2jx - 1, 0, 1), so f_j = 1 on [1/j, inf).
struct DominatedApproximation {
  std::vector<AlgebraElement> approximants;  // n_1, ..., n_k
  std::vector<DominationWitness> witnesses;  // n_j <_{s_j} n
  std::size_t stabilization_index = 0;       // first j with f_j = 1 on every nonzero value of n*n
};

inline DominatedApproximation dominated_approximation(const AlgebraElement& n, std::size_t k) {
  require_monomial(n, "n");
  const auto& ctx = n.context();
  const double tol = ctx->zero_tol();
  const AlgebraElement nn = adj(n) * n;
  DominatedApproximation out;
  double min_val = 0;
  for (Elem u : ctx->units())
    if (nn[u].real() > tol) min_val = min_val == 0 ? nn[u].real() : std::min(min_val, nn[u].real());
  out.stabilization_index = min_val == 0 ? 1 : static_cast<std::size_t>(std::ceil(1.0 / min_val - 1e-12));
  out.stabilization_index = std::max<std::size_t>(out.stabilization_index, 1);
  for (std::size_t j = 1; j <= k; ++j) {
    const double jd = static_cast<double>(j);
    const auto f = diag_apply_real(nn, [jd](double x) { return std::clamp(2.0 * jd * x - 1.0, 0.0, 1.0); });
    const auto g = diag_apply_real(nn, [jd](double x) { return x >= 1.0 / (2.0 * jd) ? 1.0 / x : 0.0; });
    AlgebraElement nj = n * f;
    AlgebraElement sj = g * adj(n);
    const double r = domination_residual(nj, sj, n);
    out.approximants.push_back(std::move(nj));
    out.witnesses.push_back({std::move(sj), r});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Unit-ball domination

/// Residuals for m <^1_t n: the domination conditions plus tn, nt positive
/// with norm at most 1.
struct BallCertificate {
  double domination = 0;
  double positivity = 0;  // largest negative or imaginary part of tn, nt
  double norm_tn = 0;
  double norm_nt = 0;

  [[nodiscard]] bool ok(double tol) const {
    return domination <= tol && positivity <= tol && norm_tn <= 1 + tol && norm_nt <= 1 + tol;
  }
};

inline BallCertificate ball_certificate(const AlgebraElement& m, const AlgebraElement& t, const AlgebraElement& n) {
  BallCertificate c;
  c.domination = domination_residual(m, t, n);
  for (const auto& p : {diagonal(t * n), diagonal(n * t)})
    for (Elem u : p.context()->units())
      c.positivity = std::max({c.positivity, -p[u].real(), std::abs(p[u].imag())});
  c.norm_tn = cstar_norm(t * n);
  c.norm_nt = cstar_norm(n * t);
  return c;
}

struct BallWitness {
  AlgebraElement t;
  BallCertificate certificate;
};

/// For m < n returns t in n*B+ and B+n* with m <^1_t n, following the
/// construction s -> ss*n* -> s f(ns) -> g(sn) h(n*n) n* with
/// f(x) = min(x, 1/x), g(x) = max(2x - 1, 0), h(x) = min(1/x, rx), r > 16||s||^4.
inline BallWitness ball_witness(const AlgebraElement& m, const AlgebraElement& n) {
  const auto w = dominates(m, n);
  if (!w) throw input_error("ball_witness requires m < n");
  const double tol = m.context()->zero_tol();
  const AlgebraElement ns = adj(n);
  const AlgebraElement s1 = w->s * adj(w->s) * ns;
  const auto f = diag_apply_real(diagonal(n * s1), [tol](double x) { return x <= tol ? 0.0 : std::min(x, 1.0 / x); });
  const AlgebraElement s2 = s1 * f;
  const double norm_s = cstar_norm(s2);
  const double r = 16.0 * std::pow(norm_s, 4) + 1.0;
  const auto g = diag_apply_real(diagonal(s2 * n), [](double x) { return std::max(2.0 * x - 1.0, 0.0); });
  const auto h = diag_apply_real(diagonal(ns * n), [r, tol](double x) { return x <= tol ? 0.0 : std::min(1.0 / x, r * x); });
  AlgebraElement t = g * h * ns;
  auto cert = ball_certificate(m, t, n);
  return {std::move(t), cert};
}

struct PredomainInterpolant {
  AlgebraElement l;
  std::vector<double> lower_residuals;  // m_i <_{l*} l
  DominationWitness upper;              // l < n
  double two_sided_residual = 0;        // |n sqrt(be) - sqrt(cd) n|
};

/// For m_1, ..., m_k < n returns l in nB+ and B+n with every m_i <_{l*} l < n.
/// The ball witnesses t_i = b_i n* = n* c_i are merged by pointwise maxima,
/// interpolated to q = dn = ne, and l = n sqrt(be) = sqrt(cd) n.
inline PredomainInterpolant predomain_interpolant(const std::vector<AlgebraElement>& ms, const AlgebraElement& n) {
  if (ms.empty()) throw input_error("predomain_interpolant needs at least one element");
  const auto& ctx = n.context();
  const double tol = ctx->zero_tol();
  const AlgebraElement ns = adj(n);
  const AlgebraElement pinv_src = diag_pinv(ns * n);
  const AlgebraElement pinv_rng = diag_pinv(n * ns);
  AlgebraElement b(ctx), c(ctx);
  for (const auto& m : ms) {
    const auto bw = ball_witness(m, n);
    if (!bw.certificate.ok(tol)) throw std::logic_error("ball witness certificate failed");
    b = diag_max(b, diagonal(bw.t * n) * pinv_src);
    c = diag_max(c, diagonal(n * bw.t) * pinv_rng);
  }
  const AlgebraElement s = b * ns;
  const auto g = [tol](Complex z) {
    const double r = std::abs(z);
    return r <= tol ? Complex(0.0) : Complex(std::min(r, 1.0 / r));
  };
  const AlgebraElement e = diag_apply(diagonal(s * n), g);
  const AlgebraElement d = diag_apply(diagonal(n * s), g);
  const auto sqrt_pos = [](double x) { return std::sqrt(x); };
  const AlgebraElement l = n * diag_apply_real(b * e, sqrt_pos);
  const AlgebraElement l2 = diag_apply_real(c * d, sqrt_pos) * n;

  PredomainInterpolant out{l, {}, {}, distance(l, l2)};
  const AlgebraElement ls = adj(l);
  for (const auto& m : ms) out.lower_residuals.push_back(domination_residual(m, ls, l));
  const auto up = dominates(l, n);
  if (!up) throw std::logic_error("predomain interpolant is not dominated by n");
  out.upper = *up;
  return out;
}

}  // namespace cartan
