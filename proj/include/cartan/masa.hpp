#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cartan/algebra.hpp"
#include "cartan/check.hpp"
#include "cartan/random.hpp"
#include "cartan/relations.hpp"
#include "cartan/representation.hpp"
#include "cartan/semigroups.hpp"

namespace cartan {

/// Linear basis of C(B) = {a : ab = ba for all b in B}, in reduced row
/// echelon form over the element coordinates.
struct CommutantBasis {
  std::vector<AlgebraElement> basis;
  double commutator_residual = 0;  // max |[a, delta_u]| over basis and units

  [[nodiscard]] std::size_t dimension() const { return basis.size(); }
};

namespace detail {

/// Row-reduces the rows of `m` in place and drops zero rows.
inline Eigen::MatrixXcd rref(Eigen::MatrixXcd m, double tol = 1e-10) {
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Eigen::Index piv = row;
    for (Eigen::Index r = row; r < m.rows(); ++r)
      if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
    if (std::abs(m(piv, col)) <= tol) continue;
    m.row(piv).swap(m.row(row));
    m.row(row) /= m(row, col);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      if (r != row) m.row(r) -= m(r, col) * m.row(row);
    ++row;
  }
  Eigen::MatrixXcd out = m.topRows(row);
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    for (Eigen::Index j = 0; j < out.cols(); ++j)
      if (std::abs(out(i, j)) <= tol) out(i, j) = 0.0;
  return out;
}

}  // namespace detail

/// Solves [pi(a), pi(delta_u)] = 0 for every unit u in the regular
/// representation and pulls the solutions back along the (injective) map
/// a -> pi(a).
inline CommutantBasis commutant_basis(const ContextPtr& ctx) {
  const std::size_t n = ctx->size();
  std::vector<MatrixImage> images;
  for (Elem g = 0; g < n; ++g) images.push_back(regular_representation(AlgebraElement::delta(ctx, g)));
  std::vector<MatrixImage> unit_images;
  for (Elem u : ctx->units()) unit_images.push_back(regular_representation(AlgebraElement::delta(ctx, u)));

  std::vector<std::vector<Complex>> columns(n);
  for (Elem g = 0; g < n; ++g)
    for (const auto& ui : unit_images)
      for (std::size_t b = 0; b < ui.blocks.size(); ++b) {
        const auto& x = images[g].blocks[b].op;
        const auto& y = ui.blocks[b].op;
        const Eigen::MatrixXcd c = x * y - y * x;
        for (Eigen::Index i = 0; i < c.size(); ++i) columns[g].push_back(c(i));
      }
  const auto rows = static_cast<Eigen::Index>(columns.front().size());
  Eigen::MatrixXcd sys(rows, static_cast<Eigen::Index>(n));
  for (Elem g = 0; g < n; ++g)
    for (Eigen::Index i = 0; i < rows; ++i) sys(i, static_cast<Eigen::Index>(g)) = columns[g][static_cast<std::size_t>(i)];

  Eigen::FullPivLU<Eigen::MatrixXcd> lu(sys);
  lu.setThreshold(1e-10);
  const Eigen::MatrixXcd kernel = lu.kernel();
  CommutantBasis out;
  if (lu.rank() == static_cast<Eigen::Index>(n)) return out;
  const Eigen::MatrixXcd reduced = detail::rref(kernel.transpose());
  for (Eigen::Index r = 0; r < reduced.rows(); ++r) {
    AlgebraElement a(ctx);
    for (Elem g = 0; g < n; ++g) a[g] = reduced(r, static_cast<Eigen::Index>(g));
    for (Elem u : ctx->units()) {
      const auto du = AlgebraElement::delta(ctx, u);
      out.commutator_residual = std::max(out.commutator_residual, distance(a * du, du * a));
    }
    out.basis.push_back(std::move(a));
  }
  return out;
}

/// Sum over units of the isotropy group orders.
inline std::size_t isotropy_count(const FiniteGroupoid& g) {
  std::size_t c = 0;
  for (Elem u : g.units()) c += g.isotropy(u).size();
  return c;
}

struct MasaReport {
  bool is_masa = false;
  bool commutant_route = false;  // C(B) = B by linear algebra
  bool effective_route = false;  // groupoid effective
  std::size_t commutant_dimension = 0;
  std::optional<AlgebraElement> witness;  // element of C(B) outside B
};

/// Whether B is a MASA; both the commutant computation and effectiveness are
/// evaluated and must agree (std::logic_error otherwise).
inline MasaReport is_masa(const ContextPtr& ctx) {
  MasaReport rep;
  const auto cb = commutant_basis(ctx);
  rep.commutant_dimension = cb.dimension();
  rep.commutant_route = cb.dimension() == ctx->units().size();
  rep.effective_route = is_effective(ctx->groupoid());
  if (rep.commutant_route != rep.effective_route) throw std::logic_error("commutant and effectiveness routes disagree");
  rep.is_masa = rep.commutant_route;
  for (const auto& a : cb.basis)
    if (!is_diagonal(a)) {
      rep.witness = a;
      break;
    }
  return rep;
}

enum class SuiteStatus { passed, failed, skipped };

inline const char* to_string(SuiteStatus s) {
  switch (s) {
    case SuiteStatus::passed: return "passed";
    case SuiteStatus::failed: return "failed";
    case SuiteStatus::skipped: return "skipped";
  }
  return "?";
}

struct TheoremReport {
  SuiteStatus status = SuiteStatus::skipped;
  std::vector<PropertyCheck> checks;

  void finish() { status = all_passed(checks) ? SuiteStatus::passed : SuiteStatus::failed; }
};

/// Random elements with supports of mixed shape, so that both members and
/// non-members of N(B) occur.
inline std::vector<AlgebraElement> mixed_random_elements(const ContextPtr& ctx, Rng& rng, std::size_t count) {
  std::vector<AlgebraElement> out;
  for (std::size_t i = 0; i < count; ++i) {
    Support s = 0;
    switch (i % 3) {
      case 0: s = random_bisection(ctx->groupoid(), rng); break;
      case 1: s = random_subset(ctx->groupoid().all_mask(), rng, 0.25); break;
      default: s = random_bisection(ctx->groupoid(), rng) | bit(rng.index(ctx->size())); break;
    }
    out.push_back(random_on(ctx, s, rng));
  }
  return out;
}

/// When B is a MASA, the closure of N under compatible sums and N(B) agree as
/// predicates on generators, random elements and (|G| <= 6) every support pattern.
inline TheoremReport masa_implies_normalisers(const ContextPtr& ctx, Rng rng) {
  TheoremReport rep;
  if (!is_masa(ctx).is_masa) return rep;
  const SemigroupSpec closure = csum_closure(SemigroupSpec::monomial(ctx));
  auto agree = [&](PropertyCheck& c, const AlgebraElement& a) {
    c.expect(closure.contains(a) == is_normalizer(a), [&] { return format_element(a); });
  };
  PropertyCheck gens("monomial generators");
  for (Elem g = 0; g < ctx->size(); ++g) agree(gens, AlgebraElement::delta(ctx, g));
  agree(gens, AlgebraElement::identity(ctx));
  PropertyCheck random("random elements");
  for (const auto& a : mixed_random_elements(ctx, rng, 200)) agree(random, a);
  PropertyCheck sweep("support-pattern sweep");
  if (ctx->size() <= 6)
    for (Support s = 0; s < (Support{1} << ctx->size()); ++s) agree(sweep, random_on(ctx, s, rng));
  rep.checks = {gens, random};
  if (ctx->size() <= 6) rep.checks.push_back(sweep);
  rep.finish();
  return rep;
}

struct ContrapositiveReport {
  TheoremReport theorem;
  std::optional<AlgebraElement> c;                   // c in C(B), c != 0, E(c) = 0, c*c = cc* in B
  std::size_t order = 0;                             // least K with E(c^K) != 0
  std::optional<AlgebraElement> outside_normalizer;  // element of N(B) outside csum(N)
};

/// First coordinate off the unit space.
inline std::optional<Elem> first_off_diagonal(const AlgebraElement& a) {
  const auto& G = a.context()->groupoid();
  for (Elem g = 0; g < G.size(); ++g)
    if (!G.is_unit(g) && std::abs(a[g]) > a.context()->zero_tol()) return g;
  return std::nullopt;
}

/// exp(i theta (c + c*)).
inline AlgebraElement hermitian_exponential(const AlgebraElement& c, double theta) {
  return exp_series(Complex(0, theta) * (c + adj(c)));
}

/// When B is not a MASA: picks a in C(B) outside B, sets c = ba - E(ba) with b
/// the unit delta at the source of a's first off-diagonal coordinate, checks the
/// witness structure, and exhibits exp(i(c + c*)) in N(B) outside csum(N).
inline ContrapositiveReport normalisers_imply_masa_contrapositive(const ContextPtr& ctx) {
  ContrapositiveReport rep;
  const auto masa = is_masa(ctx);
  if (masa.is_masa) return rep;
  PropertyCheck found("witness c found");
  PropertyCheck structure("c != 0, E(c) = 0, c*c = cc* in B, c in C(B)");
  PropertyCheck powers("E(c^j) = 0 below the order");
  PropertyCheck separation("N(B) differs from csum(N)");
  const double tol = ctx->zero_tol();

  if (masa.witness) {
    const auto g = first_off_diagonal(*masa.witness);
    const AlgebraElement b = AlgebraElement::delta(ctx, ctx->groupoid().source(*g));
    const AlgebraElement ba = b * *masa.witness;
    rep.c = ba - diagonal(ba);
  }
  found.expect(rep.c.has_value() && !rep.c->is_zero(), [] { return "search failure: falsification candidate"; });
  if (rep.c && !rep.c->is_zero()) {
    const AlgebraElement& c = *rep.c;
    const AlgebraElement cc = adj(c) * c;
    bool commutes = true;
    for (Elem u : ctx->units()) {
      const auto du = AlgebraElement::delta(ctx, u);
      commutes = commutes && approx_equal(c * du, du * c);
    }
    structure.expect(diagonal(c).is_zero() && is_diagonal(cc) && approx_equal(cc, c * adj(c)) && commutes,
                     [&] { return format_element(c); });
    AlgebraElement p = c;
    for (std::size_t k = 1; k <= 4 * ctx->size() && rep.order == 0; ++k) {
      if (diagonal(p).max_abs() > tol) rep.order = k;
      else p = p * c;
    }
    powers.expect(rep.order > 1, [&] { return "order " + std::to_string(rep.order); });
    const SemigroupSpec closure = csum_closure(SemigroupSpec::monomial(ctx));
    for (double theta : {1.0, 0.7, 0.3}) {
      AlgebraElement n = hermitian_exponential(c, theta);
      if (is_normalizer(n) && !closure.contains(n)) {
        rep.outside_normalizer = std::move(n);
        break;
      }
    }
    separation.expect(rep.outside_normalizer.has_value(), [] { return "no element of N(B) outside csum(N) found"; });
  }
  rep.theorem.checks = {found, structure, powers, separation};
  rep.theorem.finish();
  return rep;
}

/// Smallest eigenvalue of the Gram matrix of a -> sum_u E(a*a)(u); E is
/// faithful iff it is positive.
inline double expectation_gram_min_eigenvalue(const ContextPtr& ctx) {
  const auto n = static_cast<Eigen::Index>(ctx->size());
  Eigen::MatrixXcd gram(n, n);
  for (Elem g = 0; g < ctx->size(); ++g)
    for (Elem h = 0; h < ctx->size(); ++h) {
      const AlgebraElement e = diagonal(adj(AlgebraElement::delta(ctx, g)) * AlgebraElement::delta(ctx, h));
      Complex t = 0;
      for (Elem u : ctx->units()) t += e[u];
      gram(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(h)) = t;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
  return es.eigenvalues().minCoeff();
}

struct CriterionReport {
  bool restriction_holds = false;  // E(n) restricts n for every tested normalizer
  bool faithful = false;
  bool conjunction = false;
  bool masa = false;
  std::size_t normalizers_tested = 0;
  std::optional<AlgebraElement> failing_normalizer;  // first n in N(B) with E(n) not below n
};

/// Tests E(n) restricts n over sampled normalizers (plus a support sweep when
/// |G| <= 6 and exponentials of the non-MASA witness), and faithfulness of E.
inline CriterionReport cartan_criterion(const ContextPtr& ctx, Rng rng) {
  CriterionReport rep;
  rep.masa = is_masa(ctx).is_masa;
  rep.faithful = expectation_gram_min_eigenvalue(ctx) > 1e-12;

  std::vector<AlgebraElement> cands;
  if (!rep.masa) {
    const auto cp = normalisers_imply_masa_contrapositive(ctx);
    if (cp.c)
      for (double theta : {1.0, 0.7, 0.3}) cands.push_back(hermitian_exponential(*cp.c, theta));
  }
  const auto spec = SemigroupSpec::normalizers(ctx);
  for (auto& a : sample_members(spec, rng, 100)) cands.push_back(std::move(a));
  if (ctx->size() <= 6)
    for (Support s = 0; s < (Support{1} << ctx->size()); ++s) cands.push_back(random_on(ctx, s, rng));

  rep.restriction_holds = true;
  for (const auto& n : cands) {
    if (!is_normalizer(n)) continue;
    ++rep.normalizers_tested;
    if (!restricts_via_diagonal(diagonal(n), n)) {
      rep.restriction_holds = false;
      if (!rep.failing_normalizer) rep.failing_normalizer = n;
    }
  }
  rep.conjunction = rep.restriction_holds && rep.faithful;
  return rep;
}

}  // namespace cartan
