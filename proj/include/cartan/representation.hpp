#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "cartan/algebra.hpp"
#include "cartan/random.hpp"

namespace cartan {

/// One block of the left regular representation: the operator on l^2 of the
/// source fiber s^-1(u).
struct RepresentationBlock {
  Elem unit;
  std::vector<Elem> basis;  // elements h with s(h) = unit, in file order
  Eigen::MatrixXcd op;
};

struct MatrixImage {
  std::vector<RepresentationBlock> blocks;
};

/// pi_u(a) xi_h = sum_{s(g)=r(h)} sigma(g,h) a(g) xi_{gh} on each source fiber.
inline MatrixImage regular_representation(const AlgebraElement& a) {
  const auto& ctx = a.context();
  const auto& G = ctx->groupoid();
  MatrixImage img;
  std::vector<std::size_t> pos(G.size());
  for (Elem u : ctx->units()) {
    RepresentationBlock blk{u, G.source_fiber(u), {}};
    for (std::size_t i = 0; i < blk.basis.size(); ++i) pos[blk.basis[i]] = i;
    const auto d = static_cast<Eigen::Index>(blk.basis.size());
    blk.op = Eigen::MatrixXcd::Zero(d, d);
    for (Elem h : blk.basis)
      for (Elem g = 0; g < G.size(); ++g) {
        if (a[g] == 0.0 || !G.composable(g, h)) continue;
        const Elem gh = G.compose(g, h);
        blk.op(static_cast<Eigen::Index>(pos[gh]), static_cast<Eigen::Index>(pos[h])) += ctx->sigma(g, h) * a[g];
      }
    img.blocks.push_back(std::move(blk));
  }
  return img;
}

inline double operator_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

/// C*-norm: the largest operator norm over the blocks of the regular
/// representation. Finite groupoids are amenable, so this is both the reduced
/// and the full norm.
inline double cstar_norm(const AlgebraElement& a) {
  double n = 0;
  for (const auto& b : regular_representation(a).blocks) n = std::max(n, operator_norm(b.op));
  return n;
}

/// Sup-norm of the coefficients, ||a||_inf.
inline double sup_norm(const AlgebraElement& a) { return a.max_abs(); }

struct ReducedNormReport {
  double operator_norm = 0;
  double monte_carlo_sup = 0;  // sup over random c with ||D(c*c)|| <= 1
  double structured_sup = 0;   // sup over monomials and pairwise sums
  std::size_t trials = 0;

  [[nodiscard]] double best() const { return std::max(monte_carlo_sup, structured_sup); }
  /// Amount by which the formula exceeds the operator norm (must be ~0).
  [[nodiscard]] double upper_violation() const { return std::max(0.0, best() - operator_norm); }
  /// Relative shortfall of the Monte-Carlo lower bound.
  [[nodiscard]] double monte_carlo_gap() const {
    return operator_norm == 0 ? 0.0 : 1.0 - monte_carlo_sup / operator_norm;
  }
  [[nodiscard]] double structured_gap() const {
    return operator_norm == 0 ? 0.0 : 1.0 - structured_sup / operator_norm;
  }
};

namespace detail {

/// ||D(c*a*ac)||^{1/2} for c rescaled so that ||D(c*c)||_inf = 1; 0 if c*c has no diagonal.
inline double reduced_norm_sample(const AlgebraElement& a, AlgebraElement c) {
  const double cc = diagonal(adj(c) * c).max_abs();
  if (cc <= 0) return 0.0;
  c *= Complex(1.0 / std::sqrt(cc));
  const AlgebraElement ac = a * c;
  return std::sqrt(diagonal(adj(ac) * ac).max_abs());
}

}  // namespace detail

/// Evaluates sup{ ||D(c*a*ac)||^{1/2} : ||D(c*c)|| <= 1 } over `trials` random
/// c and over a structured family, and compares it with the operator norm.
inline ReducedNormReport check_reduced_norm_formula(const AlgebraElement& a, std::size_t trials, Rng rng) {
  const auto& ctx = a.context();
  ReducedNormReport rep;
  rep.operator_norm = cstar_norm(a);
  rep.trials = trials;
  for (std::size_t t = 0; t < trials; ++t)
    rep.monte_carlo_sup = std::max(rep.monte_carlo_sup, detail::reduced_norm_sample(a, random_element(ctx, rng)));

  const Complex roots[] = {1.0, Complex(0, 1), -1.0, Complex(0, -1)};
  for (Elem h = 0; h < ctx->size(); ++h) {
    rep.structured_sup = std::max(rep.structured_sup, detail::reduced_norm_sample(a, AlgebraElement::delta(ctx, h)));
    for (Elem k = h + 1; k < ctx->size(); ++k)
      for (Complex w : roots) {
        const auto c = AlgebraElement::delta(ctx, h) + AlgebraElement::delta(ctx, k, w);
        rep.structured_sup = std::max(rep.structured_sup, detail::reduced_norm_sample(a, c));
      }
  }
  return rep;
}

}  // namespace cartan
