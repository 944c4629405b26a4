#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "test_util.hpp"

using namespace cartan;
using namespace cartan::testing;

namespace {

// Convolution straight from the definition: sum over all pairs (h, k) with hk = g.
AlgebraElement naive_product(const AlgebraElement& a, const AlgebraElement& b) {
  const auto& ctx = a.context();
  const auto& G = ctx->groupoid();
  AlgebraElement out(ctx);
  for (Elem g = 0; g < G.size(); ++g)
    for (Elem h = 0; h < G.size(); ++h)
      for (Elem k = 0; k < G.size(); ++k)
        if (G.source(h) == G.range(k) && G.compose(h, k) == g) out[g] += ctx->sigma(h, k) * a[h] * b[k];
  return out;
}

Eigen::Matrix2cd pauli_of(const AlgebraElement& a) {
  Eigen::Matrix2cd X, Z, I = Eigen::Matrix2cd::Identity();
  X << 0, 1, 1, 0;
  Z << 1, 0, 0, -1;
  // (a,b) has index 2a + b and maps to X^a Z^b.
  const Eigen::Matrix2cd m[4] = {I, Z, X, X * Z};
  Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
  for (Elem g = 0; g < 4; ++g) out += a[g] * m[g];
  return out;
}

// R_k element as a k x k matrix: delta_(i,j) is the matrix unit e_ij.
Eigen::MatrixXcd matrix_of(const AlgebraElement& a, std::size_t k) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) m(i, j) = a[i * k + j];
  return m;
}

}  // namespace

TEST(Phase, ExactArithmetic) {
  const Phase half(1, 2), quarter(1, 4);
  EXPECT_TRUE((half * half).is_one());
  EXPECT_EQ(quarter * quarter, half);
  EXPECT_EQ(Phase(3, 4).conj(), quarter);
  EXPECT_EQ(Phase(5, 4), quarter);
  EXPECT_EQ(Phase(-1, 4), Phase(3, 4));
  EXPECT_NEAR(std::abs(quarter.value() - Complex(0, 1)), 0.0, 1e-15);
  EXPECT_EQ(Phase::from_complex(Complex(0, -1)), Phase(3, 4));
}

TEST(Convolution, UnitIsIdempotent) {
  for (const auto& f : standard_fixtures()) {
    const auto ctx = f.context();
    for (Elem u : ctx->units()) {
      const auto d = AlgebraElement::delta(ctx, u);
      EXPECT_TRUE(approx_equal(d * d, d)) << f.name;
    }
  }
}

TEST(Convolution, MatrixUnits) {
  const auto ctx = ctx_of("R2");
  EXPECT_TRUE(approx_equal(delta(ctx, "(1,2)") * delta(ctx, "(2,1)"), delta(ctx, "(1,1)")));
  EXPECT_TRUE((delta(ctx, "(1,2)") * delta(ctx, "(1,2)")).is_zero());
}

TEST(Convolution, PauliAnticommutation) {
  const auto ctx = ctx_of("V4_pauli");
  EXPECT_TRUE(approx_equal(delta(ctx, "(0,1)") * delta(ctx, "(1,0)"), delta(ctx, "(1,1)", -1.0)));
  EXPECT_TRUE(approx_equal(delta(ctx, "(1,0)") * delta(ctx, "(0,1)"), delta(ctx, "(1,1)")));
}

TEST(Convolution, MatchesDefinitionOnRandomElements) {
  Rng rng(7, "convolution");
  for (const auto& f : standard_fixtures()) {
    const auto ctx = f.context();
    for (int t = 0; t < 20; ++t) {
      const auto a = random_element(ctx, rng), b = random_element(ctx, rng);
      ASSERT_LT(distance(a * b, naive_product(a, b)), 1e-12) << f.name;
    }
  }
}

TEST(Convolution, Associative) {
  Rng rng(8, "assoc");
  for (const auto& f : standard_fixtures()) {
    const auto ctx = f.context();
    for (int t = 0; t < 20; ++t) {
      const auto a = random_element(ctx, rng), b = random_element(ctx, rng), c = random_element(ctx, rng);
      ASSERT_LT(distance((a * b) * c, a * (b * c)), 1e-10) << f.name;
    }
  }
}

TEST(Convolution, MatrixOracleOnR3) {
  Rng rng(9, "matrix");
  const auto ctx = ctx_of("R3");
  for (int t = 0; t < 50; ++t) {
    const auto a = random_element(ctx, rng), b = random_element(ctx, rng);
    EXPECT_LT((matrix_of(a * b, 3) - matrix_of(a, 3) * matrix_of(b, 3)).norm(), 1e-12);
    EXPECT_LT((matrix_of(adj(a), 3) - matrix_of(a, 3).adjoint()).norm(), 1e-12);
  }
}

TEST(Convolution, PauliMatrixOracle) {
  Rng rng(10, "pauli");
  const auto ctx = ctx_of("V4_pauli");
  for (int t = 0; t < 50; ++t) {
    const auto a = random_element(ctx, rng), b = random_element(ctx, rng);
    EXPECT_LT((pauli_of(a * b) - pauli_of(a) * pauli_of(b)).norm(), 1e-12);
    EXPECT_LT((pauli_of(adj(a)) - pauli_of(a).adjoint()).norm(), 1e-12);
  }
}

TEST(Involution, Examples) {
  const auto r2 = ctx_of("R2");
  EXPECT_TRUE(approx_equal(adj(delta(r2, "(1,2)")), delta(r2, "(2,1)")));
  const Complex z(2, -3);
  EXPECT_TRUE(approx_equal(adj(delta(r2, "(1,1)", z)), delta(r2, "(1,1)", std::conj(z))));
}

TEST(Involution, InvolutiveAndAntiMultiplicative) {
  Rng rng(11, "involution");
  for (const auto& f : standard_fixtures()) {
    const auto ctx = f.context();
    for (int t = 0; t < 100; ++t) {
      const auto a = random_element(ctx, rng), b = random_element(ctx, rng);
      ASSERT_LT(distance(adj(adj(a)), a), 1e-12) << f.name;
      if (t < 20) ASSERT_LT(distance(adj(a * b), adj(b) * adj(a)), 1e-10) << f.name;
    }
  }
}

TEST(Diagonal, Examples) {
  const auto r2 = ctx_of("R2");
  EXPECT_TRUE(approx_equal(diagonal(delta(r2, "(2,2)")), delta(r2, "(2,2)")));
  EXPECT_TRUE(diagonal(delta(r2, "(1,2)")).is_zero());
  const auto z4 = ctx_of("Z4");
  EXPECT_TRUE(approx_equal(diagonal(elem(z4, {{"e", 3.0}, {"1", Complex(0, 1)}})), delta(z4, "e", 3.0)));
}

TEST(Diagonal, Linear) {
  Rng rng(12, "diag");
  for (const auto& f : standard_fixtures()) {
    const auto ctx = f.context();
    const auto a = random_element(ctx, rng), b = random_element(ctx, rng);
    EXPECT_LT(distance(diagonal(a + b), diagonal(a) + diagonal(b)), 1e-14);
  }
}

TEST(Representation, UnitsAreProjections) {
  const auto ctx = ctx_of("R3");
  const auto& G = ctx->groupoid();
  for (Elem u : ctx->units()) {
    const auto img = regular_representation(AlgebraElement::delta(ctx, u));
    for (const auto& blk : img.blocks)
      for (std::size_t i = 0; i < blk.basis.size(); ++i)
        for (std::size_t j = 0; j < blk.basis.size(); ++j) {
          const double expect = (i == j && G.range(blk.basis[i]) == u) ? 1.0 : 0.0;
          EXPECT_EQ(blk.op(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), Complex(expect));
        }
  }
}

TEST(Representation, MatrixUnitOnFirstBlock) {
  const auto ctx = ctx_of("R2");
  const auto& G = ctx->groupoid();
  const auto img = regular_representation(delta(ctx, "(2,1)"));
  const auto& blk = img.blocks.front();
  ASSERT_EQ(blk.unit, G.at("(1,1)"));
  const auto pos = [&](const char* id) {
    return static_cast<Eigen::Index>(std::find(blk.basis.begin(), blk.basis.end(), G.at(id)) - blk.basis.begin());
  };
  EXPECT_EQ(blk.op(pos("(2,1)"), pos("(1,1)")), Complex(1.0));
  EXPECT_NEAR(blk.op.cwiseAbs().sum(), 1.0, 1e-15);
}

TEST(Representation, PauliImageIsFullMatrixAlgebra) {
  const auto ctx = ctx_of("V4_pauli");
  std::vector<Eigen::Matrix2cd> mats;
  Eigen::MatrixXcd span(4, 4);
  for (Elem g = 0; g < 4; ++g) {
    const auto m = pauli_of(AlgebraElement::delta(ctx, g));
    mats.push_back(m);
    span.col(static_cast<Eigen::Index>(g)) = Eigen::Map<const Eigen::Vector4cd>(m.data());
  }
  EXPECT_EQ(Eigen::FullPivLU<Eigen::MatrixXcd>(span).rank(), 4);
  // Center: only scalars commute with every generator.
  int central = 0;
  for (const auto& m : mats) {
    bool commutes = true;
    for (const auto& n : mats) commutes = commutes && (m * n - n * m).norm() < 1e-12;
    central += commutes;
  }
  EXPECT_EQ(central, 1);
  // The groupoid representation of the twisted algebra is faithful on each element.
  Rng rng(13, "pauli-faithful");
  for (int t = 0; t < 20; ++t) {
    const auto a = random_element(ctx, rng);
    EXPECT_NEAR(cstar_norm(a), [&] {
      Eigen::JacobiSVD<Eigen::Matrix2cd> svd(pauli_of(a));
      return svd.singularValues()(0);
    }(), 1e-10);
  }
}

TEST(Norm, PointMassesHaveNormOne) {
  for (const auto& f : standard_fixtures()) {
    const auto ctx = f.context();
    for (Elem g = 0; g < ctx->size(); ++g) EXPECT_NEAR(cstar_norm(AlgebraElement::delta(ctx, g)), 1.0, 1e-12) << f.name;
  }
}

TEST(Norm, HomogeneityAndCStarIdentity) {
  Rng rng(14, "norm");
  for (const auto& f : standard_fixtures()) {
    const auto ctx = f.context();
    for (int t = 0; t < 100; ++t) {
      const auto a = random_element(ctx, rng);
      const Complex z = rng.gaussian();
      const double na = cstar_norm(a);
      ASSERT_NEAR(cstar_norm(z * a), std::abs(z) * na, 1e-9 * (1 + na));
      ASSERT_NEAR(cstar_norm(adj(a) * a), na * na, 1e-9 * (1 + na * na));
    }
  }
}

TEST(Norm, PermutationMatrix) {
  const auto ctx = ctx_of("R2");
  EXPECT_NEAR(cstar_norm(delta(ctx, "(1,2)") + delta(ctx, "(2,1)")), 1.0, 1e-12);
}

TEST(Norm, MatchesMatrixNormOnR3) {
  Rng rng(15, "r3norm");
  const auto ctx = ctx_of("R3");
  for (int t = 0; t < 30; ++t) {
    const auto a = random_element(ctx, rng);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(matrix_of(a, 3));
    EXPECT_NEAR(cstar_norm(a), svd.singularValues()(0), 1e-10);
  }
}

TEST(ReducedNorm, Examples) {
  const auto ctx = ctx_of("R3");
  const auto u = delta(ctx, "(1,1)");
  EXPECT_NEAR(check_reduced_norm_formula(u, 50, Rng(1, "u")).best(), 1.0, 1e-12);
  const auto zero = check_reduced_norm_formula(AlgebraElement(ctx), 50, Rng(1, "z"));
  EXPECT_EQ(zero.operator_norm, 0.0);
  EXPECT_EQ(zero.best(), 0.0);
}

TEST(ReducedNorm, MonteCarloWithinFivePercentOnR3) {
  Rng rng(16, "reduced");
  const auto ctx = ctx_of("R3");
  for (int t = 0; t < 10; ++t) {
    const auto a = random_element(ctx, rng);
    const auto rep = check_reduced_norm_formula(a, 500, rng.split("trial" + std::to_string(t)));
    EXPECT_LT(rep.upper_violation(), 1e-9);
    EXPECT_LE(rep.monte_carlo_gap(), 0.05) << "trial " << t;
  }
}
