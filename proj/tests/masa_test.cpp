#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "test_util.hpp"

using namespace cartan;
using namespace cartan::testing;

namespace {

// dim C(B) straight from the convolution: nullity of a -> ([a, delta_u])_u.
std::size_t commutant_dimension_oracle(const ContextPtr& ctx) {
  const auto n = static_cast<Eigen::Index>(ctx->size());
  const auto units = ctx->units();
  Eigen::MatrixXcd sys(n * static_cast<Eigen::Index>(units.size()), n);
  for (Elem g = 0; g < ctx->size(); ++g) {
    const auto dg = AlgebraElement::delta(ctx, g);
    for (std::size_t k = 0; k < units.size(); ++k) {
      const auto du = AlgebraElement::delta(ctx, units[k]);
      const auto c = dg * du - du * dg;
      for (Elem h = 0; h < ctx->size(); ++h)
        sys(static_cast<Eigen::Index>(k) * n + static_cast<Eigen::Index>(h), static_cast<Eigen::Index>(g)) = c[h];
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(sys);
  return static_cast<std::size_t>(n - lu.rank());
}

bool is_witness(const AlgebraElement& c) {
  const auto& ctx = c.context();
  bool commutes = true;
  for (Elem u : ctx->units()) {
    const auto du = AlgebraElement::delta(ctx, u);
    commutes = commutes && approx_equal(c * du, du * c);
  }
  const auto cc = adj(c) * c;
  return !c.is_zero() && diagonal(c).is_zero() && is_diagonal(cc) && approx_equal(cc, c * adj(c)) && commutes;
}

}  // namespace

TEST(Commutant, DimensionIsIsotropyCount) {
  for (const auto& f : standard_fixtures()) {
    const auto ctx = f.context();
    const auto cb = commutant_basis(ctx);
    EXPECT_EQ(cb.dimension(), isotropy_count(f.groupoid)) << f.name;
    EXPECT_EQ(cb.dimension(), commutant_dimension_oracle(ctx)) << f.name;
    EXPECT_LT(cb.commutator_residual, 1e-12) << f.name;
  }
}

TEST(Masa, MatchesEffectiveness) {
  for (const auto& f : standard_fixtures()) {
    const auto rep = is_masa(f.context());
    EXPECT_EQ(rep.is_masa, is_effective(f.groupoid)) << f.name;
    EXPECT_EQ(rep.witness.has_value(), !rep.is_masa) << f.name;
  }
  EXPECT_TRUE(is_masa(ctx_of("R2")).is_masa);
  EXPECT_TRUE(is_masa(ctx_of("R4")).is_masa);
  EXPECT_FALSE(is_masa(ctx_of("R2_disj_Z2")).is_masa);
}

TEST(Masa, CyclicWitnessIsRotation) {
  const auto ctx = ctx_of("Z4");
  const auto rep = is_masa(ctx);
  ASSERT_TRUE(rep.witness);
  EXPECT_TRUE(approx_equal(*rep.witness, delta(ctx, "1")));
}

TEST(Masa, DisjointUnionWitnessLivesOnIsotropy) {
  const auto ctx = ctx_of("R2_disj_Z2");
  const auto rep = normalisers_imply_masa_contrapositive(ctx);
  ASSERT_TRUE(rep.c);
  EXPECT_EQ(rep.c->support(), ctx->groupoid().mask_of({"1"}));
}

TEST(MasaImpliesNormalisers, SweepOnEffectiveFixtures) {
  for (const auto& f : standard_fixtures()) {
    const auto rep = masa_implies_normalisers(f.context(), Rng(1, f.name));
    if (!is_effective(f.groupoid)) {
      EXPECT_EQ(rep.status, SuiteStatus::skipped) << f.name;
      continue;
    }
    EXPECT_EQ(rep.status, SuiteStatus::passed) << f.name;
    EXPECT_EQ(rep.checks.size(), f.groupoid.size() <= 6 ? 3u : 2u);
  }
}

TEST(MasaImpliesNormalisers, R2PatternsAndR3Rows) {
  const auto r2 = ctx_of("R2");
  const auto closure = csum_closure(SemigroupSpec::monomial(r2));
  Rng rng(2, "r2");
  for (Support s = 0; s < 16; ++s) {
    const auto a = random_on(r2, s, rng);
    EXPECT_EQ(closure.contains(a), is_normalizer(a));
    EXPECT_EQ(is_normalizer(a), is_bisection(r2->groupoid(), s));
  }
  const auto r3 = ctx_of("R3");
  const auto bad = delta(r3, "(1,1)") + delta(r3, "(1,2)", 2.0);
  EXPECT_FALSE(is_normalizer(bad));
  EXPECT_FALSE(csum_closure(SemigroupSpec::monomial(r3)).contains(bad));
  EXPECT_TRUE(is_normalizer(unit_element(r3)));
}

TEST(Contrapositive, CyclicGroup) {
  const auto ctx = ctx_of("Z4");
  const auto rep = normalisers_imply_masa_contrapositive(ctx);
  ASSERT_TRUE(rep.c);
  EXPECT_TRUE(approx_equal(*rep.c, delta(ctx, "1")));
  EXPECT_TRUE(approx_equal(adj(*rep.c) * *rep.c, delta(ctx, "e")));
  EXPECT_EQ(rep.order, 4u);
  ASSERT_TRUE(rep.outside_normalizer);
  EXPECT_TRUE(is_normalizer(*rep.outside_normalizer));
  EXPECT_FALSE(is_monomial(*rep.outside_normalizer));
  EXPECT_EQ(rep.theorem.status, SuiteStatus::passed);
}

TEST(Contrapositive, KleinFourBothGeneratorsAreWitnesses) {
  const auto ctx = ctx_of("V4");
  const auto rep = normalisers_imply_masa_contrapositive(ctx);
  ASSERT_TRUE(rep.c);
  EXPECT_TRUE(is_witness(*rep.c));
  EXPECT_TRUE(is_witness(delta(ctx, "(1,0)")));
  EXPECT_TRUE(is_witness(delta(ctx, "(0,1)")));
  EXPECT_EQ(rep.order, 2u);
}

TEST(Contrapositive, EveryNonEffectiveFixture) {
  for (const auto& f : standard_fixtures()) {
    const auto rep = normalisers_imply_masa_contrapositive(f.context());
    if (is_effective(f.groupoid)) {
      EXPECT_FALSE(rep.c) << f.name;
      continue;
    }
    ASSERT_TRUE(rep.c) << f.name;
    EXPECT_TRUE(is_witness(*rep.c)) << f.name;
    EXPECT_EQ(rep.theorem.status, SuiteStatus::passed) << f.name;
  }
}

TEST(Criterion, ConjunctionEqualsMasa) {
  for (const auto& f : standard_fixtures()) {
    const auto rep = cartan_criterion(f.context(), Rng(3, f.name));
    EXPECT_TRUE(rep.faithful) << f.name;
    EXPECT_EQ(rep.conjunction, rep.masa) << f.name;
    EXPECT_GT(rep.normalizers_tested, 0u);
    if (!rep.masa) {
      ASSERT_TRUE(rep.failing_normalizer);
      EXPECT_FALSE(restricts_via_diagonal(diagonal(*rep.failing_normalizer), *rep.failing_normalizer));
    }
  }
}

TEST(Criterion, CyclicUnitaryFailsRestriction) {
  const auto ctx = ctx_of("Z4");
  const auto n = 0.5 * elem(ctx, {{"e", 1.0}, {"1", 1.0}, {"2", 1.0}, {"3", -1.0}});
  ASSERT_TRUE(is_normalizer(n));
  EXPECT_FALSE(restricts_via_diagonal(diagonal(n), n));
}

TEST(Criterion, PairGroupoidNormalizersRestrict) {
  Rng rng(4, "r3-restrict");
  const auto ctx = ctx_of("R3");
  for (int t = 0; t < 100; ++t) {
    const auto n = random_monomial(ctx, rng);
    EXPECT_TRUE(restricts_via_diagonal(diagonal(n), n));
  }
}

TEST(Faithful, GramMatrixIsPositive) {
  for (const auto& f : standard_fixtures()) EXPECT_GT(expectation_gram_min_eigenvalue(f.context()), 0.5) << f.name;
}
