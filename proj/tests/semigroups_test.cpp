#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace cartan;
using namespace cartan::testing;

namespace {

std::vector<Support> remark_basis(const FiniteGroupoid& g) {
  std::vector<Support> out;
  for (Support s = 0; s <= g.unit_mask(); ++s)
    if ((s & ~g.unit_mask()) == 0) out.push_back(s);
  out.push_back(g.mask_of({"(1,2)"}));
  out.push_back(g.mask_of({"(2,1)"}));
  return out;
}

// Monomial iff each row and each column of the k x k matrix has at most one nonzero entry.
bool monomial_matrix_oracle(const AlgebraElement& a, std::size_t k) {
  for (std::size_t i = 0; i < k; ++i) {
    int row = 0, col = 0;
    for (std::size_t j = 0; j < k; ++j) {
      row += std::abs(a[i * k + j]) > 1e-9;
      col += std::abs(a[j * k + i]) > 1e-9;
    }
    if (row > 1 || col > 1) return false;
  }
  return true;
}

}  // namespace

TEST(Membership, PointMassesAreMonomial) {
  for (const auto& f : standard_fixtures()) {
    const auto ctx = f.context();
    const auto n = SemigroupSpec::monomial(ctx);
    for (Elem g = 0; g < ctx->size(); ++g) EXPECT_TRUE(n.contains(AlgebraElement::delta(ctx, g, Complex(0.3, -2))));
  }
}

TEST(Membership, SplitBasisExcludesFlip) {
  const auto ctx = ctx_of("R2");
  const auto flip = delta(ctx, "(1,2)") + delta(ctx, "(2,1)");
  EXPECT_TRUE(SemigroupSpec::monomial(ctx).contains(flip));
  EXPECT_FALSE(SemigroupSpec::basis_restricted(ctx, remark_basis(ctx->groupoid())).contains(flip));
  EXPECT_FALSE(SemigroupSpec::monomial(ctx).contains(delta(ctx, "(1,1)") + delta(ctx, "(1,2)")));
}

TEST(Membership, MonomialMatchesRowColumnOracleOnR3) {
  const auto ctx = ctx_of("R3");
  Rng rng(1, "r3-monomial");
  const auto n = SemigroupSpec::monomial(ctx);
  for (Support s = 0; s <= ctx->groupoid().all_mask(); ++s) {
    const auto a = random_on(ctx, s, rng);
    ASSERT_EQ(n.contains(a), monomial_matrix_oracle(a, 3)) << s;
  }
}

TEST(Basis, SplitBasisValidates) {
  const auto g = pair_groupoid(2);
  EXPECT_TRUE(validate_basis(g, remark_basis(g)).ok());
  auto missing = remark_basis(g);
  std::erase(missing, g.unit_mask());
  EXPECT_FALSE(validate_basis(g, missing).ok());
  EXPECT_THROW(SemigroupSpec::basis_restricted(TwistContext::make(g), missing), input_error);
}

TEST(CartanAxioms, MonomialSemigroupOnEveryFixture) {
  for (const auto& f : standard_fixtures()) {
    const auto rep = check_cartan(SemigroupSpec::monomial(f.context()), Rng(2, f.name));
    EXPECT_TRUE(rep.is_cartan()) << f.name << ": " << (rep.first_failure() ? rep.first_failure()->name : "");
    EXPECT_TRUE(rep.summable.passed) << f.name;
  }
}

TEST(CartanAxioms, SplitBasisIsCartanButNotSummable) {
  const auto ctx = ctx_of("R2");
  const auto rep = check_cartan(SemigroupSpec::basis_restricted(ctx, remark_basis(ctx->groupoid())), Rng(3, "remark"));
  EXPECT_TRUE(rep.is_cartan());
  ASSERT_FALSE(rep.summable.passed);
  ASSERT_EQ(rep.summable.witness.size(), 2u);
  const auto& G = ctx->groupoid();
  Support pair = rep.summable.witness[0].support() | rep.summable.witness[1].support();
  EXPECT_EQ(pair, G.mask_of({"(1,2)", "(2,1)"}));
  EXPECT_EQ(popcount(rep.summable.witness[0].support()), 1u);
}

TEST(CartanAxioms, UnitsAloneDoNotSpan) {
  const auto ctx = ctx_of("R2");
  const auto& G = ctx->groupoid();
  std::vector<Support> gens{G.mask_of({"(1,1)"}), G.mask_of({"(2,2)"})};
  const auto rep = check_cartan(SemigroupSpec::explicit_patterns(ctx, gens), Rng(4, "units"));
  EXPECT_FALSE(rep.dense_span.passed);
  EXPECT_NE(rep.dense_span.detail.find("span dimension 2"), std::string::npos);
}

TEST(CompatibleSums, MonomialIsAlreadyClosed) {
  Rng rng(5, "csum");
  for (const char* name : {"R2", "Z3", "R2_disj_Z2"}) {
    const auto ctx = ctx_of(name);
    const auto n = SemigroupSpec::monomial(ctx);
    const auto c = csum_closure(n);
    for (Support s = 0; s <= ctx->groupoid().all_mask(); ++s) {
      const auto a = random_on(ctx, s, rng);
      ASSERT_EQ(c.contains(a), n.contains(a)) << name << " " << s;
    }
  }
}

TEST(CompatibleSums, SplitBasisClosureIsMonomial) {
  Rng rng(6, "split-csum");
  const auto ctx = ctx_of("R2");
  const auto c = csum_closure(SemigroupSpec::basis_restricted(ctx, remark_basis(ctx->groupoid())));
  for (Support s = 0; s <= ctx->groupoid().all_mask(); ++s) {
    const auto a = random_on(ctx, s, rng);
    EXPECT_EQ(c.contains(a), is_monomial(a)) << s;
  }
  const auto rep = check_cartan(c, Rng(7, "split-csum-axioms"));
  EXPECT_TRUE(rep.is_cartan());
  EXPECT_TRUE(rep.summable.passed);
}

TEST(Compatibility, OffDiagonalUnitsAreCompatible) {
  const auto ctx = ctx_of("R2");
  EXPECT_TRUE(compatible(delta(ctx, "(1,2)"), delta(ctx, "(2,1)")));
  EXPECT_FALSE(compatible(delta(ctx, "(1,2)"), delta(ctx, "(1,1)")));
}

TEST(Normalizers, PairGroupoidNormalizersAreMonomial) {
  Rng rng(8, "r2-normalizers");
  for (const char* name : {"R2", "R3"}) {
    const auto ctx = ctx_of(name);
    for (Support s = 0; s <= ctx->groupoid().all_mask(); ++s) {
      const auto a = random_on(ctx, s, rng);
      ASSERT_EQ(is_normalizer(a), is_monomial(a)) << name << " " << s;
    }
  }
}

TEST(Normalizers, CyclicGroupUnitaries) {
  const auto ctx = ctx_of("Z4");
  EXPECT_FALSE(is_normalizer(delta(ctx, "e") + delta(ctx, "1")));
  const auto u = 0.5 * elem(ctx, {{"e", 1.0}, {"1", 1.0}, {"2", 1.0}, {"3", -1.0}});
  EXPECT_TRUE(is_normalizer(u));
  EXPECT_TRUE(approx_equal(adj(u) * u, delta(ctx, "e")));
  Rng rng(9, "z4-unitary");
  for (int t = 0; t < 20; ++t) EXPECT_TRUE(is_normalizer(random_isotropy_unitary(ctx, rng)));
}

TEST(Normalizers, ScaledPointMasses) {
  Rng rng(10, "scaled");
  for (const auto& f : standard_fixtures()) {
    const auto ctx = f.context();
    for (Elem g = 0; g < ctx->size(); ++g) EXPECT_TRUE(is_normalizer(AlgebraElement::delta(ctx, g, rng.gaussian())));
  }
}

TEST(Normalizers, SemigroupOnMasaFixturesIsMonomial) {
  Rng rng(11, "nb");
  const auto ctx = ctx_of("swap");
  const auto nb = normalizer_semigroup(ctx);
  for (Support s = 0; s <= ctx->groupoid().all_mask(); ++s) {
    const auto a = random_on(ctx, s, rng);
    EXPECT_EQ(nb.contains(a), is_monomial(a)) << s;
  }
}
