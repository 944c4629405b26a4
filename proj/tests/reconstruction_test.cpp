#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace cartan;
using namespace cartan::testing;

namespace {

// Monomials on random bisections that meet the point g.
AlgebraElement member_at(const ContextPtr& ctx, Elem g, Rng& rng) {
  const auto& G = ctx->groupoid();
  Support s = bit(g);
  for (Elem h = 0; h < G.size(); ++h)
    if (rng.coin(0.4) && is_bisection(G, s | bit(h))) s |= bit(h);
  return random_on(ctx, s, rng);
}

std::vector<std::size_t> element_orders(const FiniteGroupoid& g) {
  std::vector<std::size_t> out;
  for (Elem x = 0; x < g.size(); ++x) out.push_back(detail::element_order(g, x));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Ultrafilter, Membership) {
  const auto ctx = ctx_of("R2");
  const auto U = ultrafilter_at(ctx, "(1,2)");
  EXPECT_TRUE(U.contains(delta(ctx, "(1,2)")));
  EXPECT_FALSE(U.contains(delta(ctx, "(2,1)")));
  EXPECT_FALSE(U.contains(AlgebraElement(ctx)));
  const auto n = delta(ctx, "(1,2)") + delta(ctx, "(2,1)", 3.0);
  EXPECT_TRUE(U.contains(n));
  EXPECT_TRUE(ultrafilter_at(ctx, "(2,1)").contains(n));
  EXPECT_THROW(ultrafilter_at(ctx, "(3,3)"), input_error);
  EXPECT_THROW(ultrafilter_at(ctx, Elem{9}), input_error);
}

TEST(Ultrafilter, FilterAxiomsOnSmallSample) {
  const auto ctx = ctx_of("R2");
  const auto U = ultrafilter_at(ctx, "(1,2)");
  const std::vector<AlgebraElement> sample{delta(ctx, "(1,2)"), delta(ctx, "(1,2)", 2.0),
                                           delta(ctx, "(1,2)") + delta(ctx, "(2,1)"), delta(ctx, "(2,1)"),
                                           delta(ctx, "(1,2)", 3.0)};
  const auto rep = check_filter_axioms(U, sample);
  for (const auto& c : rep.checks()) EXPECT_TRUE(c.passed) << c.name << ": " << c.witness;
  EXPECT_GT(rep.down_directed.cases, 0u);
  EXPECT_GT(rep.prime.cases, 0u);
}

TEST(Ultrafilter, Products) {
  const auto ctx = ctx_of("R2");
  const auto u11 = ultrafilter_at(ctx, "(1,1)");
  const auto p = ultrafilter_product(u11, u11);
  ASSERT_TRUE(p.product);
  EXPECT_EQ(*p.product, u11);
  const auto q = ultrafilter_product(ultrafilter_at(ctx, "(1,2)"), ultrafilter_at(ctx, "(2,1)"));
  ASSERT_TRUE(q.product);
  EXPECT_EQ(q.product->name(), "(1,1)");
  const auto r = ultrafilter_product(ultrafilter_at(ctx, "(1,2)"), ultrafilter_at(ctx, "(1,2)"));
  EXPECT_FALSE(r.product);
  EXPECT_TRUE(r.zero_in_product_set);
  EXPECT_TRUE(r.criterion.passed);
}

TEST(Ultrafilter, ProductCriterionOnAllPairs) {
  Rng rng(1, "products");
  for (const auto& f : standard_fixtures()) {
    const auto ctx = f.context();
    const auto& G = ctx->groupoid();
    std::vector<AlgebraElement> sample;
    for (int i = 0; i < 30; ++i) sample.push_back(random_monomial(ctx, rng));
    for (Elem a = 0; a < G.size(); ++a)
      for (Elem b = 0; b < G.size(); ++b) {
        const auto p = ultrafilter_product(Ultrafilter(ctx, a), Ultrafilter(ctx, b), sample);
        // oracle: delta_a delta_b vanishes exactly when a and b do not compose
        const bool zero = (AlgebraElement::delta(ctx, a) * AlgebraElement::delta(ctx, b)).is_zero();
        EXPECT_EQ(p.product.has_value(), !zero) << f.name;
        EXPECT_TRUE(p.criterion.passed && p.basic_sets.passed && p.closure.passed) << f.name;
      }
  }
}

TEST(Ultrafilter, UnitSpace) {
  EXPECT_EQ(ctx_of("Z4")->units().size(), 1u);
  const auto ctx = ctx_of("R2");
  EXPECT_EQ(basic_set(diagonal(delta(ctx, "(1,2)"))), 0u);
  EXPECT_EQ(basic_set(delta(ctx, "(1,2)")) & ctx->groupoid().unit_mask(), 0u);
  EXPECT_EQ(basic_set(unit_element(ctx)), ctx->groupoid().unit_mask());
  Rng rng(2, "units");
  for (const auto& f : standard_fixtures()) {
    const auto c = f.context();
    std::vector<AlgebraElement> sample;
    for (int i = 0; i < 30; ++i) sample.push_back(random_monomial(c, rng));
    const auto rep = unit_tests_for_units(c, sample);
    for (const auto& chk : rep.checks()) EXPECT_TRUE(chk.passed) << f.name << " " << chk.name << ": " << chk.witness;
  }
}

TEST(States, Examples) {
  const auto ctx = ctx_of("R2");
  const auto U = ultrafilter_at(ctx, "(1,2)");
  EXPECT_EQ(source_state(U, delta(ctx, "(2,2)")), Complex(1.0));
  EXPECT_EQ(source_state(U, delta(ctx, "(1,1)")), Complex(0.0));
  EXPECT_EQ(range_state(U, delta(ctx, "(1,1)")), Complex(1.0));
  EXPECT_THROW(source_state(U, delta(ctx, "(1,2)")), input_error);
}

TEST(States, KernelMatchesMembership) {
  Rng rng(3, "kernel");
  for (const auto& f : standard_fixtures()) {
    const auto ctx = f.context();
    for (Elem u : ctx->units()) {
      const Ultrafilter U(ctx, u);
      for (int t = 0; t < 20; ++t) {
        auto b = random_diagonal(ctx, rng);
        if (rng.coin()) b[u] = 0.0;
        EXPECT_EQ(std::abs(source_state(U, b)) > 1e-9, U.contains(b));
      }
    }
  }
}

TEST(States, QuotientIdentity) {
  Rng rng(4, "quotient");
  for (const auto& f : standard_fixtures()) {
    const auto ctx = f.context();
    for (int t = 0; t < 100; ++t) {
      const Elem g = rng.index(ctx->size());
      const auto n = member_at(ctx, g, rng);
      ASSERT_LT(state_quotient_residual(Ultrafilter(ctx, g), n, random_diagonal(ctx, rng)), 1e-12) << f.name;
    }
  }
}

TEST(Magnitude, Examples) {
  const auto ctx = ctx_of("Z3");
  const auto U = ultrafilter_at(ctx, "1");
  EXPECT_NEAR(magnitude(U, delta(ctx, "1")), 1.0, 1e-15);
  EXPECT_NEAR(magnitude(U, delta(ctx, "1", Complex(0, 3))), 3.0, 1e-15);
  EXPECT_THROW(magnitude(U, delta(ctx, "2")), input_error);
}

TEST(Magnitude, ProductLawAgainstCoefficients) {
  Rng rng(5, "magnitude");
  for (const auto& f : standard_fixtures()) {
    const auto ctx = f.context();
    const auto& G = ctx->groupoid();
    for (int t = 0; t < 100; ++t) {
      Elem g = rng.index(G.size()), h = rng.index(G.size());
      while (!G.composable(g, h)) h = rng.index(G.size());
      const auto m = member_at(ctx, g, rng), n = member_at(ctx, h, rng);
      const Ultrafilter Ug(ctx, g), Uh(ctx, h), Ugh(ctx, G.compose(g, h));
      // direct oracle: |m|_U = |m(g)| for monomials
      ASSERT_NEAR(magnitude(Ug, m), std::abs(m[g]), 1e-12);
      ASSERT_NEAR(magnitude(Ugh, m * n), magnitude(Ug, m) * magnitude(Uh, n), 1e-12);
    }
  }
}

TEST(Angle, Examples) {
  const auto ctx = ctx_of("Z4");
  const auto U = ultrafilter_at(ctx, "2");
  const auto n = delta(ctx, "2", 5.0);
  EXPECT_LT(std::abs(angle(U, n, n) - 1.0), 1e-15);
  EXPECT_LT(std::abs(angle(U, delta(ctx, "2", Complex(0, 1)), delta(ctx, "2")) - Complex(0, 1)), 1e-15);
}

TEST(Angle, ConjugateSymmetryAndOracle) {
  Rng rng(6, "angle");
  for (const auto& f : standard_fixtures()) {
    const auto ctx = f.context();
    for (int t = 0; t < 100; ++t) {
      const Elem g = rng.index(ctx->size());
      const Ultrafilter U(ctx, g);
      const auto m = member_at(ctx, g, rng), n = member_at(ctx, g, rng);
      ASSERT_LT(std::abs(angle(U, m, n) - std::conj(angle(U, n, m))), 1e-12);
      ASSERT_LT(std::abs(angle(U, m, n) - angle_oracle(U, m, n)), 1e-9);
    }
  }
}

TEST(Twist, Points) {
  const auto ctx = ctx_of("R3");
  const auto U = ultrafilter_at(ctx, "(2,3)");
  const auto p = twist_point(delta(ctx, "(2,3)"), U);
  EXPECT_EQ(p.g, ctx->groupoid().at("(2,3)"));
  EXPECT_LT(std::abs(p.phase - 1.0), 1e-15);
  const auto q = twist_point(delta(ctx, "(2,3)", Complex(0, 4)), U);
  EXPECT_LT(std::abs(q.phase - Complex(0, 1)), 1e-15);
}

TEST(Twist, EquivalenceMatchesPointEquality) {
  Rng rng(7, "twist");
  for (const auto& f : standard_fixtures()) {
    const auto ctx = f.context();
    int equivalent = 0;
    for (int t = 0; t < 200; ++t) {
      const Elem g = rng.index(ctx->size());
      const Ultrafilter U(ctx, g);
      const auto m = member_at(ctx, g, rng);
      // half the time n has the same phase at g as m
      auto n = member_at(ctx, g, rng);
      if (t % 2 == 0) n[g] = m[g] * rng.uniform(0.5, 2.0);
      const bool eq = angle_equivalent(U, m, n);
      equivalent += eq;
      ASSERT_EQ(eq, twist_point(m, U).same(twist_point(n, U))) << f.name;
    }
    EXPECT_GE(equivalent, 100);
  }
}

TEST(Twist, ProductMatchesConvolution) {
  Rng rng(8, "twist-product");
  for (const auto& f : standard_fixtures()) {
    const auto ctx = f.context();
    const auto& G = ctx->groupoid();
    for (int t = 0; t < 50; ++t) {
      const Elem g = rng.index(G.size()), h = rng.index(G.size());
      const auto m = member_at(ctx, g, rng), n = member_at(ctx, h, rng);
      const auto p = twist_product(*ctx, twist_point(m, Ultrafilter(ctx, g)), twist_point(n, Ultrafilter(ctx, h)));
      ASSERT_EQ(p.has_value(), G.composable(g, h));
      if (!p) continue;
      EXPECT_TRUE(p->same(twist_point(m * n, Ultrafilter(ctx, G.compose(g, h)))));
      const auto inv = twist_inverse(*ctx, twist_point(m, Ultrafilter(ctx, g)));
      EXPECT_TRUE(inv.same(twist_point(adj(m), Ultrafilter(ctx, G.inverse(g)))));
    }
  }
}

TEST(Cocycle, RecoveredFromConvolution) {
  for (const auto& f : standard_fixtures()) {
    const auto ctx = f.context();
    const auto& G = ctx->groupoid();
    const auto rec = recover_cocycle(ctx);
    EXPECT_LT(rec.residual, 1e-9) << f.name;
    for (Elem g = 0; g < G.size(); ++g)
      for (Elem h = 0; h < G.size(); ++h) {
        if (!G.composable(g, h)) continue;
        // oracle: the coefficient of delta_g delta_h at gh
        const Complex z = (AlgebraElement::delta(ctx, g) * AlgebraElement::delta(ctx, h))[G.compose(g, h)];
        EXPECT_LT(std::abs(rec.cocycle.at(g, h).value() - z), 1e-12) << f.name;
        EXPECT_EQ(rec.cocycle.at(g, h), f.cocycle.at(g, h)) << f.name;
      }
  }
  const auto r2 = recover_cocycle(ctx_of("R2"));
  EXPECT_TRUE(r2.cocycle.is_trivial());
}

TEST(Hat, PointMasses) {
  const auto ctx = ctx_of("R2_disj_Z2");
  for (Elem g = 0; g < ctx->size(); ++g) {
    const auto h = hat(AlgebraElement::delta(ctx, g));
    for (Elem k = 0; k < ctx->size(); ++k) EXPECT_EQ(h[k], Complex(g == k ? 1.0 : 0.0));
  }
}

TEST(Hat, LinearAndRoundTrip) {
  Rng rng(9, "hat");
  const auto ctx = ctx_of("R3");
  for (int t = 0; t < 100; ++t) {
    const auto a = random_element(ctx, rng);
    const Complex z = rng.gaussian();
    ASSERT_LT(distance(hat(z * a), z * hat(a)), 1e-12);
    ASSERT_LT(distance(hat(a), a), 1e-9);
  }
  for (const auto& f : standard_fixtures()) {
    const auto rep = check_hat(f.context(), Rng(10, f.name), 50, 1e-9);
    for (const auto& c : rep.checks()) EXPECT_TRUE(c.passed) << f.name << " " << c.name;
  }
}

TEST(Reconstruct, EveryFixtureRoundTrips) {
  for (const auto& f : standard_fixtures()) {
    const auto ctx = f.context();
    const auto rep = reconstruct(SemigroupSpec::monomial(ctx), Rng(11, f.name));
    ASSERT_FALSE(rep.refused) << f.name;
    EXPECT_TRUE(rep.passed()) << f.name;
    EXPECT_LT(rep.cocycle_residual, 1e-9);
    EXPECT_TRUE(rep.summable);
    ASSERT_TRUE(rep.iso.found());
    EXPECT_TRUE(is_isomorphism(rep.reconstructed.groupoid, f.groupoid, rep.iso.bijection, &rep.reconstructed.cocycle,
                               &f.cocycle));
    for (const auto& c : rep.checks) EXPECT_TRUE(c.passed) << f.name << " " << c.name << ": " << c.witness;
  }
}

TEST(Reconstruct, PauliCocycleIsExact) {
  const auto f = fixture("V4_pauli");
  const auto g = build_ultrafilter_groupoid(SemigroupSpec::monomial(f.context()));
  EXPECT_EQ(g.cocycle_residual, 0.0);
  EXPECT_EQ(g.groupoid.name(1), "U((0,1))");
  for (Elem x = 0; x < 4; ++x)
    for (Elem y = 0; y < 4; ++y) EXPECT_EQ(g.cocycle.at(x, y), f.cocycle.at(x, y));
}

TEST(Reconstruct, SplitBasisStillGivesPairGroupoid) {
  const auto ctx = ctx_of("R2");
  const auto basis = basis_from_json(ctx->groupoid(), parse_json_text(read_text_file(fixture_path("remark_basis.json"))));
  const auto rep = reconstruct(SemigroupSpec::basis_restricted(ctx, basis), Rng(12, "split"));
  EXPECT_FALSE(rep.summable);
  EXPECT_TRUE(rep.passed());
  const auto* image = [&]() -> const PropertyCheck* {
    for (const auto& c : rep.checks)
      if (c.name == "hat(csum(N)) is the monomial semigroup") return &c;
    return nullptr;
  }();
  ASSERT_NE(image, nullptr);
  EXPECT_TRUE(image->passed);
  EXPECT_GE(image->cases, 16u);
}

TEST(Reconstruct, RefusesNonCartanSemigroup) {
  const auto ctx = ctx_of("R2");
  const auto& G = ctx->groupoid();
  const auto rep = reconstruct(SemigroupSpec::explicit_patterns(ctx, {G.mask_of({"(1,1)"}), G.mask_of({"(2,2)"})}),
                               Rng(13, "refuse"));
  EXPECT_TRUE(rep.refused);
  EXPECT_NE(rep.refusal.find("dense span"), std::string::npos);
  EXPECT_FALSE(rep.passed());
}

TEST(Reconstruct, CyclicAndKleinAreDistinguished) {
  const auto z4 = build_ultrafilter_groupoid(SemigroupSpec::monomial(ctx_of("Z4")));
  const auto v4 = build_ultrafilter_groupoid(SemigroupSpec::monomial(ctx_of("V4")));
  EXPECT_EQ(groupoids_isomorphic(z4.groupoid, v4.groupoid, kDefaultIsoBudget, &z4.cocycle, &v4.cocycle).outcome,
            IsoOutcome::not_isomorphic);
  // oracle: element orders {1,2,4,4} against {1,2,2,2}
  EXPECT_NE(element_orders(z4.groupoid), element_orders(v4.groupoid));
}
