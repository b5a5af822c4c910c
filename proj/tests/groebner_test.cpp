#include <gtest/gtest.h>

#include <random>

#include "padicprep/ideal.hpp"
#include "padicprep/sampling.hpp"

using namespace padicprep;

namespace {

RationalPolynomial P(const std::string& s, std::size_t n) { return RationalPolynomial::parse(s, n); }

IdealPresentation exact_ideal(const CoefficientContext& ctx, std::size_t n, std::initializer_list<const char*> gens) {
  std::vector<RationalPolynomial> polys;
  for (const char* g : gens) polys.push_back(P(g, n));
  return IdealPresentation::from_polynomials(ctx, RingFlavor::An, Coords::X, polys);
}

}  // namespace

TEST(Ideal, MembershipExamples) {
  CoefficientContext ctx(5, 16, 6);
  auto principal = exact_ideal(ctx, 2, {"x1 - 3*x2"});
  EXPECT_TRUE(membership(MultiSeries::parse(ctx, 2, Coords::X, "x1 - 3*x2"), principal));
  auto I = exact_ideal(ctx, 3, {"x1 - x2", "x2 - x3"});
  EXPECT_FALSE(membership(MultiSeries::parse(ctx, 3, Coords::X, "x1"), I));
  EXPECT_TRUE(membership(MultiSeries::parse(ctx, 3, Coords::X, "x1 - x3"), I));
}

TEST(Ideal, PrincipalMembershipWithoutExactness) {
  CoefficientContext ctx(5, 16, 6);
  auto f = MultiSeries::parse(ctx, 2, Coords::X, "x1 - x2");
  IdealPresentation I(RingFlavor::An, {f});
  EXPECT_TRUE(membership(f * MultiSeries::parse(ctx, 2, Coords::X, "1 + x1 + x2^3"), I));
  EXPECT_FALSE(membership(MultiSeries::parse(ctx, 2, Coords::X, "x1"), I));
}

TEST(Ideal, MembershipUndecidable) {
  CoefficientContext ctx(5, 16, 6);
  IdealPresentation I(RingFlavor::An, {MultiSeries::parse(ctx, 2, Coords::X, "x1"), MultiSeries::parse(ctx, 2, Coords::X, "x2")});
  try {
    membership(MultiSeries::parse(ctx, 2, Coords::X, "x1 + x2"), I);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MembershipUndecidable);
  }
}

TEST(Ideal, EliminateExamples) {
  CoefficientContext ctx(5, 16, 6);
  auto a = eliminate(exact_ideal(ctx, 3, {"x2 - x3"}), 0);
  ASSERT_EQ(a.exact_generators().size(), 1u);
  EXPECT_TRUE(ideal_contains(a.exact_generators(), P("x1 - x2", 2)));
  EXPECT_TRUE(ideal_contains({P("x1 - x2", 2)}, a.exact_generators()[0]));

  auto b = eliminate(exact_ideal(ctx, 3, {"x1 - x2", "x2 - x3"}), 0);
  EXPECT_TRUE(ideal_contains(b.exact_generators(), P("x1 - x2", 2)));
  EXPECT_TRUE(ideal_contains({P("x1 - x2", 2)}, b.exact_generators()[0]));

  auto c = eliminate(exact_ideal(ctx, 2, {"x1 - x2^2"}), 0);
  EXPECT_TRUE(c.is_zero_ideal());
}

TEST(Ideal, EliminateNeedsExactness) {
  CoefficientContext ctx(5, 16, 6);
  IdealPresentation I(RingFlavor::An, {MultiSeries::parse(ctx, 2, Coords::X, "x1 - x2")});
  try {
    eliminate(I, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ExactnessRequired);
  }
}

TEST(Groebner, DimensionAndGcd) {
  EXPECT_EQ(ideal_dimension({P("x1 - x2", 3)}, 3), 2);
  EXPECT_EQ(ideal_dimension({P("x1", 2), P("x2", 2)}, 2), 0);
  EXPECT_EQ(ideal_dimension({P("1 + x1", 2), P("x1", 2)}, 2), -1);
  auto g = polynomial_gcd(P("x1^2 - x2^2", 2), P("x1^2 + x1*x2", 2));
  EXPECT_TRUE(exact_divide(g, P("x1 + x2", 2)).has_value());
  EXPECT_TRUE(exact_divide(P("x1 + x2", 2), g).has_value());
}

// Combinations sum h_i g_i lie in the ideal; adding a monomial outside the
// leading ideal of a one-generator ideal takes the sum out again.
TEST(GroebnerProperty, CombinationsAreMembers) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 40; ++i) {
    std::size_t n = static_cast<std::size_t>(sampling::small_int(rng, 2, 3));
    std::vector<RationalPolynomial> gens;
    for (int k = 0; k < 2; ++k) gens.push_back(sampling::random_polynomial(n, rng, 1, 2, 0.5));
    RationalPolynomial f(n);
    for (const auto& g : gens) f += sampling::random_polynomial(n, rng, 0, 2, 0.4) * g;
    EXPECT_TRUE(ideal_contains(gens, f));
  }
}

TEST(GroebnerProperty, PrincipalNonMembersByDegree) {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 40; ++i) {
    RationalPolynomial g = sampling::random_polynomial(2, rng, 2, 3, 0.6);
    if (g.is_zero() || g.order() < 2) continue;
    // Anything of order 1 is outside an ideal generated by an order-2 element.
    RationalPolynomial f = RationalPolynomial::variable(2, 0) + sampling::random_polynomial(2, rng, 0, 2, 0.3) * g;
    EXPECT_FALSE(ideal_contains({g}, f));
  }
}

TEST(GroebnerProperty, EliminationIsSoundAndVariableFree) {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 30; ++i) {
    // Kernel of x_i -> c_i t: linear generators, elimination stays a kernel.
    std::vector<long> c;
    for (int k = 0; k < 3; ++k) c.push_back(sampling::small_int(rng, 1, 5));
    std::vector<RationalPolynomial> gens{
        P(std::to_string(c[1]) + "*x1 - " + std::to_string(c[0]) + "*x2", 3),
        P(std::to_string(c[2]) + "*x2 - " + std::to_string(c[1]) + "*x3", 3)};
    auto elim = eliminate_variable(gens, 0);
    ASSERT_FALSE(elim.empty());
    for (const auto& p : elim) {
      EXPECT_EQ(p.nvars(), 2u);
      EXPECT_TRUE(ideal_contains(gens, p.remap({1, 2}, 3)));
      EXPECT_EQ(p.evaluate({mpq_class(c[1]), mpq_class(c[2])}), 0);
    }
  }
}
