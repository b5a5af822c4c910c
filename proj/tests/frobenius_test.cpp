#include <gtest/gtest.h>

#include <random>

#include "padicprep/frobenius.hpp"
#include "padicprep/sampling.hpp"

using namespace padicprep;

namespace {

MultiSeries S(const CoefficientContext& ctx, std::size_t n, Coords c, const std::string& s) {
  return MultiSeries::parse(ctx, n, c, s);
}

PadicScalar Q(const CoefficientContext& ctx, long v) { return PadicScalar::from_int(ctx, v); }

}  // namespace

TEST(Frobenius, DiagonalActionInLogCoordinates) {
  CoefficientContext ctx(5, 16, 6);
  auto phi = FrobeniusAction::from_rationals(ctx, {2, 3});
  auto out = apply_phi(S(ctx, 2, Coords::X, "x1^2*x2"), phi);
  EXPECT_EQ(out, Q(ctx, 12) * S(ctx, 2, Coords::X, "x1^2*x2"));
}

TEST(Frobenius, BinomialActionInGroupCoordinates) {
  CoefficientContext ctx(5, 16, 6);
  auto t = MultiSeries::variable(ctx, 1, Coords::T, 0);
  EXPECT_EQ(apply_phi(t, FrobeniusAction::from_rationals(ctx, {2})), S(ctx, 1, Coords::T, "2*t1 + t1^2"));
  auto six = apply_phi(t, FrobeniusAction::from_rationals(ctx, {6}));
  for (unsigned long k = 1; k <= 6; ++k) {
    mpz_class binom;
    mpz_bin_uiui(binom.get_mpz_t(), 6, k);
    EXPECT_TRUE(six.coefficient(Monomial::variable(0, static_cast<int>(k))) ==
                PadicScalar::from_rational(ctx, mpq_class(binom)));
  }
}

TEST(Frobenius, RejectsSmallRootsOfUnity) {
  CoefficientContext ctx(5, 16, 6);
  try {
    FrobeniusAction::from_rationals(ctx, {-1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidInput);
  }
}

TEST(Frobenius, StabilityExamples) {
  CoefficientContext ctx(5, 16, 6);
  auto make = [&](const char* g) {
    return IdealPresentation::from_polynomials(ctx, RingFlavor::An, Coords::X, {RationalPolynomial::parse(g, 2)});
  };
  EXPECT_TRUE(is_phi_stable(make("x1"), FrobeniusAction::from_rationals(ctx, {2, 3})));
  EXPECT_TRUE(is_phi_stable(make("x1 + x2^2"), FrobeniusAction::from_rationals(ctx, {4, 2})));
  EXPECT_FALSE(is_phi_stable(make("x1 + x2"), FrobeniusAction::from_rationals(ctx, {2, 3})));
}

TEST(Frobenius, StabilityOfPrincipalSeriesIdeal) {
  CoefficientContext ctx(5, 16, 6);
  auto f = S(ctx, 2, Coords::X, "x1*(1 + x2)");
  IdealPresentation I(RingFlavor::An, {f});
  EXPECT_TRUE(is_phi_stable(I, FrobeniusAction::from_rationals(ctx, {6, 6})));
}

TEST(Frobenius, TrivializeExamples) {
  CoefficientContext ctx(5, 16, 8);
  auto phi = FrobeniusAction::from_rationals(ctx, {6, 6});
  auto one = trivialize_unit(MultiSeries::one(ctx, 2, Coords::X), phi);
  EXPECT_TRUE(one.c == Q(ctx, 1));
  EXPECT_EQ(one.h, MultiSeries::one(ctx, 2, Coords::X));

  auto constant = trivialize_unit(MultiSeries::constant(ctx, 2, Coords::X, Q(ctx, 7)), phi);
  EXPECT_TRUE(constant.c == Q(ctx, 7));
  EXPECT_EQ(constant.h, MultiSeries::one(ctx, 2, Coords::X));

  // u = phi(f)/f for f = x1(1 + x2).
  auto u = Q(ctx, 6) * S(ctx, 2, Coords::X, "1 + 6*x2") * invert(S(ctx, 2, Coords::X, "1 + x2"));
  auto r = trivialize_unit(u, phi);
  EXPECT_TRUE(r.c == Q(ctx, 6));
  EXPECT_EQ(r.h, invert(S(ctx, 2, Coords::X, "1 + x2")));
  EXPECT_EQ(u * apply_phi(r.h, phi), r.c * r.h);
}

TEST(Frobenius, HomogenizeExamples) {
  CoefficientContext ctx(5, 16, 8);
  auto phi = FrobeniusAction::from_rationals(ctx, {2, 3});
  auto a = homogenize_eigen(S(ctx, 2, Coords::X, "x1*x2"), phi);
  EXPECT_EQ(*a.g, S(ctx, 2, Coords::X, "x1*x2"));
  EXPECT_EQ(a.k_deg, 2);
  EXPECT_TRUE(a.c == Q(ctx, 6));

  auto b = homogenize_eigen(S(ctx, 2, Coords::X, "x1*(1 + x2)"), FrobeniusAction::from_rationals(ctx, {6, 6}));
  EXPECT_EQ(*b.g, S(ctx, 2, Coords::X, "x1"));
  EXPECT_EQ(b.k_deg, 1);
  EXPECT_TRUE(b.c == Q(ctx, 6));

  auto c = homogenize_eigen(S(ctx, 2, Coords::X, "(x1 - x2)*(1 + x1)"), FrobeniusAction::from_rationals(ctx, {2, 2}));
  EXPECT_EQ(*c.g, S(ctx, 2, Coords::X, "x1 - x2"));
  EXPECT_EQ(c.k_deg, 1);
  EXPECT_TRUE(c.c == Q(ctx, 2));
}

TEST(Frobenius, HomogenizeRejectsNonEigen) {
  CoefficientContext ctx(5, 16, 8);
  try {
    homogenize_eigen(S(ctx, 2, Coords::X, "x1 + x2"), FrobeniusAction::from_rationals(ctx, {2, 3}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotEigenPrincipal);
  }
}

TEST(FrobeniusProperty, RingHomomorphismInBothCoordinates) {
  CoefficientContext ctx(5, 16, 6);
  std::mt19937_64 rng(51);
  auto phi = FrobeniusAction::from_rationals(ctx, {6, 11});
  for (Coords c : {Coords::X, Coords::T}) {
    for (int i = 0; i < 20; ++i) {
      auto f = sampling::random_series(ctx, 2, c, rng, 0, 6);
      auto g = sampling::random_series(ctx, 2, c, rng, 0, 6);
      EXPECT_EQ(apply_phi(f * g, phi), apply_phi(f, phi) * apply_phi(g, phi));
      EXPECT_EQ(apply_phi(f + g, phi), apply_phi(f, phi) + apply_phi(g, phi));
    }
  }
}

TEST(FrobeniusProperty, CoordinateChangeIntertwines) {
  CoefficientContext ctx(5, 16, 7);
  std::mt19937_64 rng(52);
  for (int i = 0; i < 20; ++i) {
    std::vector<mpq_class> alphas;
    for (int k = 0; k < 2; ++k) alphas.push_back(mpq_class(1 + 5 * sampling::small_int(rng, 1, 6)));
    auto phi = FrobeniusAction::from_rationals(ctx, alphas);
    auto f = sampling::random_series(ctx, 2, Coords::T, rng, 1, 7, 0.3);
    EXPECT_EQ(change_coords(apply_phi(f, phi), Coords::X), apply_phi(change_coords(f, Coords::X), phi));
  }
  // log(1 + t) is an eigenvector with eigenvalue alpha.
  auto phi = FrobeniusAction::from_rationals(ctx, {6});
  auto l = log_one_plus(ctx, 1, Coords::T, 0);
  EXPECT_EQ(apply_phi(l, phi), Q(ctx, 6) * l);
}

// f = g * invert(h) with g homogeneous: homogenization recovers g up to the
// unit h and the eigenvalue alpha^beta of g's monomials.
TEST(FrobeniusProperty, HomogenizeRecoversEigenMonomial) {
  CoefficientContext ctx(5, 16, 8);
  std::mt19937_64 rng(53);
  auto phi = FrobeniusAction::from_rationals(ctx, {2, 3});
  for (int i = 0; i < 25; ++i) {
    int k = static_cast<int>(sampling::small_int(rng, 1, 4));
    int e1 = static_cast<int>(sampling::small_int(rng, 0, k));
    MultiSeries g(ctx, 2, Coords::X);
    g.add_term(Monomial::from_exponents({e1, k - e1}), sampling::random_unit(ctx, rng));
    auto h = sampling::random_unit_series(ctx, 2, Coords::X, rng, 4);
    auto r = homogenize_eigen(g * invert(h), phi);
    EXPECT_EQ(r.k_deg, k);
    EXPECT_TRUE(r.c == Q(ctx, 2).pow(e1) * Q(ctx, 3).pow(k - e1));
    EXPECT_EQ(r.g->order(), k);
    EXPECT_EQ(r.g->max_degree(), k);
  }
}

TEST(FrobeniusProperty, TrivializationLossIsSumOfValuations) {
  CoefficientContext ctx(5, 16, 8);
  std::mt19937_64 rng(54);
  auto phi = FrobeniusAction::from_rationals(ctx, {2, 7});
  for (int i = 0; i < 20; ++i) {
    auto u = sampling::random_unit_series(ctx, 2, Coords::X, rng, 8);
    auto r = trivialize_unit(u, phi);
    EXPECT_EQ(u * apply_phi(r.h, phi), r.c * r.h);
    // Oracle: recompute v(alpha^beta - 1) on the monomials present in h.
    int total = 0;
    for (int nu = 1; nu <= 8; ++nu) {
      int level = 0;
      for (Monomial m : monomials_up_to(2, nu)) {
        if (m.degree() != nu) continue;
        mpz_class ab;
        mpz_class a_pow, b_pow;
        mpz_ui_pow_ui(a_pow.get_mpz_t(), 2, static_cast<unsigned long>(m[0]));
        mpz_ui_pow_ui(b_pow.get_mpz_t(), 7, static_cast<unsigned long>(m[1]));
        ab = a_pow * b_pow - 1;
        mpz_class five = 5;
        int v = static_cast<int>(mpz_remove(ab.get_mpz_t(), ab.get_mpz_t(), five.get_mpz_t()));
        if (!r.h.coefficient(m).is_zero()) level = std::max(level, v);
      }
      EXPECT_LE(level, r.level_loss[static_cast<std::size_t>(nu)]);
      total += r.level_loss[static_cast<std::size_t>(nu)];
    }
    EXPECT_EQ(total, r.precision_loss);
  }
}

TEST(Frobenius, LossBudgetExhausts) {
  // Eigenvalues congruent to 1 lose at least one digit per degree.
  CoefficientContext ctx(5, 6, 8);
  auto u = MultiSeries::parse(ctx, 1, Coords::X, "1 + x1");
  try {
    trivialize_unit(u, FrobeniusAction::from_rationals(ctx, {6}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PrecisionExhausted);
  }
}
