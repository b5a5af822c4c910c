#include <gtest/gtest.h>

#include <random>

#include "padicprep/sampling.hpp"
#include "padicprep/series.hpp"

using namespace padicprep;

namespace {

// Schoolbook product of exact polynomials, truncated at degree d.
RationalPolynomial truncated_product(const RationalPolynomial& a, const RationalPolynomial& b, int d) {
  RationalPolynomial out(a.nvars());
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms())
      if ((ma * mb).degree() <= d) out.add_term(ma * mb, ca * cb);
  return out;
}

MultiSeries lift(const CoefficientContext& ctx, const RationalPolynomial& p, Coords c) {
  return MultiSeries::from_polynomial(ctx, p, c);
}

}  // namespace

TEST(Series, ProductExamples) {
  CoefficientContext ctx(5, 8, 3);
  auto a = MultiSeries::parse(ctx, 2, Coords::T, "1 + t1");
  auto b = MultiSeries::parse(ctx, 2, Coords::T, "1 + t2");
  EXPECT_EQ(a * b, MultiSeries::parse(ctx, 2, Coords::T, "1 + t1 + t2 + t1*t2"));
  EXPECT_TRUE((a + PadicScalar::from_int(ctx, -1) * a).is_zero());
  auto c = MultiSeries::parse(ctx, 2, Coords::T, "t1 - t2") * MultiSeries::parse(ctx, 2, Coords::T, "t1 + t2");
  EXPECT_EQ(c, MultiSeries::parse(ctx, 2, Coords::T, "t1^2 - t2^2"));
}

TEST(Series, TruncationDropsHighDegrees) {
  CoefficientContext ctx(5, 8, 3);
  auto f = MultiSeries::parse(ctx, 1, Coords::T, "t1^2");
  EXPECT_TRUE((f * f).is_zero());
  EXPECT_EQ(f.order(), 2);
}

TEST(Series, InvertExamples) {
  CoefficientContext ctx(5, 8, 6);
  auto one = MultiSeries::one(ctx, 1, Coords::T);
  EXPECT_EQ(invert(one), one);
  EXPECT_EQ(invert(MultiSeries::parse(ctx, 1, Coords::T, "1 + t1")),
            MultiSeries::parse(ctx, 1, Coords::T, "1 - t1 + t1^2 - t1^3 + t1^4 - t1^5 + t1^6"));

  CoefficientContext small(5, 4, 1);
  auto inv = invert(MultiSeries::parse(small, 1, Coords::T, "2 + t1"));
  EXPECT_EQ(inv.coefficient(Monomial{}).residue(4), 313u);
  EXPECT_EQ(inv.coefficient(Monomial::variable(0)).residue(4), 156u);
}

TEST(Series, InvertRejectsNonUnits) {
  CoefficientContext ctx(5, 8, 4);
  try {
    invert(MultiSeries::parse(ctx, 2, Coords::T, "t1 + t2"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAUnit);
  }
}

TEST(Series, SubstituteExamples) {
  CoefficientContext ctx(5, 8, 6);
  auto t1 = MultiSeries::variable(ctx, 2, Coords::T, 0);
  auto t2 = MultiSeries::variable(ctx, 2, Coords::T, 1);
  EXPECT_EQ(substitute(t1, {t2, t1}), t2);

  auto e = exp_minus_one(ctx, 1, Coords::X, 0);
  auto l = log_one_plus(ctx, 1, Coords::T, 0);
  EXPECT_EQ(substitute(e, {l}), MultiSeries::variable(ctx, 1, Coords::T, 0));

  auto f = MultiSeries::parse(ctx, 2, Coords::X, "x1 - 3*x2");
  auto x = MultiSeries::variable(ctx, 1, Coords::X, 0);
  EXPECT_EQ(substitute(f, {PadicScalar::from_int(ctx, 2) * x, x}), PadicScalar::from_int(ctx, -1) * x);
}

TEST(Series, SubstituteRejectsConstantTerms) {
  CoefficientContext ctx(5, 8, 4);
  auto f = MultiSeries::parse(ctx, 1, Coords::T, "t1^2");
  try {
    substitute(f, {MultiSeries::parse(ctx, 1, Coords::T, "1 + t1")});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SubstitutionDiverges);
  }
}

TEST(Series, ChangeCoordsExponential) {
  CoefficientContext ctx(5, 10, 5);
  auto f = change_coords(MultiSeries::variable(ctx, 1, Coords::T, 0), Coords::X);
  mpq_class fact = 1;
  for (int k = 1; k <= 5; ++k) {
    fact *= k;
    EXPECT_TRUE(f.coefficient(Monomial::variable(0, k)) == PadicScalar::from_rational(ctx, 1 / fact));
  }
  EXPECT_EQ(f.coords(), Coords::X);
}

TEST(Series, ChangeCoordsFixture) {
  CoefficientContext ctx(5, 16, 8);
  auto P = MultiSeries::parse(ctx, 2, Coords::T, "t1 - 3*t2 - 3*t2^2 - t2^3");
  auto X = change_coords(P, Coords::X);
  // Oracle: exp(x1) - exp(3 x2) from factorials.
  RationalPolynomial oracle(2);
  mpq_class fact = 1;
  for (int k = 1; k <= 8; ++k) {
    fact *= k;
    oracle.add_term(Monomial::variable(0, k), 1 / fact);
    mpz_class three_k;
    mpz_ui_pow_ui(three_k.get_mpz_t(), 3, static_cast<unsigned long>(k));
    oracle.add_term(Monomial::variable(1, k), -mpq_class(three_k) / fact);
  }
  EXPECT_EQ(X, lift(ctx, oracle, Coords::X));
  EXPECT_TRUE(X.coefficient(Monomial::variable(1, 2)) == PadicScalar::from_rational(ctx, mpq_class(-9, 2)));
}

TEST(SeriesProperty, ProductMatchesSchoolbook) {
  CoefficientContext ctx(5, 16, 6);
  std::mt19937_64 rng(21);
  for (int i = 0; i < 50; ++i) {
    auto a = sampling::random_polynomial(3, rng, 0, 4, 0.3, 6);
    auto b = sampling::random_polynomial(3, rng, 0, 4, 0.3, 6);
    EXPECT_EQ(lift(ctx, a, Coords::T) * lift(ctx, b, Coords::T), lift(ctx, truncated_product(a, b, 6), Coords::T));
  }
}

TEST(SeriesProperty, RingLaws) {
  CoefficientContext ctx(5, 16, 6);
  std::mt19937_64 rng(22);
  for (int i = 0; i < 30; ++i) {
    auto a = sampling::random_series(ctx, 2, Coords::T, rng, 0, 6);
    auto b = sampling::random_series(ctx, 2, Coords::T, rng, 0, 6);
    auto c = sampling::random_series(ctx, 2, Coords::T, rng, 0, 6);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ(a * (b + c), a * b + a * c);
  }
}

TEST(SeriesProperty, OrderIsAdditive) {
  CoefficientContext ctx(5, 16, 8);
  std::mt19937_64 rng(23);
  for (int i = 0; i < 50; ++i) {
    // Leading forms with unit coefficients on a single monomial never cancel.
    auto a = sampling::random_series(ctx, 2, Coords::T, rng, 3, 8);
    auto b = sampling::random_series(ctx, 2, Coords::T, rng, 3, 8);
    a.add_term(Monomial::variable(0, 1), PadicScalar::one(ctx));
    b.add_term(Monomial::variable(1, 2), PadicScalar::one(ctx));
    EXPECT_EQ((a * b).order(), a.order() + b.order());
  }
}

TEST(SeriesProperty, InverseMultipliesBack) {
  CoefficientContext ctx(5, 16, 8);
  std::mt19937_64 rng(24);
  for (int i = 0; i < 50; ++i) {
    auto u = sampling::random_unit_series(ctx, 3, Coords::T, rng, 8);
    EXPECT_EQ(u * invert(u), MultiSeries::one(ctx, 3, Coords::T));
  }
}

TEST(SeriesProperty, CoordinateRoundTrip) {
  CoefficientContext ctx(5, 16, 8);
  std::mt19937_64 rng(25);
  for (int i = 0; i < 100; ++i) {
    std::size_t n = static_cast<std::size_t>(sampling::small_int(rng, 1, 3));
    auto f = sampling::random_series(ctx, n, Coords::T, rng, 0, 8, 0.2);
    EXPECT_EQ(change_coords(change_coords(f, Coords::X), Coords::T), f);
  }
}
