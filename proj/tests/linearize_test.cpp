#include <gtest/gtest.h>

#include <random>

#include "padicprep/linearize.hpp"
#include "padicprep/sampling.hpp"

using namespace padicprep;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvalidInput;
}

IdealPresentation exact_ideal(const CoefficientContext& ctx, std::size_t n, const std::vector<std::string>& gens) {
  std::vector<RationalPolynomial> polys;
  for (const auto& g : gens) polys.push_back(RationalPolynomial::parse(g, n));
  return IdealPresentation::from_polynomials(ctx, RingFlavor::An, Coords::X, polys);
}

std::vector<mpq_class> Qs(std::initializer_list<long> v) {
  std::vector<mpq_class> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

std::vector<PadicScalar> padic(const CoefficientContext& ctx, const std::vector<mpq_class>& v) {
  std::vector<PadicScalar> out;
  for (const auto& q : v) out.push_back(PadicScalar::from_rational(ctx, q));
  return out;
}

// Linear generators of the kernel of x_i -> lambda_i x, mixed by a random
// integer matrix so that no generator is a plain coordinate relation.
std::vector<RationalPolynomial> kernel_generators(const std::vector<long>& lambda, std::mt19937_64& rng) {
  const std::size_t n = lambda.size();
  std::size_t pivot = 0;
  while (lambda[pivot] == 0) ++pivot;
  std::vector<RationalPolynomial> base;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == pivot) continue;
    base.push_back(RationalPolynomial::constant(n, lambda[pivot]) * RationalPolynomial::variable(n, j) -
                   RationalPolynomial::constant(n, lambda[j]) * RationalPolynomial::variable(n, pivot));
  }
  std::vector<RationalPolynomial> mixed;
  for (std::size_t r = 0; r < base.size(); ++r) {
    RationalPolynomial g = base[r];
    for (std::size_t s = r + 1; s < base.size(); ++s)
      g += RationalPolynomial::constant(n, sampling::small_int(rng, -2, 2)) * base[s];
    mixed.push_back(g);
  }
  return mixed;
}

}  // namespace

TEST(Linearize, AlignmentExamples) {
  CoefficientContext ctx(5, 16, 8);
  auto a = align_eigenvalues(FrobeniusAction::from_rationals(ctx, Qs({2, 2, 3})), {0, 1});
  EXPECT_EQ(a.power, 1);
  EXPECT_TRUE(a.alpha == PadicScalar::from_int(ctx, 2));
  auto b = align_eigenvalues(FrobeniusAction::from_rationals(ctx, Qs({2, -2})), {0, 1});
  EXPECT_EQ(b.power, 2);
  EXPECT_TRUE(b.alpha == PadicScalar::from_int(ctx, 4));
  EXPECT_EQ(code_of([&] { align_eigenvalues(FrobeniusAction::from_rationals(ctx, Qs({2, 3})), {0, 1}, 32); }),
            ErrorCode::NoAlignment);
}

TEST(Linearize, TwoVariableExamples) {
  CoefficientContext ctx(5, 16, 8);
  auto phi = FrobeniusAction::from_rationals(ctx, Qs({2, 2}));
  auto coordinate = linearize_phi_ideal(exact_ideal(ctx, 2, {"x2"}), phi);
  EXPECT_EQ(*coordinate.exact_lambdas, Qs({1, 0}));

  // (3, 1) normalized so that the first nonzero entry is 1.
  auto line = linearize_phi_ideal(exact_ideal(ctx, 2, {"x1 - 3*x2"}), phi);
  EXPECT_EQ(*line.exact_lambdas, (std::vector<mpq_class>{1, mpq_class(1, 3)}));
  EXPECT_TRUE(line.lambdas[1] == PadicScalar::from_int(ctx, 3).inv());

  auto unit_multiple = linearize_phi_ideal(exact_ideal(ctx, 2, {"(x1 - x2)*(1 + x1)"}), phi);
  EXPECT_EQ(*unit_multiple.exact_lambdas, Qs({1, 1}));
}

TEST(Linearize, ThreeVariableKernel) {
  CoefficientContext ctx(5, 16, 8);
  auto phi = FrobeniusAction::from_rationals(ctx, Qs({2, 2, 2}));
  auto I = exact_ideal(ctx, 3, {"2*x1 - x2", "3*x1 - x3"});
  auto pi = linearize_phi_ideal(I, phi);
  EXPECT_EQ(*pi.exact_lambdas, Qs({1, 2, 3}));
  EXPECT_TRUE(verify_evaluation(I, pi));
}

TEST(Linearize, ErrorFixtures) {
  CoefficientContext ctx(5, 16, 8);
  auto phi = FrobeniusAction::from_rationals(ctx, Qs({2, 2}));
  EXPECT_EQ(code_of([&] { linearize_phi_ideal(exact_ideal(ctx, 2, {"x1", "x2"}), phi); }), ErrorCode::MaximalIdeal);
  EXPECT_EQ(code_of([&] { linearize_phi_ideal(exact_ideal(ctx, 2, {"0"}), phi); }), ErrorCode::ZeroIdeal);
  EXPECT_EQ(code_of([&] { linearize_phi_ideal(exact_ideal(ctx, 2, {"x1*x2"}), phi); }), ErrorCode::NotLinearizable);
  EXPECT_EQ(code_of([&] { linearize_phi_ideal(exact_ideal(ctx, 2, {"x1^2 - 2*x2^2"}), phi); }),
            ErrorCode::NotLinearizable);
}

TEST(Linearize, VerifyEvaluationExamples) {
  CoefficientContext ctx(5, 16, 8);
  auto I = exact_ideal(ctx, 2, {"x1 - 3*x2"});
  EXPECT_TRUE(verify_evaluation(I, padic(ctx, Qs({3, 1}))));
  EXPECT_FALSE(verify_evaluation(I, padic(ctx, Qs({1, 1}))));
  EXPECT_TRUE(verify_evaluation(exact_ideal(ctx, 2, {"0"}), padic(ctx, Qs({4, 7}))));
}

TEST(Linearize, SubgroupPointsExamples) {
  CoefficientContext ctx(5, 3, 8);
  EvaluationMap pi{padic(ctx, Qs({1, 0})), 1, PadicScalar::from_int(ctx, 2), Qs({1, 0})};
  auto chis = subgroup_points(pi, {PadicScalar::zero(ctx), PadicScalar::from_int(ctx, 5)});
  for (const auto& v : chis[0].values()) EXPECT_TRUE(v == PadicScalar::one(ctx));
  EXPECT_EQ(chis[1].values()[0].residue(3), 81u);
  EXPECT_TRUE(chis[1].values()[1] == PadicScalar::one(ctx));
}

TEST(Linearize, SubgroupPointsNeedConvergence) {
  CoefficientContext ctx(5, 8, 8);
  EvaluationMap pi{padic(ctx, Qs({1, 1})), 1, PadicScalar::from_int(ctx, 2), Qs({1, 1})};
  EXPECT_EQ(code_of([&] { subgroup_points(pi, {PadicScalar::from_int(ctx, 2)}); }), ErrorCode::ConvergenceViolation);
}

TEST(Linearize, OffSupportCoordinates) {
  CoefficientContext ctx(5, 16, 8);
  auto phi = FrobeniusAction::from_rationals(ctx, Qs({2, 3, 2}));
  auto I = exact_ideal(ctx, 3, {"x2", "4*x1 - x3"});
  auto pi = linearize_phi_ideal(I, phi);
  EXPECT_EQ(*pi.exact_lambdas, Qs({1, 0, 4}));
  EXPECT_EQ(pi.aligned_power, 1);
  EXPECT_TRUE(pi.aligned_alpha == PadicScalar::from_int(ctx, 2));
}

TEST(LinearizeProperty, RecoversKernelsUpToFourVariables) {
  CoefficientContext ctx(5, 16, 8);
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = static_cast<std::size_t>(sampling::small_int(rng, 2, 4));
    std::vector<long> lambda(n);
    bool nonzero = false;
    while (!nonzero) {
      for (auto& l : lambda) {
        l = sampling::small_int(rng, -5, 5);
        nonzero = nonzero || l != 0;
      }
    }
    std::vector<mpq_class> alphas;
    for (long l : lambda) alphas.emplace_back(l != 0 ? 2 : 3);
    auto phi = FrobeniusAction::from_rationals(ctx, alphas);
    auto I = IdealPresentation::from_polynomials(ctx, RingFlavor::An, Coords::X, kernel_generators(lambda, rng));
    EvaluationMap pi = linearize_phi_ideal(I, phi);
    std::vector<mpq_class> truth(lambda.begin(), lambda.end());
    ASSERT_TRUE(pi.exact_lambdas.has_value());
    EXPECT_EQ(*pi.exact_lambdas, normalize_lambdas(truth));
    EXPECT_TRUE(verify_evaluation(I, pi));
    // Eigenvalues agree on the support after the reported power.
    for (std::size_t i : pi.support()) EXPECT_TRUE(phi.alpha(i).pow(pi.aligned_power) == pi.aligned_alpha);
  }
}
