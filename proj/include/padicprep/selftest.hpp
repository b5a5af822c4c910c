#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "padicprep/characters.hpp"
#include "padicprep/frobenius.hpp"
#include "padicprep/homology.hpp"
#include "padicprep/linearize.hpp"
#include "padicprep/sampling.hpp"
#include "padicprep/weierstrass.hpp"

namespace padicprep {

struct SelftestResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// A quick pass over the invariants of every module on seeded random input.
inline std::vector<SelftestResult> run_selftest(std::uint64_t seed) {
  std::vector<SelftestResult> results;
  auto check = [&](const std::string& name, const std::function<bool(std::mt19937_64&)>& body) {
    std::mt19937_64 rng(seed ^ std::hash<std::string>{}(name));
    SelftestResult r{name, false, ""};
    try {
      r.passed = body(rng);
    } catch (const std::exception& e) {
      r.detail = e.what();
    }
    results.push_back(std::move(r));
  };
  const CoefficientContext ctx(5, 16, 8);

  check("scalar_field_axioms", [&](std::mt19937_64& rng) {
    for (int i = 0; i < 50; ++i) {
      PadicScalar a = sampling::random_scalar(ctx, rng), b = sampling::random_scalar(ctx, rng),
                  c = sampling::random_scalar(ctx, rng);
      if (!(a * (b + c) == a * b + a * c)) return false;
      if (!a.is_zero() && !(a * a.inv() == PadicScalar::one(ctx))) return false;
    }
    return true;
  });

  check("series_inverse", [&](std::mt19937_64& rng) {
    for (int i = 0; i < 10; ++i) {
      MultiSeries u = sampling::random_unit_series(ctx, 2, Coords::T, rng, 4);
      if (!(u * invert(u) == MultiSeries::one(ctx, 2, Coords::T))) return false;
    }
    return true;
  });

  check("coordinate_round_trip", [&](std::mt19937_64& rng) {
    for (int i = 0; i < 5; ++i) {
      MultiSeries f = sampling::random_series(ctx, 2, Coords::T, rng, 1, 4);
      if (!(change_coords(change_coords(f, Coords::X), Coords::T) == f)) return false;
    }
    return true;
  });

  check("weierstrass_division", [&](std::mt19937_64& rng) {
    for (int i = 0; i < 10; ++i) {
      int a = static_cast<int>(sampling::small_int(rng, 1, 3));
      MultiSeries F = sampling::random_regular(ctx, 2, rng, a);
      MultiSeries G = sampling::random_series(ctx, 2, Coords::T, rng, 0, 6);
      DivisionResult r = weierstrass_divide(G, F);
      if (!(r.quotient * F + r.remainder_sum() == G)) return false;
      DivisionResult s = weierstrass_divide(G, F, DivisionStrategy::Termwise);
      if (!(s.quotient == r.quotient && s.remainder_sum() == r.remainder_sum())) return false;
    }
    return true;
  });

  check("preparation_round_trip", [&](std::mt19937_64& rng) {
    for (int i = 0; i < 10; ++i) {
      int a = static_cast<int>(sampling::small_int(rng, 1, 3));
      MultiSeries W = sampling::random_distinguished(ctx, 2, rng, a);
      MultiSeries U = sampling::random_unit_series(ctx, 2, Coords::T, rng, ctx.degree() - a);
      WeierstrassFactorization f = weierstrass_prepare(W * U);
      if (!(f.distinguished == W && f.unit == U)) return false;
    }
    return true;
  });

  check("unit_trivialization", [&](std::mt19937_64& rng) {
    FrobeniusAction phi = FrobeniusAction::from_rationals(ctx, {2, 3});
    for (int i = 0; i < 5; ++i) {
      MultiSeries u = sampling::random_unit_series(ctx, 2, Coords::X, rng, 4);
      TrivializationResult t = trivialize_unit(u, phi);
      if (!(u * apply_phi(t.h, phi) == t.c * t.h)) return false;
    }
    return true;
  });

  check("linearization_recovery", [&](std::mt19937_64&) {
    FrobeniusAction phi = FrobeniusAction::from_rationals(ctx, {2, 2, 2});
    auto I = IdealPresentation::from_polynomials(
        ctx, RingFlavor::An, Coords::X,
        {RationalPolynomial::parse("2*x1 - x2", 3), RationalPolynomial::parse("3*x1 - x3", 3)});
    EvaluationMap pi = linearize_phi_ideal(I, phi);
    return pi.exact_lambdas && *pi.exact_lambdas == std::vector<mpq_class>{1, 2, 3};
  });

  check("character_group_law", [&](std::mt19937_64& rng) {
    FrobeniusAction phi = FrobeniusAction::from_rationals(ctx, {2, 7});
    for (int i = 0; i < 10; ++i) {
      std::vector<PadicScalar> a, b;
      for (int k = 0; k < 2; ++k) {
        a.push_back(scalar_exp(PadicScalar::from_int(ctx, 5 * sampling::small_int(rng, -50, 50))));
        b.push_back(scalar_exp(PadicScalar::from_int(ctx, 5 * sampling::small_int(rng, -50, 50))));
      }
      Character x(a), y(b);
      if (!(char_mul(x, char_inverse(x)) == Character::trivial(ctx, 2))) return false;
      if (!(frobenius_on_char(char_mul(x, y), phi) == char_mul(frobenius_on_char(x, phi), frobenius_on_char(y, phi))))
        return false;
    }
    return true;
  });

  check("koszul_binomial_dims", [&](std::mt19937_64&) {
    for (std::size_t n = 1; n <= 4; ++n) {
      CohomologyProfile p = reduce_and_cohomology(koszul_complex(n));
      long long binom = 1;
      for (std::size_t i = 0; i <= n; ++i) {
        if (p.at(-static_cast<int>(i)) != binom) return false;
        binom = binom * static_cast<long long>(n - i) / static_cast<long long>(i + 1);
      }
    }
    return true;
  });

  check("amplitude_window", [&](std::mt19937_64& rng) {
    for (int i = 0; i < 5; ++i) {
      std::size_t n = static_cast<std::size_t>(sampling::small_int(rng, 1, 2));
      if (!check_window(sampling::random_koszul_built_complex(n, rng)).window_ok) return false;
    }
    return true;
  });

  check("small_and_big_support", [&](std::mt19937_64& rng) {
    for (int i = 0; i < 5; ++i) {
      PolyMatrix a(2, 2, 2);
      for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c) a.at(r, c) = sampling::random_polynomial(2, rng, 0, 1, 0.5);
      std::vector<std::vector<mpq_class>> points;
      for (int k = 0; k < 5; ++k)
        points.push_back({mpq_class(sampling::small_int(rng, -2, 2)), mpq_class(sampling::small_int(rng, -2, 2))});
      if (!supp_equals_Supp(FinitePresentation{a}, points)) return false;
    }
    return true;
  });

  return results;
}

}  // namespace padicprep
