#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "padicprep/homology.hpp"
#include "padicprep/series.hpp"

namespace padicprep::sampling {

// Seeded generators shared by the self-test and the test suites.

inline long small_int(std::mt19937_64& rng, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

// A random l-adic integer: either a small rational with denominator prime
// to l or a full-precision unit times a power of l.
inline PadicScalar random_scalar(const CoefficientContext& ctx, std::mt19937_64& rng) {
  if (rng() % 2 == 0) {
    long num = small_int(rng, -20, 20), den;
    do {
      den = small_int(rng, 1, 12);
    } while (den % static_cast<long>(ctx.prime()) == 0);
    return PadicScalar::from_rational(ctx, mpq_class(num, den));
  }
  std::uint64_t unit;
  do {
    unit = std::uniform_int_distribution<std::uint64_t>(1, ctx.modulus() - 1)(rng);
  } while (unit % ctx.prime() == 0);
  return PadicScalar::from_parts(ctx, small_int(rng, 0, 2), unit, 0);
}

inline PadicScalar random_unit(const CoefficientContext& ctx, std::mt19937_64& rng) {
  PadicScalar s = random_scalar(ctx, rng);
  while (!s.is_unit()) s = random_scalar(ctx, rng);
  return s;
}

// Random series with terms of total degree in [min_degree, max_degree].
inline MultiSeries random_series(const CoefficientContext& ctx, std::size_t nvars, Coords coords, std::mt19937_64& rng,
                                 int min_degree, int max_degree, double density = 0.4) {
  MultiSeries f(ctx, nvars, coords);
  std::bernoulli_distribution keep(density);
  for (Monomial m : monomials_up_to(nvars, std::min(max_degree, ctx.degree())))
    if (m.degree() >= min_degree && keep(rng)) f.add_term(m, random_scalar(ctx, rng));
  return f;
}

inline MultiSeries random_unit_series(const CoefficientContext& ctx, std::size_t nvars, Coords coords,
                                      std::mt19937_64& rng, int max_degree) {
  MultiSeries u = random_series(ctx, nvars, coords, rng, 1, max_degree);
  u.add_term(Monomial{}, random_unit(ctx, rng));
  return u;
}

// Random t1-regular series of order exactly a: a unit multiple of t1^a plus
// terms in the maximal ideal of the other variables and higher t1 terms.
inline MultiSeries random_regular(const CoefficientContext& ctx, std::size_t nvars, std::mt19937_64& rng, int a) {
  MultiSeries f(ctx, nvars, Coords::T);
  std::bernoulli_distribution keep(0.35);
  for (Monomial m : monomials_up_to(nvars, ctx.degree())) {
    if (m.is_one()) continue;
    bool pure = m.degree() == m[0];
    if (pure && m[0] < a) continue;
    if (pure && m[0] == a) {
      f.add_term(m, random_unit(ctx, rng));
      continue;
    }
    if (keep(rng)) f.add_term(m, random_scalar(ctx, rng));
  }
  return f;
}

// Random distinguished polynomial t1^a + sum_{i<a} c_i t1^i, c_i(0) = 0,
// with every term of total degree at least a, so that ord(W) = a. Below
// that order the truncated product W*U no longer determines W.
inline MultiSeries random_distinguished(const CoefficientContext& ctx, std::size_t nvars, std::mt19937_64& rng, int a) {
  MultiSeries w(ctx, nvars, Coords::T);
  w.add_term(Monomial::variable(0, a), PadicScalar::one(ctx));
  std::bernoulli_distribution keep(0.4);
  for (Monomial m : monomials_up_to(nvars, ctx.degree())) {
    if (m[0] >= a || m.degree() == m[0] || m.degree() < a) continue;
    if (keep(rng)) w.add_term(m, random_scalar(ctx, rng));
  }
  return w;
}

inline RationalPolynomial random_polynomial(std::size_t nvars, std::mt19937_64& rng, int min_degree, int max_degree,
                                            double density = 0.5, long bound = 3) {
  RationalPolynomial p(nvars);
  std::bernoulli_distribution keep(density);
  for (Monomial m : monomials_up_to(nvars, max_degree))
    if (m.degree() >= min_degree && keep(rng)) p.add_term(m, mpq_class(small_int(rng, -bound, bound)));
  return p;
}

// A perfect complex with finite-length cohomology: shifted Koszul complexes
// combined by direct sums and cones of multiplication by elements of the
// maximal ideal, then disguised by a random change of bases.
inline FreeComplex random_koszul_built_complex(std::size_t n, std::mt19937_64& rng) {
  auto shifted = [&] { return shift(koszul_complex(n), static_cast<int>(small_int(rng, -2, 2))); };
  FreeComplex c = shifted();
  // Two steps in three variables already give ranks up to 10, where the
  // syzygy computations of the finite-length check become slow.
  int steps = static_cast<int>(small_int(rng, 0, n <= 2 ? 2 : 1));
  for (int s = 0; s < steps; ++s) {
    if (rng() % 2 == 0 && n <= 2) {
      c = direct_sum(c, shifted());
    } else {
      RationalPolynomial g = random_polynomial(n, rng, 1, 2, 0.3);
      c = cone_of_multiplication(c, g);
    }
  }
  return random_basis_change(c, rng());
}

}  // namespace padicprep::sampling
