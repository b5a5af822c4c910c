// Acceptance driver: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerance everywhere is agreement modulo l^(N - loss), with
// l = 5, N = 16, D = 8 unless a line says otherwise.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "padicprep/padicprep.hpp"

#ifndef PADICPREP_GOLDEN_DIR
#error "PADICPREP_GOLDEN_DIR must point at tests/golden"
#endif

using namespace padicprep;
using io::Json;

namespace {

constexpr std::uint64_t kSeed = 20240607;

struct Outcome {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
  auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  if (!out.ok) ++failures;
  std::printf("%s criterion %d: %s (%lld ms)%s%s\n", out.ok ? "PASS" : "FAIL", id, title.c_str(),
              static_cast<long long>(ms), out.ok ? "" : " -- ", out.detail.c_str());
  std::fflush(stdout);
}

std::string str(const MultiSeries& f) { return f.to_string(); }

int v_minus_one(const std::vector<long>& alphas, Monomial m, unsigned long prime) {
  mpz_class prod = 1;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(alphas[i]), static_cast<unsigned long>(m[i]));
    prod *= p;
  }
  prod -= 1;
  if (prod == 0) return -1;
  mpz_class l = prime;
  return static_cast<int>(mpz_remove(prod.get_mpz_t(), prod.get_mpz_t(), l.get_mpz_t()));
}

// Terms that survive at relative precision N - L, with units reduced to
// the digits that precision can see.
Json canonical(const MultiSeries& f, int L) {
  const auto& ctx = f.context();
  const int keep = ctx.precision() - L;
  Json terms = Json::array();
  for (const auto& [m, c] : f.terms()) {
    if (c.is_zero() || c.valuation() >= keep) continue;
    std::vector<int> e;
    for (std::size_t i = 0; i < f.nvars(); ++i) e.push_back(m[i]);
    std::uint64_t digits = ctx.power(keep - static_cast<int>(c.valuation()));
    terms.push_back({{"exp", e}, {"v", c.valuation()}, {"u", std::to_string(c.unit() % digits)}});
  }
  return terms;
}

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

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  throw std::runtime_error("expected an error");
}

Json read_golden(const std::string& name) {
  std::ifstream in(std::string(PADICPREP_GOLDEN_DIR) + "/" + name);
  if (!in) throw std::runtime_error("missing golden file " + name);
  return Json::parse(in);
}

// Same rendering as the CLI payload files.
std::string rendered(const Json& j) { return j.dump(2) + "\n"; }

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(PADICPREP_GOLDEN_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  const CoefficientContext ctx(5, 16, 8);

  report(1, "division identity, deg_t1 R < a, Blockwise == Termwise on 200 cases", [&] {
    Outcome o;
    std::mt19937_64 rng(kSeed + 1);
    for (int i = 0; i < 200 && o.ok; ++i) {
      auto n = static_cast<std::size_t>(sampling::small_int(rng, 1, 3));
      int a = static_cast<int>(sampling::small_int(rng, 1, 4));
      auto F = sampling::random_regular(ctx, n, rng, a);
      auto G = sampling::random_series(ctx, n, Coords::T, rng, 0, 8);
      auto r = weierstrass_divide(G, F);
      MultiSeries rem = r.remainder_sum();
      o.expect(r.quotient * F + rem == G, "identity fails for F = " + str(F));
      for (const auto& [m, c] : rem.terms()) o.expect(m[0] < a, "remainder reaches t1^a for F = " + str(F));
      for (const auto& Ri : r.remainders) o.expect(!Ri.involves(0), "R_i involves t1");
      auto s = weierstrass_divide(G, F, DivisionStrategy::Termwise);
      o.expect(s.quotient == r.quotient && s.remainder_sum() == rem, "strategies disagree for F = " + str(F));
    }
    return o;
  });

  report(2, "prepare(W*U) recovers (W, U) with equal canonical JSON on 100 pairs", [&] {
    Outcome o;
    std::mt19937_64 rng(kSeed + 2);
    for (int i = 0; i < 100 && o.ok; ++i) {
      auto n = static_cast<std::size_t>(sampling::small_int(rng, 1, 3));
      int a = static_cast<int>(sampling::small_int(rng, 1, 4));
      auto W = sampling::random_distinguished(ctx, n, rng, a);
      auto U = sampling::random_unit_series(ctx, n, Coords::T, rng, ctx.degree() - a);
      auto f = weierstrass_prepare(W * U);
      o.expect(f.degree == a, "degree mismatch");
      o.expect(f.distinguished == W && f.unit == U, "pair differs for W = " + str(W));
      int L = std::max({W.max_loss(), U.max_loss(), f.distinguished.max_loss(), f.unit.max_loss()});
      o.expect(canonical(f.distinguished, L) == canonical(W, L) && canonical(f.unit, L) == canonical(U, L),
               "canonical JSON differs for W = " + str(W));
    }
    return o;
  });

  report(3, "homogenization: c = alpha^beta, u*phi(h) = c*h, loss = sum of v(alpha^beta - 1) on 100 cases", [&] {
    Outcome o;
    std::mt19937_64 rng(kSeed + 3);
    const std::vector<long> alphas{2, 7};
    auto phi = FrobeniusAction::from_rationals(ctx, {2, 7});
    for (int i = 0; i < 100 && o.ok; ++i) {
      int k = static_cast<int>(sampling::small_int(rng, 1, 4));
      int e1 = static_cast<int>(sampling::small_int(rng, 0, k));
      Monomial beta = Monomial::from_exponents({e1, k - e1});
      MultiSeries g(ctx, 2, Coords::X);
      g.add_term(beta, sampling::random_unit(ctx, rng));
      auto h0 = sampling::random_unit_series(ctx, 2, Coords::X, rng, ctx.degree());
      auto f = g * invert(h0);
      auto r = homogenize_eigen(f, phi);
      o.expect(r.k_deg == k, "wrong degree");
      o.expect(r.c == PadicScalar::from_int(ctx, 2).pow(e1) * PadicScalar::from_int(ctx, 7).pow(k - e1),
               "c is not alpha^beta");
      o.expect(r.g && r.g->terms().size() == 1 && !r.g->coefficient(beta).vanishes(),
               "g is not the alpha^beta monomial");
      auto u = principal_quotient(apply_phi(f, phi), f);
      o.expect(u.has_value(), "phi(f)/f missing");
      if (!u) break;
      int top = ctx.degree() - k;
      o.expect((*u * apply_phi(r.h, phi)).truncated(top) == (r.c * r.h).truncated(top), "u*phi(h) != c*h");
      int total = 0;
      for (int nu = 1; nu <= top; ++nu) {
        int level = 0;
        for (const auto& [m, coeff] : r.h.terms())
          if (m.degree() == nu) level = std::max(level, v_minus_one(alphas, m, 5));
        o.expect(level == r.level_loss[static_cast<std::size_t>(nu)], "level loss differs at degree " + std::to_string(nu));
        total += level;
      }
      o.expect(total == r.precision_loss, "total loss differs");
    }
    return o;
  });

  report(4, "linearization recovers 50 kernels; maximal and nonlinear ideals are rejected", [&] {
    Outcome o;
    std::mt19937_64 rng(kSeed + 4);
    for (int trial = 0; trial < 50 && o.ok; ++trial) {
      auto n = static_cast<std::size_t>(sampling::small_int(rng, 2, 4));
      std::vector<long> lambda(n, 0);
      while (std::all_of(lambda.begin(), lambda.end(), [](long l) { return l == 0; }))
        for (auto& l : lambda) l = sampling::small_int(rng, -5, 5);
      std::vector<mpq_class> alphas;
      for (long l : lambda) alphas.emplace_back(l != 0 ? 2 : 3);
      auto phi = FrobeniusAction::from_rationals(ctx, alphas);
      auto I = IdealPresentation::from_polynomials(ctx, RingFlavor::An, Coords::X, kernel_generators(lambda, rng));
      auto pi = linearize_phi_ideal(I, phi);
      std::vector<mpq_class> truth(lambda.begin(), lambda.end());
      o.expect(pi.exact_lambdas && *pi.exact_lambdas == normalize_lambdas(truth), "wrong lambdas");
      o.expect(verify_evaluation(I, pi), "generators do not vanish on the line");
    }
    auto phi2 = FrobeniusAction::from_rationals(ctx, {2, 2});
    auto ideal = [&](std::vector<std::string> gens) {
      std::vector<RationalPolynomial> p;
      for (const auto& g : gens) p.push_back(RationalPolynomial::parse(g, 2));
      return IdealPresentation::from_polynomials(ctx, RingFlavor::An, Coords::X, p);
    };
    o.expect(code_of([&] { linearize_phi_ideal(ideal({"x1", "x2"}), phi2); }) == ErrorCode::MaximalIdeal,
             "(x1, x2) not reported as maximal");
    o.expect(code_of([&] { linearize_phi_ideal(ideal({"x1*x2"}), phi2); }) == ErrorCode::NotLinearizable,
             "x1*x2 not rejected");
    o.expect(code_of([&] { linearize_phi_ideal(ideal({"x1^2 - 2*x2^2"}), phi2); }) == ErrorCode::NotLinearizable,
             "x1^2 - 2*x2^2 not rejected");
    return o;
  });

  report(5, "characters chi_x: generators vanish, chi_x*chi_y = chi_(x+y), F(chi_x) = chi_(alpha x), 100 samples per map",
         [&] {
           Outcome o;
           std::mt19937_64 rng(kSeed + 5);
           struct Case {
             std::size_t n;
             std::vector<std::string> group_relations;
             std::vector<std::string> log_relations;
             std::vector<mpq_class> alphas;
           };
           // (1 + t2) = (1 + t1)^2 and (1 + t3) = (1 + t1)^3 in group coordinates.
           const std::vector<Case> cases{
               {2, {"t1 - 3*t2 - 3*t2^2 - t2^3"}, {"x1 - 3*x2"}, {2, 2}},
               {3, {"t2 - 2*t1 - t1^2", "t3 - 3*t1 - 3*t1^2 - t1^3"}, {"x2 - 2*x1", "x3 - 3*x1"}, {2, 2, 2}},
               {2, {"t2"}, {"x2"}, {6, 11}},
           };
           for (const auto& c : cases) {
             std::vector<RationalPolynomial> tg, xg;
             for (const auto& s : c.group_relations) tg.push_back(RationalPolynomial::parse(s, c.n));
             for (const auto& s : c.log_relations) xg.push_back(RationalPolynomial::parse(s, c.n));
             auto T = IdealPresentation::from_polynomials(ctx, RingFlavor::Rn, Coords::T, tg);
             auto X = IdealPresentation::from_polynomials(ctx, RingFlavor::An, Coords::X, xg);
             auto phi = FrobeniusAction::from_rationals(ctx, c.alphas);
             auto pi = linearize_phi_ideal(X, phi);
             auto F = phi.with_power(pi.aligned_power);
             auto chi = [&](const PadicScalar& x) { return subgroup_points(pi, {x}).front(); };
             auto sample = [&] {
               long m = 0;
               while (m == 0) m = sampling::small_int(rng, -999, 999);
               return PadicScalar::from_int(ctx, 5 * m);
             };
             for (int i = 0; i < 100 && o.ok; ++i) {
               auto x = sample(), y = sample();
               for (const auto& v : eval_ideal_at_char(T, chi(x)))
                 o.expect(v.vanishes(), "generator does not vanish at chi_x");
               o.expect(char_mul(chi(x), chi(y)) == chi(x + y), "chi_x * chi_y != chi_(x+y)");
               o.expect(frobenius_on_char(chi(x), F) == chi(pi.aligned_alpha * x), "F(chi_x) != chi_(alpha x)");
             }
           }
           return o;
         });

  report(6, "Koszul n = 1..5 binomial with top Tor 1; windows hold on 100 random complexes (n <= 3)", [&] {
    Outcome o;
    for (std::size_t n = 1; n <= 5; ++n) {
      auto p = reduce_and_cohomology(koszul_complex(n));
      for (std::size_t i = 0; i <= n; ++i) {
        mpz_class b;
        mpz_bin_uiui(b.get_mpz_t(), n, i);
        o.expect(p.at(-static_cast<int>(i)) == b.get_si(), "Koszul dims not binomial at n = " + std::to_string(n));
      }
      o.expect(p.at(-static_cast<int>(n)) == 1, "top Tor is not 1");
    }
    std::mt19937_64 rng(kSeed + 6);
    for (int i = 0; i < 100 && o.ok; ++i) {
      auto n = static_cast<std::size_t>(sampling::small_int(rng, 1, 3));
      auto w = check_window(sampling::random_koszul_built_complex(n, rng));
      o.expect(w.window_ok, "window fails (a = " + std::to_string(w.a) + ", b = " + std::to_string(w.b) + ")");
    }
    return o;
  });

  report(7, "small support equals big support on 50 presentations over Q[x,y] at 20 points", [&] {
    Outcome o;
    std::mt19937_64 rng(kSeed + 7);
    for (int i = 0; i < 50 && o.ok; ++i) {
      auto r = static_cast<std::size_t>(sampling::small_int(rng, 1, 2));
      auto c = static_cast<std::size_t>(sampling::small_int(rng, 1, 3));
      PolyMatrix a(r, c, 2);
      for (std::size_t x = 0; x < r; ++x)
        for (std::size_t y = 0; y < c; ++y) a.at(x, y) = sampling::random_polynomial(2, rng, 0, 2, 0.4);
      std::vector<std::vector<mpq_class>> points;
      for (int k = 0; k < 20; ++k)
        points.push_back({mpq_class(sampling::small_int(rng, -3, 3)), mpq_class(sampling::small_int(rng, -3, 3))});
      o.expect(supp_equals_Supp(FinitePresentation{a}, points), "supports differ on presentation " + std::to_string(i));
    }
    return o;
  });

  report(8, "in-process pipeline on P matches the committed map, subgroup and evaluation files bit for bit", [&] {
    Outcome o;
    auto P = io::ideal_from_json(ctx, read_golden("P.ideal.json"));
    auto phi = io::frobenius_from_json(ctx, read_golden("frobenius_2_2.json"));
    auto pi = linearize_phi_ideal(pipeline::in_log_coords(P), phi);
    Json map = io::to_json(pi);
    o.expect(rendered(map) == slurp("map.json"), "map.json differs");
    Json subgroup = pipeline::sample_subgroup(io::evaluation_map_from_json(map), 4, 7);
    o.expect(rendered(subgroup) == slurp("subgroup.json"), "subgroup.json differs");
    Json eval = pipeline::evaluate_at_characters(P, subgroup);
    o.expect(rendered(eval) == slurp("eval.json"), "eval.json differs");
    o.expect(eval.at("vanishes").get<bool>(), "P does not vanish on its subgroup");
    return o;
  });

  return failures == 0 ? 0 : 1;
}
