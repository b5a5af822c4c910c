#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "padicprep/ideal.hpp"
#include "padicprep/series.hpp"
#include "padicprep/weierstrass.hpp"

namespace padicprep {

// Diagonal Frobenius: phi(x_i) = alpha_i^power * x_i in log coordinates, and
// phi(t_i) = (1 + t_i)^(alpha_i^power) - 1 in group-ring coordinates.
class FrobeniusAction {
 public:
  FrobeniusAction(std::vector<PadicScalar> alphas, int weight = 1, int power = 1,
                  std::optional<std::vector<mpq_class>> exact = std::nullopt)
      : alphas_(std::move(alphas)), exact_(std::move(exact)), weight_(weight), power_(power) {
    require(!alphas_.empty(), ErrorCode::InvalidInput, "Frobenius needs at least one eigenvalue");
    require(weight >= 1, ErrorCode::InvalidInput, "weight must be positive");
    require(power >= 1, ErrorCode::InvalidInput, "power must be positive");
    const auto& ctx = alphas_.front().context();
    for (const auto& a : alphas_) {
      require_same(ctx, a.context());
      require(a.is_unit(), ErrorCode::InvalidInput, "eigenvalues must be l-adic units");
    }
    // phi - id must be invertible on every graded piece up to degree D.
    for (std::size_t i = 0; i < alphas_.size(); ++i) {
      PadicScalar a = alpha(i);
      PadicScalar p = a;
      for (int j = 1; j <= ctx.degree(); ++j) {
        require(!(p == PadicScalar::one(ctx)), ErrorCode::InvalidInput,
                "eigenvalue is a root of unity of order at most the truncation degree");
        p = p * a;
      }
    }
  }

  static FrobeniusAction from_rationals(const CoefficientContext& ctx, const std::vector<mpq_class>& alphas,
                                        int weight = 1, int power = 1) {
    std::vector<PadicScalar> as;
    for (const auto& q : alphas) as.push_back(PadicScalar::from_rational(ctx, q));
    return FrobeniusAction(std::move(as), weight, power, alphas);
  }

  std::size_t nvars() const { return alphas_.size(); }
  int weight() const { return weight_; }
  int power() const { return power_; }
  const CoefficientContext& context() const { return alphas_.front().context(); }
  const std::vector<PadicScalar>& base_alphas() const { return alphas_; }
  const std::optional<std::vector<mpq_class>>& exact_base_alphas() const { return exact_; }

  // Effective eigenvalue alpha_i^power.
  PadicScalar alpha(std::size_t i) const { return alphas_.at(i).pow(power_); }

  std::optional<mpq_class> exact_alpha(std::size_t i) const {
    if (!exact_) return std::nullopt;
    mpq_class r = 1;
    for (int k = 0; k < power_; ++k) r *= (*exact_)[i];
    return r;
  }

  FrobeniusAction with_power(int power) const { return FrobeniusAction(alphas_, weight_, power, exact_); }

  // alpha^beta for a monomial x^beta.
  PadicScalar monomial_eigenvalue(Monomial m) const {
    PadicScalar r = PadicScalar::one(context());
    for (std::size_t i = 0; i < alphas_.size(); ++i)
      if (m[i] > 0) r = r * alpha(i).pow(m[i]);
    return r;
  }

 private:
  std::vector<PadicScalar> alphas_;
  std::optional<std::vector<mpq_class>> exact_;
  int weight_;
  int power_;
};

namespace detail {

// (1 + t)^alpha - 1 in variable `var`: exact binomial coefficients when
// alpha is a known rational, otherwise exp(alpha * log(1 + t)) - 1.
inline MultiSeries binomial_minus_one(const FrobeniusAction& phi, std::size_t nvars, std::size_t var) {
  const auto& ctx = phi.context();
  MultiSeries s(ctx, nvars, Coords::T);
  if (auto a = phi.exact_alpha(var)) {
    mpq_class c = 1;
    for (int k = 1; k <= ctx.degree(); ++k) {
      c = c * (*a - (k - 1)) / k;
      s.add_term(Monomial::variable(var, k), PadicScalar::from_rational(ctx, c));
    }
    return s;
  }
  MultiSeries arg = phi.alpha(var) * log_one_plus(ctx, nvars, Coords::T, var);
  MultiSeries e = exp_minus_one(ctx, 1, Coords::T, 0);
  return substitute(e, {arg});
}

}  // namespace detail

inline MultiSeries apply_phi(const MultiSeries& f, const FrobeniusAction& phi) {
  require_same(f.context(), phi.context());
  require(f.nvars() == phi.nvars(), ErrorCode::InvalidInput, "Frobenius and series have different arity");
  if (f.coords() == Coords::X) {
    MultiSeries out(f.context(), f.nvars(), Coords::X);
    for (const auto& [m, c] : f.terms()) out.add_term(m, phi.monomial_eigenvalue(m) * c);
    return out;
  }
  std::vector<MultiSeries> gs;
  for (std::size_t i = 0; i < f.nvars(); ++i) gs.push_back(detail::binomial_minus_one(phi, f.nvars(), i));
  return substitute(f, gs);
}

// phi applied to an exact polynomial in log coordinates.
inline std::optional<RationalPolynomial> apply_phi_exact(const RationalPolynomial& p, const FrobeniusAction& phi) {
  RationalPolynomial out(p.nvars());
  for (const auto& [m, c] : p.terms()) {
    mpq_class e = c;
    for (std::size_t i = 0; i < p.nvars(); ++i) {
      auto a = phi.exact_alpha(i);
      if (!a) return std::nullopt;
      for (int k = 0; k < m[i]; ++k) e *= *a;
    }
    out.add_term(m, e);
  }
  return out;
}

// phi(I) ⊆ I, checked generator by generator.
inline bool is_phi_stable(const IdealPresentation& I, const FrobeniusAction& phi) {
  if (I.is_zero_ideal()) return true;
  if (I.is_exact() && I.coords() == Coords::X && phi.exact_base_alphas()) {
    for (const auto& g : I.exact_generators())
      if (!ideal_contains(I.exact_generators(), *apply_phi_exact(g, phi))) return false;
    return true;
  }
  auto gens = I.nonzero_generators();
  if (gens.size() == 1) return principal_quotient(apply_phi(gens.front(), phi), gens.front()).has_value();
  fail(ErrorCode::MembershipUndecidable, "stability needs an exact ideal in log coordinates or a principal ideal");
}

struct TrivializationResult {
  PadicScalar c;
  MultiSeries h;
  // g = f*h for homogenize_eigen; empty for trivialize_unit.
  std::optional<MultiSeries> g;
  int k_deg = 0;
  // Sum over solved degrees of max v(alpha^beta - 1) among the monomials
  // solved at that degree.
  int precision_loss = 0;
  std::vector<int> level_loss;
};

// Writes the unit u as c * h / phi(h) with c = u(0) and h(0) = 1, solving
// (alpha^beta - 1) h_beta = -[(u/c - 1) phi(h_{<nu})]_beta degree by degree.
// Only degrees up to `max_level` are solved (default: the truncation degree).
inline TrivializationResult trivialize_unit(const MultiSeries& u, const FrobeniusAction& phi, int max_level = -1) {
  require(u.coords() == Coords::X, ErrorCode::CoordinateMismatch, "trivialization works in log coordinates");
  require(u.is_unit(), ErrorCode::NotAUnit, "u has zero constant term");
  require(u.nvars() == phi.nvars(), ErrorCode::InvalidInput, "Frobenius and series have different arity");
  const auto& ctx = u.context();
  const int D = max_level < 0 ? ctx.degree() : std::min(max_level, ctx.degree());
  const PadicScalar c = u.constant_term();
  MultiSeries w_plus = c.inv() * u - MultiSeries::one(ctx, u.nvars(), Coords::X);
  MultiSeries h = MultiSeries::one(ctx, u.nvars(), Coords::X);
  MultiSeries phi_h = h;
  TrivializationResult out{c, h, std::nullopt, 0, 0, std::vector<int>(static_cast<std::size_t>(D + 1), 0)};
  for (int nu = 1; nu <= D; ++nu) {
    MultiSeries rhs = MultiSeries::multiply(w_plus, phi_h, nu).homogeneous_part(nu);
    int level = 0;
    for (const auto& [m, r] : rhs.terms()) {
      PadicScalar denom = PadicScalar::one(ctx) - phi.monomial_eigenvalue(m);
      require(!denom.vanishes(), ErrorCode::PrecisionExhausted, "alpha^beta - 1 vanishes to the working precision");
      level = std::max(level, static_cast<int>(denom.valuation()));
      PadicScalar hb = r / denom;
      h.add_term(m, hb);
      phi_h.add_term(m, phi.monomial_eigenvalue(m) * hb);
    }
    out.level_loss[static_cast<std::size_t>(nu)] = level;
    out.precision_loss += level;
    require(out.precision_loss < ctx.precision(), ErrorCode::PrecisionExhausted,
            "accumulated loss from alpha^beta - 1 reached the working precision");
  }
  out.h = h;
  return out;
}

// For f with phi(f) = u*f, u a unit: g = f*h is homogeneous of degree
// ord(f) and satisfies phi(g) = c*g.
inline TrivializationResult homogenize_eigen(const MultiSeries& f, const FrobeniusAction& phi) {
  require(f.coords() == Coords::X, ErrorCode::CoordinateMismatch, "homogenization works in log coordinates");
  require(!f.is_zero() && f.order() >= 1, ErrorCode::NotEigenPrincipal, "f must be a nonzero non-unit");
  const auto& ctx = f.context();
  const int k = f.order();
  auto u = principal_quotient(apply_phi(f, phi), f);
  require(u.has_value() && u->is_unit(), ErrorCode::NotEigenPrincipal, "phi(f)/f is not a unit");
  // u (hence h) is only determined up to degree D - k, which is exactly
  // what f*h needs up to degree D.
  TrivializationResult out = trivialize_unit(*u, phi, ctx.degree() - k);
  MultiSeries g = f * out.h;
  require(g.order() == k && g.max_degree() == k, ErrorCode::NotEigenPrincipal, "f*h is not homogeneous");
  for (const auto& [m, coeff] : g.terms())
    require(phi.monomial_eigenvalue(m) == out.c, ErrorCode::NotEigenPrincipal,
            "phi does not act on f*h by the constant c");
  out.g = g;
  out.k_deg = k;
  return out;
}

}  // namespace padicprep
