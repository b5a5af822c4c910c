#pragma once

#include <cstddef>
#include <vector>

#include "padicprep/frobenius.hpp"
#include "padicprep/ideal.hpp"

namespace padicprep {

// A continuous character of Z_l^n, recorded by its values chi(gamma_i) on
// the topological generators; each value is a principal unit.
class Character {
 public:
  explicit Character(std::vector<PadicScalar> values) : values_(std::move(values)) {
    require(!values_.empty(), ErrorCode::InvalidInput, "character needs at least one value");
    const auto& ctx = values_.front().context();
    for (const auto& v : values_) {
      require_same(ctx, v.context());
      PadicScalar t = v - PadicScalar::one(ctx);
      require(v.is_unit() && (t.is_zero() || t.valuation() >= 1), ErrorCode::ConvergenceViolation,
              "character values must be congruent to 1 modulo l");
    }
  }

  static Character trivial(const CoefficientContext& ctx, std::size_t n) {
    return Character(std::vector<PadicScalar>(n, PadicScalar::one(ctx)));
  }

  const std::vector<PadicScalar>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  const CoefficientContext& context() const { return values_.front().context(); }

  friend bool operator==(const Character& a, const Character& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!(a.values_[i] == b.values_[i])) return false;
    return true;
  }

 private:
  std::vector<PadicScalar> values_;
};

inline Character char_mul(const Character& a, const Character& b) {
  require_same(a.context(), b.context());
  require(a.size() == b.size(), ErrorCode::InvalidInput, "characters of different rank");
  std::vector<PadicScalar> v;
  for (std::size_t i = 0; i < a.size(); ++i) v.push_back(a.values()[i] * b.values()[i]);
  return Character(std::move(v));
}

inline Character char_inverse(const Character& a) {
  std::vector<PadicScalar> v;
  for (const auto& x : a.values()) v.push_back(x.inv());
  return Character(std::move(v));
}

// Acts diagonally on the log parameters: chi(gamma_i) -> exp(alpha_i * log chi(gamma_i)).
inline Character frobenius_on_char(const Character& chi, const FrobeniusAction& phi) {
  require_same(chi.context(), phi.context());
  require(chi.size() == phi.nvars(), ErrorCode::InvalidInput, "character and Frobenius have different rank");
  std::vector<PadicScalar> v;
  for (std::size_t i = 0; i < chi.size(); ++i) v.push_back(scalar_exp(phi.alpha(i) * scalar_log(chi.values()[i])));
  return Character(std::move(v));
}

// Value of a truncated series at a point with coordinates of positive
// valuation.
inline PadicScalar evaluate_series(const MultiSeries& f, const std::vector<PadicScalar>& point) {
  require(point.size() == f.nvars(), ErrorCode::InvalidInput, "evaluation point has wrong dimension");
  for (const auto& p : point)
    require(p.is_zero() || p.valuation() >= 1, ErrorCode::ConvergenceViolation,
            "evaluation point lies outside the open unit polydisk");
  const auto& ctx = f.context();
  std::vector<std::vector<PadicScalar>> powers(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) {
    powers[i].push_back(PadicScalar::one(ctx));
    for (int k = 1; k <= ctx.degree(); ++k) powers[i].push_back(powers[i].back() * point[i]);
  }
  PadicScalar total = PadicScalar::zero(ctx);
  for (const auto& [m, c] : f.terms()) {
    PadicScalar term = c;
    for (std::size_t i = 0; i < point.size(); ++i)
      if (m[i] > 0) term = term * powers[i][static_cast<std::size_t>(m[i])];
    total = total + term;
  }
  return total;
}

// Each generator evaluated at t_i = chi(gamma_i) - 1.
inline std::vector<PadicScalar> eval_ideal_at_char(const IdealPresentation& I, const Character& chi) {
  require(I.coords() == Coords::T, ErrorCode::CoordinateMismatch, "character evaluation needs t-coordinates");
  require(chi.size() == I.nvars(), ErrorCode::InvalidInput, "character and ideal have different rank");
  std::vector<PadicScalar> point;
  for (const auto& v : chi.values()) point.push_back(v - PadicScalar::one(chi.context()));
  std::vector<PadicScalar> out;
  for (const auto& g : I.generators()) out.push_back(evaluate_series(g, point));
  return out;
}

}  // namespace padicprep
