#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "padicprep/groebner.hpp"
#include "padicprep/series.hpp"
#include "padicprep/weierstrass.hpp"

namespace padicprep {

// Which ring the generators were written in: the Iwasawa-type ring R_n or
// the ring A_n of locally convergent series. In the truncated model this is
// bookkeeping only.
enum class RingFlavor { Rn, An };

// Generators of an ideal I contained in the maximal ideal. When `exact` is
// set, the same generators are also held as polynomials with rational
// coefficients, which unlocks the Groebner-basis paths.
class IdealPresentation {
 public:
  IdealPresentation(RingFlavor flavor, std::vector<MultiSeries> generators,
                    std::optional<std::vector<RationalPolynomial>> exact = std::nullopt)
      : flavor_(flavor), generators_(std::move(generators)), exact_(std::move(exact)) {
    require(!generators_.empty(), ErrorCode::InvalidInput, "ideal needs at least one generator (use 0 for the zero ideal)");
    const MultiSeries& g0 = generators_.front();
    for (const auto& g : generators_) {
      g0.check(g);
      require(g.is_zero() || g.order() >= 1, ErrorCode::InvalidInput, "generator is not in the maximal ideal");
    }
    if (exact_) {
      require(exact_->size() == generators_.size(), ErrorCode::InvalidInput, "exact generator count mismatch");
      for (std::size_t i = 0; i < exact_->size(); ++i)
        require((*exact_)[i].nvars() == g0.nvars(), ErrorCode::InvalidInput, "exact generator has wrong arity");
    }
  }

  // Exact generators given as rational polynomials.
  static IdealPresentation from_polynomials(const CoefficientContext& ctx, RingFlavor flavor, Coords coords,
                                            const std::vector<RationalPolynomial>& polys) {
    std::vector<MultiSeries> gens;
    for (const auto& p : polys) gens.push_back(MultiSeries::from_polynomial(ctx, p, coords));
    return IdealPresentation(flavor, std::move(gens), polys);
  }

  // Reconstructs rational coefficients of every generator; fails with
  // ExactnessRequired when some coefficient has no small rational preimage.
  static IdealPresentation with_exact_generators(RingFlavor flavor, std::vector<MultiSeries> gens) {
    std::vector<RationalPolynomial> polys;
    for (const auto& g : gens) {
      auto p = g.to_rational_polynomial();
      require(p.has_value(), ErrorCode::ExactnessRequired, "generator coefficients are not recognizably rational");
      polys.push_back(*p);
    }
    return IdealPresentation(flavor, std::move(gens), std::move(polys));
  }

  RingFlavor flavor() const { return flavor_; }
  Coords coords() const { return generators_.front().coords(); }
  std::size_t nvars() const { return generators_.front().nvars(); }
  const CoefficientContext& context() const { return generators_.front().context(); }
  const std::vector<MultiSeries>& generators() const { return generators_; }
  bool is_exact() const { return exact_.has_value(); }
  const std::vector<RationalPolynomial>& exact_generators() const {
    require(exact_.has_value(), ErrorCode::ExactnessRequired, "ideal is not polynomial-exact");
    return *exact_;
  }

  // Nonzero generators only.
  std::vector<MultiSeries> nonzero_generators() const {
    std::vector<MultiSeries> out;
    for (const auto& g : generators_)
      if (!g.is_zero()) out.push_back(g);
    return out;
  }

  bool is_zero_ideal() const { return nonzero_generators().empty(); }

 private:
  RingFlavor flavor_;
  std::vector<MultiSeries> generators_;
  std::optional<std::vector<RationalPolynomial>> exact_;
};

// f in I. Exact path: normal form modulo a Groebner basis of the polynomial
// ideal. Principal path: Weierstrass division by the single generator.
// Membership is decided for the polynomial ideal; for the local ring this is
// a sufficient criterion.
inline bool membership(const MultiSeries& f, const IdealPresentation& I) {
  f.check(I.generators().front());
  if (f.is_zero()) return true;
  if (I.is_exact()) {
    if (auto p = f.to_rational_polynomial()) return ideal_contains(I.exact_generators(), *p);
  }
  auto gens = I.nonzero_generators();
  if (gens.empty()) return false;
  if (gens.size() == 1) return principal_quotient(f, gens.front()).has_value();
  fail(ErrorCode::MembershipUndecidable, "ideal is neither polynomial-exact nor principal");
}

// I ∩ Q[x_j : j != var] with the remaining variables renumbered in order.
inline IdealPresentation eliminate(const IdealPresentation& I, std::size_t drop_var) {
  require(I.is_exact(), ErrorCode::ExactnessRequired, "elimination needs polynomial-exact generators");
  require(I.nvars() >= 2, ErrorCode::InvalidInput, "cannot eliminate the only variable");
  std::vector<RationalPolynomial> polys = eliminate_variable(I.exact_generators(), drop_var);
  if (polys.empty()) polys.push_back(RationalPolynomial(I.nvars() - 1));
  return IdealPresentation::from_polynomials(I.context(), I.flavor(), I.coords(), polys);
}

}  // namespace padicprep
