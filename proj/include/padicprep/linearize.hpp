#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "padicprep/characters.hpp"
#include "padicprep/frobenius.hpp"
#include "padicprep/groebner.hpp"
#include "padicprep/ideal.hpp"
#include "padicprep/weierstrass.hpp"

namespace padicprep {

// The specialization x_i -> lambda_i * x, normalized so the first nonzero
// lambda_i is 1, together with the power k after which alpha_i^k = alpha for
// every i in the support of lambda.
struct EvaluationMap {
  std::vector<PadicScalar> lambdas;
  int aligned_power = 1;
  PadicScalar aligned_alpha;
  // Exact rational lambdas when the computation stayed in the exact fragment.
  std::optional<std::vector<mpq_class>> exact_lambdas;

  std::vector<std::size_t> support() const {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < lambdas.size(); ++i)
      if (!lambdas[i].is_zero()) s.push_back(i);
    return s;
  }
};

// Supplies a minimal prime of (I, x1) when the built-in criteria cannot.
using ComponentOracle = std::function<std::optional<IdealPresentation>(const IdealPresentation&)>;

struct LinearizeOptions {
  int max_alignment_power = 32;
  ComponentOracle component_oracle;
};

inline std::vector<PadicScalar> normalize_lambdas(const std::vector<PadicScalar>& lambdas) {
  for (const auto& l : lambdas)
    if (!l.is_zero()) {
      PadicScalar inv = l.inv();
      std::vector<PadicScalar> out;
      for (const auto& x : lambdas) out.push_back(x * inv);
      return out;
    }
  fail(ErrorCode::InvalidInput, "all lambdas are zero");
}

inline std::vector<mpq_class> normalize_lambdas(const std::vector<mpq_class>& lambdas) {
  for (const auto& l : lambdas)
    if (l != 0) {
      std::vector<mpq_class> out;
      for (const auto& x : lambdas) out.push_back(x / l);
      return out;
    }
  fail(ErrorCode::InvalidInput, "all lambdas are zero");
}

struct Alignment {
  int power;
  PadicScalar alpha;
};

// Smallest k <= max_power with alpha_i^k equal across `support`.
inline Alignment align_eigenvalues(const FrobeniusAction& phi, const std::vector<std::size_t>& support,
                                   int max_power = 32) {
  require(!support.empty(), ErrorCode::InvalidInput, "alignment needs a nonempty support");
  std::vector<PadicScalar> powers;
  for (std::size_t i : support) powers.push_back(phi.alpha(i));
  std::vector<PadicScalar> current = powers;
  for (int k = 1; k <= max_power; ++k) {
    bool equal = true;
    for (const auto& p : current)
      if (!(p == current.front())) equal = false;
    if (equal) return {k, current.front()};
    for (std::size_t j = 0; j < current.size(); ++j) current[j] = current[j] * powers[j];
  }
  fail(ErrorCode::NoAlignment, "no power up to " + std::to_string(max_power) + " aligns the eigenvalues");
}

// Substitutes x_i -> lambda_i * x into every generator and checks that the
// result vanishes to the truncation degree and working precision.
inline bool verify_evaluation(const IdealPresentation& I, const std::vector<PadicScalar>& lambdas) {
  require(I.coords() == Coords::X, ErrorCode::CoordinateMismatch, "evaluation maps act in log coordinates");
  require(lambdas.size() == I.nvars(), ErrorCode::InvalidInput, "lambda vector has wrong length");
  const auto& ctx = I.context();
  std::vector<MultiSeries> line;
  for (const auto& l : lambdas) {
    MultiSeries g(ctx, 1, Coords::X);
    g.add_term(Monomial::variable(0), l);
    line.push_back(std::move(g));
  }
  for (const auto& g : I.generators())
    if (!substitute(g, line).vanishes()) return false;
  return true;
}

inline bool verify_evaluation(const IdealPresentation& I, const EvaluationMap& pi) {
  return verify_evaluation(I, pi.lambdas);
}

// chi_x(gamma_i) = exp(lambda_i * x) for each sample x.
inline std::vector<Character> subgroup_points(const EvaluationMap& pi, const std::vector<PadicScalar>& xs) {
  std::vector<Character> out;
  for (const auto& x : xs) {
    std::vector<PadicScalar> v;
    for (const auto& l : pi.lambdas) v.push_back(scalar_exp(l * x));
    out.emplace_back(std::move(v));
  }
  return out;
}

namespace detail {

// Rank over Q_l of the linear parts of the generators.
inline int linear_rank(const std::vector<MultiSeries>& gens, std::size_t nvars) {
  std::vector<std::vector<PadicScalar>> rows;
  for (const auto& g : gens) {
    std::vector<PadicScalar> row;
    bool nonzero = false;
    for (std::size_t i = 0; i < nvars; ++i) {
      row.push_back(g.coefficient(Monomial::variable(i)));
      nonzero = nonzero || !row.back().is_zero();
    }
    if (nonzero) rows.push_back(std::move(row));
  }
  int rank = 0;
  for (std::size_t col = 0; col < nvars && static_cast<std::size_t>(rank) < rows.size(); ++col) {
    std::size_t r = static_cast<std::size_t>(rank);
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][col].is_zero()) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[r]);
    PadicScalar inv = rows[r][col].inv();
    for (std::size_t k = r + 1; k < rows.size(); ++k) {
      if (rows[k][col].is_zero()) continue;
      PadicScalar f = rows[k][col] * inv;
      for (std::size_t j = col; j < nvars; ++j) rows[k][j] = rows[k][j] - f * rows[r][j];
    }
    ++rank;
  }
  return rank;
}

inline int linear_rank(const std::vector<RationalPolynomial>& gens, std::size_t nvars) {
  std::vector<std::vector<mpq_class>> rows;
  for (const auto& g : gens) {
    std::vector<mpq_class> row;
    for (std::size_t i = 0; i < nvars; ++i) row.push_back(g.coefficient(Monomial::variable(i)));
    rows.push_back(std::move(row));
  }
  int rank = 0;
  for (std::size_t col = 0; col < nvars; ++col) {
    std::size_t r = static_cast<std::size_t>(rank);
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv >= rows.size()) continue;
    std::swap(rows[piv], rows[r]);
    for (std::size_t k = r + 1; k < rows.size(); ++k) {
      if (rows[k][col] == 0) continue;
      mpq_class f = rows[k][col] / rows[r][col];
      for (std::size_t j = col; j < nvars; ++j) rows[k][j] -= f * rows[r][j];
    }
    ++rank;
  }
  return rank;
}

inline FrobeniusAction restrict_frobenius(const FrobeniusAction& phi, const std::vector<std::size_t>& vars) {
  std::vector<PadicScalar> alphas;
  std::vector<mpq_class> exact;
  bool have_exact = true;
  for (std::size_t i : vars) {
    alphas.push_back(phi.alpha(i));
    if (auto a = phi.exact_alpha(i))
      exact.push_back(*a);
    else
      have_exact = false;
  }
  if (have_exact) return FrobeniusAction(std::move(alphas), phi.weight(), 1, std::move(exact));
  return FrobeniusAction(std::move(alphas), phi.weight(), 1);
}

inline std::vector<PadicScalar> to_padic(const CoefficientContext& ctx, const std::vector<mpq_class>& v) {
  std::vector<PadicScalar> out;
  for (const auto& q : v) out.push_back(PadicScalar::from_rational(ctx, q));
  return out;
}

// Result of the internal recursion: lambdas (normalized), possibly exact.
struct Direction {
  std::vector<PadicScalar> lambdas;
  std::optional<std::vector<mpq_class>> exact;
};

// Lambda for a homogeneous linear form a*x1 + b*x2: (-b, a), normalized.
inline Direction direction_from_linear_form(const MultiSeries& g) {
  PadicScalar a = g.coefficient(Monomial::variable(0));
  PadicScalar b = g.coefficient(Monomial::variable(1));
  Direction d{normalize_lambdas(std::vector<PadicScalar>{-b, a}), std::nullopt};
  auto qa = a.to_rational(), qb = b.to_rational();
  if (qa && qb) d.exact = normalize_lambdas(std::vector<mpq_class>{-*qb, *qa});
  return d;
}

}  // namespace detail

// Two-variable base case: f generates a height-one prime phi-ideal. The
// eigen-homogenized generator must be linear, gamma' x1 - gamma x2, and
// lambda = (gamma, gamma') up to normalization.
inline EvaluationMap linearize_n2_dim1(const MultiSeries& f, const FrobeniusAction& phi, int max_power = 32) {
  require(f.nvars() == 2 && phi.nvars() == 2, ErrorCode::InvalidInput, "base case needs two variables");
  require(f.coords() == Coords::X, ErrorCode::CoordinateMismatch, "linearization works in log coordinates");
  TrivializationResult tr = homogenize_eigen(f, phi);
  require(tr.k_deg == 1, ErrorCode::NotLinearizable,
          "eigen-homogenized generator has degree " + std::to_string(tr.k_deg) + ", so the ideal is not prime");
  detail::Direction d = detail::direction_from_linear_form(*tr.g);
  EvaluationMap pi{d.lambdas, 1, PadicScalar::one(f.context()), d.exact};
  Alignment al = align_eigenvalues(phi, pi.support(), max_power);
  pi.aligned_power = al.power;
  pi.aligned_alpha = al.alpha;
  return pi;
}

namespace detail {

class Linearizer {
 public:
  Linearizer(const CoefficientContext& ctx, const LinearizeOptions& options) : ctx_(ctx), options_(options) {}

  Direction run(const IdealPresentation& I, const FrobeniusAction& phi) {
    const std::size_t n = I.nvars();
    if (I.is_zero_ideal()) fail(ErrorCode::ZeroIdeal, "the zero ideal has no distinguished evaluation map");
    if (linear_rank(I.nonzero_generators(), n) == static_cast<int>(n))
      fail(ErrorCode::MaximalIdeal, "the ideal is the maximal ideal");
    if (n == 1) fail(ErrorCode::NotLinearizable, "a nonzero proper ideal of A_1 other than m is not prime");
    if (n == 2) return two_variables(I, phi);
    require(I.is_exact(), ErrorCode::ExactnessRequired, "three or more variables need polynomial-exact generators");
    return exact(I.exact_generators(), phi);
  }

 private:
  // Principal generator of a height-one ideal in two variables.
  MultiSeries principal_generator(const IdealPresentation& I) {
    auto gens = I.nonzero_generators();
    if (gens.size() == 1) return gens.front();
    require(I.is_exact(), ErrorCode::ExactnessRequired, "several generators in two variables need exact input");
    std::vector<RationalPolynomial> polys;
    for (const auto& p : I.exact_generators())
      if (!p.is_zero()) polys.push_back(p);
    RationalPolynomial g = polys.front();
    for (const auto& p : polys) g = polynomial_gcd(g, p);
    require(g.order() >= 1, ErrorCode::NotLinearizable, "generators have no common factor through the origin");
    // (g) = I locally iff some cofactor is a unit at the origin.
    bool generates = false;
    for (const auto& p : polys) {
      auto q = exact_divide(p, g);
      if (q && q->coefficient(Monomial{}) != 0) generates = true;
    }
    require(generates, ErrorCode::NotLinearizable, "ideal is not principal, so it is not a height-one prime");
    return MultiSeries::from_polynomial(ctx_, g, Coords::X);
  }

  Direction two_variables(const IdealPresentation& I, const FrobeniusAction& phi) {
    MultiSeries f = principal_generator(I);
    TrivializationResult tr = homogenize_eigen(f, phi);
    require(tr.k_deg == 1, ErrorCode::NotLinearizable,
            "eigen-homogenized generator has degree " + std::to_string(tr.k_deg) + ", so the ideal is not prime");
    Direction d = direction_from_linear_form(*tr.g);
    // Cross-check against the initial form, which equals g exactly.
    if (auto exact_f = f.to_rational_polynomial()) {
      RationalPolynomial lin = exact_f->homogeneous_part(1);
      mpq_class a = lin.coefficient(Monomial::variable(0)), b = lin.coefficient(Monomial::variable(1));
      auto exact_dir = normalize_lambdas(std::vector<mpq_class>{-b, a});
      require(to_padic(ctx_, exact_dir)[0] == d.lambdas[0] && to_padic(ctx_, exact_dir)[1] == d.lambdas[1],
              ErrorCode::NotEigenPrincipal, "homogenized generator disagrees with the initial form");
      d.exact = exact_dir;
    }
    return d;
  }

  Direction exact(const std::vector<RationalPolynomial>& gens_in, const FrobeniusAction& phi) {
    std::vector<RationalPolynomial> gens;
    for (const auto& g : gens_in)
      if (!g.is_zero()) gens.push_back(g);
    const std::size_t n = phi.nvars();
    if (gens.empty()) {
      std::vector<mpq_class> e(n, 0);
      e[0] = 1;
      return {to_padic(ctx_, e), e};
    }
    if (linear_rank(gens, n) == static_cast<int>(n))
      fail(ErrorCode::MaximalIdeal, "a component of the recursion is the maximal ideal");
    if (n == 2) {
      auto I = IdealPresentation::from_polynomials(ctx_, RingFlavor::An, Coords::X, gens);
      return two_variables(I, phi);
    }
    if (n == 1) fail(ErrorCode::NotLinearizable, "a nonzero proper ideal of A_1 other than m is not prime");
    int r = ideal_dimension(gens, n);
    require(r >= 1, ErrorCode::NotLinearizable, "the ideal has dimension zero but is not maximal, so it is not prime");
    if (r == 1) return dimension_one(gens, phi);
    return higher_dimension(gens, phi, r);
  }

  Direction dimension_one(const std::vector<RationalPolynomial>& gens, const FrobeniusAction& phi) {
    const std::size_t n = phi.nvars();
    // A generator not in (x2, ..., xn) is x1-regular.
    std::optional<RationalPolynomial> regular;
    for (const auto& g : gens) {
      RationalPolynomial restricted(n);
      for (const auto& [m, c] : g.terms())
        if (m.degree() == m[0]) restricted.add_term(m, c);
      if (!restricted.is_zero()) {
        regular = g;
        break;
      }
    }
    if (!regular) {
      std::vector<mpq_class> e(n, 0);
      e[0] = 1;
      return {to_padic(ctx_, e), e};
    }
    // The Weierstrass polynomial of the regular element also lies in I; it
    // is kept for the final consistency check.
    MultiSeries p = MultiSeries::from_polynomial(ctx_, *regular, Coords::X);
    if (regularity_order(p) <= ctx_.degree()) prepared_.push_back(weierstrass_prepare(p).distinguished);

    // J = I ∩ Q[x2..xn], recursively linearized for alpha_2..alpha_n.
    std::vector<RationalPolynomial> J = eliminate_variable(gens, 0);
    std::vector<std::size_t> rest;
    for (std::size_t i = 1; i < n; ++i) rest.push_back(i);
    FrobeniusAction phi_rest = restrict_frobenius(phi, rest);
    Direction sub = exact(J, phi_rest);
    require(sub.exact.has_value(), ErrorCode::ExactnessRequired, "sub-direction is not exact");
    const std::vector<mpq_class>& lam = *sub.exact;

    std::vector<std::size_t> sub_support;
    for (std::size_t i = 0; i < lam.size(); ++i)
      if (lam[i] != 0) sub_support.push_back(i);
    Alignment al = align_eigenvalues(phi_rest, sub_support, options_.max_alignment_power);

    // pi: x1 -> x1, x_i -> lambda'_i x, into Q[x1, x].
    std::vector<RationalPolynomial> images{RationalPolynomial::variable(2, 0)};
    for (std::size_t i = 0; i < lam.size(); ++i)
      images.push_back(lam[i] * RationalPolynomial::variable(2, 1));
    std::vector<RationalPolynomial> projected;
    for (const auto& g : gens) {
      RationalPolynomial q = g.compose(images);
      if (!q.is_zero()) projected.push_back(q);
    }
    require(!projected.empty(), ErrorCode::NotLinearizable, "projection of the ideal vanishes");

    // Frobenius on Q[x1, x] has eigenvalues alpha_1^k and the aligned alpha.
    std::vector<PadicScalar> two_alphas{phi.alpha(0).pow(al.power), al.alpha};
    std::optional<std::vector<mpq_class>> two_exact;
    auto a1 = phi.exact_alpha(0);
    std::optional<mpq_class> common;
    if (phi_rest.exact_base_alphas()) {
      mpq_class c = 1;
      for (int k = 0; k < al.power; ++k) c *= *phi_rest.exact_alpha(sub_support.front());
      common = c;
    }
    if (a1 && common) {
      mpq_class c1 = 1;
      for (int k = 0; k < al.power; ++k) c1 *= *a1;
      two_exact = std::vector<mpq_class>{c1, *common};
    }
    FrobeniusAction phi2 = two_exact ? FrobeniusAction(two_alphas, phi.weight(), 1, two_exact)
                                     : FrobeniusAction(two_alphas, phi.weight(), 1);
    auto image = IdealPresentation::from_polynomials(ctx_, RingFlavor::An, Coords::X, projected);
    Direction base = two_variables(image, phi2);
    require(base.exact.has_value(), ErrorCode::ExactnessRequired, "base direction is not exact");
    const mpq_class mu1 = (*base.exact)[0], mu = (*base.exact)[1];
    std::vector<mpq_class> out{mu1};
    for (const auto& l : lam) out.push_back(mu * l);
    out = normalize_lambdas(out);
    return {to_padic(ctx_, out), out};
  }

  Direction higher_dimension(const std::vector<RationalPolynomial>& gens, const FrobeniusAction& phi, int r) {
    const std::size_t n = phi.nvars();
    RationalPolynomial x1 = RationalPolynomial::variable(n, 0);
    std::vector<std::size_t> rest;
    for (std::size_t i = 1; i < n; ++i) rest.push_back(i);
    std::vector<std::size_t> drop(n);
    for (std::size_t i = 0; i < n; ++i) drop[i] = i == 0 ? n : i - 1;
    auto restrict_to_hyperplane = [&](const std::vector<RationalPolynomial>& ps) {
      std::vector<RationalPolynomial> out;
      std::vector<RationalPolynomial> images{RationalPolynomial(n)};
      for (std::size_t i = 1; i < n; ++i) images.push_back(RationalPolynomial::variable(n, i));
      for (const auto& p : ps) {
        RationalPolynomial q = p.compose(images);
        if (!q.is_zero()) out.push_back(q.remap(drop, n - 1));
      }
      return out;
    };

    if (ideal_contains(gens, x1)) {
      // I contains x1: pass to A_{n-1} = A_n / (x1).
      Direction sub = exact(restrict_to_hyperplane(gens), restrict_frobenius(phi, rest));
      std::vector<mpq_class> out{0};
      for (const auto& l : *sub.exact) out.push_back(l);
      out = normalize_lambdas(out);
      return {to_padic(ctx_, out), out};
    }

    // A minimal prime I' of (I, x1), of dimension r - 1.
    std::vector<RationalPolynomial> cut = gens;
    cut.push_back(x1);
    std::optional<std::vector<RationalPolynomial>> component;
    if (linear_rank(cut, n) == static_cast<int>(n) - (r - 1)) {
      // Smooth at the origin: (I, x1) is itself prime in the local ring.
      component = cut;
    } else {
      std::vector<RationalPolynomial> hyper = restrict_to_hyperplane(gens);
      if (!hyper.empty()) {
        RationalPolynomial g = hyper.front();
        for (const auto& h : hyper) g = polynomial_gcd(g, h);
        bool principal = false;
        for (const auto& h : hyper) {
          auto q = exact_divide(h, g);
          if (q && q->coefficient(Monomial{}) != 0) principal = true;
        }
        if (principal && g.order() >= 1) {
          RationalPolynomial s = squarefree_part(g);
          if (s.order() == 1) {
            std::vector<std::size_t> lift(n - 1);
            for (std::size_t i = 0; i + 1 < n; ++i) lift[i] = i + 1;
            component = std::vector<RationalPolynomial>{x1, s.remap(lift, n)};
          }
        }
      }
    }
    if (!component && options_.component_oracle) {
      auto cut_ideal = IdealPresentation::from_polynomials(ctx_, RingFlavor::An, Coords::X, cut);
      if (auto supplied = options_.component_oracle(cut_ideal)) {
        require(supplied->is_exact(), ErrorCode::ExactnessRequired, "supplied component must be exact");
        component = supplied->exact_generators();
      }
    }
    require(component.has_value(), ErrorCode::ComponentOracleRequired,
            "cannot select a minimal prime over (I, x1) in the exact fragment");
    for (const auto& g : gens)
      require(ideal_contains(*component, g), ErrorCode::InvalidInput, "component does not contain the ideal");
    return exact(*component, phi);
  }

 public:
  std::vector<MultiSeries> prepared_;

 private:
  CoefficientContext ctx_;
  LinearizeOptions options_;
};

}  // namespace detail

// An evaluation map x_i -> lambda_i x whose kernel contains the prime
// phi-ideal I (which must differ from 0 and from m).
inline EvaluationMap linearize_phi_ideal(const IdealPresentation& I, const FrobeniusAction& phi,
                                         const LinearizeOptions& options = {}) {
  require(I.coords() == Coords::X, ErrorCode::CoordinateMismatch, "linearization works in log coordinates");
  require(I.nvars() == phi.nvars(), ErrorCode::InvalidInput, "Frobenius and ideal have different arity");
  require_same(I.context(), phi.context());
  detail::Linearizer lin(I.context(), options);
  detail::Direction d = lin.run(I, phi);
  EvaluationMap pi{normalize_lambdas(d.lambdas), 1, PadicScalar::one(I.context()),
                   d.exact ? std::optional(normalize_lambdas(*d.exact)) : std::nullopt};
  Alignment al = align_eigenvalues(phi, pi.support(), options.max_alignment_power);
  pi.aligned_power = al.power;
  pi.aligned_alpha = al.alpha;
  require(verify_evaluation(I, pi), ErrorCode::NotLinearizable, "the ideal is not in the kernel of the computed map");
  for (const auto& w : lin.prepared_) {
    if (w.nvars() != I.nvars()) continue;
    auto W = IdealPresentation(I.flavor(), {w});
    require(verify_evaluation(W, pi), ErrorCode::NotLinearizable, "a Weierstrass polynomial of I survives the map");
  }
  return pi;
}

}  // namespace padicprep
