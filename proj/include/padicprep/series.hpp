#pragma once

#include <algorithm>
#include <climits>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "padicprep/coeff.hpp"
#include "padicprep/monomial.hpp"
#include "padicprep/polynomial.hpp"

namespace padicprep {

// Which local parameters the variables of a series stand for: the group-ring
// parameters t_i or the logarithmic parameters x_i = log(1 + t_i).
enum class Coords { T, X };

constexpr std::string_view coords_name(Coords c) { return c == Coords::T ? "t" : "x"; }

// Power series truncated at total degree D with p-adic coefficients.
class MultiSeries {
 public:
  using TermMap = std::map<Monomial, PadicScalar>;
  static constexpr int kZeroOrder = INT_MAX;

  MultiSeries(const CoefficientContext& ctx, std::size_t nvars, Coords coords)
      : ctx_(ctx), nvars_(nvars), coords_(coords) {
    require(nvars >= 1 && nvars <= Monomial::kMaxVars, ErrorCode::InvalidInput, "series needs 1 to 7 variables");
  }

  static MultiSeries constant(const CoefficientContext& ctx, std::size_t nvars, Coords coords, const PadicScalar& c) {
    MultiSeries s(ctx, nvars, coords);
    s.add_term(Monomial{}, c);
    return s;
  }

  static MultiSeries one(const CoefficientContext& ctx, std::size_t nvars, Coords coords) {
    return constant(ctx, nvars, coords, PadicScalar::one(ctx));
  }

  static MultiSeries variable(const CoefficientContext& ctx, std::size_t nvars, Coords coords, std::size_t var) {
    require(var < nvars, ErrorCode::InvalidInput, "variable index out of range");
    MultiSeries s(ctx, nvars, coords);
    s.add_term(Monomial::variable(var), PadicScalar::one(ctx));
    return s;
  }

  static MultiSeries from_polynomial(const CoefficientContext& ctx, const RationalPolynomial& p, Coords coords) {
    MultiSeries s(ctx, p.nvars(), coords);
    for (const auto& [m, c] : p.terms()) s.add_term(m, PadicScalar::from_rational(ctx, c));
    return s;
  }

  // Text in the polynomial grammar, e.g. "t1 - 3*t2 - 3*t2^2 - t2^3".
  static MultiSeries parse(const CoefficientContext& ctx, std::size_t nvars, Coords coords, const std::string& text) {
    return from_polynomial(ctx, RationalPolynomial::parse(text, nvars), coords);
  }

  const CoefficientContext& context() const { return ctx_; }
  std::size_t nvars() const { return nvars_; }
  Coords coords() const { return coords_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  PadicScalar coefficient(Monomial m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? PadicScalar::zero(ctx_) : it->second;
  }

  PadicScalar constant_term() const { return coefficient(Monomial{}); }

  // Accumulates c into the coefficient of m; terms beyond the cutoff vanish.
  void add_term(Monomial m, const PadicScalar& c) {
    if (c.is_zero() || m.degree() > ctx_.degree()) return;
    require_same(ctx_, c.context());
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_.emplace(m, c);
      return;
    }
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }

  void set_term(Monomial m, const PadicScalar& c) {
    terms_.erase(m);
    add_term(m, c);
  }

  // Lowest total degree of a stored term; kZeroOrder for the zero series.
  int order() const { return terms_.empty() ? kZeroOrder : terms_.begin()->first.degree(); }

  int max_degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first.degree(); }

  bool is_unit() const { return !constant_term().is_zero(); }

  bool involves(std::size_t var) const {
    for (const auto& [m, c] : terms_)
      if (m[var] > 0) return true;
    return false;
  }

  int max_loss() const {
    int loss = 0;
    for (const auto& [m, c] : terms_) loss = std::max(loss, c.loss());
    return loss;
  }

  MultiSeries homogeneous_part(int k) const {
    MultiSeries out(ctx_, nvars_, coords_);
    for (const auto& [m, c] : terms_)
      if (m.degree() == k) out.terms_.emplace(m, c);
    return out;
  }

  MultiSeries truncated(int d) const {
    MultiSeries out(ctx_, nvars_, coords_);
    for (const auto& [m, c] : terms_)
      if (m.degree() <= d) out.terms_.emplace(m, c);
    return out;
  }

  // The same coefficients read in the other coordinate system.
  MultiSeries relabeled(Coords coords) const {
    MultiSeries out = *this;
    out.coords_ = coords;
    return out;
  }

  // Renumbers variables: variable i becomes map[i] in a ring of `target` variables.
  MultiSeries remap(const std::vector<std::size_t>& map, std::size_t target) const {
    require(map.size() == nvars_, ErrorCode::InvalidInput, "variable map has wrong length");
    MultiSeries out(ctx_, target, coords_);
    for (const auto& [m, c] : terms_) {
      std::vector<int> e(target, 0);
      for (std::size_t i = 0; i < nvars_; ++i)
        if (m[i] > 0) {
          require(map[i] < target, ErrorCode::InvalidInput, "variable dropped while still in use");
          e[map[i]] += m[i];
        }
      out.add_term(Monomial::from_exponents(std::span<const int>(e)), c);
    }
    return out;
  }

  MultiSeries operator-() const {
    MultiSeries out = *this;
    for (auto& [m, c] : out.terms_) c = -c;
    return out;
  }

  MultiSeries& operator+=(const MultiSeries& o) {
    check(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }

  MultiSeries& operator-=(const MultiSeries& o) {
    check(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }

  friend MultiSeries operator+(MultiSeries a, const MultiSeries& b) { return a += b; }
  friend MultiSeries operator-(MultiSeries a, const MultiSeries& b) { return a -= b; }

  friend MultiSeries operator*(const PadicScalar& s, const MultiSeries& f) {
    require_same(s.context(), f.ctx_);
    MultiSeries out(f.ctx_, f.nvars_, f.coords_);
    if (s.is_zero()) return out;
    for (const auto& [m, c] : f.terms_) out.add_term(m, s * c);
    return out;
  }

  // Product truncated at total degree `cutoff` (never above the context's D).
  static MultiSeries multiply(const MultiSeries& a, const MultiSeries& b, int cutoff) {
    a.check(b);
    cutoff = std::min(cutoff, a.ctx_.degree());
    MultiSeries out(a.ctx_, a.nvars_, a.coords_);
    for (const auto& [ma, ca] : a.terms_) {
      if (ma.degree() > cutoff) break;
      for (const auto& [mb, cb] : b.terms_) {
        if (ma.degree() + mb.degree() > cutoff) break;
        out.add_term(ma * mb, ca * cb);
      }
    }
    return out;
  }

  friend MultiSeries operator*(const MultiSeries& a, const MultiSeries& b) {
    return multiply(a, b, a.ctx_.degree());
  }

  MultiSeries pow(int e) const {
    require(e >= 0, ErrorCode::InvalidInput, "negative series power");
    MultiSeries result = one(ctx_, nvars_, coords_);
    for (int i = 0; i < e; ++i) result = result * *this;
    return result;
  }

  // Equal to the attainable precision: the difference has no surviving terms.
  // Every coefficient is zero modulo l^N.
  bool vanishes() const {
    for (const auto& [m, c] : terms_)
      if (!c.vanishes()) return false;
    return true;
  }

  friend bool operator==(const MultiSeries& a, const MultiSeries& b) { return (a - b).vanishes(); }

  // Same terms, digits and loss bookkeeping.
  bool identical(const MultiSeries& o) const {
    if (!(ctx_ == o.ctx_) || nvars_ != o.nvars_ || coords_ != o.coords_ || terms_.size() != o.terms_.size())
      return false;
    auto it = o.terms_.begin();
    for (const auto& [m, c] : terms_) {
      if (m != it->first || !c.identical(it->second)) return false;
      ++it;
    }
    return true;
  }

  // Exact rational polynomial whose image is this series, when every
  // coefficient admits a rational reconstruction.
  std::optional<RationalPolynomial> to_rational_polynomial() const {
    RationalPolynomial p(nvars_);
    for (const auto& [m, c] : terms_) {
      auto q = c.to_rational();
      if (!q) return std::nullopt;
      p.add_term(m, *q);
    }
    return p;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : terms_) {
      if (!out.empty()) out += " + ";
      auto q = c.to_rational();
      out += "(" + (q ? q->get_str() : c.to_string()) + ")";
      for (std::size_t i = 0; i < nvars_; ++i)
        if (m[i] > 0) out += "*" + std::string(coords_name(coords_)) + std::to_string(i + 1) + "^" + std::to_string(m[i]);
    }
    return out;
  }

  void check(const MultiSeries& o) const {
    require_same(ctx_, o.ctx_);
    require(coords_ == o.coords_, ErrorCode::CoordinateMismatch, "series in different coordinate systems");
    require(nvars_ == o.nvars_, ErrorCode::InvalidInput, "series in different numbers of variables");
  }

 private:
  CoefficientContext ctx_;
  std::size_t nvars_;
  Coords coords_;
  TermMap terms_;
};

// Multiplicative inverse of a series with nonzero constant term, solved one
// homogeneous degree at a time.
inline MultiSeries invert(const MultiSeries& f) {
  PadicScalar c0 = f.constant_term();
  require(!c0.is_zero(), ErrorCode::NotAUnit, "series has zero constant term");
  const int D = f.context().degree();
  PadicScalar inv0 = c0.inv();
  std::vector<MultiSeries> fparts, gparts;
  for (int k = 0; k <= D; ++k) fparts.push_back(f.homogeneous_part(k));
  gparts.push_back(MultiSeries::constant(f.context(), f.nvars(), f.coords(), inv0));
  MultiSeries result = gparts[0];
  for (int d = 1; d <= D; ++d) {
    MultiSeries acc(f.context(), f.nvars(), f.coords());
    for (int k = 1; k <= d; ++k) {
      if (fparts[k].is_zero() || gparts[d - k].is_zero()) continue;
      acc += MultiSeries::multiply(fparts[k], gparts[d - k], d);
    }
    gparts.push_back(-(inv0 * acc));
    result += gparts.back();
  }
  return result;
}

namespace detail {

// Index of the single variable g involves, if it involves exactly one.
inline std::optional<std::size_t> sole_variable(const MultiSeries& g) {
  std::optional<std::size_t> var;
  for (const auto& [m, c] : g.terms()) {
    for (std::size_t i = 0; i < g.nvars(); ++i) {
      if (m[i] == 0) continue;
      if (var && *var != i) return std::nullopt;
      var = i;
    }
  }
  return var;
}

}  // namespace detail

// f(g_1, ..., g_n), truncated. The g_i share a ring that may differ from f's.
inline MultiSeries substitute(const MultiSeries& f, const std::vector<MultiSeries>& gs) {
  require(gs.size() == f.nvars(), ErrorCode::InvalidInput, "substitution needs one series per variable");
  const MultiSeries& g0 = gs.front();
  for (const auto& g : gs) {
    g0.check(g);
    require_same(f.context(), g.context());
  }
  for (std::size_t i = 0; i < gs.size(); ++i)
    require(!f.involves(i) || gs[i].constant_term().is_zero(), ErrorCode::SubstitutionDiverges,
            "substituted series has a nonzero constant term");

  const auto& ctx = f.context();
  const int D = ctx.degree();
  const std::size_t m = g0.nvars();

  // Fast path: g_i involves only variable i, so products factor coordinatewise.
  bool diagonal = m == f.nvars();
  for (std::size_t i = 0; diagonal && i < gs.size(); ++i) {
    auto v = detail::sole_variable(gs[i]);
    if (f.involves(i) && !gs[i].is_zero() && (!v || *v != i)) diagonal = false;
  }
  if (diagonal) {
    MultiSeries current = f.relabeled(g0.coords());
    for (std::size_t i = 0; i < gs.size(); ++i) {
      if (!current.involves(i)) continue;
      // powers[e][j] = coefficient of x_i^j in g_i^e.
      std::vector<std::vector<PadicScalar>> powers;
      MultiSeries p = MultiSeries::one(ctx, m, g0.coords());
      for (int e = 0; e <= D; ++e) {
        std::vector<PadicScalar> row;
        for (int j = 0; j <= D; ++j) row.push_back(p.coefficient(Monomial::variable(i, j)));
        powers.push_back(std::move(row));
        p = p * gs[i];
      }
      MultiSeries next(ctx, m, g0.coords());
      for (const auto& [mono, c] : current.terms()) {
        int e = mono[i];
        if (e == 0) {
          next.add_term(mono, c);
          continue;
        }
        int rest = mono.degree() - e;
        for (int j = e; j + rest <= D; ++j) {
          const PadicScalar& pc = powers[e][j];
          if (!pc.is_zero()) next.add_term(mono.with_exponent(i, j), c * pc);
        }
      }
      current = std::move(next);
    }
    return current;
  }

  // General path: memoized monomial products built one variable at a time.
  std::map<Monomial, MultiSeries> cache;
  cache.emplace(Monomial{}, MultiSeries::one(ctx, m, g0.coords()));
  auto product = [&](auto&& self, Monomial mono) -> const MultiSeries& {
    auto it = cache.find(mono);
    if (it != cache.end()) return it->second;
    std::size_t i = 0;
    while (mono[i] == 0) ++i;
    Monomial lower = Monomial::variable(i).quotient_of(mono);
    MultiSeries value = self(self, lower) * gs[i];
    return cache.emplace(mono, std::move(value)).first->second;
  };
  MultiSeries out(ctx, m, g0.coords());
  for (const auto& [mono, c] : f.terms()) {
    out += c * product(product, mono);
  }
  return out;
}

// exp(x_var) - 1 as a truncated series.
inline MultiSeries exp_minus_one(const CoefficientContext& ctx, std::size_t nvars, Coords coords, std::size_t var) {
  MultiSeries s(ctx, nvars, coords);
  mpq_class coeff = 1;
  for (int k = 1; k <= ctx.degree(); ++k) {
    coeff /= k;
    s.add_term(Monomial::variable(var, k), PadicScalar::from_rational(ctx, coeff));
  }
  return s;
}

// log(1 + t_var) as a truncated series.
inline MultiSeries log_one_plus(const CoefficientContext& ctx, std::size_t nvars, Coords coords, std::size_t var) {
  MultiSeries s(ctx, nvars, coords);
  for (int k = 1; k <= ctx.degree(); ++k)
    s.add_term(Monomial::variable(var, k), PadicScalar::from_rational(ctx, mpq_class(k % 2 == 1 ? 1 : -1, k)));
  return s;
}

// Rewrites f in the other coordinate system via t_i = exp(x_i) - 1, or
// equivalently x_i = log(1 + t_i).
inline MultiSeries change_coords(const MultiSeries& f, Coords target) {
  require(f.coords() != target, ErrorCode::CoordinateMismatch, "series is already in the target coordinates");
  std::vector<MultiSeries> gs;
  for (std::size_t i = 0; i < f.nvars(); ++i)
    gs.push_back(target == Coords::X ? exp_minus_one(f.context(), f.nvars(), Coords::X, i)
                                     : log_one_plus(f.context(), f.nvars(), Coords::T, i));
  return substitute(f, gs);
}

}  // namespace padicprep
