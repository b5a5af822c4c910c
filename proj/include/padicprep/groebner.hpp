#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "padicprep/error.hpp"
#include "padicprep/monomial.hpp"
#include "padicprep/polynomial.hpp"

namespace padicprep {

// A monomial times a basis vector e_comp of a free module.
struct ModuleKey {
  std::uint32_t comp = 0;
  Monomial mono;
  friend bool operator==(const ModuleKey&, const ModuleKey&) = default;
};

class TermOrder {
 public:
  enum class Kind { Grevlex, Lex, Elimination };

  static TermOrder grevlex(std::size_t nvars) { return TermOrder(Kind::Grevlex, nvars, 0); }
  static TermOrder lex(std::size_t nvars) { return TermOrder(Kind::Lex, nvars, 0); }
  // Product order eliminating the first `block` variables: grevlex on the
  // block, ties broken by grevlex on the remaining variables.
  static TermOrder elimination(std::size_t nvars, std::size_t block) {
    return TermOrder(Kind::Elimination, nvars, block);
  }

  // Module comparison: position first (e_0 > e_1 > ...) when true, else
  // monomial first.
  TermOrder with_position_first(bool pot) const {
    TermOrder o = *this;
    o.pot_ = pot;
    return o;
  }

  Kind kind() const { return kind_; }
  std::size_t nvars() const { return nvars_; }
  std::size_t block() const { return block_; }

  int compare(Monomial a, Monomial b) const {
    switch (kind_) {
      case Kind::Lex:
        for (std::size_t i = 0; i < nvars_; ++i)
          if (a[i] != b[i]) return a[i] > b[i] ? 1 : -1;
        return 0;
      case Kind::Grevlex:
        return grevlex_range(a, b, 0, nvars_);
      case Kind::Elimination: {
        int c = grevlex_range(a, b, 0, block_);
        return c != 0 ? c : grevlex_range(a, b, block_, nvars_);
      }
    }
    return 0;
  }

  int compare(const ModuleKey& a, const ModuleKey& b) const {
    if (pot_) {
      if (a.comp != b.comp) return a.comp < b.comp ? 1 : -1;
      return compare(a.mono, b.mono);
    }
    int c = compare(a.mono, b.mono);
    if (c != 0) return c;
    if (a.comp != b.comp) return a.comp < b.comp ? 1 : -1;
    return 0;
  }

 private:
  TermOrder(Kind kind, std::size_t nvars, std::size_t block) : kind_(kind), nvars_(nvars), block_(block) {}

  static int grevlex_range(Monomial a, Monomial b, std::size_t lo, std::size_t hi) {
    int da = 0, db = 0;
    for (std::size_t i = lo; i < hi; ++i) {
      da += a[i];
      db += b[i];
    }
    if (da != db) return da > db ? 1 : -1;
    for (std::size_t i = hi; i-- > lo;)
      if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
    return 0;
  }

  Kind kind_;
  std::size_t nvars_;
  std::size_t block_;
  bool pot_ = true;
};

struct ModuleTerm {
  ModuleKey key;
  mpq_class coeff;
};

// Terms sorted in strictly descending order with nonzero coefficients.
using ModuleVector = std::vector<ModuleTerm>;

namespace gb {

inline ModuleVector normalize(std::vector<ModuleTerm> terms, const TermOrder& order) {
  std::sort(terms.begin(), terms.end(),
            [&](const ModuleTerm& a, const ModuleTerm& b) { return order.compare(a.key, b.key) > 0; });
  ModuleVector out;
  for (auto& t : terms) {
    if (!out.empty() && out.back().key == t.key) {
      out.back().coeff += t.coeff;
      if (out.back().coeff == 0) out.pop_back();
    } else if (t.coeff != 0) {
      out.push_back(std::move(t));
    }
  }
  return out;
}

inline ModuleVector from_polynomial(const RationalPolynomial& p, const TermOrder& order, std::uint32_t comp = 0) {
  std::vector<ModuleTerm> terms;
  for (const auto& [m, c] : p.terms()) terms.push_back({{comp, m}, c});
  return normalize(std::move(terms), order);
}

inline RationalPolynomial component(const ModuleVector& v, std::uint32_t comp, std::size_t nvars) {
  RationalPolynomial p(nvars);
  for (const auto& t : v)
    if (t.key.comp == comp) p.add_term(t.key.mono, t.coeff);
  return p;
}

// p + c * m * g, merging two descending lists.
inline ModuleVector add_scaled(const ModuleVector& p, const mpq_class& c, Monomial m, const ModuleVector& g,
                               const TermOrder& order) {
  ModuleVector out;
  out.reserve(p.size() + g.size());
  std::size_t i = 0, j = 0;
  while (i < p.size() || j < g.size()) {
    if (j == g.size()) {
      out.push_back(p[i++]);
      continue;
    }
    ModuleKey gk{g[j].key.comp, g[j].key.mono * m};
    if (i == p.size()) {
      out.push_back({gk, c * g[j].coeff});
      ++j;
      continue;
    }
    int cmp = order.compare(p[i].key, gk);
    if (cmp > 0) {
      out.push_back(p[i++]);
    } else if (cmp < 0) {
      out.push_back({gk, c * g[j].coeff});
      ++j;
    } else {
      mpq_class s = p[i].coeff + c * g[j].coeff;
      if (s != 0) out.push_back({gk, s});
      ++i;
      ++j;
    }
  }
  return out;
}

inline void make_monic(ModuleVector& v) {
  if (v.empty() || v.front().coeff == 1) return;
  mpq_class inv = 1 / v.front().coeff;
  for (auto& t : v) t.coeff *= inv;
}

}  // namespace gb

// Reduced Groebner basis of a submodule of a free module (ideals are the
// one-component case).
class GroebnerBasis {
 public:
  GroebnerBasis(TermOrder order, std::vector<ModuleVector> elements)
      : order_(std::move(order)), elements_(std::move(elements)) {}

  const TermOrder& order() const { return order_; }
  const std::vector<ModuleVector>& elements() const { return elements_; }

  // Full reduction of v modulo the basis.
  ModuleVector normal_form(ModuleVector v) const { return reduce(std::move(v), elements_, order_); }

  bool contains(const ModuleVector& v) const { return normal_form(v).empty(); }

  bool is_unit_ideal() const {
    for (const auto& g : elements_)
      if (g.front().key.mono.is_one()) return true;
    return false;
  }

  static ModuleVector reduce(ModuleVector v, const std::vector<ModuleVector>& basis, const TermOrder& order) {
    std::size_t pos = 0;
    while (pos < v.size()) {
      const ModuleTerm& t = v[pos];
      const ModuleVector* reducer = nullptr;
      for (const auto& g : basis) {
        const ModuleKey& lk = g.front().key;
        if (lk.comp == t.key.comp && lk.mono.divides(t.key.mono)) {
          reducer = &g;
          break;
        }
      }
      if (!reducer) {
        ++pos;
        continue;
      }
      const ModuleTerm& lead = reducer->front();
      mpq_class c = -t.coeff / lead.coeff;
      Monomial m = lead.key.mono.quotient_of(t.key.mono);
      // Terms before pos are untouched because the scaled reducer is
      // entirely below the current term.
      ModuleVector head(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(pos));
      ModuleVector tail(v.begin() + static_cast<std::ptrdiff_t>(pos), v.end());
      tail = gb::add_scaled(tail, c, m, *reducer, order);
      head.insert(head.end(), tail.begin(), tail.end());
      v = std::move(head);
    }
    return v;
  }

 private:
  TermOrder order_;
  std::vector<ModuleVector> elements_;
};

// Buchberger's algorithm with the product and chain criteria.
inline GroebnerBasis groebner_basis(const std::vector<ModuleVector>& generators, const TermOrder& order) {
  std::vector<ModuleVector> basis;
  bool single_component = true;
  for (const auto& g : generators)
    for (const auto& t : g)
      if (t.key.comp != 0) single_component = false;

  struct Pair {
    std::size_t i, j;
    Monomial lcm;
  };
  std::vector<Pair> pairs;

  auto add_element = [&](ModuleVector h) {
    gb::make_monic(h);
    const std::size_t k = basis.size();
    const ModuleKey hk = h.front().key;
    // Chain criterion: drop (i, j) when LT(h) divides their lcm strictly.
    std::vector<Pair> kept;
    for (const auto& p : pairs) {
      const ModuleKey& ik = basis[p.i].front().key;
      if (ik.comp == hk.comp && hk.mono.divides(p.lcm) && p.lcm != ik.mono.lcm(hk.mono) &&
          p.lcm != basis[p.j].front().key.mono.lcm(hk.mono))
        continue;
      kept.push_back(p);
    }
    pairs = std::move(kept);
    for (std::size_t i = 0; i < k; ++i) {
      const ModuleKey& ik = basis[i].front().key;
      if (ik.comp != hk.comp) continue;
      if (single_component && ik.mono.coprime(hk.mono)) continue;
      pairs.push_back({i, k, ik.mono.lcm(hk.mono)});
    }
    basis.push_back(std::move(h));
  };

  for (const auto& g : generators) {
    ModuleVector r = GroebnerBasis::reduce(gb::normalize(g, order), basis, order);
    if (!r.empty()) add_element(std::move(r));
  }

  while (!pairs.empty()) {
    auto best = std::min_element(pairs.begin(), pairs.end(), [&](const Pair& a, const Pair& b) {
      if (a.lcm.degree() != b.lcm.degree()) return a.lcm.degree() < b.lcm.degree();
      return order.compare(a.lcm, b.lcm) < 0;
    });
    Pair p = *best;
    pairs.erase(best);
    const ModuleVector& f = basis[p.i];
    const ModuleVector& g = basis[p.j];
    ModuleVector s = gb::add_scaled({}, 1 / f.front().coeff, f.front().key.mono.quotient_of(p.lcm), f, order);
    s = gb::add_scaled(s, -1 / g.front().coeff, g.front().key.mono.quotient_of(p.lcm), g, order);
    ModuleVector r = GroebnerBasis::reduce(std::move(s), basis, order);
    if (!r.empty()) add_element(std::move(r));
  }

  // Minimalize, then interreduce.
  std::vector<ModuleVector> minimal;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const ModuleKey& ik = basis[i].front().key;
    bool redundant = false;
    for (std::size_t j = 0; j < basis.size() && !redundant; ++j) {
      if (i == j) continue;
      const ModuleKey& jk = basis[j].front().key;
      if (jk.comp != ik.comp || !jk.mono.divides(ik.mono)) continue;
      // Equal leading terms: keep the earlier one.
      if (jk.mono == ik.mono && j > i) continue;
      redundant = true;
    }
    if (!redundant) minimal.push_back(basis[i]);
  }
  std::vector<ModuleVector> reduced;
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    std::vector<ModuleVector> others;
    for (std::size_t j = 0; j < minimal.size(); ++j)
      if (j != i) others.push_back(minimal[j]);
    ModuleVector head{minimal[i].front()};
    ModuleVector tail(minimal[i].begin() + 1, minimal[i].end());
    tail = GroebnerBasis::reduce(std::move(tail), others, order);
    head.insert(head.end(), tail.begin(), tail.end());
    gb::make_monic(head);
    reduced.push_back(std::move(head));
  }
  std::sort(reduced.begin(), reduced.end(), [&](const ModuleVector& a, const ModuleVector& b) {
    return order.compare(a.front().key, b.front().key) < 0;
  });
  return GroebnerBasis(order, std::move(reduced));
}

// ---- Polynomial ideals -------------------------------------------------

inline GroebnerBasis ideal_basis(const std::vector<RationalPolynomial>& gens, const TermOrder& order) {
  std::vector<ModuleVector> vs;
  for (const auto& g : gens)
    if (!g.is_zero()) vs.push_back(gb::from_polynomial(g, order));
  return groebner_basis(vs, order);
}

inline std::vector<RationalPolynomial> basis_polynomials(const GroebnerBasis& gbasis, std::size_t nvars) {
  std::vector<RationalPolynomial> out;
  for (const auto& v : gbasis.elements()) out.push_back(gb::component(v, 0, nvars));
  return out;
}

inline bool ideal_contains(const std::vector<RationalPolynomial>& gens, const RationalPolynomial& f) {
  if (f.is_zero()) return true;
  auto order = TermOrder::grevlex(f.nvars());
  return ideal_basis(gens, order).contains(gb::from_polynomial(f, order));
}

// Generators of I intersected with Q[x_i : i != var], expressed in the
// remaining n - 1 variables (order preserved).
inline std::vector<RationalPolynomial> eliminate_variable(const std::vector<RationalPolynomial>& gens, std::size_t var) {
  require(!gens.empty(), ErrorCode::InvalidInput, "elimination needs at least one generator");
  const std::size_t n = gens.front().nvars();
  require(var < n && n >= 2, ErrorCode::InvalidInput, "elimination variable out of range");
  // Move `var` to slot 0 and use the block order eliminating slot 0.
  std::vector<std::size_t> to_front(n);
  for (std::size_t i = 0; i < n; ++i) to_front[i] = i == var ? 0 : (i < var ? i + 1 : i);
  std::vector<RationalPolynomial> moved;
  for (const auto& g : gens) moved.push_back(g.remap(to_front, n));
  auto order = TermOrder::elimination(n, 1);
  GroebnerBasis basis = ideal_basis(moved, order);
  std::vector<std::size_t> drop(n);
  for (std::size_t i = 0; i < n; ++i) drop[i] = i == 0 ? n : i - 1;
  std::vector<RationalPolynomial> out;
  for (const auto& p : basis_polynomials(basis, n))
    if (!p.involves(0)) out.push_back(p.remap(drop, n - 1));
  return out;
}

// Krull dimension of Q[x]/I (-1 for the unit ideal), from the leading
// monomials of a grevlex basis: the largest set of variables spanning no
// leading monomial.
inline int ideal_dimension(const std::vector<RationalPolynomial>& gens, std::size_t nvars) {
  auto order = TermOrder::grevlex(nvars);
  GroebnerBasis basis = ideal_basis(gens, order);
  if (basis.is_unit_ideal()) return -1;
  std::vector<Monomial> leads;
  for (const auto& v : basis.elements()) leads.push_back(v.front().key.mono);
  int best = 0;
  for (std::uint32_t mask = 0; mask < (1u << nvars); ++mask) {
    int size = __builtin_popcount(mask);
    if (size <= best) continue;
    bool independent = true;
    for (const auto& m : leads) {
      bool inside = true;
      for (std::size_t i = 0; i < nvars; ++i)
        if (m[i] > 0 && !(mask & (1u << i))) inside = false;
      if (inside) {
        independent = false;
        break;
      }
    }
    if (independent) best = size;
  }
  return best;
}

// a / b when b divides a exactly; nullopt otherwise.
inline std::optional<RationalPolynomial> exact_divide(const RationalPolynomial& a, const RationalPolynomial& b) {
  require(!b.is_zero(), ErrorCode::DivisionByZero, "polynomial division by zero");
  const std::size_t n = a.nvars();
  auto order = TermOrder::grevlex(n);
  ModuleVector rem = gb::from_polynomial(a, order);
  ModuleVector div = gb::from_polynomial(b, order);
  RationalPolynomial q(n);
  while (!rem.empty()) {
    const ModuleTerm& lead = rem.front();
    if (!div.front().key.mono.divides(lead.key.mono)) return std::nullopt;
    Monomial m = div.front().key.mono.quotient_of(lead.key.mono);
    mpq_class c = lead.coeff / div.front().coeff;
    q.add_term(m, c);
    rem = gb::add_scaled(rem, -c, m, div, order);
  }
  return q;
}

// Normalizes so the grevlex-leading coefficient is 1.
inline RationalPolynomial make_monic(const RationalPolynomial& p) {
  if (p.is_zero()) return p;
  auto v = gb::from_polynomial(p, TermOrder::grevlex(p.nvars()));
  return mpq_class(1 / v.front().coeff) * p;
}

// gcd(f, g) = f*g / lcm(f, g), with lcm(f, g) the generator of (f) ∩ (g),
// computed by eliminating s from (s*f, (1 - s)*g).
inline RationalPolynomial polynomial_gcd(const RationalPolynomial& f, const RationalPolynomial& g) {
  if (f.is_zero()) return make_monic(g);
  if (g.is_zero()) return make_monic(f);
  const std::size_t n = f.nvars();
  require(n + 1 <= Monomial::kMaxVars, ErrorCode::InvalidInput, "too many variables for gcd");
  std::vector<std::size_t> shift(n);
  for (std::size_t i = 0; i < n; ++i) shift[i] = i + 1;
  RationalPolynomial fs = f.remap(shift, n + 1), gs = g.remap(shift, n + 1);
  RationalPolynomial s = RationalPolynomial::variable(n + 1, 0);
  RationalPolynomial one = RationalPolynomial::constant(n + 1, 1);
  GroebnerBasis basis = ideal_basis({s * fs, (one - s) * gs}, TermOrder::elimination(n + 1, 1));
  std::vector<std::size_t> drop(n + 1);
  for (std::size_t i = 0; i <= n; ++i) drop[i] = i == 0 ? n + 1 : i - 1;
  std::optional<RationalPolynomial> lcm;
  for (const auto& p : basis_polynomials(basis, n + 1))
    if (!p.involves(0)) {
      lcm = p.remap(drop, n);
      break;
    }
  require(lcm.has_value(), ErrorCode::InvalidInput, "intersection of principal ideals is not principal");
  auto q = exact_divide(f * g, *lcm);
  require(q.has_value(), ErrorCode::InvalidInput, "lcm does not divide the product");
  return make_monic(*q);
}

inline RationalPolynomial derivative(const RationalPolynomial& p, std::size_t var) {
  RationalPolynomial out(p.nvars());
  for (const auto& [m, c] : p.terms())
    if (m[var] > 0) out.add_term(m.with_exponent(var, m[var] - 1), c * m[var]);
  return out;
}

// f / gcd(f, df/dx_1, ..., df/dx_n): the product of the distinct irreducible
// factors of f (characteristic zero).
inline RationalPolynomial squarefree_part(const RationalPolynomial& f) {
  RationalPolynomial g = f;
  for (std::size_t i = 0; i < f.nvars(); ++i) g = polynomial_gcd(g, derivative(f, i));
  auto q = exact_divide(f, g);
  require(q.has_value(), ErrorCode::InvalidInput, "gcd does not divide f");
  return make_monic(*q);
}

}  // namespace padicprep
