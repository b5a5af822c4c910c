#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "padicprep/series.hpp"

namespace padicprep {

// G = U*F + sum_i R_i * t1^i. Each R_i lives in the same ring as G but does
// not involve t1.
struct DivisionResult {
  MultiSeries quotient;
  std::vector<MultiSeries> remainders;
  int regular_order = 0;

  MultiSeries remainder_sum() const {
    MultiSeries out(quotient.context(), quotient.nvars(), quotient.coords());
    for (std::size_t i = 0; i < remainders.size(); ++i)
      for (const auto& [m, c] : remainders[i].terms()) out.add_term(m.with_exponent(0, static_cast<int>(i)), c);
    return out;
  }
};

// F = W*U with W monic of degree `degree` in t1 and U a unit.
struct WeierstrassFactorization {
  MultiSeries distinguished;
  MultiSeries unit;
  int degree = 0;
};

// Blockwise removes the whole t1^a-divisible part per sweep; Termwise clears
// one term at a time in order of increasing degree in t2..tn. The two must
// return the same canonical pair.
enum class DivisionStrategy { Blockwise, Termwise };

namespace detail {

// Terms whose t1-exponent is below a.
inline MultiSeries low_part(const MultiSeries& f, int a) {
  MultiSeries out(f.context(), f.nvars(), f.coords());
  for (const auto& [m, c] : f.terms())
    if (m[0] < a) out.add_term(m, c);
  return out;
}

// (f - low_part(f, a)) / t1^a.
inline MultiSeries high_part(const MultiSeries& f, int a) {
  MultiSeries out(f.context(), f.nvars(), f.coords());
  for (const auto& [m, c] : f.terms())
    if (m[0] >= a) out.add_term(m.with_exponent(0, m[0] - a), c);
  return out;
}

// c * mono * f, truncated at `cutoff`.
inline MultiSeries scaled_shift(const MultiSeries& f, Monomial mono, const PadicScalar& c, int cutoff) {
  MultiSeries out(f.context(), f.nvars(), f.coords());
  for (const auto& [m, v] : f.terms()) {
    if (m.degree() + mono.degree() > cutoff) break;
    out.add_term(m * mono, c * v);
  }
  return out;
}

}  // namespace detail

// The t1-order of F(t1, 0, ..., 0).
inline int regularity_order(const MultiSeries& F) {
  for (const auto& [m, c] : F.terms())
    if (m.degree() == m[0]) return m[0];
  fail(ErrorCode::NotRegular, "F(t1, 0, ..., 0) vanishes to the truncation degree");
}

// Canonical Weierstrass division by a t1-regular F of order a: the quotient
// is returned with total degree at most D - a, which makes it unique in the
// truncated ring.
inline DivisionResult weierstrass_divide(const MultiSeries& G, const MultiSeries& F,
                                         DivisionStrategy strategy = DivisionStrategy::Blockwise) {
  G.check(F);
  const int a = regularity_order(F);
  const int D = F.context().degree();
  const auto& ctx = F.context();
  MultiSeries f_lo = detail::low_part(F, a);
  MultiSeries f_hi_inv = invert(detail::high_part(F, a));
  MultiSeries U(ctx, F.nvars(), F.coords());
  MultiSeries R(ctx, F.nvars(), F.coords());

  if (strategy == DivisionStrategy::Blockwise) {
    MultiSeries work = G;
    // Each sweep raises the order of `work` in t2..tn, since f_lo has no
    // pure-t1 terms.
    for (int sweep = 0; sweep <= D + 1 && !work.is_zero(); ++sweep) {
      R += detail::low_part(work, a);
      MultiSeries hi = detail::high_part(work, a);
      if (hi.is_zero()) {
        work = MultiSeries(ctx, F.nvars(), F.coords());
        break;
      }
      MultiSeries q = MultiSeries::multiply(hi, f_hi_inv, D - a);
      U += q;
      work = -MultiSeries::multiply(q, f_lo, D);
    }
    require(work.is_zero(), ErrorCode::TruncationTooSmall, "division sweeps did not terminate");
  } else {
    // quotient_piece[s] = trunc_{D-a-s}(F_hi^{-1}); correction[s] is that
    // piece times F_lo, truncated at D - s.
    std::vector<MultiSeries> quotient_piece, correction;
    for (int s = 0; s <= std::max(0, D - a); ++s) {
      quotient_piece.push_back(f_hi_inv.truncated(D - a - s));
      correction.push_back(MultiSeries::multiply(quotient_piece.back(), f_lo, D - s));
    }
    MultiSeries work = G;
    for (int level = 0; level <= D && !work.is_zero(); ++level) {
      std::vector<std::pair<Monomial, PadicScalar>> batch;
      for (auto it = work.terms().rbegin(); it != work.terms().rend(); ++it)
        if (it->first.degree_without(0) == level) batch.emplace_back(it->first, it->second);
      for (const auto& [m, c] : batch) work.set_term(m, PadicScalar::zero(ctx));
      for (const auto& [m, c] : batch) {
        if (m[0] < a) {
          R.add_term(m, c);
          continue;
        }
        Monomial shift = m.with_exponent(0, m[0] - a);
        int s = shift.degree();
        U += detail::scaled_shift(quotient_piece[s], shift, c, D - a);
        work -= detail::scaled_shift(correction[s], shift, c, D);
      }
    }
    require(work.is_zero(), ErrorCode::TruncationTooSmall, "termwise division did not terminate");
  }

  DivisionResult out{U, {}, a};
  for (int i = 0; i < a; ++i) {
    MultiSeries r(ctx, F.nvars(), F.coords());
    for (const auto& [m, c] : R.terms())
      if (m[0] == i) r.add_term(m.with_exponent(0, 0), c);
    out.remainders.push_back(std::move(r));
  }
  return out;
}

// F = W*U. Terms of U above degree D - ord(W) do not affect W*U, so U is
// returned truncated there; this makes the pair unique in the truncated ring.
inline WeierstrassFactorization weierstrass_prepare(const MultiSeries& F) {
  const int a = regularity_order(F);
  const auto& ctx = F.context();
  MultiSeries t1a(ctx, F.nvars(), F.coords());
  t1a.add_term(Monomial::variable(0, a), PadicScalar::one(ctx));
  DivisionResult div = weierstrass_divide(t1a, F);
  MultiSeries W = t1a - div.remainder_sum();
  MultiSeries U = invert(div.quotient).truncated(ctx.degree() - W.order());
  return {W, U, a};
}

// True when p = x1^a + sum_{i<a} c_i x1^i with every c_i vanishing at 0.
inline bool is_distinguished(const MultiSeries& p) {
  int a = -1;
  for (const auto& [m, c] : p.terms())
    if (m.degree() == m[0]) {
      a = m[0];
      break;
    }
  if (a < 0 || !(p.coefficient(Monomial::variable(0, a)) == PadicScalar::one(p.context()))) return false;
  for (const auto& [m, c] : p.terms()) {
    if (m[0] > a) return false;
    if (m[0] == a && m.degree() != a) return false;
  }
  return true;
}

// Writes g = sum_i f_i(p, x2, ..., xn) * x1^i by repeated division by p.
// The f_i are series in (y1, x2, ..., xn) with y1 occupying slot 0.
inline std::vector<MultiSeries> finite_decompose(const MultiSeries& g, const MultiSeries& p) {
  g.check(p);
  require(is_distinguished(p), ErrorCode::NotRegular, "p is not a distinguished polynomial in x1");
  const int a = regularity_order(p);
  const int D = p.context().degree();
  require(a >= 1, ErrorCode::NotRegular, "p must vanish at the origin");
  const auto& ctx = p.context();
  std::vector<MultiSeries> fs(static_cast<std::size_t>(a), MultiSeries(ctx, p.nvars(), p.coords()));
  MultiSeries current = g;
  // p^k has order >= k, so after D + 1 rounds the leftover quotient is
  // invisible at the truncation degree.
  for (int k = 0; k <= D && !current.is_zero(); ++k) {
    DivisionResult div = weierstrass_divide(current, p);
    for (int i = 0; i < a; ++i)
      for (const auto& [m, c] : div.remainders[static_cast<std::size_t>(i)].terms())
        fs[static_cast<std::size_t>(i)].add_term(m.with_exponent(0, k), c);
    current = div.quotient;
  }
  // Compose back as a consistency check of the truncation.
  std::vector<MultiSeries> args{p};
  for (std::size_t i = 1; i < p.nvars(); ++i) args.push_back(MultiSeries::variable(ctx, p.nvars(), p.coords(), i));
  MultiSeries recomposed(ctx, p.nvars(), p.coords());
  for (int i = 0; i < a; ++i)
    recomposed += detail::scaled_shift(substitute(fs[static_cast<std::size_t>(i)], args), Monomial::variable(0, i),
                                       PadicScalar::one(ctx), D);
  require(recomposed == g, ErrorCode::TruncationTooSmall, "decomposition does not reproduce g at this truncation");
  return fs;
}

// An invertible linear substitution x_i -> sum_j M[i][j] y_j with its inverse.
struct LinearChange {
  std::vector<std::vector<mpq_class>> matrix;
  std::vector<std::vector<mpq_class>> inverse;

  static LinearChange identity(std::size_t n) {
    LinearChange c;
    c.matrix.assign(n, std::vector<mpq_class>(n, 0));
    for (std::size_t i = 0; i < n; ++i) c.matrix[i][i] = 1;
    c.inverse = c.matrix;
    return c;
  }
};

namespace detail {

inline std::vector<std::vector<mpq_class>> invert_matrix(std::vector<std::vector<mpq_class>> a) {
  const std::size_t n = a.size();
  std::vector<std::vector<mpq_class>> inv(n, std::vector<mpq_class>(n, 0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    require(piv < n, ErrorCode::InvalidInput, "linear change is singular");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    mpq_class s = 1 / a[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] *= s;
      inv[col][j] *= s;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      mpq_class f = a[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

inline MultiSeries apply_matrix(const MultiSeries& f, const std::vector<std::vector<mpq_class>>& m) {
  const auto& ctx = f.context();
  std::vector<MultiSeries> gs;
  for (std::size_t i = 0; i < f.nvars(); ++i) {
    MultiSeries g(ctx, f.nvars(), f.coords());
    for (std::size_t j = 0; j < f.nvars(); ++j)
      g.add_term(Monomial::variable(j), PadicScalar::from_rational(ctx, m[i][j]));
    gs.push_back(std::move(g));
  }
  return substitute(f, gs);
}

}  // namespace detail

inline LinearChange make_linear_change(std::vector<std::vector<mpq_class>> matrix) {
  LinearChange c;
  c.inverse = detail::invert_matrix(matrix);
  c.matrix = std::move(matrix);
  return c;
}

// f(M y): the series expressed in the new variables.
inline MultiSeries apply_change(const MultiSeries& f, const LinearChange& c) { return detail::apply_matrix(f, c.matrix); }

// Undoes apply_change.
inline MultiSeries undo_change(const MultiSeries& f, const LinearChange& c) { return detail::apply_matrix(f, c.inverse); }

// Seeded random change x_i -> s_i * y_{perm(i)} with small nonzero integer
// scales prime to l.
inline LinearChange random_linear_change(const CoefficientContext& ctx, std::size_t nvars, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> perm(nvars);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::vector<mpq_class>> m(nvars, std::vector<mpq_class>(nvars, 0));
  std::uniform_int_distribution<int> dist(1, 9);
  for (std::size_t i = 0; i < nvars; ++i) {
    int s;
    do {
      s = dist(rng) * ((rng() & 1) ? 1 : -1);
    } while (s % static_cast<int>(ctx.prime()) == 0);
    m[i][perm[i]] = s;
  }
  return make_linear_change(std::move(m));
}

// A linear change after which the initial form of f contains y1^ord(f):
// first a transposition, then shears x_i -> y_i + s_i y1.
inline LinearChange regularizing_change(const MultiSeries& f) {
  require(!f.is_zero(), ErrorCode::NotRegular, "zero series has no regular direction");
  const std::size_t n = f.nvars();
  const int k = f.order();
  auto works = [&](const LinearChange& c) {
    MultiSeries h = apply_change(f.homogeneous_part(k), c);
    return !h.coefficient(Monomial::variable(0, k)).is_zero();
  };
  for (std::size_t j = 0; j < n; ++j) {
    auto m = LinearChange::identity(n).matrix;
    std::swap(m[0], m[j]);
    LinearChange c = make_linear_change(m);
    if (works(c)) return c;
  }
  for (int trial = 1; trial <= 64; ++trial) {
    auto m = LinearChange::identity(n).matrix;
    for (std::size_t i = 1; i < n; ++i) m[i][0] = (trial * static_cast<int>(i * i + 1)) % 17 + static_cast<int>(i);
    LinearChange c = make_linear_change(m);
    if (works(c)) return c;
  }
  fail(ErrorCode::NotRegular, "no regularizing linear change found");
}

// h / f in the power series ring when f divides h to the attainable
// precision; the quotient is valid up to total degree D - ord(f).
inline std::optional<MultiSeries> principal_quotient(const MultiSeries& h, const MultiSeries& f) {
  h.check(f);
  LinearChange c = regularizing_change(f);
  MultiSeries f2 = apply_change(f, c);
  MultiSeries h2 = apply_change(h, c);
  DivisionResult div = weierstrass_divide(h2, f2);
  for (const auto& r : div.remainders)
    if (!r.vanishes()) return std::nullopt;
  return undo_change(div.quotient, c).truncated(f.context().degree() - f.order());
}

}  // namespace padicprep
