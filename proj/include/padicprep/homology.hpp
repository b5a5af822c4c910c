#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "padicprep/error.hpp"
#include "padicprep/groebner.hpp"
#include "padicprep/polynomial.hpp"

namespace padicprep {

using PolyVector = std::vector<RationalPolynomial>;

// Matrix with polynomial entries over Q, acting on column vectors.
class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(std::size_t rows, std::size_t cols, std::size_t nvars)
      : rows_(rows), cols_(cols), nvars_(nvars), entries_(rows * cols, RationalPolynomial(nvars)) {}

  static PolyMatrix identity(std::size_t size, std::size_t nvars) {
    PolyMatrix m(size, size, nvars);
    for (std::size_t i = 0; i < size; ++i) m.at(i, i) = RationalPolynomial::constant(nvars, 1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nvars() const { return nvars_; }
  RationalPolynomial& at(std::size_t r, std::size_t c) { return entries_.at(r * cols_ + c); }
  const RationalPolynomial& at(std::size_t r, std::size_t c) const { return entries_.at(r * cols_ + c); }

  PolyVector column(std::size_t c) const {
    PolyVector v;
    for (std::size_t r = 0; r < rows_; ++r) v.push_back(at(r, c));
    return v;
  }

  bool is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const auto& p) { return p.is_zero(); });
  }

  friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
    require(a.cols_ == b.rows_, ErrorCode::InvalidInput, "matrix shapes do not compose");
    PolyMatrix out(a.rows_, b.cols_, a.nvars_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a.at(i, k).is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (!b.at(k, j).is_zero()) out.at(i, j) += a.at(i, k) * b.at(k, j);
      }
    return out;
  }

  friend PolyMatrix operator*(const mpq_class& s, PolyMatrix m) {
    for (auto& e : m.entries_) e = s * e;
    return m;
  }

  friend bool operator==(const PolyMatrix& a, const PolyMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

  // Constant parts, i.e. the matrix evaluated at the origin.
  std::vector<std::vector<mpq_class>> at_origin() const {
    std::vector<std::vector<mpq_class>> m(rows_, std::vector<mpq_class>(cols_));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m[i][j] = at(i, j).coefficient(Monomial{});
    return m;
  }

  PolyMatrix translate(const std::vector<mpq_class>& shift) const {
    PolyMatrix out = *this;
    for (auto& e : out.entries_) e = e.translate(shift);
    return out;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0, nvars_ = 0;
  std::vector<RationalPolynomial> entries_;
};

namespace detail {

inline int rational_rank(std::vector<std::vector<mpq_class>> m) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size(), cols = m.front().size();
  int rank = 0;
  for (std::size_t c = 0; c < cols; ++c) {
    std::size_t r = static_cast<std::size_t>(rank);
    std::size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv >= rows) continue;
    std::swap(m[piv], m[r]);
    for (std::size_t k = r + 1; k < rows; ++k) {
      if (m[k][c] == 0) continue;
      mpq_class f = m[k][c] / m[r][c];
      for (std::size_t j = c; j < cols; ++j) m[k][j] -= f * m[r][j];
    }
    ++rank;
  }
  return rank;
}

inline ModuleVector to_module(const PolyVector& v, const TermOrder& order, std::uint32_t offset = 0) {
  std::vector<ModuleTerm> terms;
  for (std::size_t c = 0; c < v.size(); ++c)
    for (const auto& [m, q] : v[c].terms()) terms.push_back({{static_cast<std::uint32_t>(offset + c), m}, q});
  return gb::normalize(std::move(terms), order);
}

inline PolyVector from_module(const ModuleVector& v, std::size_t rank, std::size_t nvars, std::uint32_t offset = 0) {
  PolyVector out(rank, RationalPolynomial(nvars));
  for (const auto& t : v) {
    if (t.key.comp < offset || t.key.comp >= offset + rank) continue;
    out[t.key.comp - offset].add_term(t.key.mono, t.coeff);
  }
  return out;
}

}  // namespace detail

// Generators of the syzygy module {c : sum_j c_j * columns[j] = 0} of vectors
// in R^rank, via a position-over-term basis of the rows (columns[j], e_j).
inline std::vector<PolyVector> syzygies(const std::vector<PolyVector>& columns, std::size_t rank, std::size_t nvars) {
  const std::size_t m = columns.size();
  std::vector<PolyVector> out;
  if (m == 0) return out;
  auto order = TermOrder::grevlex(nvars).with_position_first(true);
  std::vector<ModuleVector> rows;
  for (std::size_t j = 0; j < m; ++j) {
    PolyVector v = columns[j];
    v.resize(rank, RationalPolynomial(nvars));
    for (std::size_t k = 0; k < m; ++k)
      v.push_back(k == j ? RationalPolynomial::constant(nvars, 1) : RationalPolynomial(nvars));
    rows.push_back(detail::to_module(v, order));
  }
  GroebnerBasis basis = groebner_basis(rows, order);
  for (const auto& g : basis.elements())
    if (g.front().key.comp >= rank)
      out.push_back(detail::from_module(g, m, nvars, static_cast<std::uint32_t>(rank)));
  return out;
}

// Bounded complex of finite free modules over Q[x_1..x_n]; d^i maps degree i
// to degree i + 1.
class FreeComplex {
 public:
  FreeComplex(std::size_t nvars, int lo, std::vector<std::size_t> ranks, std::vector<PolyMatrix> diffs)
      : nvars_(nvars), lo_(lo), ranks_(std::move(ranks)), diffs_(std::move(diffs)) {
    require(!ranks_.empty(), ErrorCode::InvalidInput, "complex needs at least one degree");
    require(diffs_.size() + 1 == ranks_.size(), ErrorCode::InvalidInput, "one differential per adjacent pair of degrees");
    for (std::size_t k = 0; k < diffs_.size(); ++k)
      require(diffs_[k].rows() == ranks_[k + 1] && diffs_[k].cols() == ranks_[k] && diffs_[k].nvars() == nvars_,
              ErrorCode::InvalidInput, "differential has the wrong shape");
    for (std::size_t k = 0; k + 1 < diffs_.size(); ++k)
      require((diffs_[k + 1] * diffs_[k]).is_zero(), ErrorCode::InvalidInput, "d composed with d is not zero");
  }

  static FreeComplex zero(std::size_t nvars) { return FreeComplex(nvars, 0, {0}, {}); }

  std::size_t nvars() const { return nvars_; }
  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(ranks_.size()) - 1; }
  std::size_t rank(int i) const { return i < lo() || i > hi() ? 0 : ranks_[static_cast<std::size_t>(i - lo_)]; }

  // d^i : C^i -> C^{i+1}, a zero matrix outside the stored range.
  PolyMatrix d(int i) const {
    if (i < lo() || i >= hi()) return PolyMatrix(rank(i + 1), rank(i), nvars_);
    return diffs_[static_cast<std::size_t>(i - lo_)];
  }

  const std::vector<std::size_t>& ranks() const { return ranks_; }
  const std::vector<PolyMatrix>& differentials() const { return diffs_; }

 private:
  std::size_t nvars_;
  int lo_;
  std::vector<std::size_t> ranks_;
  std::vector<PolyMatrix> diffs_;
};

namespace detail {

inline FreeComplex assemble(std::size_t nvars, int lo, int hi, const std::function<std::size_t(int)>& rank,
                            const std::function<PolyMatrix(int)>& d) {
  std::vector<std::size_t> ranks;
  std::vector<PolyMatrix> diffs;
  for (int i = lo; i <= hi; ++i) {
    ranks.push_back(rank(i));
    if (i < hi) diffs.push_back(d(i));
  }
  return FreeComplex(nvars, lo, std::move(ranks), std::move(diffs));
}

// Block matrix [[a, b], [c, e]].
inline PolyMatrix blocks(const PolyMatrix& a, const PolyMatrix& b, const PolyMatrix& c, const PolyMatrix& e,
                         std::size_t nvars) {
  PolyMatrix out(a.rows() + c.rows(), a.cols() + b.cols(), nvars);
  auto put = [&](const PolyMatrix& m, std::size_t r0, std::size_t c0) {
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) out.at(r0 + i, c0 + j) = m.at(i, j);
  };
  put(a, 0, 0);
  put(b, 0, a.cols());
  put(c, a.rows(), 0);
  put(e, a.rows(), a.cols());
  return out;
}

}  // namespace detail

// Exterior-algebra Koszul complex on x_1..x_n in degrees [-n, 0]; the basis
// of degree -p is the p-subsets of {1..n} in lexicographic order.
inline FreeComplex koszul_complex(std::size_t n) {
  require(n >= 1 && n <= Monomial::kMaxVars, ErrorCode::InvalidInput, "Koszul complex needs 1 <= n <= 7");
  std::vector<std::vector<std::uint32_t>> by_size(n + 1);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) by_size[static_cast<std::size_t>(__builtin_popcount(mask))].push_back(mask);
  for (auto& v : by_size) std::sort(v.begin(), v.end(), [](std::uint32_t a, std::uint32_t b) {
      for (int i = 0; i < 32; ++i) {
        bool ba = a & (1u << i), bb = b & (1u << i);
        if (ba != bb) return ba;
      }
      return false;
    });
  auto index_of = [&](std::size_t p, std::uint32_t mask) {
    const auto& v = by_size[p];
    return static_cast<std::size_t>(std::find(v.begin(), v.end(), mask) - v.begin());
  };
  return detail::assemble(
      n, -static_cast<int>(n), 0, [&](int i) { return by_size[static_cast<std::size_t>(-i)].size(); },
      [&](int i) {
        const std::size_t p = static_cast<std::size_t>(-i);
        PolyMatrix m(by_size[p - 1].size(), by_size[p].size(), n);
        for (std::size_t c = 0; c < by_size[p].size(); ++c) {
          std::uint32_t mask = by_size[p][c];
          int position = 0;
          for (std::size_t j = 0; j < n; ++j) {
            if (!(mask & (1u << j))) continue;
            mpq_class sign = position % 2 == 0 ? 1 : -1;
            m.at(index_of(p - 1, mask & ~(1u << j)), c) = sign * RationalPolynomial::variable(n, j);
            ++position;
          }
        }
        return m;
      });
}

// C[m]^i = C^{i+m} with differential (-1)^m d.
inline FreeComplex shift(const FreeComplex& c, int m) {
  mpq_class sign = m % 2 == 0 ? 1 : -1;
  return detail::assemble(
      c.nvars(), c.lo() - m, c.hi() - m, [&](int i) { return c.rank(i + m); },
      [&](int i) { return sign * c.d(i + m); });
}

inline FreeComplex direct_sum(const FreeComplex& a, const FreeComplex& b) {
  require(a.nvars() == b.nvars(), ErrorCode::InvalidInput, "complexes over different rings");
  const std::size_t n = a.nvars();
  return detail::assemble(
      n, std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()), [&](int i) { return a.rank(i) + b.rank(i); },
      [&](int i) {
        return detail::blocks(a.d(i), PolyMatrix(a.rank(i + 1), b.rank(i), n), PolyMatrix(b.rank(i + 1), a.rank(i), n),
                              b.d(i), n);
      });
}

// A chain map given degreewise; f(i) : P^i -> Q^i.
using ChainMap = std::function<PolyMatrix(int)>;

// Cone(f)^i = P^{i+1} ⊕ Q^i with d = [[-d_P, 0], [f, d_Q]].
inline FreeComplex cone(const FreeComplex& p, const FreeComplex& q, const ChainMap& f) {
  require(p.nvars() == q.nvars(), ErrorCode::InvalidInput, "complexes over different rings");
  const std::size_t n = p.nvars();
  const int lo = std::min(p.lo() - 1, q.lo()), hi = std::max(p.hi() - 1, q.hi());
  for (int i = lo; i <= hi + 1; ++i) {
    PolyMatrix fi = f(i);
    require(fi.rows() == q.rank(i) && fi.cols() == p.rank(i), ErrorCode::InvalidInput, "chain map has the wrong shape");
    require(q.d(i) * fi == f(i + 1) * p.d(i), ErrorCode::InvalidInput, "f does not commute with the differentials");
  }
  return detail::assemble(
      n, lo, hi, [&](int i) { return p.rank(i + 1) + q.rank(i); },
      [&](int i) {
        return detail::blocks(mpq_class(-1) * p.d(i + 1), PolyMatrix(p.rank(i + 2), q.rank(i), n), f(i + 1), q.d(i), n);
      });
}

// Cone of multiplication by g on c.
inline FreeComplex cone_of_multiplication(const FreeComplex& c, const RationalPolynomial& g) {
  return cone(c, c, [&](int i) {
    PolyMatrix m(c.rank(i), c.rank(i), c.nvars());
    for (std::size_t k = 0; k < c.rank(i); ++k) m.at(k, k) = g;
    return m;
  });
}

// Replaces each basis by a random unitriangular one (sparse rational
// entries above a permuted diagonal), so the complex is isomorphic but no
// longer visibly built from blocks. Polynomial entries would also be
// allowed, but their inverses inflate degrees enough to stall Buchberger.
inline FreeComplex random_basis_change(const FreeComplex& c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t n = c.nvars();
  std::map<int, std::pair<PolyMatrix, PolyMatrix>> change;  // g and g^{-1}
  for (int i = c.lo(); i <= c.hi(); ++i) {
    const std::size_t r = c.rank(i);
    PolyMatrix u = PolyMatrix::identity(r, n);
    std::uniform_int_distribution<int> coeff(-2, 2);
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = a + 1; b < r; ++b) {
        if (rng() % 3 != 0) continue;
        u.at(a, b) = RationalPolynomial::constant(n, coeff(rng));
      }
    // Inverse of a unitriangular matrix by back substitution.
    PolyMatrix inv = PolyMatrix::identity(r, n);
    for (std::size_t col = 0; col < r; ++col)
      for (std::size_t a = col; a-- > 0;) {
        RationalPolynomial s(n);
        for (std::size_t b = a + 1; b <= col; ++b) s += u.at(a, b) * inv.at(b, col);
        inv.at(a, col) = -s;
      }
    std::vector<std::size_t> perm(r);
    for (std::size_t k = 0; k < r; ++k) perm[k] = k;
    std::shuffle(perm.begin(), perm.end(), rng);
    PolyMatrix p(r, r, n), pt(r, r, n);
    for (std::size_t k = 0; k < r; ++k) {
      p.at(perm[k], k) = RationalPolynomial::constant(n, 1);
      pt.at(k, perm[k]) = RationalPolynomial::constant(n, 1);
    }
    change.emplace(i, std::make_pair(p * u, inv * pt));
  }
  // New differential g_{i+1} d g_i^{-1}.
  return detail::assemble(
      n, c.lo(), c.hi(), [&](int i) { return c.rank(i); },
      [&](int i) { return change.at(i + 1).first * c.d(i) * change.at(i).second; });
}

// dim_Q H^i for every degree with nonzero cohomology.
struct CohomologyProfile {
  std::map<int, int> dims;

  int at(int i) const {
    auto it = dims.find(i);
    return it == dims.end() ? 0 : it->second;
  }
  bool empty() const { return dims.empty(); }
  int euler_characteristic() const {
    int s = 0;
    for (const auto& [i, d] : dims) s += (i % 2 == 0 ? 1 : -1) * d;
    return s;
  }
};

// Cohomology of C ⊗ Q with all variables set to 0.
inline CohomologyProfile reduce_and_cohomology(const FreeComplex& c) {
  CohomologyProfile out;
  for (int i = c.lo(); i <= c.hi(); ++i) {
    int dim = static_cast<int>(c.rank(i)) - detail::rational_rank(c.d(i).at_origin()) -
              detail::rational_rank(c.d(i - 1).at_origin());
    if (dim != 0) out.dims[i] = dim;
  }
  return out;
}

// Degrees where H^i(C) over the polynomial ring is nonzero, each verified to
// be of finite length (killed by x_j^e for every j with e <= max_power), so
// that it is supported at the origin and agrees with the local cohomology.
inline std::vector<int> finite_length_support(const FreeComplex& c, int max_power = 8) {
  const std::size_t n = c.nvars();
  auto order = TermOrder::grevlex(n).with_position_first(false);
  std::vector<int> support;
  for (int i = c.lo(); i <= c.hi(); ++i) {
    const std::size_t r = c.rank(i);
    if (r == 0) continue;
    PolyMatrix di = c.d(i);
    std::vector<PolyVector> columns;
    for (std::size_t k = 0; k < r; ++k) columns.push_back(di.column(k));
    std::vector<PolyVector> kernel;
    if (c.rank(i + 1) == 0 || di.is_zero()) {
      for (std::size_t k = 0; k < r; ++k) {
        PolyVector e(r, RationalPolynomial(n));
        e[k] = RationalPolynomial::constant(n, 1);
        kernel.push_back(e);
      }
    } else {
      kernel = syzygies(columns, c.rank(i + 1), n);
    }
    PolyMatrix dprev = c.d(i - 1);
    std::vector<ModuleVector> image;
    for (std::size_t k = 0; k < dprev.cols(); ++k) {
      ModuleVector v = detail::to_module(dprev.column(k), order);
      if (!v.empty()) image.push_back(std::move(v));
    }
    GroebnerBasis im = groebner_basis(image, order);
    bool nonzero = false;
    for (const auto& k : kernel) {
      ModuleVector kv = detail::to_module(k, order);
      if (im.contains(kv)) continue;
      nonzero = true;
      for (std::size_t j = 0; j < n; ++j) {
        bool killed = false;
        RationalPolynomial xj = RationalPolynomial::variable(n, j), power = xj;
        for (int e = 1; e <= max_power && !killed; ++e, power = power * xj) {
          PolyVector scaled;
          for (const auto& comp : k) scaled.push_back(power * comp);
          killed = im.contains(detail::to_module(scaled, order));
        }
        require(killed, ErrorCode::PreconditionUnverified,
                "H^" + std::to_string(i) + " is not of finite length within the power bound");
      }
    }
    if (nonzero) support.push_back(i);
  }
  return support;
}

struct WindowReport {
  int a = 0;
  int b = 0;
  std::size_t n = 0;
  CohomologyProfile reduced;
  bool window_ok = false;
};

// The amplitude statement: with H^*(Q) of finite length in [a, b] and
// nonzero at both ends, Q ⊗^L k is nonzero at a - n and b and vanishes
// outside [a - n, b].
inline WindowReport check_window(const FreeComplex& q) {
  std::vector<int> support = finite_length_support(q);
  require(!support.empty(), ErrorCode::PreconditionUnverified, "the complex is acyclic");
  WindowReport w;
  w.a = support.front();
  w.b = support.back();
  w.n = q.nvars();
  w.reduced = reduce_and_cohomology(q);
  const int low = w.a - static_cast<int>(w.n);
  w.window_ok = w.reduced.at(low) != 0 && w.reduced.at(w.b) != 0;
  for (const auto& [i, d] : w.reduced.dims)
    if (i < low || i > w.b) w.window_ok = false;
  return w;
}

// Cokernel of a presentation matrix A : R^m -> R^r over Q[x_1..x_n].
struct FinitePresentation {
  PolyMatrix matrix;
  std::size_t generators() const { return matrix.rows(); }
};

// M_p != 0, decided at the translated origin by Nakayama: the localization
// vanishes iff A(p) has full row rank.
inline bool localization_nonzero(const FinitePresentation& m, const std::vector<mpq_class>& point) {
  if (m.generators() == 0) return false;
  PolyMatrix a = m.matrix.translate(point);
  return detail::rational_rank(a.at_origin()) < static_cast<int>(m.generators());
}

// dim Tor_i(k(p), M) for i = 0..n, from a free resolution of the translated
// presentation computed by iterated syzygies.
inline std::vector<int> derived_fiber(const FinitePresentation& m, const std::vector<mpq_class>& point) {
  const std::size_t n = m.matrix.nvars();
  std::vector<int> tor(n + 1, 0);
  if (m.generators() == 0) return tor;
  // maps[k] : F_{k+1} -> F_k as a list of columns.
  std::vector<std::vector<PolyVector>> maps;
  std::vector<std::size_t> ranks{m.generators()};
  PolyMatrix a = m.matrix.translate(point);
  std::vector<PolyVector> cols;
  for (std::size_t k = 0; k < a.cols(); ++k) {
    PolyVector col = a.column(k);
    if (std::any_of(col.begin(), col.end(), [](const auto& p) { return !p.is_zero(); })) cols.push_back(col);
  }
  maps.push_back(cols);
  ranks.push_back(cols.size());
  while (maps.size() < n + 1) {
    std::vector<PolyVector> next = syzygies(maps.back(), ranks[maps.size() - 1], n);
    ranks.push_back(next.size());
    maps.push_back(std::move(next));
  }
  auto rank_at_origin = [&](std::size_t k) {
    if (k >= maps.size() || maps[k].empty()) return 0;
    std::vector<std::vector<mpq_class>> mat(ranks[k], std::vector<mpq_class>(maps[k].size()));
    for (std::size_t c = 0; c < maps[k].size(); ++c)
      for (std::size_t r = 0; r < ranks[k]; ++r) mat[r][c] = maps[k][c][r].coefficient(Monomial{});
    return detail::rational_rank(std::move(mat));
  };
  for (std::size_t i = 0; i <= n; ++i) {
    int incoming = rank_at_origin(i);
    int outgoing = i == 0 ? 0 : rank_at_origin(i - 1);
    tor[i] = static_cast<int>(ranks[i]) - incoming - outgoing;
  }
  return tor;
}

inline bool derived_fiber_nonzero(const FinitePresentation& m, const std::vector<mpq_class>& point) {
  auto tor = derived_fiber(m, point);
  return std::any_of(tor.begin(), tor.end(), [](int d) { return d != 0; });
}

// Small support equals big support at every sampled rational point.
inline bool supp_equals_Supp(const FinitePresentation& m, const std::vector<std::vector<mpq_class>>& points) {
  for (const auto& p : points) {
    require(p.size() == m.matrix.nvars(), ErrorCode::InvalidInput, "point has the wrong dimension");
    if (localization_nonzero(m, p) != derived_fiber_nonzero(m, p)) return false;
  }
  return true;
}

}  // namespace padicprep
