#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "padicprep/error.hpp"

namespace padicprep {

// A monomial x^beta in at most kMaxVars variables, packed into one word:
// the top byte holds the total degree and byte 6-i holds the exponent of
// variable i. Comparing the packed words orders monomials graded-lex with
// x1 as the most significant variable.
class Monomial {
 public:
  static constexpr std::size_t kMaxVars = 7;
  static constexpr int kMaxDegree = 255;

  constexpr Monomial() = default;

  static Monomial from_exponents(std::span<const int> exps) {
    require(exps.size() <= kMaxVars, ErrorCode::InvalidInput, "too many variables in monomial");
    std::uint64_t packed = 0;
    int total = 0;
    for (std::size_t i = 0; i < exps.size(); ++i) {
      require(exps[i] >= 0 && exps[i] <= kMaxDegree, ErrorCode::InvalidInput, "exponent out of range");
      total += exps[i];
      packed |= static_cast<std::uint64_t>(exps[i]) << shift(i);
    }
    require(total <= kMaxDegree, ErrorCode::InvalidInput, "monomial degree out of range");
    packed |= static_cast<std::uint64_t>(total) << 56;
    return Monomial(packed);
  }

  static Monomial from_exponents(std::initializer_list<int> exps) {
    std::vector<int> v(exps);
    return from_exponents(std::span<const int>(v));
  }

  static Monomial variable(std::size_t var, int power = 1) {
    require(var < kMaxVars, ErrorCode::InvalidInput, "variable index out of range");
    require(power >= 0 && power <= kMaxDegree, ErrorCode::InvalidInput, "exponent out of range");
    return Monomial((static_cast<std::uint64_t>(power) << 56) | (static_cast<std::uint64_t>(power) << shift(var)));
  }

  constexpr int degree() const { return static_cast<int>(packed_ >> 56); }
  constexpr int operator[](std::size_t var) const { return static_cast<int>((packed_ >> shift(var)) & 0xff); }
  constexpr std::uint64_t key() const { return packed_; }
  constexpr bool is_one() const { return packed_ == 0; }

  std::vector<int> exponents(std::size_t nvars) const {
    std::vector<int> out(nvars);
    for (std::size_t i = 0; i < nvars; ++i) out[i] = (*this)[i];
    return out;
  }

  Monomial operator*(Monomial other) const {
    require(degree() + other.degree() <= kMaxDegree, ErrorCode::InvalidInput, "monomial degree overflow");
    // Byte-wise addition never carries because every partial sum is bounded
    // by the total degree.
    return Monomial(packed_ + other.packed_);
  }

  bool divides(Monomial other) const {
    for (std::size_t i = 0; i < kMaxVars; ++i)
      if ((*this)[i] > other[i]) return false;
    return true;
  }

  // Requires divides(other) on the left: returns other / *this.
  Monomial quotient_of(Monomial other) const { return Monomial(other.packed_ - packed_); }

  Monomial lcm(Monomial other) const {
    std::vector<int> e(kMaxVars);
    for (std::size_t i = 0; i < kMaxVars; ++i) e[i] = std::max((*this)[i], other[i]);
    return from_exponents(std::span<const int>(e));
  }

  bool coprime(Monomial other) const {
    for (std::size_t i = 0; i < kMaxVars; ++i)
      if ((*this)[i] > 0 && other[i] > 0) return false;
    return true;
  }

  Monomial with_exponent(std::size_t var, int e) const {
    auto exps = exponents(kMaxVars);
    exps[var] = e;
    return from_exponents(std::span<const int>(exps));
  }

  // Degree in variables other than `var`.
  int degree_without(std::size_t var) const { return degree() - (*this)[var]; }

  // Moves the exponent of variable `from + k` to `to + k`; used when
  // variables are dropped or prepended.
  Monomial shifted(int offset, std::size_t nvars) const {
    std::vector<int> e(kMaxVars, 0);
    for (std::size_t i = 0; i < nvars; ++i) {
      int exp = (*this)[i];
      if (exp == 0) continue;
      long target = static_cast<long>(i) + offset;
      require(target >= 0 && target < static_cast<long>(kMaxVars), ErrorCode::InvalidInput,
              "variable shift out of range");
      e[static_cast<std::size_t>(target)] = exp;
    }
    return from_exponents(std::span<const int>(e));
  }

  auto operator<=>(const Monomial&) const = default;

 private:
  explicit constexpr Monomial(std::uint64_t packed) : packed_(packed) {}
  static constexpr unsigned shift(std::size_t var) { return static_cast<unsigned>(48 - 8 * var); }

  std::uint64_t packed_ = 0;
};

// All monomials in `nvars` variables of total degree <= max_degree, in
// graded-lex ascending order.
inline std::vector<Monomial> monomials_up_to(std::size_t nvars, int max_degree) {
  std::vector<Monomial> out;
  std::vector<int> e(nvars, 0);
  // Enumerate exponent vectors recursively by total degree.
  auto rec = [&](auto&& self, std::size_t var, int remaining) -> void {
    if (var + 1 == nvars) {
      e[var] = remaining;
      out.push_back(Monomial::from_exponents(std::span<const int>(e)));
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      e[var] = k;
      self(self, var + 1, remaining - k);
    }
  };
  if (nvars == 0) {
    out.push_back(Monomial{});
    return out;
  }
  for (int d = 0; d <= max_degree; ++d) rec(rec, 0, d);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace padicprep
