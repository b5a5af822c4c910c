#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "padicprep/error.hpp"
#include "padicprep/monomial.hpp"

namespace padicprep {

// Polynomial with exact rational coefficients in a fixed number of variables.
class RationalPolynomial {
 public:
  using TermMap = std::map<Monomial, mpq_class>;

  RationalPolynomial() = default;
  explicit RationalPolynomial(std::size_t nvars) : nvars_(nvars) {
    require(nvars <= Monomial::kMaxVars, ErrorCode::InvalidInput, "too many variables");
  }

  static RationalPolynomial constant(std::size_t nvars, const mpq_class& c) {
    RationalPolynomial p(nvars);
    p.add_term(Monomial{}, c);
    return p;
  }

  static RationalPolynomial variable(std::size_t nvars, std::size_t var) {
    require(var < nvars, ErrorCode::InvalidInput, "variable index out of range");
    RationalPolynomial p(nvars);
    p.add_term(Monomial::variable(var), 1);
    return p;
  }

  static RationalPolynomial term(std::size_t nvars, Monomial m, const mpq_class& c) {
    RationalPolynomial p(nvars);
    p.add_term(m, c);
    return p;
  }

  std::size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(Monomial m, const mpq_class& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  mpq_class coefficient(Monomial m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? mpq_class(0) : it->second;
  }

  // -1 for the zero polynomial.
  int total_degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first.degree(); }

  int order() const { return terms_.empty() ? -1 : terms_.begin()->first.degree(); }

  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one()); }

  bool involves(std::size_t var) const {
    for (const auto& [m, c] : terms_)
      if (m[var] > 0) return true;
    return false;
  }

  RationalPolynomial homogeneous_part(int degree) const {
    RationalPolynomial out(nvars_);
    for (const auto& [m, c] : terms_)
      if (m.degree() == degree) out.terms_.emplace(m, c);
    return out;
  }

  RationalPolynomial operator-() const {
    RationalPolynomial out = *this;
    for (auto& [m, c] : out.terms_) c = -c;
    return out;
  }

  RationalPolynomial& operator+=(const RationalPolynomial& o) {
    check(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }

  RationalPolynomial& operator-=(const RationalPolynomial& o) {
    check(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }

  friend RationalPolynomial operator+(RationalPolynomial a, const RationalPolynomial& b) { return a += b; }
  friend RationalPolynomial operator-(RationalPolynomial a, const RationalPolynomial& b) { return a -= b; }

  friend RationalPolynomial operator*(const RationalPolynomial& a, const RationalPolynomial& b) {
    a.check(b);
    RationalPolynomial out(a.nvars_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
    return out;
  }

  friend RationalPolynomial operator*(const mpq_class& s, const RationalPolynomial& p) {
    RationalPolynomial out(p.nvars_);
    if (s == 0) return out;
    for (const auto& [m, c] : p.terms_) out.terms_.emplace(m, s * c);
    return out;
  }

  RationalPolynomial pow(int e) const {
    require(e >= 0, ErrorCode::InvalidInput, "negative polynomial power");
    RationalPolynomial result = constant(nvars_, 1);
    for (int i = 0; i < e; ++i) result = result * *this;
    return result;
  }

  friend bool operator==(const RationalPolynomial& a, const RationalPolynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  mpq_class evaluate(const std::vector<mpq_class>& point) const {
    require(point.size() == nvars_, ErrorCode::InvalidInput, "evaluation point has wrong dimension");
    mpq_class total = 0;
    for (const auto& [m, c] : terms_) {
      mpq_class v = c;
      for (std::size_t i = 0; i < nvars_; ++i)
        for (int k = 0; k < m[i]; ++k) v *= point[i];
      total += v;
    }
    return total;
  }

  // p(g_1, ..., g_n) for polynomials g_i in a common number of variables.
  RationalPolynomial compose(const std::vector<RationalPolynomial>& gs) const {
    require(gs.size() == nvars_, ErrorCode::InvalidInput, "composition needs one polynomial per variable");
    std::size_t m = gs.empty() ? 0 : gs.front().nvars();
    RationalPolynomial out(m);
    for (const auto& [mono, c] : terms_) {
      RationalPolynomial t = constant(m, c);
      for (std::size_t i = 0; i < nvars_; ++i)
        if (mono[i] > 0) t = t * gs[i].pow(mono[i]);
      out += t;
    }
    return out;
  }

  // Substitutes x_i -> x_i + shift_i.
  RationalPolynomial translate(const std::vector<mpq_class>& shift) const {
    require(shift.size() == nvars_, ErrorCode::InvalidInput, "translation vector has wrong dimension");
    std::vector<RationalPolynomial> gs;
    for (std::size_t i = 0; i < nvars_; ++i) gs.push_back(variable(nvars_, i) + constant(nvars_, shift[i]));
    return compose(gs);
  }

  // Renumbers variables: variable i becomes map[i] in a ring of `target` variables.
  RationalPolynomial remap(const std::vector<std::size_t>& map, std::size_t target) const {
    RationalPolynomial out(target);
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

  // Terms printed in descending graded-lex order, e.g. "3/2*x1^2*x2 - x3 + 1".
  std::string to_string(char var = 'x') const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [m, c] = *it;
      mpq_class mag = abs(c);
      if (first) {
        if (c < 0) out += "-";
      } else {
        out += c < 0 ? " - " : " + ";
      }
      first = false;
      std::string mono;
      for (std::size_t i = 0; i < nvars_; ++i) {
        if (m[i] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += var + std::to_string(i + 1);
        if (m[i] > 1) mono += "^" + std::to_string(m[i]);
      }
      if (mono.empty())
        out += mag.get_str();
      else if (mag == 1)
        out += mono;
      else
        out += mag.get_str() + "*" + mono;
    }
    return out;
  }

  static RationalPolynomial parse(const std::string& text, std::size_t nvars);

 private:
  void check(const RationalPolynomial& o) const {
    require(nvars_ == o.nvars_, ErrorCode::InvalidInput, "polynomials in different numbers of variables");
  }

  std::size_t nvars_ = 0;
  TermMap terms_;
};

namespace detail {

// Recursive-descent parser for sums of products of rationals and x_i (or t_i).
class PolynomialParser {
 public:
  PolynomialParser(const std::string& text, std::size_t nvars) : text_(text), nvars_(nvars) {}

  RationalPolynomial run() {
    RationalPolynomial p = expr();
    skip();
    if (pos_ != text_.size()) error("unexpected character");
    return p;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::InvalidInput, what + " at position " + std::to_string(pos_) + " in \"" + text_ + "\"");
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string digits() {
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) error("expected digits");
    return text_.substr(start, pos_ - start);
  }

  RationalPolynomial expr() {
    RationalPolynomial p(nvars_);
    bool negate = false;
    if (accept('-'))
      negate = true;
    else
      accept('+');
    RationalPolynomial t = term();
    p += negate ? -t : t;
    for (;;) {
      if (accept('+'))
        p += term();
      else if (accept('-'))
        p -= term();
      else
        return p;
    }
  }

  RationalPolynomial term() {
    RationalPolynomial p = factor();
    for (;;) {
      if (accept('*')) {
        p = p * factor();
      } else if (accept('/')) {
        RationalPolynomial d = factor();
        if (!d.is_constant() || d.is_zero()) error("division only by nonzero constants");
        p = mpq_class(1 / d.coefficient(Monomial{})) * p;
      } else {
        return p;
      }
    }
  }

  RationalPolynomial factor() {
    RationalPolynomial base = primary();
    if (accept('^')) {
      std::string e = digits();
      if (e.size() > 3) error("exponent too large");
      base = base.pow(std::stoi(e));
    }
    return base;
  }

  RationalPolynomial primary() {
    skip();
    if (pos_ >= text_.size()) error("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      RationalPolynomial p = expr();
      if (!accept(')')) error("expected ')'");
      return p;
    }
    if (c == '-') {
      ++pos_;
      return -factor();
    }
    if (c == 'x' || c == 't') {
      ++pos_;
      std::string idx = digits();
      std::size_t i = std::stoul(idx);
      if (i < 1 || i > nvars_) error("variable index out of range");
      return RationalPolynomial::variable(nvars_, i - 1);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mpq_class q{mpz_class(digits())};
      return RationalPolynomial::constant(nvars_, q);
    }
    error("unexpected character");
  }

  const std::string& text_;
  std::size_t nvars_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline RationalPolynomial RationalPolynomial::parse(const std::string& text, std::size_t nvars) {
  return detail::PolynomialParser(text, nvars).run();
}

}  // namespace padicprep
