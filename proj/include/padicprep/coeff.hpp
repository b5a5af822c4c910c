#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "padicprep/error.hpp"

namespace padicprep {

namespace detail {

using u128 = unsigned __int128;

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<u128>(a) * b) % m);
}

inline std::uint64_t ipow(std::uint64_t base, int exp) {
  std::uint64_t result = 1;
  for (int i = 0; i < exp; ++i) result *= base;
  return result;
}

// Inverse of a modulo m, for gcd(a, m) = 1 and m < 2^63.
inline std::uint64_t invmod(std::uint64_t a, std::uint64_t m) {
  std::int64_t t0 = 0, t1 = 1;
  std::int64_t r0 = static_cast<std::int64_t>(m), r1 = static_cast<std::int64_t>(a % m);
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::int64_t r2 = r0 - q * r1;
    r0 = r1;
    r1 = r2;
    std::int64_t t2 = t0 - q * t1;
    t0 = t1;
    t1 = t2;
  }
  require(r0 == 1, ErrorCode::DivisionByZero, "value is not invertible modulo the working modulus");
  if (t0 < 0) t0 += static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(t0);
}

inline bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace detail

// Working context for the coefficient field Q_l: the prime, the number of
// l-adic unit digits kept, and the total-degree cutoff of the series layer.
class CoefficientContext {
 public:
  CoefficientContext(std::uint64_t prime, int precision, int degree) : prime_(prime), precision_(precision), degree_(degree) {
    require(prime != 2, ErrorCode::InvalidInput, "the prime 2 is not supported");
    require(detail::is_prime(prime), ErrorCode::InvalidInput, "prime must be an odd prime");
    require(precision >= 1, ErrorCode::InvalidInput, "precision must be at least 1");
    require(degree >= 0 && degree <= 200, ErrorCode::InvalidInput, "truncation degree must lie in [0, 200]");
    // l^N must fit comfortably in 62 bits so products fit in 128 bits.
    long double bound = 1;
    for (int i = 0; i < precision; ++i) bound *= static_cast<long double>(prime);
    require(bound < 4.0e18L, ErrorCode::InvalidInput, "prime^precision exceeds the 62-bit working modulus");
    modulus_ = detail::ipow(prime, precision);
  }

  std::uint64_t prime() const { return prime_; }
  int precision() const { return precision_; }
  int degree() const { return degree_; }
  // l^precision.
  std::uint64_t modulus() const { return modulus_; }
  // l^k for 0 <= k <= precision.
  std::uint64_t power(int k) const { return k == precision_ ? modulus_ : detail::ipow(prime_, k); }

  friend bool operator==(const CoefficientContext& a, const CoefficientContext& b) {
    return a.prime_ == b.prime_ && a.precision_ == b.precision_ && a.degree_ == b.degree_;
  }

 private:
  std::uint64_t prime_;
  int precision_;
  int degree_;
  std::uint64_t modulus_ = 1;
};

inline void require_same(const CoefficientContext& a, const CoefficientContext& b) {
  require(a == b, ErrorCode::ContextMismatch, "operands live in different coefficient contexts");
}

// u * l^v known modulo l^(v + N - loss). Zero is a distinguished exact value.
class PadicScalar {
 public:
  static constexpr std::int64_t kInfinity = std::numeric_limits<std::int64_t>::max();

  explicit PadicScalar(const CoefficientContext& ctx) : ctx_(ctx) {}

  static PadicScalar zero(const CoefficientContext& ctx) { return PadicScalar(ctx); }
  static PadicScalar one(const CoefficientContext& ctx) { return from_int(ctx, 1); }

  static PadicScalar from_int(const CoefficientContext& ctx, long long value) {
    return from_rational(ctx, mpq_class(mpz_class(std::to_string(value))));
  }

  static PadicScalar from_rational(const CoefficientContext& ctx, const mpq_class& q) {
    PadicScalar out(ctx);
    if (q == 0) return out;
    mpz_class prime(static_cast<unsigned long>(ctx.prime()));
    mpz_class num = q.get_num(), den = q.get_den();
    mpz_class tmp;
    auto strip = [&](mpz_class& z) {
      std::int64_t v = static_cast<std::int64_t>(mpz_remove(tmp.get_mpz_t(), z.get_mpz_t(), prime.get_mpz_t()));
      z = tmp;
      return v;
    };
    std::int64_t v = strip(num) - strip(den);
    mpz_class modulus(static_cast<unsigned long>(ctx.modulus()));
    mpz_class n = num % modulus;
    if (n < 0) n += modulus;
    mpz_class d = den % modulus;
    if (d < 0) d += modulus;
    std::uint64_t unit =
        detail::mulmod(n.get_ui(), detail::invmod(d.get_ui(), ctx.modulus()), ctx.modulus());
    out.zero_ = false;
    out.v_ = v;
    out.u_ = unit;
    out.loss_ = 0;
    return out;
  }

  // Accepts "7", "-3/4" and similar decimal rational strings.
  static PadicScalar parse_rational(const CoefficientContext& ctx, const std::string& text) {
    mpq_class q;
    if (q.set_str(text, 10) != 0) fail(ErrorCode::InvalidInput, "not a rational number: " + text);
    require(q.get_den() != 0, ErrorCode::InvalidInput, "zero denominator in " + text);
    q.canonicalize();
    return from_rational(ctx, q);
  }

  static PadicScalar from_parts(const CoefficientContext& ctx, std::int64_t valuation, std::uint64_t unit, int loss) {
    require(loss >= 0 && loss < ctx.precision(), ErrorCode::InvalidInput, "loss out of range");
    std::uint64_t mod = ctx.power(ctx.precision() - loss);
    require(unit > 0 && unit < mod, ErrorCode::InvalidInput, "unit digits out of range");
    require(unit % ctx.prime() != 0, ErrorCode::InvalidInput, "unit digits divisible by the prime");
    PadicScalar out(ctx);
    out.zero_ = false;
    out.v_ = valuation;
    out.u_ = unit;
    out.loss_ = loss;
    return out;
  }

  const CoefficientContext& context() const { return ctx_; }
  bool is_zero() const { return zero_; }
  std::int64_t valuation() const { return zero_ ? kInfinity : v_; }
  std::uint64_t unit() const { return zero_ ? 0 : u_; }
  int loss() const { return zero_ ? 0 : loss_; }
  int relative_precision() const { return ctx_.precision() - loss(); }
  // Exponent k such that the value is known modulo l^k.
  std::int64_t absolute_precision() const { return zero_ ? kInfinity : v_ + relative_precision(); }

  bool is_unit() const { return !zero_ && v_ == 0; }

  PadicScalar operator-() const {
    if (zero_) return *this;
    PadicScalar out = *this;
    out.u_ = ctx_.power(relative_precision()) - u_;
    return out;
  }

  friend PadicScalar operator+(const PadicScalar& a, const PadicScalar& b) {
    require_same(a.ctx_, b.ctx_);
    if (a.zero_) return b;
    if (b.zero_) return a;
    const auto& ctx = a.ctx_;
    std::int64_t abs = std::min(a.absolute_precision(), b.absolute_precision());
    std::int64_t m = std::min(a.v_, b.v_);
    int k = static_cast<int>(abs - m);  // 1 <= k <= N
    std::uint64_t mod = ctx.power(k);
    auto lift = [&](const PadicScalar& x) -> std::uint64_t {
      std::int64_t shift = x.v_ - m;
      if (shift >= k) return 0;
      return detail::mulmod(x.u_ % mod, ctx.power(static_cast<int>(shift)), mod);
    };
    std::uint64_t s = (lift(a) + lift(b)) % mod;
    PadicScalar out(ctx);
    if (s == 0) return out;
    int t = 0;
    while (s % ctx.prime() == 0) {
      s /= ctx.prime();
      ++t;
    }
    out.zero_ = false;
    out.v_ = m + t;
    out.u_ = s;
    out.loss_ = ctx.precision() - (k - t);
    return out;
  }

  friend PadicScalar operator-(const PadicScalar& a, const PadicScalar& b) { return a + (-b); }

  friend PadicScalar operator*(const PadicScalar& a, const PadicScalar& b) {
    require_same(a.ctx_, b.ctx_);
    if (a.zero_) return a;
    if (b.zero_) return b;
    int loss = std::max(a.loss_, b.loss_);
    std::uint64_t mod = a.ctx_.power(a.ctx_.precision() - loss);
    PadicScalar out(a.ctx_);
    out.zero_ = false;
    out.v_ = a.v_ + b.v_;
    out.u_ = detail::mulmod(a.u_ % mod, b.u_ % mod, mod);
    out.loss_ = loss;
    return out;
  }

  PadicScalar inv() const {
    require(!zero_, ErrorCode::DivisionByZero, "inverse of zero");
    PadicScalar out = *this;
    out.v_ = -v_;
    out.u_ = detail::invmod(u_, ctx_.power(relative_precision()));
    return out;
  }

  friend PadicScalar operator/(const PadicScalar& a, const PadicScalar& b) { return a * b.inv(); }

  PadicScalar pow(long long e) const {
    if (e < 0) return inv().pow(-e);
    PadicScalar result = one(ctx_);
    PadicScalar base = *this;
    while (e > 0) {
      if (e & 1) result = result * base;
      base = base * base;
      e >>= 1;
    }
    return result;
  }

  // Marks `digits` further unit digits as unreliable.
  PadicScalar with_added_loss(int digits) const {
    if (zero_ || digits <= 0) return *this;
    require(loss_ + digits < ctx_.precision(), ErrorCode::PrecisionExhausted,
            "precision loss reached the working precision");
    PadicScalar out = *this;
    out.loss_ = loss_ + digits;
    out.u_ = u_ % ctx_.power(out.relative_precision());
    return out;
  }

  // The value modulo l^k as an integer in [0, l^k). Requires an integral value.
  std::uint64_t residue(int k) const {
    require(k >= 0 && k <= ctx_.precision(), ErrorCode::InvalidInput, "residue exponent out of range");
    if (zero_) return 0;
    require(v_ >= 0, ErrorCode::ConvergenceViolation, "residue of a non-integral value");
    require(absolute_precision() >= k, ErrorCode::PrecisionExhausted, "residue requested beyond known digits");
    if (v_ >= k) return 0;
    std::uint64_t mod = ctx_.power(k);
    return detail::mulmod(u_ % mod, ctx_.power(static_cast<int>(v_)), mod);
  }

  // Rational reconstruction of the value from its known digits, if a
  // fraction with numerator and denominator below sqrt(l^k / 2) exists.
  std::optional<mpq_class> to_rational() const {
    if (zero_) return mpq_class(0);
    mpz_class modulus(static_cast<unsigned long>(ctx_.power(relative_precision())));
    mpz_class bound;
    mpz_class half = modulus / 2;
    mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
    mpz_class r0 = modulus, r1(static_cast<unsigned long>(u_));
    mpz_class t0 = 0, t1 = 1;
    while (r1 > bound) {
      mpz_class q = r0 / r1;
      mpz_class r2 = r0 - q * r1;
      r0 = r1;
      r1 = r2;
      mpz_class t2 = t0 - q * t1;
      t0 = t1;
      t1 = t2;
    }
    if (t1 == 0 || abs(t1) > bound) return std::nullopt;
    mpz_class g;
    mpz_class prime(static_cast<unsigned long>(ctx_.prime()));
    mpz_gcd(g.get_mpz_t(), t1.get_mpz_t(), prime.get_mpz_t());
    if (g != 1) return std::nullopt;
    mpq_class q(r1, t1);
    q.canonicalize();
    mpz_class scale;
    mpz_pow_ui(scale.get_mpz_t(), prime.get_mpz_t(), static_cast<unsigned long>(v_ < 0 ? -v_ : v_));
    if (v_ >= 0)
      q *= mpq_class(scale);
    else
      q /= mpq_class(scale);
    return q;
  }

  // Same digits, valuation, and loss.
  bool identical(const PadicScalar& other) const {
    if (!(ctx_ == other.ctx_) || zero_ != other.zero_) return false;
    if (zero_) return true;
    return v_ == other.v_ && u_ == other.u_ && loss_ == other.loss_;
  }

  // Equality to the attainable precision: the difference cancels completely.
  // Zero modulo the attainable modulus l^(N - loss). Small nonzero values
  // left over after a cancellation that produced an exact zero elsewhere
  // fall under this.
  bool vanishes() const { return zero_ || v_ >= relative_precision(); }

  friend bool operator==(const PadicScalar& a, const PadicScalar& b) { return (a - b).vanishes(); }

  std::string to_string() const {
    if (zero_) return "0";
    std::string s = std::to_string(u_) + "*" + std::to_string(ctx_.prime()) + "^" + std::to_string(v_);
    if (loss_ > 0) s += " (loss " + std::to_string(loss_) + ")";
    return s;
  }

 private:
  CoefficientContext ctx_;
  bool zero_ = true;
  std::int64_t v_ = 0;
  std::uint64_t u_ = 0;
  int loss_ = 0;
};

// exp(a) = sum a^k / k!, for v(a) >= 1.
inline PadicScalar scalar_exp(const PadicScalar& a) {
  const auto& ctx = a.context();
  if (a.is_zero()) return PadicScalar::one(ctx);
  require(a.valuation() >= 1, ErrorCode::ConvergenceViolation, "exp needs an argument of positive valuation");
  const std::int64_t target = std::min<std::int64_t>(ctx.precision(), a.absolute_precision());
  const auto lp = static_cast<std::int64_t>(ctx.prime());
  PadicScalar sum = PadicScalar::one(ctx);
  PadicScalar term = PadicScalar::one(ctx);
  // v(a^k / k!) >= k v(a) - (k - 1)/(l - 1), which increases with k.
  for (std::int64_t k = 1;; ++k) {
    std::int64_t bound = k * a.valuation() - (k - 1) / (lp - 1);
    if (bound >= target) break;
    term = term * a / PadicScalar::from_int(ctx, k);
    sum = sum + term;
  }
  return sum;
}

// log(u) = sum (-1)^(k+1) (u-1)^k / k, for u = 1 mod l.
inline PadicScalar scalar_log(const PadicScalar& u) {
  const auto& ctx = u.context();
  PadicScalar y = u - PadicScalar::one(ctx);
  require(!u.is_zero() && u.valuation() == 0 && (y.is_zero() || y.valuation() >= 1),
          ErrorCode::ConvergenceViolation, "log needs a principal unit");
  if (y.is_zero()) return y;
  const std::int64_t target = y.absolute_precision();
  const auto lp = static_cast<std::int64_t>(ctx.prime());
  PadicScalar sum = PadicScalar::zero(ctx);
  PadicScalar power = PadicScalar::one(ctx);
  for (std::int64_t k = 1;; ++k) {
    std::int64_t floor_log = 0;
    for (std::int64_t p = lp; p <= k; p *= lp) ++floor_log;
    if (k * y.valuation() - floor_log >= target) break;
    power = power * y;
    PadicScalar term = power / PadicScalar::from_int(ctx, k);
    sum = (k % 2 == 1) ? sum + term : sum - term;
  }
  return sum;
}

}  // namespace padicprep
