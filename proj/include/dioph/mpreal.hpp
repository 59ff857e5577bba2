#ifndef DIOPH_MPREAL_HPP
#define DIOPH_MPREAL_HPP

// Arbitrary-precision reals on top of MPFR, exact integers on top of GMP.
//
// Every transcendental evaluation here goes through an explicit reduction
// step: the argument is reduced modulo pi/2 against a pi computed with as
// many extra bits as the cancellation in the reduction requires, and only
// the reduced residue (|r| <= pi/4) is handed to MPFR's elementary kernels.

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <climits>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdio>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "dioph/errors.hpp"

namespace dioph {

using BigInt = mpz_class;

/// Number of bits in |m| (0 for m = 0).
inline std::size_t bit_length(const BigInt& m) {
  return mpz_sgn(m.get_mpz_t()) == 0 ? 0 : mpz_sizeinbase(m.get_mpz_t(), 2);
}

/// Number of decimal digits in |m| (1 for m = 0).
inline std::size_t decimal_length(const BigInt& m) {
  if (mpz_sgn(m.get_mpz_t()) == 0) return 1;
  BigInt a = abs(m);
  return a.get_str().size();
}

/// Precision environment. Immutable once built.
class RealContext {
 public:
  static constexpr int min_digits = 30;
  static constexpr int default_guard = 40;

  explicit RealContext(int decimal_digits, int guard_digits = default_guard)
      : digits_(decimal_digits), guard_(guard_digits) {
    if (decimal_digits < min_digits) {
      throw PrecisionError("precision too low: " + std::to_string(decimal_digits) +
                           " digits requested, at least " + std::to_string(min_digits) +
                           " required");
    }
    if (guard_digits < 1) throw PrecisionError("guard digits must be positive");
  }

  int decimal_digits() const noexcept { return digits_; }
  int guard_digits() const noexcept { return guard_; }
  int working_digits() const noexcept { return digits_ + guard_; }

  /// Binary precision carrying working_digits() decimal digits.
  mpfr_prec_t bits() const noexcept {
    return static_cast<mpfr_prec_t>(std::ceil(working_digits() * 3.321928094887362)) + 4;
  }

  RealContext with_digits(int decimal_digits) const {
    return RealContext(decimal_digits, guard_);
  }

  friend bool operator==(const RealContext&, const RealContext&) = default;

 private:
  int digits_;
  int guard_;
};

inline RealContext make_context(int decimal_digits) { return RealContext(decimal_digits); }

/// Finite arbitrary-precision real with value semantics.
class Real {
 public:
  Real() : Real(mpfr_prec_t{64}) {}

  explicit Real(mpfr_prec_t bits) {
    mpfr_init2(v_, std::max<mpfr_prec_t>(bits, MPFR_PREC_MIN));
    mpfr_set_zero(v_, 1);
  }

  Real(const Real& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }

  Real(Real&& other) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, other.v_);
  }

  Real& operator=(const Real& other) {
    if (this != &other) {
      mpfr_set_prec(v_, mpfr_get_prec(other.v_));
      mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
  }

  Real& operator=(Real&& other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
  }

  ~Real() { mpfr_clear(v_); }

  static Real from_long(long value, mpfr_prec_t bits) {
    Real r(bits);
    mpfr_set_si(r.v_, value, MPFR_RNDN);
    return r;
  }

  static Real from_bigint(const BigInt& value, mpfr_prec_t bits) {
    Real r(bits);
    mpfr_set_z(r.v_, value.get_mpz_t(), MPFR_RNDN);
    return r;
  }

  /// Exact conversion: precision grows to hold every bit of `value`.
  static Real exact(const BigInt& value) {
    return from_bigint(value, static_cast<mpfr_prec_t>(std::max<std::size_t>(bit_length(value), 2)));
  }

  static Real from_double(double value, mpfr_prec_t bits) {
    if (!std::isfinite(value)) throw DomainError("non-finite double");
    Real r(bits);
    mpfr_set_d(r.v_, value, MPFR_RNDN);
    return r;
  }

  /// Parses a decimal literal ("1.01", "-3e5"). Malformed text is a DomainError.
  static Real from_string(std::string_view text, mpfr_prec_t bits) {
    std::string s(text);
    Real r(bits);
    char* end = nullptr;
    if (!s.empty()) mpfr_strtofr(r.v_, s.c_str(), &end, 10, MPFR_RNDN);
    if (s.empty() || end != s.c_str() + s.size()) {
      throw DomainError("not a decimal number: '" + s + "'");
    }
    if (!mpfr_number_p(r.v_)) throw DomainError("not a finite number: '" + s + "'");
    return r;
  }

  mpfr_srcptr get() const noexcept { return v_; }
  mpfr_ptr get() noexcept { return v_; }

  mpfr_prec_t precision() const noexcept { return mpfr_get_prec(v_); }

  /// Decimal digits carried by the binary precision.
  int digits() const noexcept { return static_cast<int>(precision() * 0.30102999566398120); }

  int sign() const noexcept { return mpfr_sgn(v_); }
  bool is_zero() const noexcept { return mpfr_zero_p(v_) != 0; }
  bool is_integer() const noexcept { return mpfr_integer_p(v_) != 0; }

  /// Binary exponent e with 2^(e-1) <= |x| < 2^e; LONG_MIN for zero.
  long exponent() const noexcept { return is_zero() ? LONG_MIN : static_cast<long>(mpfr_get_exp(v_)); }

  double to_double() const noexcept { return mpfr_get_d(v_, MPFR_RNDN); }

  BigInt floor_to_bigint() const {
    BigInt z;
    mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDD);
    return z;
  }

  BigInt round_to_bigint() const {
    BigInt z;
    mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDN);
    return z;
  }

  /// Same value rounded to `bits`.
  Real rounded(mpfr_prec_t bits) const {
    Real r(bits);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
  }

  /// %g-style rendering with `significant` digits.
  std::string to_string(int significant = 6) const {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rg", std::max(significant, 1), v_);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
  }

  Real operator-() const {
    Real r(precision());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }

  Real& check(const char* op) {
    if (!mpfr_number_p(v_)) throw ComputationError(std::string("non-finite result in ") + op);
    return *this;
  }

  friend Real operator+(const Real& a, const Real& b) { return binary(a, b, mpfr_add, "add"); }
  friend Real operator-(const Real& a, const Real& b) { return binary(a, b, mpfr_sub, "sub"); }
  friend Real operator*(const Real& a, const Real& b) { return binary(a, b, mpfr_mul, "mul"); }
  friend Real operator/(const Real& a, const Real& b) {
    if (b.is_zero()) throw DomainError("division by zero");
    return binary(a, b, mpfr_div, "div");
  }

  friend Real operator+(const Real& a, long b) {
    Real r(a.precision());
    mpfr_add_si(r.v_, a.v_, b, MPFR_RNDN);
    return std::move(r.check("add"));
  }
  friend Real operator-(const Real& a, long b) { return a + (-b); }
  friend Real operator*(const Real& a, long b) {
    Real r(a.precision());
    mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN);
    return std::move(r.check("mul"));
  }
  friend Real operator/(const Real& a, long b) {
    if (b == 0) throw DomainError("division by zero");
    Real r(a.precision());
    mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN);
    return std::move(r.check("div"));
  }
  friend Real operator*(const Real& a, const BigInt& b) {
    Real r(a.precision());
    mpfr_mul_z(r.v_, a.v_, b.get_mpz_t(), MPFR_RNDN);
    return std::move(r.check("mul"));
  }
  friend Real operator-(const Real& a, const BigInt& b) {
    Real r(a.precision());
    mpfr_sub_z(r.v_, a.v_, b.get_mpz_t(), MPFR_RNDN);
    return std::move(r.check("sub"));
  }
  friend Real operator/(const Real& a, const BigInt& b) {
    if (sgn(b) == 0) throw DomainError("division by zero");
    Real r(a.precision());
    mpfr_div_z(r.v_, a.v_, b.get_mpz_t(), MPFR_RNDN);
    return std::move(r.check("div"));
  }
  friend Real operator/(long a, const Real& b) {
    if (b.is_zero()) throw DomainError("division by zero");
    Real r(b.precision());
    mpfr_si_div(r.v_, a, b.v_, MPFR_RNDN);
    return std::move(r.check("div"));
  }

  friend std::partial_ordering operator<=>(const Real& a, const Real& b) {
    int c = mpfr_cmp(a.v_, b.v_);
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

  friend std::partial_ordering operator<=>(const Real& a, long b) {
    int c = mpfr_cmp_si(a.v_, b);
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }
  friend bool operator==(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) == 0; }

 private:
  using BinaryFn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);

  static Real binary(const Real& a, const Real& b, BinaryFn fn, const char* op) {
    Real r(std::max(a.precision(), b.precision()));
    fn(r.v_, a.v_, b.v_, MPFR_RNDN);
    return std::move(r.check(op));
  }

  mpfr_t v_;
};

inline Real real(long value, const RealContext& ctx) { return Real::from_long(value, ctx.bits()); }
inline Real real(const BigInt& value, const RealContext& ctx) { return Real::from_bigint(value, ctx.bits()); }
inline Real parse_real(std::string_view text, const RealContext& ctx) {
  return Real::from_string(text, ctx.bits());
}

inline Real abs(const Real& x) {
  Real r(x.precision());
  mpfr_abs(r.get(), x.get(), MPFR_RNDN);
  return r;
}

inline Real sqrt(const Real& x) {
  if (x.sign() < 0) throw DomainError("square root of a negative value");
  Real r(x.precision());
  mpfr_sqrt(r.get(), x.get(), MPFR_RNDN);
  return r;
}

/// x^y for x > 0 (or x = 0 with y > 0).
inline Real pow(const Real& x, const Real& y) {
  if (x.sign() < 0 && !y.is_integer()) throw DomainError("negative base with non-integer exponent");
  Real r(std::max(x.precision(), y.precision()));
  mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN);
  return std::move(r.check("pow"));
}

inline Real pow(const Real& x, long n) {
  Real r(x.precision());
  mpfr_pow_si(r.get(), x.get(), n, MPFR_RNDN);
  return std::move(r.check("pow"));
}

namespace detail {

struct ChudnovskyTerm {
  BigInt p, q, t;
};

// Binary splitting over [a, b) of the Chudnovsky hypergeometric series.
inline ChudnovskyTerm chudnovsky_split(unsigned long a, unsigned long b) {
  if (b - a == 1) {
    ChudnovskyTerm r;
    if (a == 0) {
      r.p = 1;
      r.q = 1;
    } else {
      r.p = BigInt(6 * a - 5) * (2 * a - 1) * (6 * a - 1);
      r.q = BigInt(a) * a * a * 10939058860032000UL;
    }
    r.t = r.p * (BigInt(545140134UL) * a + 13591409UL);
    if (a & 1UL) r.t = -r.t;
    return r;
  }
  const unsigned long m = a + (b - a) / 2;
  ChudnovskyTerm left = chudnovsky_split(a, m);
  ChudnovskyTerm right = chudnovsky_split(m, b);
  return {left.p * right.p, left.q * right.q, left.t * right.q + left.p * right.t};
}

/// pi from the Chudnovsky series (about 47.11 bits per term).
inline Real pi_chudnovsky(mpfr_prec_t bits) {
  const mpfr_prec_t work = bits + 32;
  const unsigned long terms = static_cast<unsigned long>(work / 47.11) + 2;
  ChudnovskyTerm s = chudnovsky_split(0, terms);
  Real root = sqrt(Real::from_long(10005, work));
  Real num = root * 426880L;
  num = num * s.q;
  num = num / s.t;
  return num.rounded(bits);
}

// Fixed-point arctan(1/x) scaled by `one`.
inline BigInt arctan_inverse(unsigned long x, const BigInt& one) {
  BigInt term = one / x;
  BigInt sum = term;
  const unsigned long x2 = x * x;
  BigInt t;
  for (unsigned long k = 1; sgn(term) != 0; ++k) {
    mpz_tdiv_q_ui(term.get_mpz_t(), term.get_mpz_t(), x2);
    mpz_tdiv_q_ui(t.get_mpz_t(), term.get_mpz_t(), 2 * k + 1);
    if (k & 1UL) {
      sum -= t;
    } else {
      sum += t;
    }
  }
  return sum;
}

/// pi from Machin's formula 16 atan(1/5) - 4 atan(1/239), fixed-point.
inline Real pi_machin(mpfr_prec_t bits) {
  const mpfr_prec_t guard = 40;
  BigInt one = 1;
  mpz_mul_2exp(one.get_mpz_t(), one.get_mpz_t(), static_cast<mp_bitcnt_t>(bits + guard));
  BigInt fixed = 16 * arctan_inverse(5, one) - 4 * arctan_inverse(239, one);
  Real r = Real::exact(fixed);
  mpfr_div_2ui(r.get(), r.get(), static_cast<unsigned long>(bits + guard), MPFR_RNDN);
  return r.rounded(bits);
}

/// Both series, released only when they agree to the last few bits.
inline Real pi_checked(mpfr_prec_t bits) {
  Real a = pi_chudnovsky(bits);
  Real b = pi_machin(bits);
  Real diff = abs(a - b);
  Real tol = Real::from_long(1, bits);
  mpfr_div_2si(tol.get(), tol.get(), static_cast<long>(bits) - 4, MPFR_RNDN);
  if (diff > tol) throw ComputationError("pi cross-check failed: Chudnovsky and Machin disagree");
  return a;
}

/// pi at `bits`, memoised at the highest precision requested so far.
inline Real pi_bits(mpfr_prec_t bits) {
  static std::mutex mutex;
  static std::optional<Real> cache;
  std::lock_guard<std::mutex> lock(mutex);
  if (!cache || cache->precision() < bits) {
    const mpfr_prec_t grown = std::max<mpfr_prec_t>(bits, cache ? cache->precision() * 3 / 2 : 0);
    const mpfr_prec_t target = (grown + 255) / 256 * 256;
    cache = pi_checked(target);
  }
  return cache->rounded(bits);
}

/// x = quadrant * pi/2 + residue (mod 2 pi), |residue| <= pi/4 (up to rounding).
struct Reduced {
  Real residue;
  unsigned quadrant = 0;
  mpfr_prec_t precision = 0;
};

inline Reduced reduce_half_pi(const Real& x, mpfr_prec_t target) {
  if (x.is_zero()) return {Real(target), 0, target};
  const long ex = std::max(0L, x.exponent());
  if (ex == 0) return {x.rounded(std::max(target, x.precision())), 0, target};
  mpfr_prec_t extra = ex + 64;
  for (int attempt = 0;; ++attempt) {
    const mpfr_prec_t work = target + extra;
    Real half_pi = pi_bits(work);
    mpfr_div_2ui(half_pi.get(), half_pi.get(), 1, MPFR_RNDN);
    Real quotient(work);
    mpfr_div(quotient.get(), x.get(), half_pi.get(), MPFR_RNDN);
    BigInt k = quotient.round_to_bigint();
    Real multiple(work);
    mpfr_mul_z(multiple.get(), half_pi.get(), k.get_mpz_t(), MPFR_RNDN);
    Real residue(work);
    mpfr_sub(residue.get(), x.get(), multiple.get(), MPFR_RNDN);
    const unsigned quadrant = static_cast<unsigned>(mpz_fdiv_ui(k.get_mpz_t(), 4));
    // Relative error of the residue is about 2^(ex - er + 3 - work).
    const long er = residue.is_zero() ? -static_cast<long>(work) : residue.exponent();
    const long needed = ex - er + 16;
    if (needed <= extra || attempt >= 8) return {std::move(residue), quadrant, work};
    extra = needed + 64;
  }
}

inline Real sin_of(const Reduced& red, mpfr_prec_t target) {
  Real out(target);
  switch (red.quadrant) {
    case 0: mpfr_sin(out.get(), red.residue.get(), MPFR_RNDN); break;
    case 1: mpfr_cos(out.get(), red.residue.get(), MPFR_RNDN); break;
    case 2: mpfr_sin(out.get(), red.residue.get(), MPFR_RNDN); mpfr_neg(out.get(), out.get(), MPFR_RNDN); break;
    default: mpfr_cos(out.get(), red.residue.get(), MPFR_RNDN); mpfr_neg(out.get(), out.get(), MPFR_RNDN); break;
  }
  return out;
}

inline Real cos_of(const Reduced& red, mpfr_prec_t target) {
  Real out(target);
  switch (red.quadrant) {
    case 0: mpfr_cos(out.get(), red.residue.get(), MPFR_RNDN); break;
    case 1: mpfr_sin(out.get(), red.residue.get(), MPFR_RNDN); mpfr_neg(out.get(), out.get(), MPFR_RNDN); break;
    case 2: mpfr_cos(out.get(), red.residue.get(), MPFR_RNDN); mpfr_neg(out.get(), out.get(), MPFR_RNDN); break;
    default: mpfr_sin(out.get(), red.residue.get(), MPFR_RNDN); break;
  }
  return out;
}

}  // namespace detail

/// pi to the context's working precision, cross-checked by two independent series.
inline Real pi_const(const RealContext& ctx) { return detail::pi_bits(ctx.bits()); }

/// sin(m) for an integer of any magnitude.
inline Real sin_int(const BigInt& m, const RealContext& ctx) {
  return detail::sin_of(detail::reduce_half_pi(Real::exact(m), ctx.bits()), ctx.bits());
}

inline Real cos_int(const BigInt& m, const RealContext& ctx) {
  return detail::cos_of(detail::reduce_half_pi(Real::exact(m), ctx.bits()), ctx.bits());
}

/// sin(x); x is taken as exact at its own precision.
inline Real sin_real(const Real& x, const RealContext& ctx) {
  return detail::sin_of(detail::reduce_half_pi(x, ctx.bits()), ctx.bits());
}

inline Real cos_real(const Real& x, const RealContext& ctx) {
  return detail::cos_of(detail::reduce_half_pi(x, ctx.bits()), ctx.bits());
}

inline Real ln_real(const Real& x, const RealContext& ctx) {
  if (x.sign() <= 0) throw DomainError("logarithm of a non-positive value");
  Real r(ctx.bits());
  mpfr_log(r.get(), x.get(), MPFR_RNDN);
  return r;
}

}  // namespace dioph

#endif  // DIOPH_MPREAL_HPP
