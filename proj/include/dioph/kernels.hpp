#ifndef DIOPH_KERNELS_HPP
#define DIOPH_KERNELS_HPP

// Dirichlet and Fejer summation kernels and the 2-adic shift sequence
//   x_n = ((2^(2+2v) + 1) / 2^(2+2v)) pi p_n,   v = v2(p_n),
// which moves the large value of 1/sin p_n into the kernel while
// sin((2 x_n + 1) p_n) = +-cos p_n stays bounded away from zero.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dioph/contfrac.hpp"
#include "dioph/errors.hpp"
#include "dioph/mpreal.hpp"
#include "dioph/table.hpp"

namespace dioph {

/// 2-adic valuation: largest v with 2^v | m.
inline unsigned long v2(const BigInt& m) {
  if (sgn(m) == 0) throw DomainError("2-adic valuation of 0 is undefined");
  return mpz_scan1(m.get_mpz_t(), 0);
}

struct KernelEval {
  Real x;                    // kernel parameter (any real for the closed form)
  std::optional<BigInt> x_int;
  Real z;
  Real closed_form;
  std::optional<Real> sum_form;  // present only for integer x >= 0
  Real abs_bound;                // 2x+1 (Dirichlet) or (x+1)^2 (Fejer)
};

namespace detail {

// Singular when z is within 10^(-D/2) of a multiple of pi.
inline void require_regular(const Real& z, const RealContext& ctx) {
  Real s = abs(sin_real(z, ctx));
  Real tol = real(10, ctx);
  mpfr_pow_si(tol.get(), tol.get(), -ctx.decimal_digits() / 2, MPFR_RNDN);
  if (s < tol) throw DomainError("singular kernel argument: z is a multiple of pi at working precision");
}

// |a - b| <= 10^(6-D) max(|a|, 1).
inline bool forms_agree(const Real& a, const Real& b, const RealContext& ctx) {
  Real tol = real(10, ctx);
  mpfr_pow_si(tol.get(), tol.get(), 6 - ctx.decimal_digits(), MPFR_RNDN);
  Real scale = abs(a);
  if (scale < 1L) scale = real(1, ctx);
  return abs(a - b) <= tol * scale;
}

}  // namespace detail

/// D_x(z) = sin((2x+1) z) / sin z; x may be any real.
inline KernelEval dirichlet_kernel(const Real& x, const Real& z, const RealContext& ctx) {
  detail::require_regular(z, ctx);
  const mpfr_prec_t work = ctx.bits() + std::max(0L, x.exponent()) + std::max(0L, z.exponent()) + 16;
  Real arg = (x.rounded(work) * 2L + 1L) * z.rounded(work);
  KernelEval k{x, std::nullopt, z, sin_real(arg, ctx) / sin_real(z, ctx), std::nullopt,
               (x * 2L + 1L).rounded(ctx.bits())};
  return k;
}

/// Integer x: closed form plus the explicit sum 1 + 2 sum_{n=1..x} cos(2 n z).
inline KernelEval dirichlet_kernel(const BigInt& x, const Real& z, const RealContext& ctx) {
  if (x < 0) throw DomainError("Dirichlet kernel sum form needs x >= 0");
  KernelEval k = dirichlet_kernel(Real::exact(x), z, ctx);
  k.x_int = x;
  if (!x.fits_ulong_p()) throw DomainError("Dirichlet kernel sum form: x too large to enumerate");
  const unsigned long count = x.get_ui();
  const mpfr_prec_t work = ctx.bits() + static_cast<mpfr_prec_t>(bit_length(x)) + 16;
  Real twice_z = z.rounded(work) * 2L;
  Real sum = real(1, ctx);
  for (unsigned long n = 1; n <= count; ++n) {
    sum = sum + cos_real(twice_z * static_cast<long>(n), ctx) * 2L;
  }
  if (!detail::forms_agree(k.closed_form, sum, ctx)) {
    throw ComputationError("Dirichlet kernel closed and summed forms disagree");
  }
  k.sum_form = std::move(sum);
  return k;
}

/// F_x(z) = sum_{n=0..x} sum_{k=-n..n} cos(2kz) = sin^2((x+1) z) / sin^2 z.
/// The double sum is accumulated as sum_{|k|<=x} (x+1-|k|) cos(2kz).
inline KernelEval fejer_kernel(unsigned long x, const Real& z, const RealContext& ctx) {
  detail::require_regular(z, ctx);
  const mpfr_prec_t work = ctx.bits() + 64 + std::max(0L, z.exponent());
  Real zw = z.rounded(work);
  Real s1 = sin_real(zw * static_cast<long>(x + 1), ctx);
  Real s0 = sin_real(z, ctx);
  Real closed = (s1 * s1) / (s0 * s0);

  Real twice_z = zw * 2L;
  Real sum = real(static_cast<long>(x + 1), ctx);
  for (unsigned long k = 1; k <= x; ++k) {
    sum = sum + cos_real(twice_z * static_cast<long>(k), ctx) * static_cast<long>(2 * (x + 1 - k));
  }
  if (!detail::forms_agree(closed, sum, ctx)) {
    throw ComputationError("Fejer kernel closed and summed forms disagree");
  }
  Real xr = real(static_cast<long>(x), ctx);
  Real bound = (xr + 1L) * (xr + 1L);
  return KernelEval{std::move(xr), BigInt(x), z, std::move(closed), std::move(sum), std::move(bound)};
}

inline Table to_table(const std::string& kind, const KernelEval& k) {
  Table t{{"kernel", "x", "z", "closed_form", "sum_form", "abs_bound"}, {}};
  t.add({kind, k.x_int ? Cell{*k.x_int} : Cell{k.x}, k.z, k.closed_form, k.sum_form ? Cell{*k.sum_form} : Cell{},
         k.abs_bound});
  return t;
}

// -- Shift sequence ------------------------------------------------------------

struct ShiftSequenceTerm {
  std::size_t n = 0;
  BigInt p;
  unsigned long v2 = 0;
  Real x;              // x_n
  BigInt w;            // (2^(2+2v)+1) p^2 / 2^(2v)
  Real sin_at_shift;   // sin((2 x_n + 1) p)
  Real cos_at_shift;   // cos((2 x_n + 1) p)
  Real sin_double;     // sin(2 x_n p)
  Real cos_double;     // cos(2 x_n p)
  Real shift_residual; // | |sin shift| - |cos p| |
  Real cos_residual;   // | |cos shift| - |sin p| |
};

/// x_n, w_n and direct evaluations at the shifted argument; throws
/// ComputationError if the shift identities fail at 10^(8-D).
inline ShiftSequenceTerm shift_term(const BigInt& p, const RealContext& ctx, std::size_t n = 0) {
  if (p < 1) throw DomainError("shift term needs p >= 1");
  ShiftSequenceTerm t;
  t.n = n;
  t.p = p;
  t.v2 = v2(p);
  BigInt four_pow;  // 2^(2+2v)
  mpz_ui_pow_ui(four_pow.get_mpz_t(), 2, 2 + 2 * t.v2);
  BigInt square = p * p;
  BigInt w_num = (four_pow + 1) * square;
  mpz_tdiv_q_2exp(t.w.get_mpz_t(), w_num.get_mpz_t(), 2 * t.v2);
  if (mpz_divisible_2exp_p(w_num.get_mpz_t(), 2 * t.v2) == 0) {
    throw ComputationError("w_n is not an integer");
  }

  const mpfr_prec_t work = ctx.bits() + static_cast<mpfr_prec_t>(bit_length(t.w) + bit_length(p)) + 64;
  Real pi = detail::pi_bits(work);
  // x_n = (four_pow + 1) pi p / four_pow
  Real x = pi * ((four_pow + 1) * p);
  mpfr_div_z(x.get(), x.get(), four_pow.get_mpz_t(), MPFR_RNDN);
  t.x = x.rounded(ctx.bits());

  Real doubled = x * p * 2L;  // 2 x_n p = (pi/2) w
  Real shifted = doubled + Real::exact(p);
  t.sin_double = sin_real(doubled, ctx);
  t.cos_double = cos_real(doubled, ctx);
  t.sin_at_shift = sin_real(shifted, ctx);
  t.cos_at_shift = cos_real(shifted, ctx);
  t.shift_residual = abs(abs(t.sin_at_shift) - abs(cos_int(p, ctx)));
  t.cos_residual = abs(abs(t.cos_at_shift) - abs(sin_int(p, ctx)));

  Real tol = real(10, ctx);
  mpfr_pow_si(tol.get(), tol.get(), 8 - ctx.decimal_digits(), MPFR_RNDN);
  Real unit_gap = abs(t.sin_double * t.sin_double - 1L);
  if (t.shift_residual > tol || t.cos_residual > tol || unit_gap > tol || abs(t.cos_double) > tol) {
    throw ComputationError("shift identities fail for p = " + p.get_str());
  }
  return t;
}

// -- Reciprocal sine bound reports ------------------------------------------------

/// Real-parameter technique: x = x_n, evaluated along the numerators of pi.
struct RealTechniqueRow {
  std::size_t n = 0;
  BigInt p;
  unsigned long v2 = 0;
  bool w_odd = false;
  Real shift_residual;
  Real recip_sin;  // 1/sin p_n
  Real ratio;      // |1/sin p_n| / p_n
};

struct RealTechniqueReport {
  std::vector<RealTechniqueRow> rows;
  std::size_t max_ratio_n = 0;
  Real max_ratio;
  Real max_residual;
};

/// Numerators of pi; n is the 1-based row, so row 1 is p = 3.
inline std::vector<Convergent> pi_convergents(std::size_t count) {
  return convergents(expand_constant("pi", count), count);
}

inline RealTechniqueReport recip_sin_bound_real_technique(std::size_t n_max, const RealContext& ctx) {
  RealTechniqueReport report;
  report.max_ratio = real(0, ctx);
  report.max_residual = real(0, ctx);
  const auto conv = pi_convergents(n_max);
  for (std::size_t i = 0; i < n_max; ++i) {
    const BigInt& p = conv[i].p;
    ShiftSequenceTerm s = shift_term(p, ctx, i + 1);
    Real recip = 1L / sin_int(p, ctx);
    Real ratio = abs(recip) / p;
    if (ratio > report.max_ratio) {
      report.max_ratio = ratio;
      report.max_ratio_n = i + 1;
    }
    if (s.shift_residual > report.max_residual) report.max_residual = s.shift_residual;
    report.rows.push_back({i + 1, p, s.v2, mpz_odd_p(s.w.get_mpz_t()) != 0, s.shift_residual, std::move(recip),
                           std::move(ratio)});
  }
  return report;
}

inline Table to_table(const RealTechniqueReport& r) {
  Table t{{"n", "p", "v2", "w_odd", "shift_residual", "recip_sin", "ratio"}, {}};
  for (const auto& row : r.rows) {
    t.add({static_cast<long>(row.n), row.p, static_cast<long>(row.v2), row.w_odd, row.shift_residual,
           row.recip_sin, row.ratio});
  }
  return t;
}

/// Integer-parameter technique: x = floor(x_n).
struct IntegerTechniqueRow {
  std::size_t n = 0;
  BigInt p;
  BigInt floor_x;
  Real shifted_sin;  // |sin((2 floor(x_n) + 1) p_n)|
  Real kernel;       // D_{floor x_n}(p_n)
  Real recip_sin;
  Real ratio;
};

struct IntegerTechniqueReport {
  std::vector<IntegerTechniqueRow> rows;
  std::size_t min_n = 0;
  Real min_shifted_sin;
};

/// One row of the integer technique for an arbitrary p >= 1.
inline IntegerTechniqueRow integer_shift(const BigInt& p, const RealContext& ctx, std::size_t n = 0) {
  if (p < 1) throw DomainError("integer shift needs p >= 1");
  const unsigned long v = v2(p);
  BigInt four_pow;
  mpz_ui_pow_ui(four_pow.get_mpz_t(), 2, 2 + 2 * v);
  const mpfr_prec_t work = ctx.bits() + 2 * static_cast<mpfr_prec_t>(bit_length(p)) + 64;
  Real x = detail::pi_bits(work) * ((four_pow + 1) * p);
  mpfr_div_z(x.get(), x.get(), four_pow.get_mpz_t(), MPFR_RNDN);
  BigInt fx = x.floor_to_bigint();
  Real s_shift = sin_int((2 * fx + 1) * p, ctx);
  Real s_p = sin_int(p, ctx);
  Real recip = 1L / s_p;
  Real ratio = abs(recip) / p;
  return IntegerTechniqueRow{n, p, std::move(fx), abs(s_shift), s_shift / s_p, std::move(recip), std::move(ratio)};
}

inline IntegerTechniqueReport recip_sin_bound_integer_technique(std::size_t n_max, const RealContext& ctx) {
  IntegerTechniqueReport report;
  const auto conv = pi_convergents(n_max);
  for (std::size_t i = 0; i < n_max; ++i) {
    IntegerTechniqueRow row = integer_shift(conv[i].p, ctx, i + 1);
    if (report.rows.empty() || row.shifted_sin < report.min_shifted_sin) {
      report.min_shifted_sin = row.shifted_sin;
      report.min_n = i + 1;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

inline Table to_table(const IntegerTechniqueReport& r) {
  Table t{{"n", "p", "floor_x", "shifted_sin", "kernel", "recip_sin", "ratio"}, {}};
  for (const auto& row : r.rows) {
    t.add({static_cast<long>(row.n), row.p, row.floor_x, row.shifted_sin, row.kernel, row.recip_sin, row.ratio});
  }
  return t;
}

/// Continued-fraction technique: convergents u_m/v_m of sqrt(alpha) = 1/(2 d^(1/4))
/// against |alpha v_m^2 - u_m^2 + v_m/(2 pi)| < 1/(2 pi).
struct CfTechniqueRow {
  std::size_t m = 0;
  BigInt u;
  BigInt v;
  Real value;
  bool holds = false;
};

struct CfTechniqueReport {
  BigInt d;
  Real sqrt_alpha;
  Real bound;  // 1/(2 pi)
  std::vector<CfTechniqueRow> rows;
  std::size_t holds_count = 0;
};

inline CfTechniqueReport cf_technique_check(const BigInt& d, std::size_t m_max, const RealContext& ctx) {
  Real pi = pi_const(ctx);
  Real limit = pow(pi, 4L) * 16L;
  if (!(real(d, ctx) > limit)) {
    throw DomainError("continued-fraction technique needs d > 16 pi^4 (about 1558.545), got " + d.get_str());
  }
  CfTechniqueReport report;
  report.d = d;
  Real fourth_root = sqrt(sqrt(real(d, ctx)));
  report.sqrt_alpha = 1L / (fourth_root * 2L);
  const Real alpha = report.sqrt_alpha * report.sqrt_alpha;
  report.bound = 1L / (pi * 2L);
  PartialQuotients pq = expand(report.sqrt_alpha, m_max + 1, ctx, "sqrt_alpha");
  if (pq.size() < m_max + 1) {
    throw PrecisionError("sqrt(alpha) expansion certified only " + std::to_string(pq.size()) + " quotients");
  }
  const auto conv = convergents(pq, m_max + 1);
  for (std::size_t m = 1; m <= m_max; ++m) {
    const BigInt& u = conv[m].p;
    const BigInt& v = conv[m].q;
    Real value = abs(alpha * (v * v) - real(u * u, ctx) + real(v, ctx) / (pi * 2L));
    const bool holds = value < report.bound;
    report.holds_count += holds ? 1 : 0;
    report.rows.push_back({m, u, v, std::move(value), holds});
  }
  return report;
}

inline Table to_table(const CfTechniqueReport& r) {
  Table t{{"m", "u", "v", "value", "bound", "holds"}, {}};
  for (const auto& row : r.rows) {
    t.add({static_cast<long>(row.m), row.u, row.v, row.value, r.bound, row.holds});
  }
  return t;
}

}  // namespace dioph

#endif  // DIOPH_KERNELS_HPP
