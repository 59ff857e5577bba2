#ifndef DIOPH_SERIES_HPP
#define DIOPH_SERIES_HPP

// Flint Hills series sum 1/(n^u sin^v n) and its relatives: the lacunary
// restriction to numerators of pi, sin(alpha pi n) denominators, and the
// four Flat Hills variants over pi^n and pi 10^n.

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dioph/contfrac.hpp"
#include "dioph/errors.hpp"
#include "dioph/mpreal.hpp"
#include "dioph/table.hpp"

namespace dioph {

enum class SeriesFamily { flint, lacunary, alpha_pi, flat_power, flat_scaled };

inline const char* to_string(SeriesFamily f) {
  switch (f) {
    case SeriesFamily::flint: return "flint";
    case SeriesFamily::lacunary: return "lacunary";
    case SeriesFamily::alpha_pi: return "alpha_pi";
    case SeriesFamily::flat_power: return "flat_power";
    case SeriesFamily::flat_scaled: return "flat_scaled";
  }
  return "?";
}

/// Flat Hills argument: nearest-integer distance ||.|| or fractional part {.}.
enum class FlatArgument { nearest, fractional };

struct SeriesSpec {
  SeriesFamily family = SeriesFamily::flint;
  Real u;
  Real v;
  std::optional<Real> alpha;       // alpha_pi only
  std::optional<BigInt> flat_base;  // flat_scaled, normally 10
  FlatArgument flat_argument = FlatArgument::nearest;
  unsigned long limit = 1;
};

struct LargestTerm {
  unsigned long index = 0;
  Real value;
};

struct PartialSumResult {
  SeriesSpec spec;
  unsigned long x = 0;
  Real value;
  std::optional<LargestTerm> largest_term;
  Real compensation_residual;  // rounding bound for the compensated sum
  std::size_t term_count = 0;
  std::vector<std::string> warnings;
};

namespace detail {

// Neumaier compensated accumulation in ascending index order.
class CompensatedSum {
 public:
  explicit CompensatedSum(mpfr_prec_t bits)
      : sum_(bits), carry_(bits), magnitude_(bits) {
    mpfr_set_zero(sum_.get(), 1);
    mpfr_set_zero(carry_.get(), 1);
    mpfr_set_zero(magnitude_.get(), 1);
  }

  void add(const Real& term) {
    Real t = sum_ + term;
    if (abs(sum_) >= abs(term)) {
      carry_ = carry_ + ((sum_ - t) + term);
    } else {
      carry_ = carry_ + ((term - t) + sum_);
    }
    sum_ = std::move(t);
    magnitude_ = magnitude_ + abs(term);
    ++count_;
  }

  Real value() const { return (sum_ + carry_).rounded(sum_.precision()); }

  // 2u|s| + n u^2 sum|t_i|, the classical bound for this scheme.
  Real residual() const {
    Real unit(sum_.precision());
    mpfr_set_ui_2exp(unit.get(), 1, -static_cast<long>(sum_.precision()), MPFR_RNDN);
    return abs(value()) * unit * 2L + magnitude_ * unit * unit * static_cast<long>(count_);
  }

  std::size_t count() const noexcept { return count_; }

 private:
  Real sum_;
  Real carry_;
  Real magnitude_;
  std::size_t count_ = 0;
};

// base^e; integer exponents keep the sign of a negative base.
inline Real signed_power(const Real& base, const Real& e, const char* what, unsigned long n) {
  if (e.is_integer() && mpfr_fits_slong_p(e.get(), MPFR_RNDN)) {
    return pow(base, mpfr_get_si(e.get(), MPFR_RNDN));
  }
  if (base.sign() < 0) {
    throw DomainError(std::string(what) + " is negative at n = " + std::to_string(n) +
                      " and the exponent is not an integer");
  }
  return pow(base, e);
}

inline void require_positive(const Real& u, const Real& v) {
  if (!(u > 0L) || !(v > 0L)) throw DomainError("series needs u > 0 and v > 0");
}

struct Accumulation {
  CompensatedSum sum;
  std::optional<LargestTerm> largest;
  std::optional<Real> checkpoint;  // value after the checkpoint index
};

// Sums term(n) over the given ascending indices.
inline Accumulation accumulate(const std::vector<unsigned long>& indices,
                               const std::function<Real(unsigned long)>& term, mpfr_prec_t bits,
                               unsigned long checkpoint = 0) {
  Accumulation acc{CompensatedSum(bits), std::nullopt, std::nullopt};
  for (unsigned long n : indices) {
    if (checkpoint != 0 && n > checkpoint && !acc.checkpoint) acc.checkpoint = acc.sum.value();
    Real t = term(n);
    if (!acc.largest || abs(t) > abs(acc.largest->value)) acc.largest = LargestTerm{n, t};
    acc.sum.add(t);
  }
  if (checkpoint != 0 && !acc.checkpoint) acc.checkpoint = acc.sum.value();
  return acc;
}

inline std::vector<unsigned long> one_to(unsigned long x) {
  std::vector<unsigned long> out(x);
  for (unsigned long n = 1; n <= x; ++n) out[n - 1] = n;
  return out;
}

inline Real flint_term(unsigned long n, const Real& u, const Real& v, const RealContext& ctx) {
  const BigInt m(n);
  Real s = sin_int(m, ctx);
  Real denom = signed_power(real(m, ctx), u, "n", n) * signed_power(s, v, "sin n", n);
  return 1L / denom;
}

inline PartialSumResult finish(SeriesSpec spec, unsigned long x, Accumulation acc) {
  PartialSumResult r;
  r.spec = std::move(spec);
  r.x = x;
  r.value = acc.sum.value();
  r.largest_term = std::move(acc.largest);
  r.compensation_residual = acc.sum.residual();
  r.term_count = acc.sum.count();
  return r;
}

}  // namespace detail

/// P_x = sum_{n=1..x} 1/(n^u sin^v n).
inline PartialSumResult flint_partial_sum(const Real& u, const Real& v, unsigned long x, const RealContext& ctx) {
  detail::require_positive(u, v);
  auto acc = detail::accumulate(
      detail::one_to(x), [&](unsigned long n) { return detail::flint_term(n, u, v, ctx); }, ctx.bits());
  return detail::finish(SeriesSpec{SeriesFamily::flint, u, v, {}, {}, FlatArgument::nearest, x}, x, std::move(acc));
}

/// 1 followed by the numerators of pi, truncated at `limit`.
inline std::vector<BigInt> lacunary_numerators(const BigInt& limit) {
  std::vector<BigInt> out;
  if (limit < 1) return out;
  out.push_back(1);
  const std::size_t terms = 5 * decimal_length(limit) + 10;
  for (const auto& c : convergents(expand_constant("pi", terms), terms)) {
    if (c.p > limit) break;
    out.push_back(c.p);
  }
  return out;
}

/// Q_x = sum over the given numerators p <= x of 1/(p^u sin^v p).
inline PartialSumResult lacunary_partial_sum(const Real& u, const Real& v, unsigned long x,
                                             const std::vector<BigInt>& numerators, const RealContext& ctx) {
  detail::require_positive(u, v);
  std::vector<unsigned long> indices;
  for (const auto& p : numerators) {
    if (p < 1) throw DomainError("lacunary indices must be positive");
    if (p <= x) indices.push_back(p.get_ui());
  }
  auto acc = detail::accumulate(
      indices, [&](unsigned long n) { return detail::flint_term(n, u, v, ctx); }, ctx.bits());
  auto r = detail::finish(SeriesSpec{SeriesFamily::lacunary, u, v, {}, {}, FlatArgument::nearest, x}, x,
                          std::move(acc));
  if (indices.empty()) r.warnings.push_back("no lacunary indices <= " + std::to_string(x) + "; sum is empty");
  return r;
}

inline PartialSumResult lacunary_partial_sum(const Real& u, const Real& v, unsigned long x, const RealContext& ctx) {
  return lacunary_partial_sum(u, v, x, lacunary_numerators(BigInt(x)), ctx);
}

/// P_x with the lacunary indices removed, so P_x = complement + Q_x.
inline PartialSumResult complement_partial_sum(const Real& u, const Real& v, unsigned long x,
                                               const std::vector<BigInt>& numerators, const RealContext& ctx) {
  detail::require_positive(u, v);
  std::vector<unsigned long> indices;
  std::size_t next = 0;
  for (unsigned long n = 1; n <= x; ++n) {
    while (next < numerators.size() && numerators[next] < n) ++next;
    if (next < numerators.size() && numerators[next] == n) continue;
    indices.push_back(n);
  }
  auto acc = detail::accumulate(
      indices, [&](unsigned long n) { return detail::flint_term(n, u, v, ctx); }, ctx.bits());
  return detail::finish(SeriesSpec{SeriesFamily::flint, u, v, {}, {}, FlatArgument::nearest, x}, x, std::move(acc));
}

namespace detail {

inline void require_irrational(const Real& alpha, const RealContext& ctx) {
  if (expand(alpha, 12, ctx).status == ExpansionStatus::terminated) {
    throw DomainError("alpha is rational at working precision");
  }
}

}  // namespace detail

/// sum_{n=1..x} 1/(n^u sin^v(alpha pi n)).
inline PartialSumResult alpha_pi_partial_sum(const Real& u, const Real& v, const Real& alpha, unsigned long x,
                                             const RealContext& ctx) {
  detail::require_positive(u, v);
  detail::require_irrational(alpha, ctx);
  const mpfr_prec_t work = ctx.bits() + 64 + 64;
  const Real alpha_pi = alpha.rounded(work) * detail::pi_bits(work);
  Real floor_tol = real(10, ctx);
  mpfr_pow_si(floor_tol.get(), floor_tol.get(), 5 - ctx.decimal_digits(), MPFR_RNDN);
  auto term = [&](unsigned long n) {
    Real s = sin_real(alpha_pi * static_cast<long>(n), ctx);
    if (abs(s) < floor_tol) {
      throw PrecisionError("|sin(alpha pi n)| is below 10^(" + std::to_string(5 - ctx.decimal_digits()) +
                           ") at n = " + std::to_string(n) + "; raise --digits");
    }
    Real denom = detail::signed_power(real(static_cast<long>(n), ctx), u, "n", n) *
                 detail::signed_power(s, v, "sin(alpha pi n)", n);
    return 1L / denom;
  };
  auto acc = detail::accumulate(detail::one_to(x), term, ctx.bits());
  return detail::finish(SeriesSpec{SeriesFamily::alpha_pi, u, v, alpha, {}, FlatArgument::nearest, x}, x,
                        std::move(acc));
}

/// Flat Hills partial sum of 1/(n^a sin^b t_n), t_n one of ||pi^n||, ||pi B^n||,
/// {pi^n}, {pi B^n}; family flat_power uses pi^n, flat_scaled uses pi B^n.
inline PartialSumResult flat_hills_partial_sum(SeriesFamily family, FlatArgument argument, const Real& a,
                                               const Real& b, unsigned long x, const RealContext& ctx,
                                               const BigInt& base = 10) {
  if (family != SeriesFamily::flat_power && family != SeriesFamily::flat_scaled) {
    throw DomainError("Flat Hills family must be flat_power or flat_scaled");
  }
  if (!(a > 1L)) throw DomainError("Flat Hills series needs a > 1");
  if (b.is_zero()) throw DomainError("Flat Hills series needs b != 0");
  if (family == SeriesFamily::flat_scaled && base < 2) throw DomainError("Flat Hills base must be >= 2");

  // Integer part of pi^n or pi B^n grows by log10(pi) or log10(B) digits per step.
  const double per_step =
      family == SeriesFamily::flat_power ? std::log10(M_PI) : static_cast<double>(decimal_length(base));
  const int extra = static_cast<int>(std::ceil(per_step * static_cast<double>(x))) + 10;
  const RealContext wide = ctx.with_digits(ctx.decimal_digits() + extra);
  const Real pi = pi_const(wide);
  Real tol = real(10, ctx);
  mpfr_pow_si(tol.get(), tol.get(), 5 - ctx.decimal_digits(), MPFR_RNDN);

  Real power = family == SeriesFamily::flat_power ? real(1, wide) : pi;
  auto term = [&](unsigned long n) {
    if (family == SeriesFamily::flat_power) {
      power = power * pi;
    } else {
      power = power * base;
    }
    Real t = argument == FlatArgument::nearest ? abs(power - Real::exact(power.round_to_bigint()))
                                               : power - Real::exact(power.floor_to_bigint());
    t = t.rounded(ctx.bits());
    if (t < tol) {
      throw DomainError("singular Flat Hills term at n = " + std::to_string(n) + ": argument is an integer to " +
                        "working precision");
    }
    Real s = sin_real(t, ctx);
    Real denom = detail::signed_power(real(static_cast<long>(n), ctx), a, "n", n) *
                 detail::signed_power(s, b, "sin t_n", n);
    return 1L / denom;
  };
  auto acc = detail::accumulate(detail::one_to(x), term, ctx.bits());
  SeriesSpec spec{family, a, b, {}, {}, argument, x};
  if (family == SeriesFamily::flat_scaled) spec.flat_base = base;
  return detail::finish(std::move(spec), x, std::move(acc));
}

inline Table to_table(const PartialSumResult& r) {
  Table t{{"family", "u", "v", "x", "value", "largest_index", "largest_term", "compensation_residual"}, {}};
  t.add({std::string(to_string(r.spec.family)), r.spec.u, r.spec.v, static_cast<long>(r.x), r.value,
         r.largest_term ? Cell{static_cast<long>(r.largest_term->index)} : Cell{},
         r.largest_term ? Cell{r.largest_term->value} : Cell{}, r.compensation_residual});
  return t;
}

// -- Convergence diagnostics ---------------------------------------------------

struct ConvergenceDiagnostics {
  SeriesFamily family = SeriesFamily::flint;
  Real margin;  // u - v, or u - (a-1) v
  bool predicted_convergent = false;
  std::optional<Real> binet_ratio;  // phi^(-margin)
  std::optional<Real> tail_bound;   // geometric tail beyond the resonant indices <= limit
  std::size_t resonant_count = 0;
  bool binet_holds = true;          // resonant index n >= phi^k / sqrt5 for k >= 2
  unsigned long limit = 0;
  Real value;                        // P_x
  Real half_value;                   // P_{x/2}
  Real relative_change;              // |P_x - P_{x/2}| / |P_x|
};

/// Predicted convergence from the exponent margin, the Binet tail bound along the
/// resonant indices, and the observed change of P_x over the last doubling.
/// `measure` is required for alpha_pi.
inline ConvergenceDiagnostics convergence_report(const SeriesSpec& spec, const RealContext& ctx,
                                                 const std::optional<Real>& measure = std::nullopt) {
  ConvergenceDiagnostics d;
  d.family = spec.family;
  d.limit = spec.limit;
  std::vector<BigInt> resonant;
  if (spec.family == SeriesFamily::flint) {
    d.margin = spec.u - spec.v;
    const std::size_t terms = 5 * decimal_length(BigInt(spec.limit)) + 10;
    for (const auto& c : convergents(expand_constant("pi", terms), terms)) {
      if (c.p > spec.limit) break;
      resonant.push_back(c.p);
    }
  } else if (spec.family == SeriesFamily::alpha_pi) {
    if (!spec.alpha) throw DomainError("alpha_pi convergence report needs alpha");
    if (!measure) throw DomainError("alpha_pi convergence report needs the irrationality measure a (--measure)");
    d.margin = spec.u - (*measure - 1L) * spec.v;
    const std::size_t terms = 5 * decimal_length(BigInt(spec.limit)) + 10;
    PartialQuotients pq = expand(*spec.alpha, terms, ctx);
    for (const auto& c : convergents(pq, pq.size())) {
      if (c.q > spec.limit) break;
      if (c.q >= 1) resonant.push_back(c.q);
    }
  } else {
    throw DomainError(std::string("convergence report supports flint and alpha_pi, not ") + to_string(spec.family));
  }
  d.predicted_convergent = d.margin > 0L;
  d.resonant_count = resonant.size();

  const Real root5 = sqrt(real(5, ctx));
  const Real phi = (root5 + 1L) / 2L;
  Real phi_k = real(1, ctx);
  for (std::size_t k = 0; k < resonant.size(); ++k) {
    if (k >= 2 && real(resonant[k], ctx) < phi_k / root5) d.binet_holds = false;
    phi_k = phi_k * phi;
  }
  if (d.predicted_convergent) {
    d.binet_ratio = pow(phi, -d.margin);
    // sum_{k >= K} (phi^k / sqrt5)^(-margin) = (phi^K / sqrt5)^(-margin) / (1 - phi^(-margin))
    d.tail_bound = pow(phi_k / root5, -d.margin) / -(*d.binet_ratio - 1L);
  }

  const unsigned long half = std::max(1UL, spec.limit / 2);
  detail::Accumulation acc = [&] {
    if (spec.family == SeriesFamily::flint) {
      return detail::accumulate(
          detail::one_to(spec.limit), [&](unsigned long n) { return detail::flint_term(n, spec.u, spec.v, ctx); },
          ctx.bits(), half);
    }
    const mpfr_prec_t work = ctx.bits() + 128;
    const Real alpha_pi = spec.alpha->rounded(work) * detail::pi_bits(work);
    return detail::accumulate(
        detail::one_to(spec.limit),
        [&](unsigned long n) {
          Real s = sin_real(alpha_pi * static_cast<long>(n), ctx);
          return 1L / (detail::signed_power(real(static_cast<long>(n), ctx), spec.u, "n", n) *
                       detail::signed_power(s, spec.v, "sin(alpha pi n)", n));
        },
        ctx.bits(), half);
  }();
  d.value = acc.sum.value();
  d.half_value = acc.checkpoint ? *acc.checkpoint : d.value;
  d.relative_change = d.value.is_zero() ? real(0, ctx) : abs(d.value - d.half_value) / abs(d.value);
  return d;
}

inline Table to_table(const ConvergenceDiagnostics& d) {
  Table t{{"family", "limit", "margin", "predicted_convergent", "binet_ratio", "tail_bound", "resonant_count",
           "binet_holds", "value", "half_value", "relative_change"},
          {}};
  t.add({std::string(to_string(d.family)), static_cast<long>(d.limit), d.margin, d.predicted_convergent,
         d.binet_ratio ? Cell{*d.binet_ratio} : Cell{}, d.tail_bound ? Cell{*d.tail_bound} : Cell{},
         static_cast<long>(d.resonant_count), d.binet_holds, d.value, d.half_value, d.relative_change});
  return t;
}

// -- Tables over numerators of pi --------------------------------------------------

struct RecipSinRow {
  std::size_t n = 0;  // 1-based row, p = numerator of convergent n-1
  BigInt p;
  Real recip_sin;      // 1/sin p
  Real recip_sin_inv;  // 1/sin(1/p)
  Real ratio;          // sin p / sin(1/p)
};

inline std::vector<RecipSinRow> recip_sin_table(std::size_t n_max, const RealContext& ctx) {
  std::vector<RecipSinRow> rows;
  const auto conv = convergents(expand_constant("pi", n_max), n_max);
  for (std::size_t i = 0; i < n_max; ++i) {
    const BigInt& p = conv[i].p;
    Real s = sin_int(p, ctx);
    Real s_inv = sin_real(1L / real(p, ctx), ctx);
    rows.push_back({i + 1, p, 1L / s, 1L / s_inv, s / s_inv});
  }
  return rows;
}

inline Table to_table(const std::vector<RecipSinRow>& rows) {
  Table t{{"n", "p", "recip_sin", "recip_sin_inv", "ratio"}, {}};
  for (const auto& r : rows) t.add({static_cast<long>(r.n), r.p, r.recip_sin, r.recip_sin_inv, r.ratio});
  return t;
}

/// Gamma in double precision from Euler's product
///   Gamma(x) = (1/x) prod_{k>=1} (1 + 1/k)^x / (1 + x/k),
/// after shifting x into [1, 2) with Gamma(x+1) = x Gamma(x).
inline double euler_product_gamma(double x, long terms = 1000000) {
  if (x <= 0 && x == std::floor(x)) throw DomainError("Gamma has a pole at a non-positive integer");
  double scale = 1.0;
  while (x < 1.0) {
    scale /= x;
    x += 1.0;
  }
  while (x >= 2.0) {
    x -= 1.0;
    scale *= x;
  }
  double log_gamma = -std::log(x);
  for (long k = 1; k <= terms; ++k) {
    const double kk = static_cast<double>(k);
    log_gamma += x * std::log1p(1.0 / kk) - std::log1p(x / kk);
  }
  // Remaining factors contribute about x(x-1)/(2N).
  log_gamma += x * (x - 1.0) / (2.0 * static_cast<double>(terms));
  return scale * std::exp(log_gamma);
}

struct GammaReflectionRow {
  std::size_t n = 0;
  BigInt p;
  Real reflection;  // Gamma(1 - p/pi) Gamma(p/pi) = pi / sin p
  Real scaled;      // pi^2 / (p sin p)
  Real identity_residual;  // |scaled - reflection pi / p|
  std::optional<double> product_check;  // Euler product, rows 1..3
};

inline std::vector<GammaReflectionRow> gamma_reflection_table(std::size_t n_max, const RealContext& ctx) {
  std::vector<GammaReflectionRow> rows;
  const auto conv = convergents(expand_constant("pi", n_max), n_max);
  const Real pi = pi_const(ctx);
  for (std::size_t i = 0; i < n_max; ++i) {
    const BigInt& p = conv[i].p;
    Real s = sin_int(p, ctx);
    Real reflection = pi / s;
    Real scaled = (pi * pi) / (s * p);
    GammaReflectionRow row{i + 1, p, reflection, scaled, abs(scaled - reflection * pi / p), std::nullopt};
    if (i < 3) {
      const double z = p.get_d() / M_PI;
      const double check = euler_product_gamma(1.0 - z) * euler_product_gamma(z);
      if (std::abs(check - reflection.to_double()) > 1e-4 * std::abs(reflection.to_double())) {
        throw ComputationError("Euler product disagrees with the reflection value at p = " + p.get_str());
      }
      row.product_check = check;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Table to_table(const std::vector<GammaReflectionRow>& rows) {
  Table t{{"n", "p", "reflection", "scaled", "identity_residual", "product_check"}, {}};
  for (const auto& r : rows) {
    t.add({static_cast<long>(r.n), r.p, r.reflection, r.scaled, r.identity_residual,
           r.product_check ? Cell{*r.product_check} : Cell{}});
  }
  return t;
}

}  // namespace dioph

#endif  // DIOPH_SERIES_HPP
