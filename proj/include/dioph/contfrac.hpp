#ifndef DIOPH_CONTFRAC_HPP
#define DIOPH_CONTFRAC_HPP

#include <gmpxx.h>
#include <mpfr.h>

#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dioph/errors.hpp"
#include "dioph/mpreal.hpp"

namespace dioph {

enum class ExpansionStatus {
  complete,             // max_terms certified terms emitted
  precision_exhausted,  // interval of uncertainty straddles a quotient boundary
  terminated,           // the input is rational at working precision
};

inline const char* to_string(ExpansionStatus s) {
  switch (s) {
    case ExpansionStatus::complete: return "complete";
    case ExpansionStatus::precision_exhausted: return "precision_exhausted";
    case ExpansionStatus::terminated: return "terminated";
  }
  return "?";
}

/// Certified partial quotients a_0, a_1, ... of a real constant.
struct PartialQuotients {
  std::string constant_id;
  std::vector<BigInt> terms;
  int source_precision = 0;  // decimal digits
  ExpansionStatus status = ExpansionStatus::complete;

  std::size_t size() const noexcept { return terms.size(); }
};

/// p/q at standard index n (n = 0 is a_0/1).
struct Convergent {
  std::size_t index = 0;
  BigInt p;
  BigInt q;
};

/// Decimal digits needed to certify `terms` quotients of a typical real
/// (Lochs: about 0.97 quotients per decimal digit).
inline int digits_for_terms(std::size_t terms) {
  return static_cast<int>(std::ceil(1.03 * static_cast<double>(terms))) + 50;
}

namespace detail {

// Exact rational num/den with den >= 0; den == 0 marks +infinity.
struct Rational {
  BigInt num;
  BigInt den;
};

inline BigInt floor_of(const Rational& r) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), r.num.get_mpz_t(), r.den.get_mpz_t());
  return q;
}

// r <- 1 / (r - a); returns false when r - a == 0.
inline bool invert_after(Rational& r, const BigInt& a) {
  BigInt rem = r.num - a * r.den;
  if (sgn(rem) == 0) return false;
  r.num = std::move(r.den);
  r.den = std::move(rem);
  return true;
}

}  // namespace detail

/// Expands x into certified partial quotients.
///
/// The value is treated as the interval [x - eps, x + eps] with eps sixteen
/// units in the last binary place (about one unit in the last working decimal
/// digit). Both endpoints are expanded exactly in rational arithmetic and a
/// quotient is emitted only while they agree on it.
inline PartialQuotients expand(const Real& x, std::size_t max_terms, const RealContext& ctx,
                               std::string constant_id = {}) {
  PartialQuotients out;
  out.constant_id = std::move(constant_id);
  out.source_precision = ctx.decimal_digits();
  if (max_terms == 0) return out;

  BigInt mantissa;
  const long e = static_cast<long>(mpfr_get_z_2exp(mantissa.get_mpz_t(), x.get()));
  BigInt scale = 1;
  if (e >= 0) {
    mpz_mul_2exp(mantissa.get_mpz_t(), mantissa.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
  } else {
    mpz_mul_2exp(scale.get_mpz_t(), scale.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  }
  BigInt eps = 16;
  if (e >= 0) mpz_mul_2exp(eps.get_mpz_t(), eps.get_mpz_t(), static_cast<mp_bitcnt_t>(e));

  detail::Rational lo{mantissa - eps, scale};
  detail::Rational hi{mantissa + eps, scale};
  detail::Rational mid{mantissa, scale};

  while (out.terms.size() < max_terms) {
    if (sgn(lo.den) == 0 || sgn(hi.den) == 0) {
      out.status = ExpansionStatus::precision_exhausted;
      return out;
    }
    BigInt a = detail::floor_of(mid);
    // x itself is exactly this rational; no need for the endpoints to agree.
    if (a * mid.den == mid.num) {
      out.terms.push_back(a);
      out.status = ExpansionStatus::terminated;
      return out;
    }
    if (detail::floor_of(lo) != a || detail::floor_of(hi) != a) {
      out.status = ExpansionStatus::precision_exhausted;
      return out;
    }
    out.terms.push_back(a);
    detail::invert_after(mid, a);
    // Reciprocal reverses the order of the endpoints.
    const bool lo_ok = detail::invert_after(lo, a);
    const bool hi_ok = detail::invert_after(hi, a);
    std::swap(lo, hi);
    if (!lo_ok) hi.den = 0;
    if (!hi_ok) lo.den = 0;
  }
  out.status = ExpansionStatus::complete;
  return out;
}

/// Named constants with a certified expansion: pi, e, sqrt2, golden.
inline Real named_constant(const std::string& id, const RealContext& ctx) {
  if (id == "pi") return pi_const(ctx);
  if (id == "sqrt2") return sqrt(real(2, ctx));
  if (id == "golden") return (sqrt(real(5, ctx)) + 1L) / 2L;
  if (id == "e") {
    Real r(ctx.bits());
    mpfr_set_ui(r.get(), 1, MPFR_RNDN);
    mpfr_exp(r.get(), r.get(), MPFR_RNDN);
    return r;
  }
  throw DomainError("unknown constant '" + id + "' (expected pi, e, sqrt2 or golden)");
}

/// Expands a named constant, sizing precision for `terms` quotients and
/// retrying with more digits if the heuristic falls short.
inline PartialQuotients expand_constant(const std::string& id, std::size_t terms,
                                        int min_digits = RealContext::min_digits) {
  int digits = std::max(min_digits, digits_for_terms(terms));
  for (int attempt = 0;; ++attempt) {
    RealContext ctx(digits);
    PartialQuotients pq = expand(named_constant(id, ctx), terms, ctx, id);
    if (pq.status != ExpansionStatus::precision_exhausted || attempt == 4) return pq;
    digits *= 2;
  }
}

/// Convergents 0..count-1 by p_n = a_n p_{n-1} + p_{n-2}, q_n = a_n q_{n-1} + q_{n-2}.
inline std::vector<Convergent> convergents(const PartialQuotients& pq, std::size_t count) {
  if (count > pq.terms.size()) {
    throw DomainError("requested " + std::to_string(count) + " convergents but only " +
                      std::to_string(pq.terms.size()) + " partial quotients are available");
  }
  std::vector<Convergent> out;
  out.reserve(count);
  BigInt p_prev2 = 0, p_prev = 1, q_prev2 = 1, q_prev = 0;
  BigInt g;
  for (std::size_t n = 0; n < count; ++n) {
    const BigInt& a = pq.terms[n];
    BigInt p = a * p_prev + p_prev2;
    BigInt q = a * q_prev + q_prev2;
    mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
    if (g != 1) throw ComputationError("convergent " + std::to_string(n) + " is not in lowest terms");
    p_prev2 = std::move(p_prev);
    p_prev = p;
    q_prev2 = std::move(q_prev);
    q_prev = q;
    out.push_back({n, std::move(p), std::move(q)});
  }
  return out;
}

/// Folds quotients back into the exact finite fraction [a_0; a_1, ..., a_{n-1}].
inline std::pair<BigInt, BigInt> fold(std::span<const BigInt> terms) {
  if (terms.empty()) throw DomainError("cannot fold an empty continued fraction");
  BigInt num = terms.back(), den = 1;
  for (std::size_t i = terms.size() - 1; i-- > 0;) {
    BigInt next = terms[i] * num + den;
    den = std::move(num);
    num = std::move(next);
  }
  return {num, den};
}

// -- OEIS b-file fixtures ---------------------------------------------------

/// Parses "index value" lines; '#' comments and blank lines are skipped.
inline std::map<long, BigInt> parse_bfile(std::istream& in) {
  std::map<long, BigInt> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string index_text, value_text, extra;
    if (!(fields >> index_text)) continue;
    if (!(fields >> value_text) || (fields >> extra)) {
      throw ParseError("malformed b-file line, expected 'index value'", line_no);
    }
    long index = 0;
    try {
      std::size_t used = 0;
      index = std::stol(index_text, &used);
      if (used != index_text.size()) throw std::invalid_argument(index_text);
    } catch (const std::exception&) {
      throw ParseError("bad index '" + index_text + "'", line_no);
    }
    BigInt value;
    if (value.set_str(value_text, 10) != 0) throw ParseError("bad value '" + value_text + "'", line_no);
    if (!out.emplace(index, std::move(value)).second) {
      throw ParseError("duplicate index " + index_text, line_no);
    }
  }
  return out;
}

inline std::map<long, BigInt> load_bfile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read fixture '" + path + "'");
  return parse_bfile(in);
}

struct VerificationEntry {
  long index = 0;
  BigInt expected;
  BigInt actual;
  bool match = false;
};

struct VerificationReport {
  std::vector<VerificationEntry> entries;  // overlapping indices only, ascending
  std::size_t mismatches = 0;
  std::optional<long> first_mismatch;
  bool pass = false;
};

/// Compares seq[i] (carrying index first_index + i) against a b-file.
/// Passes iff at least one index overlaps and every overlapping index matches.
inline VerificationReport verify_fixture(std::span<const BigInt> seq,
                                         const std::map<long, BigInt>& fixture,
                                         long first_index = 0) {
  VerificationReport report;
  for (const auto& [index, expected] : fixture) {
    const long offset = index - first_index;
    if (offset < 0 || offset >= static_cast<long>(seq.size())) continue;
    const BigInt& actual = seq[static_cast<std::size_t>(offset)];
    const bool match = actual == expected;
    if (!match) {
      ++report.mismatches;
      if (!report.first_mismatch) report.first_mismatch = index;
    }
    report.entries.push_back({index, expected, actual, match});
  }
  report.pass = !report.entries.empty() && report.mismatches == 0;
  return report;
}

inline VerificationReport verify_fixture(std::span<const BigInt> seq, const std::string& fixture_path,
                                         long first_index = 0) {
  return verify_fixture(seq, load_bfile(fixture_path), first_index);
}

/// Sequences in OEIS offset convention, built from convergents of pi.
/// numerators/denominators carry the two recurrence seeds at indices 0 and 1
/// (A002485/A002486); "lacunary" is 1 followed by the numerators (A046947, offset 1).
inline std::vector<BigInt> oeis_sequence(const std::string& which, const std::vector<Convergent>& conv) {
  std::vector<BigInt> out;
  if (which == "numerators") {
    out = {0, 1};
    for (const auto& c : conv) out.push_back(c.p);
  } else if (which == "denominators") {
    out = {1, 0};
    for (const auto& c : conv) out.push_back(c.q);
  } else if (which == "lacunary") {
    out = {1};
    for (const auto& c : conv) out.push_back(c.p);
  } else {
    throw DomainError("unknown sequence '" + which + "' (expected numerators, denominators or lacunary)");
  }
  return out;
}

inline long oeis_offset(const std::string& which) { return which == "lacunary" ? 1 : 0; }

}  // namespace dioph

#endif  // DIOPH_CONTFRAC_HPP
