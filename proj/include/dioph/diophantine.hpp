#ifndef DIOPH_DIOPHANTINE_HPP
#define DIOPH_DIOPHANTINE_HPP

#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dioph/contfrac.hpp"
#include "dioph/errors.hpp"
#include "dioph/mpreal.hpp"
#include "dioph/table.hpp"

namespace dioph {

/// |alpha - p/q|, evaluated as |alpha q - p| / q.
inline Real approximation_error(const Real& alpha, const BigInt& p, const BigInt& q, const RealContext& ctx) {
  if (sgn(q) == 0) throw DomainError("approximation error undefined for q = 0");
  if (sgn(q) < 0) throw DomainError("denominator must be positive");
  const mpfr_prec_t work = std::max(ctx.bits(), alpha.precision()) + static_cast<mpfr_prec_t>(bit_length(q));
  Real scaled(work);
  mpfr_mul_z(scaled.get(), alpha.get(), q.get_mpz_t(), MPFR_RNDN);
  mpfr_sub_z(scaled.get(), scaled.get(), p.get_mpz_t(), MPFR_RNDN);
  Real out(ctx.bits());
  mpfr_abs(scaled.get(), scaled.get(), MPFR_RNDN);
  mpfr_div_z(out.get(), scaled.get(), q.get_mpz_t(), MPFR_RNDN);
  return out;
}

/// Empirical irrationality measure -ln|alpha - p/q| / ln q.
inline Real empirical_measure(const Real& alpha, const BigInt& p, const BigInt& q, const RealContext& ctx) {
  if (q < 2) throw DomainError("empirical measure undefined for q < 2 (ln q would vanish)");
  Real err = approximation_error(alpha, p, q, ctx);
  if (err.is_zero()) throw DomainError("p/q equals alpha at working precision");
  return -ln_real(err, ctx) / ln_real(real(q, ctx), ctx);
}

/// One row of the measure table; n is the 1-based table row (convergent index n-1).
struct MeasurePoint {
  std::size_t n = 0;
  BigInt p;
  BigInt q;
  Real error;
  std::optional<Real> mu_hat;
};

inline std::vector<MeasurePoint> measure_table(const Real& alpha, const std::vector<Convergent>& conv,
                                               std::size_t n_max, const RealContext& ctx) {
  if (conv.size() < n_max) {
    throw PrecisionError("measure table needs " + std::to_string(n_max) + " convergents, only " +
                         std::to_string(conv.size()) + " available");
  }
  std::vector<MeasurePoint> rows;
  rows.reserve(n_max);
  for (std::size_t i = 0; i < n_max; ++i) {
    const auto& c = conv[i];
    MeasurePoint row{i + 1, c.p, c.q, approximation_error(alpha, c.p, c.q, ctx), std::nullopt};
    if (c.q >= 2) row.mu_hat = empirical_measure(alpha, c.p, c.q, ctx);
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Rows 1..n_max for the convergents of alpha.
inline std::vector<MeasurePoint> measure_table(const Real& alpha, std::size_t n_max, const RealContext& ctx) {
  PartialQuotients pq = expand(alpha, n_max, ctx);
  if (pq.size() < n_max) {
    throw PrecisionError("only " + std::to_string(pq.size()) + " partial quotients certified at " +
                         std::to_string(ctx.decimal_digits()) + " digits, " + std::to_string(n_max) +
                         " requested");
  }
  return measure_table(alpha, convergents(pq, n_max), n_max, ctx);
}

inline Table to_table(const std::vector<MeasurePoint>& rows) {
  Table t{{"n", "p", "q", "error", "mu_hat"}, {}};
  for (const auto& r : rows) {
    t.add({static_cast<long>(r.n), r.p, r.q, r.error, r.mu_hat ? Cell{*r.mu_hat} : Cell{}});
  }
  return t;
}

// -- Inequality audit --------------------------------------------------------

/// Checks at standard convergent index n:
///  (a) 1/(2 q_{n+1} q_n) <= |alpha - p_n/q_n| <= 1/q_n^2
///  (b) |alpha - p_n/q_n| < 1/(sqrt5 q_n^2)             (flag, expected infinitely often)
///  (c) 1/(2 q_n) <= |p_{n+1} - alpha q_{n+1} - 1/q_n| <= 2/q_n
struct AuditRow {
  std::size_t n = 0;
  BigInt p;
  BigInt q;
  Real error;
  Real lower_a;
  Real upper_a;
  bool pass_a = false;
  bool hurwitz = false;
  Real shifted;  // |p_{n+1} - alpha q_{n+1} - 1/q_n|
  bool pass_c = false;
  bool resolved = true;  // false when precision cannot separate the quantities
};

struct AuditReport {
  std::vector<AuditRow> rows;
  bool all_a = true;
  bool all_c = true;
  std::size_t hurwitz_count = 0;
  std::size_t unresolved = 0;
};

inline AuditReport inequality_audit(const Real& alpha, const std::vector<Convergent>& conv, std::size_t first,
                                    std::size_t last, const RealContext& ctx) {
  if (first > last) throw DomainError("empty audit range");
  if (conv.size() < last + 2) {
    throw PrecisionError("audit to n = " + std::to_string(last) + " needs " + std::to_string(last + 2) +
                         " convergents, only " + std::to_string(conv.size()) + " available");
  }
  const mpfr_prec_t bits = ctx.bits();
  const Real root5 = sqrt(real(5, ctx));
  const long alpha_bits = static_cast<long>(std::min(alpha.precision(), bits));
  AuditReport report;
  for (std::size_t n = first; n <= last; ++n) {
    const Convergent& c = conv[n];
    const Convergent& next = conv[n + 1];
    AuditRow row;
    row.n = n;
    row.p = c.p;
    row.q = c.q;
    // |alpha q_{n+1} - p_{n+1}| ~ 1/q_{n+2}; it must sit well above alpha's rounding.
    const long needed = 2 * static_cast<long>(bit_length(next.q)) + 40;
    row.resolved = needed < alpha_bits;

    row.error = approximation_error(alpha, c.p, c.q, ctx);
    const Real qn = real(c.q, ctx);
    const Real qn2 = qn * qn;
    row.lower_a = 1L / (qn * next.q * 2L);
    row.upper_a = 1L / qn2;
    row.pass_a = row.resolved && row.lower_a <= row.error && row.error <= row.upper_a;
    row.hurwitz = row.resolved && row.error < 1L / (root5 * qn2);

    Real residue(std::max(bits, alpha.precision()) + static_cast<mpfr_prec_t>(bit_length(next.q)));
    mpfr_mul_z(residue.get(), alpha.get(), next.q.get_mpz_t(), MPFR_RNDN);
    mpfr_z_sub(residue.get(), next.p.get_mpz_t(), residue.get(), MPFR_RNDN);
    row.shifted = abs(residue - 1L / qn).rounded(bits);
    row.pass_c = row.resolved && (1L / (qn * 2L)) <= row.shifted && row.shifted <= 2L / qn;

    report.all_a = report.all_a && row.pass_a;
    report.all_c = report.all_c && row.pass_c;
    report.hurwitz_count += row.hurwitz ? 1 : 0;
    report.unresolved += row.resolved ? 0 : 1;
    report.rows.push_back(std::move(row));
  }
  return report;
}

inline AuditReport inequality_audit(const Real& alpha, std::size_t first, std::size_t last,
                                    const RealContext& ctx) {
  PartialQuotients pq = expand(alpha, last + 2, ctx);
  if (pq.size() < last + 2) {
    throw PrecisionError("only " + std::to_string(pq.size()) + " partial quotients certified at " +
                         std::to_string(ctx.decimal_digits()) + " digits; audit to n = " +
                         std::to_string(last) + " needs " + std::to_string(last + 2));
  }
  return inequality_audit(alpha, convergents(pq, last + 2), first, last, ctx);
}

inline Table to_table(const AuditReport& report) {
  Table t{{"n", "p", "q", "error", "lower_a", "upper_a", "pass_a", "hurwitz", "shifted", "pass_c", "resolved"}, {}};
  for (const auto& r : report.rows) {
    t.add({static_cast<long>(r.n), r.p, r.q, r.error, r.lower_a, r.upper_a, r.pass_a, r.hurwitz, r.shifted,
           r.pass_c, r.resolved});
  }
  return t;
}

// -- Known-typo annotations for published tables ------------------------------

/// "table row column disposition [note...]", '#' comments.
struct TableAnnotation {
  std::string table;
  long row = 0;
  std::string column;
  std::string disposition;
  std::string note;
};

inline std::vector<TableAnnotation> parse_annotations(std::istream& in) {
  std::vector<TableAnnotation> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    TableAnnotation a;
    if (!(fields >> a.table)) continue;
    std::string row_text;
    if (!(fields >> row_text >> a.column >> a.disposition)) {
      throw ParseError("annotation needs 'table row column disposition'", line_no);
    }
    try {
      std::size_t used = 0;
      a.row = std::stol(row_text, &used);
      if (used != row_text.size()) throw std::invalid_argument(row_text);
    } catch (const std::exception&) {
      throw ParseError("bad row number '" + row_text + "'", line_no);
    }
    std::getline(fields >> std::ws, a.note);
    out.push_back(std::move(a));
  }
  return out;
}

inline std::vector<TableAnnotation> load_annotations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read annotations '" + path + "'");
  return parse_annotations(in);
}

inline const TableAnnotation* find_annotation(const std::vector<TableAnnotation>& list, const std::string& table,
                                              long row, const std::string& column) {
  for (const auto& a : list) {
    if (a.table == table && a.row == row && a.column == column) return &a;
  }
  return nullptr;
}

}  // namespace dioph

#endif  // DIOPH_DIOPHANTINE_HPP
