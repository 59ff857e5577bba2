#ifndef DIOPH_STATS_HPP
#define DIOPH_STATS_HPP

#include <cmath>
#include <cstddef>
#include <map>
#include <string>

#include "dioph/contfrac.hpp"
#include "dioph/errors.hpp"
#include "dioph/mpreal.hpp"
#include "dioph/table.hpp"

namespace dioph {

/// Gauss-Kuzmin frequency -log2(1 - 1/(k+1)^2).
inline double gauss_kuzmin_p(long k) {
  if (k < 1) throw DomainError("Gauss-Kuzmin frequency needs k >= 1");
  const double t = 1.0 / (static_cast<double>(k) + 1.0);
  return -std::log1p(-t * t) / std::log(2.0);
}

/// sum_{k=1..n} p(k) telescopes to 1 - log2((n+2)/(n+1)).
inline double gauss_kuzmin_cumulative(long n) {
  if (n < 1) throw DomainError("Gauss-Kuzmin cumulative needs n >= 1");
  return 1.0 - std::log1p(1.0 / (static_cast<double>(n) + 1.0)) / std::log(2.0);
}

/// Which n quotients a statistic covers.
///   leading:    positions 1..n, position k holding a_{k-1} (a_0 included)
///   fractional: a_1..a_n
enum class QuotientWindow { leading, fractional };

inline QuotientWindow parse_window(const std::string& s) {
  if (s == "leading") return QuotientWindow::leading;
  if (s == "fractional") return QuotientWindow::fractional;
  throw DomainError("unknown quotient window '" + s + "' (expected leading or fractional)");
}

namespace detail {

inline std::size_t window_start(const PartialQuotients& pq, std::size_t n, QuotientWindow w) {
  if (n < 1) throw DomainError("statistics need n >= 1");
  const std::size_t start = w == QuotientWindow::leading ? 0 : 1;
  if (start + n > pq.size()) {
    throw DomainError("need " + std::to_string(start + n) + " partial quotients, only " +
                      std::to_string(pq.size()) + " available");
  }
  return start;
}

}  // namespace detail

/// (product of n quotients)^(1/n), via a sum of logarithms.
inline Real running_geometric_mean(const PartialQuotients& pq, std::size_t n,
                                   QuotientWindow window = QuotientWindow::leading,
                                   const RealContext& ctx = RealContext(30)) {
  const std::size_t start = detail::window_start(pq, n, window);
  Real log_sum = real(0, ctx);
  for (std::size_t i = start; i < start + n; ++i) {
    if (sgn(pq.terms[i]) <= 0) throw DomainError("geometric mean needs positive quotients");
    log_sum = log_sum + ln_real(real(pq.terms[i], ctx), ctx);
  }
  Real r(ctx.bits());
  Real mean_log = log_sum / static_cast<long>(n);
  mpfr_exp(r.get(), mean_log.get(), MPFR_RNDN);
  return r;
}

/// Quotients above this share one overflow bucket.
inline constexpr unsigned long histogram_cap = 10000;

/// Combined frequency of 1 and 2 quoted in the literature for pi.
inline constexpr double reference_freq12 = 0.5897;

struct QuotientStats {
  std::size_t n_terms = 0;
  QuotientWindow window = QuotientWindow::leading;
  Real geometric_mean;
  std::map<unsigned long, std::size_t> histogram;  // values <= histogram_cap
  std::size_t overflow = 0;
  std::size_t max_index = 0;  // position (leading) or k of a_k (fractional)
  BigInt max_value;
  double freq12 = 0;  // empirical
  double gk12 = 0;    // p(1) + p(2)
};

inline QuotientStats quotient_histogram(const PartialQuotients& pq, std::size_t n,
                                        QuotientWindow window = QuotientWindow::leading) {
  const std::size_t start = detail::window_start(pq, n, window);
  QuotientStats s;
  s.n_terms = n;
  s.window = window;
  s.geometric_mean = running_geometric_mean(pq, n, window);
  for (std::size_t i = start; i < start + n; ++i) {
    const BigInt& a = pq.terms[i];
    if (a <= histogram_cap) {
      ++s.histogram[a.get_ui()];
    } else {
      ++s.overflow;
    }
    if (i == start || a > s.max_value) {
      s.max_value = a;
      s.max_index = window == QuotientWindow::leading ? i + 1 : i;
    }
  }
  const auto count = [&](unsigned long v) {
    auto it = s.histogram.find(v);
    return it == s.histogram.end() ? std::size_t{0} : it->second;
  };
  s.freq12 = static_cast<double>(count(1) + count(2)) / static_cast<double>(n);
  s.gk12 = gauss_kuzmin_p(1) + gauss_kuzmin_p(2);
  return s;
}

inline Table summary_table(const QuotientStats& s) {
  Table t{{"n_terms", "geometric_mean", "max_index", "max_value", "overflow", "freq12", "gk12", "reference_freq12"},
          {}};
  t.add({static_cast<long>(s.n_terms), s.geometric_mean, static_cast<long>(s.max_index), s.max_value,
         static_cast<long>(s.overflow), s.freq12, s.gk12, reference_freq12});
  return t;
}

inline Table histogram_table(const QuotientStats& s) {
  Table t{{"value", "count", "frequency", "gk_expected"}, {}};
  for (const auto& [value, count] : s.histogram) {
    if (value == 0) {
      t.add({static_cast<long>(value), static_cast<long>(count),
             static_cast<double>(count) / static_cast<double>(s.n_terms), Cell{}});
      continue;
    }
    t.add({static_cast<long>(value), static_cast<long>(count),
           static_cast<double>(count) / static_cast<double>(s.n_terms), gauss_kuzmin_p(static_cast<long>(value))});
  }
  if (s.overflow) {
    t.add({std::string(">" + std::to_string(histogram_cap)), static_cast<long>(s.overflow),
           static_cast<double>(s.overflow) / static_cast<double>(s.n_terms),
           1.0 - gauss_kuzmin_cumulative(static_cast<long>(histogram_cap))});
  }
  return t;
}

}  // namespace dioph

#endif  // DIOPH_STATS_HPP
