#ifndef DIOPH_CLI_HPP
#define DIOPH_CLI_HPP

// The `dioph` command line. run() takes its streams as arguments so tests can
// drive it in-process.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dioph/cache.hpp"
#include "dioph/contfrac.hpp"
#include "dioph/diophantine.hpp"
#include "dioph/errors.hpp"
#include "dioph/kernels.hpp"
#include "dioph/mpreal.hpp"
#include "dioph/series.hpp"
#include "dioph/stats.hpp"
#include "dioph/table.hpp"

namespace dioph {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;  // domain/computation error, mismatch, bad fixture
inline constexpr int usage = 2;
}  // namespace exit_code

/// Parses a small real expression: factors joined by '*' and '/', each a
/// decimal number, a named constant (pi, e, sqrt2, golden) or sqrt(N).
/// "pi/2", "3*pi/4" and "-0.5" are accepted.
inline Real parse_real_expression(const std::string& text, const RealContext& ctx) {
  std::string s;
  for (char c : text) {
    if (c != ' ') s += c;
  }
  if (s.empty()) throw DomainError("empty number");
  bool negate = false;
  std::size_t pos = 0;
  if (s[0] == '-') {
    negate = true;
    pos = 1;
  }
  auto factor = [&](const std::string& f) -> Real {
    if (f == "pi" || f == "e" || f == "sqrt2" || f == "golden") return named_constant(f, ctx);
    if (f.size() > 6 && f.rfind("sqrt(", 0) == 0 && f.back() == ')') {
      Real inner = parse_real(f.substr(5, f.size() - 6), ctx);
      if (inner.sign() < 0) throw DomainError("sqrt of a negative number");
      return sqrt(inner);
    }
    return parse_real(f, ctx);
  };
  Real value = real(1, ctx);
  char op = '*';
  while (pos <= s.size()) {
    const std::size_t next = s.find_first_of("*/", pos);
    const std::string f = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    if (f.empty()) throw DomainError("malformed expression '" + text + "'");
    Real x = factor(f);
    value = op == '*' ? value * x : value / x;
    if (next == std::string::npos) break;
    op = s[next];
    pos = next + 1;
  }
  return negate ? -value : value;
}

namespace detail {

struct CommonFlags {
  int digits = 50;
  std::string format = "plain";
  bool full = false;
  int sig = 6;
};

inline void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--digits", f.digits, "decimal digits of working precision")->capture_default_str();
  cmd->add_option("--format", f.format, "csv, json or plain")
      ->check(CLI::IsMember({"csv", "json", "plain"}))
      ->capture_default_str();
  cmd->add_flag("--full", f.full, "print every digit of the working precision");
  cmd->add_option("--sig", f.sig, "significant digits printed")->check(CLI::Range(1, 100000))->capture_default_str();
}

inline int significant(const CommonFlags& f, const RealContext& ctx) { return f.full ? ctx.decimal_digits() : f.sig; }

inline void emit(std::ostream& out, const Table& t, const CommonFlags& f, const RealContext& ctx) {
  write_table(out, t, parse_format(f.format), significant(f, ctx));
}

// Expansion with optional cache use; digits rise to the Lochs budget.
inline PartialQuotients obtain_expansion(const std::string& id, std::size_t terms, int digits, bool cache_read,
                                         bool cache_write, std::ostream& err) {
  if (cache_read) {
    CacheLookup lookup = read_cache(id, digits, terms);
    if (lookup.hit) return std::move(*lookup.hit);
    err << "cache: " << lookup.reason << "; computing\n";
  }
  PartialQuotients pq = expand_constant(id, terms, digits);
  if (pq.size() < terms) {
    throw PrecisionError("only " + std::to_string(pq.size()) + " partial quotients of " + id + " certified (" +
                         to_string(pq.status) + ")");
  }
  if (cache_write) write_cache(pq);
  return pq;
}

}  // namespace detail

/// Runs the command line; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Continued fractions of pi, irrationality measures, kernels and Flint Hills series"};
  app.name("dioph");
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  detail::CommonFlags common;
  std::string constant = "pi";
  std::size_t terms = 25;
  bool cache_read = false;
  bool cache_write = false;

  auto add_constant = [&](CLI::App* cmd) {
    cmd->add_option("--constant", constant, "pi, e, sqrt2 or golden")
        ->check(CLI::IsMember({"pi", "e", "sqrt2", "golden"}))
        ->capture_default_str();
  };
  auto add_cache = [&](CLI::App* cmd) {
    cmd->add_flag("--cache-read", cache_read, "reuse a cached expansion if precise enough");
    cmd->add_flag("--cache-write", cache_write, "store the expansion in the cache");
  };

  auto* expand_cmd = app.add_subcommand("expand", "certified partial quotients");
  add_constant(expand_cmd);
  expand_cmd->add_option("--terms", terms, "number of partial quotients")->capture_default_str();
  add_cache(expand_cmd);
  detail::add_common(expand_cmd, common);

  auto* conv_cmd = app.add_subcommand("convergents", "convergents p/q (n is the 1-based row)");
  add_constant(conv_cmd);
  conv_cmd->add_option("--terms", terms, "number of convergents")->capture_default_str();
  add_cache(conv_cmd);
  detail::add_common(conv_cmd, common);

  auto* measure_cmd = app.add_subcommand("measure", "empirical irrationality measure per convergent");
  add_constant(measure_cmd);
  measure_cmd->add_option("--terms", terms, "number of rows")->capture_default_str();
  detail::add_common(measure_cmd, common);

  std::size_t audit_from = 0, audit_to = 100;
  auto* audit_cmd = app.add_subcommand("audit", "approximation inequalities at convergent indices from..to");
  add_constant(audit_cmd);
  audit_cmd->add_option("--from", audit_from, "first standard index")->capture_default_str();
  audit_cmd->add_option("--to", audit_to, "last standard index")->capture_default_str();
  detail::add_common(audit_cmd, common);

  std::string kernel_kind = "dirichlet", kernel_x = "2", kernel_z = "1";
  auto* kernel_cmd = app.add_subcommand("kernel", "Dirichlet or Fejer kernel, closed and summed forms");
  kernel_cmd->add_option("kind", kernel_kind, "dirichlet or fejer")
      ->check(CLI::IsMember({"dirichlet", "fejer"}))
      ->capture_default_str();
  kernel_cmd->add_option("--x", kernel_x, "kernel parameter")->capture_default_str();
  kernel_cmd->add_option("--z", kernel_z, "argument, e.g. 1 or pi/2")->capture_default_str();
  detail::add_common(kernel_cmd, common);

  std::optional<std::string> shift_p;
  auto* shift_cmd = app.add_subcommand("shift", "2-adic shift sequence x_n along numerators of pi");
  shift_cmd->add_option("--terms", terms, "rows (numerators of pi)")->capture_default_str();
  shift_cmd->add_option("--p", shift_p, "a single integer instead of the numerators");
  detail::add_common(shift_cmd, common);

  std::string technique = "table";
  std::string cf_d = "1559";
  std::size_t cf_m = 10;
  auto* recip_cmd = app.add_subcommand("recip-sin", "1/sin p_n table and the kernel-shift bound reports");
  recip_cmd->add_option("--terms", terms, "rows")->capture_default_str();
  recip_cmd->add_option("--technique", technique, "table, real, integer or cf")
      ->check(CLI::IsMember({"table", "real", "integer", "cf"}))
      ->capture_default_str();
  recip_cmd->add_option("--d", cf_d, "d for the continued-fraction technique")->capture_default_str();
  recip_cmd->add_option("--m", cf_m, "convergents for the continued-fraction technique")->capture_default_str();
  detail::add_common(recip_cmd, common);

  auto* gamma_cmd = app.add_subcommand("gamma-reflect", "Gamma(1-p/pi) Gamma(p/pi) = pi/sin p along numerators");
  gamma_cmd->add_option("--terms", terms, "rows")->capture_default_str();
  detail::add_common(gamma_cmd, common);

  std::string family = "flint", u_text = "3", v_text = "2", alpha_text = "sqrt2", variant = "scaled-nearest";
  std::string base_text = "10";
  std::optional<std::string> measure_text;
  unsigned long limit = 355;
  std::vector<unsigned long> points;
  bool report = false;
  auto* series_cmd = app.add_subcommand("series", "partial sums of Flint Hills type series");
  series_cmd->add_option("family", family, "flint, lacunary, alpha-pi or flat")
      ->check(CLI::IsMember({"flint", "lacunary", "alpha-pi", "flat"}))
      ->capture_default_str();
  series_cmd->add_option("--u,--a", u_text, "exponent of n")->capture_default_str();
  series_cmd->add_option("--v,--b", v_text, "exponent of the sine")->capture_default_str();
  series_cmd->add_option("--limit", limit, "last index x")->capture_default_str();
  series_cmd->add_option("--points", points, "several limits; prints (x, P_x) pairs")->delimiter(',');
  series_cmd->add_option("--alpha", alpha_text, "alpha for alpha-pi")->capture_default_str();
  series_cmd->add_option("--variant", variant, "flat: power-nearest, scaled-nearest, power-frac, scaled-frac")
      ->check(CLI::IsMember({"power-nearest", "scaled-nearest", "power-frac", "scaled-frac"}))
      ->capture_default_str();
  series_cmd->add_option("--base", base_text, "flat scaled base")->capture_default_str();
  series_cmd->add_flag("--report", report, "convergence diagnostics instead of the sum");
  series_cmd->add_option("--measure", measure_text, "irrationality measure a of alpha (alpha-pi --report)");
  detail::add_common(series_cmd, common);

  std::string window = "leading";
  bool histogram = false;
  std::optional<long> gk_k;
  auto* stats_cmd = app.add_subcommand("stats", "partial-quotient statistics");
  add_constant(stats_cmd);
  stats_cmd->add_option("--terms", terms, "quotients counted")->capture_default_str();
  stats_cmd->add_option("--window", window, "leading (a_0..a_{n-1}) or fractional (a_1..a_n)")
      ->check(CLI::IsMember({"leading", "fractional"}))
      ->capture_default_str();
  stats_cmd->add_flag("--histogram", histogram, "print the histogram instead of the summary");
  stats_cmd->add_option("--gauss-kuzmin", gk_k, "print the Gauss-Kuzmin frequency p(k) only");
  add_cache(stats_cmd);
  detail::add_common(stats_cmd, common);

  std::string sequence = "numerators", fixture;
  auto* verify_cmd = app.add_subcommand("verify", "compare a convergent sequence with an OEIS b-file");
  verify_cmd->add_option("--sequence", sequence, "numerators, denominators or lacunary")
      ->check(CLI::IsMember({"numerators", "denominators", "lacunary"}))
      ->capture_default_str();
  verify_cmd->add_option("--fixture", fixture, "b-file path")->required();
  detail::add_common(verify_cmd, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return exit_code::ok;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return exit_code::usage;
  }

  try {
    const RealContext ctx(common.digits);
    if (*expand_cmd) {
      const int digits = std::max(common.digits, digits_for_terms(terms));
      PartialQuotients pq = detail::obtain_expansion(constant, terms, digits, cache_read, cache_write, err);
      Table t{{"k", "a"}, {}};
      for (std::size_t k = 0; k < pq.size(); ++k) t.add({static_cast<long>(k), pq.terms[k]});
      detail::emit(out, t, common, ctx);
    } else if (*conv_cmd) {
      const int digits = std::max(common.digits, digits_for_terms(terms));
      PartialQuotients pq = detail::obtain_expansion(constant, terms, digits, cache_read, cache_write, err);
      Table t{{"n", "index", "p", "q"}, {}};
      for (const auto& c : convergents(pq, terms)) {
        t.add({static_cast<long>(c.index + 1), static_cast<long>(c.index), c.p, c.q});
      }
      detail::emit(out, t, common, ctx);
    } else if (*measure_cmd) {
      PartialQuotients pq = expand_constant(constant, terms, std::max(common.digits, digits_for_terms(terms)));
      if (pq.size() < terms) throw PrecisionError("not enough certified partial quotients");
      const auto rows = measure_table(named_constant(constant, ctx), convergents(pq, terms), terms, ctx);
      detail::emit(out, to_table(rows), common, ctx);
    } else if (*audit_cmd) {
      const std::size_t need = audit_to + 2;
      PartialQuotients pq = expand_constant(constant, need);
      if (pq.size() < need) throw PrecisionError("not enough certified partial quotients");
      const auto conv = convergents(pq, need);
      // Enough digits to resolve |alpha q_{n+1} - p_{n+1}| at the last index.
      const auto bits = 2 * bit_length(conv[audit_to + 1].q) + 80;
      const int digits = std::max(common.digits, static_cast<int>(std::ceil(bits * 0.30103)) + 10);
      const RealContext wide = ctx.with_digits(digits);
      const AuditReport rep = inequality_audit(named_constant(constant, wide), conv, audit_from, audit_to, wide);
      detail::emit(out, to_table(rep), common, ctx);
      err << "audit: (a) " << (rep.all_a ? "pass" : "FAIL") << ", (c) " << (rep.all_c ? "pass" : "FAIL")
          << ", hurwitz " << rep.hurwitz_count << "/" << rep.rows.size() << ", unresolved " << rep.unresolved
          << "\n";
      if (!rep.all_a || !rep.all_c) return exit_code::failure;
    } else if (*kernel_cmd) {
      const Real z = parse_real_expression(kernel_z, ctx);
      BigInt xi;
      const bool integral = xi.set_str(kernel_x, 10) == 0;
      KernelEval k = [&] {
        if (kernel_kind == "fejer") {
          if (!integral || xi < 0 || !xi.fits_ulong_p()) throw DomainError("Fejer kernel needs an integer x >= 0");
          return fejer_kernel(xi.get_ui(), z, ctx);
        }
        if (integral) return dirichlet_kernel(xi, z, ctx);
        return dirichlet_kernel(parse_real_expression(kernel_x, ctx), z, ctx);
      }();
      detail::emit(out, to_table(kernel_kind, k), common, ctx);
    } else if (*shift_cmd) {
      std::vector<std::pair<std::size_t, BigInt>> ps;
      if (shift_p) {
        BigInt p;
        if (p.set_str(*shift_p, 10) != 0) throw DomainError("--p must be an integer");
        ps.emplace_back(1, p);
      } else {
        const auto conv = pi_convergents(terms);
        for (std::size_t i = 0; i < terms; ++i) ps.emplace_back(i + 1, conv[i].p);
      }
      Table t{{"n", "p", "v2", "w", "w_odd", "x", "sin_at_shift", "cos_at_shift", "shift_residual"}, {}};
      for (const auto& [n, p] : ps) {
        const ShiftSequenceTerm s = shift_term(p, ctx, n);
        t.add({static_cast<long>(n), p, static_cast<long>(s.v2), s.w, mpz_odd_p(s.w.get_mpz_t()) != 0, s.x,
               s.sin_at_shift, s.cos_at_shift, s.shift_residual});
      }
      detail::emit(out, t, common, ctx);
    } else if (*recip_cmd) {
      if (technique == "table") {
        detail::emit(out, to_table(recip_sin_table(terms, ctx)), common, ctx);
      } else if (technique == "real") {
        const auto rep = recip_sin_bound_real_technique(terms, ctx);
        detail::emit(out, to_table(rep), common, ctx);
        err << "max ratio " << rep.max_ratio.to_string(6) << " at n = " << rep.max_ratio_n << "\n";
      } else if (technique == "integer") {
        const auto rep = recip_sin_bound_integer_technique(terms, ctx);
        detail::emit(out, to_table(rep), common, ctx);
        err << "min |sin((2 floor(x_n)+1) p_n)| " << rep.min_shifted_sin.to_string(6) << " at n = " << rep.min_n
            << "\n";
      } else {
        BigInt d;
        if (d.set_str(cf_d, 10) != 0) throw DomainError("--d must be an integer");
        const auto rep = cf_technique_check(d, cf_m, ctx);
        detail::emit(out, to_table(rep), common, ctx);
        err << "bound holds for " << rep.holds_count << " of " << rep.rows.size() << " convergents\n";
      }
    } else if (*gamma_cmd) {
      detail::emit(out, to_table(gamma_reflection_table(terms, ctx)), common, ctx);
    } else if (*series_cmd) {
      const Real u = parse_real_expression(u_text, ctx);
      const Real v = parse_real_expression(v_text, ctx);
      if (report) {
        SeriesSpec spec{family == "alpha-pi" ? SeriesFamily::alpha_pi : SeriesFamily::flint, u, v, {}, {},
                        FlatArgument::nearest, limit};
        if (family != "flint" && family != "alpha-pi") throw DomainError("--report supports flint and alpha-pi");
        std::optional<Real> a;
        if (family == "alpha-pi") spec.alpha = parse_real_expression(alpha_text, ctx);
        if (measure_text) a = parse_real_expression(*measure_text, ctx);
        detail::emit(out, to_table(convergence_report(spec, ctx, a)), common, ctx);
        return exit_code::ok;
      }
      if (points.empty()) points.push_back(limit);
      std::optional<std::vector<BigInt>> numerators;
      std::optional<Real> alpha;
      Table t{{"x", "value"}, {}};
      std::vector<std::string> warnings;
      for (unsigned long x : points) {
        PartialSumResult r = [&] {
          if (family == "flint") return flint_partial_sum(u, v, x, ctx);
          if (family == "lacunary") {
            if (!numerators) {
              numerators = lacunary_numerators(BigInt(*std::max_element(points.begin(), points.end())));
            }
            return lacunary_partial_sum(u, v, x, *numerators, ctx);
          }
          if (family == "alpha-pi") {
            if (!alpha) alpha = parse_real_expression(alpha_text, ctx);
            return alpha_pi_partial_sum(u, v, *alpha, x, ctx);
          }
          BigInt base;
          if (base.set_str(base_text, 10) != 0) throw DomainError("--base must be an integer");
          const bool power = variant.rfind("power", 0) == 0;
          const bool frac = variant.find("frac") != std::string::npos;
          return flat_hills_partial_sum(power ? SeriesFamily::flat_power : SeriesFamily::flat_scaled,
                                        frac ? FlatArgument::fractional : FlatArgument::nearest, u, v, x, ctx,
                                        base);
        }();
        for (auto& w : r.warnings) warnings.push_back(std::move(w));
        if (points.size() == 1) {
          detail::emit(out, to_table(r), common, ctx);
          for (const auto& w : warnings) err << "warning: " << w << "\n";
          return exit_code::ok;
        }
        t.add({static_cast<long>(x), r.value});
      }
      detail::emit(out, t, common, ctx);
      for (const auto& w : warnings) err << "warning: " << w << "\n";
    } else if (*stats_cmd) {
      if (gk_k) {
        Table t{{"k", "p"}, {}};
        t.add({*gk_k, gauss_kuzmin_p(*gk_k)});
        detail::emit(out, t, common, ctx);
        return exit_code::ok;
      }
      const QuotientWindow w = parse_window(window);
      const std::size_t need = terms + (w == QuotientWindow::fractional ? 1 : 0);
      const int digits = std::max(common.digits, digits_for_terms(need));
      PartialQuotients pq = detail::obtain_expansion(constant, need, digits, cache_read, cache_write, err);
      const QuotientStats s = quotient_histogram(pq, terms, w);
      detail::emit(out, histogram ? histogram_table(s) : summary_table(s), common, ctx);
    } else if (*verify_cmd) {
      const auto expected = load_bfile(fixture);
      if (expected.empty()) throw DomainError("fixture '" + fixture + "' has no entries");
      const long offset = oeis_offset(sequence);
      // Sequence index i >= offset + seeds maps to convergent i - 2.
      const long top = expected.rbegin()->first;
      const std::size_t count = static_cast<std::size_t>(std::max(1L, top - 1));
      PartialQuotients pq = expand_constant("pi", count);
      if (pq.size() < count) throw PrecisionError("not enough certified partial quotients");
      const auto seq = oeis_sequence(sequence, convergents(pq, count));
      const VerificationReport rep = verify_fixture(seq, expected, offset);
      Table t{{"index", "expected", "actual", "match"}, {}};
      for (const auto& e : rep.entries) t.add({e.index, e.expected, e.actual, e.match});
      detail::emit(out, t, common, ctx);
      err << "verify: " << rep.entries.size() << " indices compared, " << rep.mismatches << " mismatches";
      if (rep.first_mismatch) err << ", first at index " << *rep.first_mismatch;
      err << "\n";
      return rep.pass ? exit_code::ok : exit_code::failure;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::failure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::failure;
  }
  return exit_code::ok;
}

}  // namespace dioph

#endif  // DIOPH_CLI_HPP
