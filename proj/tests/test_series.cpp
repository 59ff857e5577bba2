#include <gtest/gtest.h>

#include "dioph/series.hpp"
#include "oracles.hpp"
#include "reference_tables.hpp"

using namespace dioph;

namespace {
Real r(long v, const RealContext& ctx) { return real(v, ctx); }
}  // namespace

TEST(Flint, PlotCoordinates) {
  RealContext ctx(50);
  for (const auto& pt : oracle::flint_3_2) {
    const auto s = flint_partial_sum(r(3, ctx), r(2, ctx), pt.x, ctx);
    EXPECT_NEAR(s.value.to_double(), pt.value, 1e-8) << pt.x;
    EXPECT_EQ(s.term_count, pt.x);
  }
  for (const auto& pt : reference::flint_plot) {
    EXPECT_NEAR(flint_partial_sum(r(3, ctx), r(2, ctx), pt.x, ctx).value.to_double(), pt.value, 1e-6) << pt.x;
  }
}

TEST(Flint, LargestTermAtThreeFiftyFiveAndMonotone) {
  RealContext ctx(40);
  const auto s = flint_partial_sum(r(3, ctx), r(2, ctx), 500, ctx);
  ASSERT_TRUE(s.largest_term);
  EXPECT_EQ(s.largest_term->index, 355u);
  double prev = 0;
  for (unsigned long x = 1; x <= 60; ++x) {
    const double v = flint_partial_sum(r(3, ctx), r(2, ctx), x, ctx).value.to_double();
    EXPECT_GE(v, prev);
    prev = v;
  }
  EXPECT_LT(s.compensation_residual, Real::from_double(1e-40, ctx.bits()));
}

TEST(Flint, PrecisionDoublingAgrees) {
  for (auto [u, v, x] : {std::tuple{3L, 2L, 355UL}, std::tuple{2L, 1L, 1000UL}}) {
    RealContext lo(40), hi(80);
    const Real a = flint_partial_sum(r(u, lo), r(v, lo), x, lo).value;
    const Real b = flint_partial_sum(r(u, hi), r(v, hi), x, hi).value;
    Real tol = real(10, lo);
    mpfr_pow_si(tol.get(), tol.get(), 8 - lo.decimal_digits(), MPFR_RNDN);
    EXPECT_LE(abs(a - b) / abs(b), tol) << u << "," << v << "," << x;
  }
}

TEST(Flint, OddNonIntegerExponentRejected) {
  RealContext ctx(30);
  // sin 4 < 0 and v = 1.5 is not an integer.
  EXPECT_THROW(flint_partial_sum(r(3, ctx), parse_real("1.5", ctx), 4, ctx), DomainError);
  EXPECT_THROW(flint_partial_sum(r(0, ctx), r(2, ctx), 4, ctx), DomainError);
}

TEST(Lacunary, NumeratorsAndSums) {
  const auto nums = lacunary_numerators(BigInt(400));
  EXPECT_EQ(nums, (std::vector<BigInt>{1, 3, 22, 333, 355}));
  RealContext ctx(50);
  EXPECT_NEAR(lacunary_partial_sum(r(3, ctx), r(2, ctx), 1, ctx).value.to_double(), 1.41228293, 1e-8);
  EXPECT_NEAR(lacunary_partial_sum(r(3, ctx), r(2, ctx), 3, ctx).value.to_double(), oracle::lacunary_3, 1e-10);
  EXPECT_NEAR(lacunary_partial_sum(r(3, ctx), r(2, ctx), 22, ctx).value.to_double(), oracle::lacunary_22, 1e-10);
  EXPECT_NEAR(lacunary_partial_sum(r(3, ctx), r(2, ctx), 355, ctx).value.to_double(), oracle::lacunary_355, 1e-9);
  const auto empty = lacunary_partial_sum(r(3, ctx), r(2, ctx), 0, ctx);
  EXPECT_TRUE(empty.value.is_zero());
  EXPECT_EQ(empty.warnings.size(), 1u);
}

TEST(Lacunary, SplittingIdentity) {
  RealContext ctx(50);
  const unsigned long x = 500;
  const auto nums = lacunary_numerators(BigInt(x));
  const Real p = flint_partial_sum(r(3, ctx), r(2, ctx), x, ctx).value;
  const Real q = lacunary_partial_sum(r(3, ctx), r(2, ctx), x, nums, ctx).value;
  const Real rest = complement_partial_sum(r(3, ctx), r(2, ctx), x, nums, ctx).value;
  EXPECT_LT(abs(p - q - rest), Real::from_double(1e-45, ctx.bits()));
}

TEST(AlphaPi, Values) {
  RealContext ctx(50);
  const Real root2 = sqrt(r(2, ctx));
  EXPECT_NEAR(alpha_pi_partial_sum(r(3, ctx), r(2, ctx), root2, 1, ctx).value.to_double(), oracle::alpha_pi_sqrt2_1,
              1e-10);
  EXPECT_TRUE(oracle::close_rel(alpha_pi_partial_sum(r(3, ctx), r(2, ctx), root2, 10, ctx).value.to_double(),
                                oracle::alpha_pi_sqrt2_10, 1e-8));
  EXPECT_TRUE(alpha_pi_partial_sum(r(1, ctx), r(1, ctx), root2, 0, ctx).value.is_zero());
  EXPECT_THROW(alpha_pi_partial_sum(r(3, ctx), r(2, ctx), parse_real("0.75", ctx), 5, ctx), DomainError);
}

TEST(AlphaPi, NearIntegerAlphaNamesTheIndex) {
  RealContext ctx(50);
  const Real alpha = r(1, ctx) + parse_real("1e-47", ctx);
  try {
    alpha_pi_partial_sum(r(3, ctx), r(2, ctx), alpha, 3, ctx);
    FAIL();
  } catch (const PrecisionError& e) {
    EXPECT_NE(std::string(e.what()).find("n = 1"), std::string::npos);
  }
}

TEST(FlatHills, Variants) {
  RealContext ctx(40);
  const auto scaled = flat_hills_partial_sum(SeriesFamily::flat_scaled, FlatArgument::nearest, r(2, ctx), r(1, ctx),
                                             1, ctx);
  EXPECT_NEAR(scaled.value.to_double(), oracle::flat_scaled_nearest_1, 1e-10);
  EXPECT_TRUE(flat_hills_partial_sum(SeriesFamily::flat_power, FlatArgument::nearest, r(2, ctx), r(1, ctx), 0, ctx)
                  .value.is_zero());
  const auto frac = flat_hills_partial_sum(SeriesFamily::flat_power, FlatArgument::fractional, r(2, ctx), r(2, ctx),
                                           2, ctx);
  const double want = 1 / std::pow(std::sin(oracle::frac_pi), 2) + 1 / (4 * std::pow(std::sin(oracle::frac_pi2), 2));
  EXPECT_NEAR(frac.value.to_double(), want, 1e-8);
  EXPECT_NEAR(frac.value.to_double(), oracle::flat_power_frac_2_2_2, 1e-8);
  EXPECT_THROW(flat_hills_partial_sum(SeriesFamily::flat_power, FlatArgument::nearest, r(1, ctx), r(1, ctx), 3, ctx),
               DomainError);
  EXPECT_THROW(flat_hills_partial_sum(SeriesFamily::flat_power, FlatArgument::nearest, r(2, ctx), r(0, ctx), 3, ctx),
               DomainError);
  EXPECT_THROW(flat_hills_partial_sum(SeriesFamily::flint, FlatArgument::nearest, r(2, ctx), r(1, ctx), 3, ctx),
               DomainError);
}

TEST(FlatHills, LongPowerRunNeedsAutoPrecision) {
  RealContext ctx(30);
  // pi^200 has 100 integer digits; without the extra digits ||pi^n|| would be noise.
  const auto lo = flat_hills_partial_sum(SeriesFamily::flat_power, FlatArgument::nearest, r(2, ctx), r(1, ctx), 200,
                                         ctx);
  RealContext hi(60);
  const auto ref = flat_hills_partial_sum(SeriesFamily::flat_power, FlatArgument::nearest, r(2, hi), r(1, hi), 200,
                                          hi);
  EXPECT_TRUE(oracle::close_rel(lo.value.to_double(), ref.value.to_double(), 1e-20));
}

TEST(Convergence, Flags) {
  RealContext ctx(30);
  SeriesSpec flint{SeriesFamily::flint, r(3, ctx), r(2, ctx), {}, {}, FlatArgument::nearest, 1000};
  const auto d = convergence_report(flint, ctx);
  EXPECT_TRUE(d.predicted_convergent);
  EXPECT_NEAR(d.margin.to_double(), 1.0, 1e-25);
  ASSERT_TRUE(d.binet_ratio);
  EXPECT_NEAR(d.binet_ratio->to_double(), 2 / (1 + std::sqrt(5.0)), 1e-14);
  EXPECT_TRUE(d.binet_holds);
  EXPECT_LT(d.relative_change.to_double(), 0.05);

  SeriesSpec eps{SeriesFamily::flint, parse_real("1.01", ctx), r(1, ctx), {}, {}, FlatArgument::nearest, 100};
  EXPECT_TRUE(convergence_report(eps, ctx).predicted_convergent);
  SeriesSpec div{SeriesFamily::flint, r(2, ctx), r(3, ctx), {}, {}, FlatArgument::nearest, 100};
  const auto dd = convergence_report(div, ctx);
  EXPECT_FALSE(dd.predicted_convergent);
  EXPECT_FALSE(dd.tail_bound);

  SeriesSpec ap{SeriesFamily::alpha_pi, r(3, ctx), r(2, ctx), sqrt(r(2, ctx)), {}, FlatArgument::nearest, 200};
  EXPECT_THROW(convergence_report(ap, ctx), DomainError);
  const auto da = convergence_report(ap, ctx, r(2, ctx));
  EXPECT_TRUE(da.predicted_convergent);
  EXPECT_NEAR(da.margin.to_double(), 1.0, 1e-25);
  EXPECT_TRUE(da.binet_holds);
}

TEST(RecipSinTable, Rows) {
  RealContext ctx(60);
  const auto rows = recip_sin_table(4, ctx);
  EXPECT_EQ(rows[1].p, 22);
  EXPECT_NEAR(rows[1].recip_sin.to_double(), -112.978, 5e-4);
  EXPECT_NEAR(rows[1].recip_sin_inv.to_double(), 22.0076, 5e-5);
  EXPECT_NEAR(rows[1].ratio.to_double(), -0.194796, 5e-7);
  EXPECT_NEAR(rows[3].recip_sin.to_double(), -33173.7, 0.05);
  EXPECT_NEAR(rows[3].ratio.to_double(), -0.0107013, 5e-8);
  EXPECT_NEAR(rows[0].ratio.to_double(), 0.431303, 5e-7);
  EXPECT_NEAR(rows[0].recip_sin.to_double(), 1 / oracle::sin3, 1e-12);
}

TEST(GammaReflection, RowsIdentityAndProductCheck) {
  RealContext ctx(60);
  const auto rows = gamma_reflection_table(5, ctx);
  EXPECT_TRUE(oracle::close_rel(rows[0].reflection.to_double(), oracle::reflection_3, 1e-11));
  EXPECT_TRUE(oracle::close_rel(rows[1].reflection.to_double(), oracle::reflection_22, 1e-11));
  EXPECT_TRUE(oracle::close_rel(rows[2].reflection.to_double(), oracle::reflection_333, 1e-11));
  EXPECT_NEAR(rows[0].scaled.to_double(), 23.3126, 5e-5);
  EXPECT_NEAR(rows[1].scaled.to_double(), -50.6838, 5e-5);
  for (const auto& row : rows) {
    EXPECT_LT(row.identity_residual, Real::from_double(1e-55, ctx.bits()) * abs(row.scaled));
    EXPECT_EQ(row.product_check.has_value(), row.n <= 3);
  }
  EXPECT_TRUE(oracle::close_rel(*rows[0].product_check, oracle::reflection_3, 1e-4));
}

TEST(GammaReflection, EulerProduct) {
  EXPECT_NEAR(euler_product_gamma(0.5), std::sqrt(M_PI), 1e-9);
  EXPECT_NEAR(euler_product_gamma(5.0), 24.0, 1e-7);
  EXPECT_NEAR(euler_product_gamma(-1.5), 4 * std::sqrt(M_PI) / 3, 1e-8);
  EXPECT_THROW(euler_product_gamma(-2.0), DomainError);
}
