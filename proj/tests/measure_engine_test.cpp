#include <gtest/gtest.h>

#include "wiener/measure_engine.hpp"
#include "wiener/oracles.hpp"

using namespace wiener;

namespace {

RefinementPolicy levels(int lo, int hi, bool extrapolate = false) {
    RefinementPolicy p;
    p.start_level = lo;
    p.max_level = hi;
    p.stop_delta = 1e-300;
    p.extrapolate = extrapolate;
    return p;
}

BandSet barrier(double a) { return BandSet(PiecewiseLinear::constant(-kInf), PiecewiseLinear::constant(a)); }

PiecewiseLinear pl(std::vector<Breakpoint> pts) { return PiecewiseLinear::from_points(std::move(pts)); }

}  // namespace

TEST(Oracles, OneSided) {
    EXPECT_NEAR(oracle_one_sided(1.0), 0.6826894921, 1e-10);
    EXPECT_NEAR(oracle_one_sided(0.5), 2.0 * std_normal_cdf(0.5) - 1.0, 1e-15);
    EXPECT_GT(oracle_one_sided(8.0), 1.0 - 1e-14);
    EXPECT_THROW(oracle_one_sided(0.0), DomainError);
    EXPECT_THROW(oracle_one_sided(-1.0), DomainError);
}

TEST(Oracles, TwoSidedGoldenValues) {
    // frozen from the eigenfunction series evaluated in high precision
    EXPECT_NEAR(oracle_two_sided(1.0), 0.3707774297995239, 1e-12);
    EXPECT_NEAR(oracle_two_sided(0.5), 0.009156990289760756, 1e-12);
    EXPECT_NEAR(oracle_two_sided(2.0), 0.9089994761536338, 1e-12);
    for (double a : {0.3, 0.5, 0.8, 1.0, 1.7, 2.5, 4.0})
        EXPECT_NEAR(oracle_two_sided(a), oracles::two_sided_eigen_series(a), 1e-12) << a;
    EXPECT_LT(oracle_two_sided(3.0), 2.0 * std_normal_cdf(3.0) - 1.0);
    EXPECT_THROW(oracle_two_sided(0.0), DomainError);
}

TEST(PhiBand, OneSidedBiasPositiveAndShrinking) {
    const auto est = phi_band(barrier(1.0), levels(0, 8), {});
    ASSERT_EQ(est.alpha_trace.size(), 9u);
    const double truth = oracle_one_sided(1.0);
    double prev_gap = 1.0;
    for (const auto& e : est.alpha_trace) {
        const double gap = e.alpha.value - truth;
        EXPECT_GT(gap, 0.0);
        EXPECT_LT(gap, prev_gap);
        prev_gap = gap;
    }
    // O(2^{-L/2}): the gap roughly scales by 1/sqrt(2) per level at the fine end
    const double g7 = est.alpha_trace[7].alpha.value - truth, g8 = est.alpha_trace[8].alpha.value - truth;
    EXPECT_NEAR(g8 / g7, 1.0 / std::numbers::sqrt2, 0.05);
    EXPECT_EQ(est.stopped_by, StopReason::max_level);
    EXPECT_TRUE(est.monotone_certified);
}

TEST(PhiBand, ExtrapolationHelps) {
    const double truth = oracle_one_sided(1.0);
    const auto raw = phi_band(barrier(1.0), levels(0, 8), {});
    const auto ex = phi_band(barrier(1.0), levels(0, 8, true), {});
    EXPECT_LT(std::abs(ex.value - truth), 0.25 * std::abs(raw.value - truth));
    EXPECT_EQ(ex.last_alpha, raw.value);
}

TEST(PhiBand, DegenerateIsZeroAtEveryLevel) {
    const auto c = pl({{Rational(0), 0.0}, {Rational(1), 0.5}});
    for (int level = 0; level <= 8; ++level) {
        const auto est = phi_band(BandSet(c, c), levels(level, level), {});
        EXPECT_EQ(est.value, 0.0);
        EXPECT_EQ(est.quadrature_error(), 0.0);
    }
}

TEST(PhiBand, WholeSpaceIsOne) {
    for (int level = 0; level <= 8; ++level)
        EXPECT_NEAR(phi_band(BandSet::whole_space(), levels(level, level), {}).value, 1.0, 1e-10);
}

TEST(PhiBand, StopsOnDelta) {
    RefinementPolicy p;
    p.max_level = 12;
    p.stop_delta = 1e-2;
    const auto est = phi_band(barrier(1.0), p, {});
    EXPECT_EQ(est.stopped_by, StopReason::delta);
    EXPECT_LT(est.alpha_trace.size(), 13u);
    const auto n = est.alpha_trace.size();
    EXPECT_LT(std::abs(est.alpha_trace[n - 1].alpha.value - est.alpha_trace[n - 2].alpha.value), 1e-2);
}

TEST(PhiBand, McCrossCheck) {
    McConfig mc;
    mc.samples = 200'000;
    const auto est = phi_band(BandSet::constant(-1.5, 1.2), levels(0, 4), {}, mc);
    ASSERT_TRUE(est.mc_cross_check);
    EXPECT_LT(std::abs(est.mc_cross_check->p_hat - est.last_alpha), 3.0 * est.mc_cross_check->std_error);
}

TEST(PhiBand, OffGridBreakpointMatchesDyadicApproximants) {
    auto band_at = [](Rational u) {
        return BandSet(PiecewiseLinear::constant(-kInf), pl({{Rational(0), 1.0}, {u, 0.5}, {Rational(1), 1.0}}));
    };
    const auto exact = phi_band(band_at(Rational(1, 3)), levels(6, 6), {});
    // nearest dyadics to 1/3, at 2^-8 and 2^-12
    std::vector<double> gaps;
    for (int level : {8, 12}) {
        const std::int64_t k = ((std::int64_t{1} << level) + 1) / 3;
        gaps.push_back(std::abs(phi_band(band_at(Rational::dyadic(k, level)), levels(6, 6), {}).value - exact.value));
    }
    EXPECT_LT(gaps[1], 1e-3);
    EXPECT_LE(gaps[1], gaps[0] + 1e-12);
    EXPECT_EQ(exact.final_grid().size(), 65u);
}

TEST(TwoSided, BridgeMonteCarloMatchesDiscreteAlpha) {
    const BandSet band = BandSet::constant(-1, 1);
    McConfig mc;
    mc.samples = 200'000;
    mc.level = 6;
    const auto est = estimate_band_paths(band, mc);
    const auto alpha = phi_band(band, levels(6, 6), {});
    EXPECT_LT(std::abs(est.p_hat - alpha.value), 3.0 * est.std_error);
    // discrete monitoring on 64 times overstates survival relative to the continuous value
    EXPECT_GT(est.p_hat - oracle_two_sided(1.0), 3.0 * est.std_error);
}

TEST(MuExpr, DisjointUnionAgreesWithSum) {
    const BandSet a(PiecewiseLinear::constant(-kInf), pl({{Rational(0), 0.5}, {Rational(1), -1.0}}));
    const BandSet b(pl({{Rational(0), -0.5}, {Rational(1), 1.0}}), PiecewiseLinear::constant(kInf));
    const auto u = mu_expr(SetExpr{UnionSet({a, b})}, levels(8, 8), {});
    const auto sa = mu_expr(SetExpr{a}, levels(8, 8), {});
    const auto sb = mu_expr(SetExpr{b}, levels(8, 8), {});
    EXPECT_NEAR(u.value, sa.value + sb.value, 2e-3);
}

TEST(MuExpr, ComplementAndSingleUnion) {
    const BandSet band = BandSet::constant(-1, 1);
    const auto d = mu_expr(SetExpr{DifferenceSet(BandSet::whole_space(), band)}, levels(0, 6), {});
    const auto b = mu_expr(SetExpr{band}, levels(0, 6), {});
    EXPECT_NEAR(d.value, 1.0 - b.value, 1e-9);
    EXPECT_EQ(d.alpha_trace.size(), 7u);
    const auto u = mu_expr(SetExpr{UnionSet({band})}, levels(0, 6), {});
    EXPECT_NEAR(u.value, b.value, 1e-14);
}

TEST(MuExpr, DifferenceWithMixedBreakpointsMatchesMonteCarlo) {
    const BandSet outer(pl({{Rational(0), -2.0}, {Rational(3, 4), -1.5}, {Rational(1), -2.0}}), PiecewiseLinear::constant(kInf));
    const BandSet inner(pl({{Rational(0), -1.0}, {Rational(1, 8), -1.0}, {Rational(1), -1.0}}), PiecewiseLinear::constant(1.0));
    const SetExpr e{DifferenceSet(outer, inner)};
    const auto est = mu_expr(e, levels(0, 5), {});
    ASSERT_EQ(est.alpha_trace.size(), 6u);
    McConfig mc;
    mc.samples = 400'000;
    const auto m = estimate_expr(e, est.final_grid(), mc);
    EXPECT_LT(std::abs(m.p_hat - est.value), 3.0 * m.std_error);
}

TEST(MuExpr, UnionArityRefused) {
    std::vector<BandSet> many(9, BandSet::constant(-1, 1));
    EXPECT_THROW(mu_expr(SetExpr{UnionSet(many)}, levels(0, 2), {}), RefusalError);
}

TEST(Continuity, ShrinkingWideningDegenerate) {
    const auto pol = levels(0, 6);
    BandFamily shrink{"shrink", {1, 2, 4, 8, 16, 64, 256, 1024},
                      [](double k) { return BandSet::constant(-1 - 1 / k, 1 + 1 / k); }, BandSet::constant(-1, 1),
                      FamilyDirection::shrinking};
    const auto rs = continuity_suite(shrink, pol, {}, 2e-3);
    EXPECT_TRUE(rs.monotone);
    EXPECT_TRUE(rs.converged) << rs.final_gap;

    BandFamily widen{"widen", {0.5, 1, 2, 4, 8}, [](double k) { return BandSet::constant(-k, k); }, std::nullopt,
                     FamilyDirection::widening};
    const auto rw = continuity_suite(widen, pol, {}, 1e-6);
    EXPECT_TRUE(rw.monotone);
    EXPECT_TRUE(rw.converged) << rw.final_gap;

    const auto c = pl({{Rational(0), 0.0}, {Rational(1), 0.5}});
    BandFamily degen{"degenerate", {1, 4, 16, 64},
                     [c](double k) {
                         auto shift = [&](double d) {
                             return pl({{Rational(0), d}, {Rational(1), 0.5 + d}});
                         };
                         return BandSet(shift(-1 / k), shift(1 / k));
                     },
                     BandSet(c, c), FamilyDirection::shrinking};
    const auto rd = continuity_suite(degen, pol, {}, 2e-2);
    EXPECT_EQ(rd.limit_value, 0.0);
    EXPECT_TRUE(rd.monotone);
    EXPECT_TRUE(rd.converged) << rd.final_gap;
}

TEST(Policy, Validation) {
    RefinementPolicy p;
    p.start_level = 3;
    p.max_level = 2;
    EXPECT_THROW(p.validate(), DomainError);
    p.start_level = 0;
    p.max_level = 21;
    EXPECT_THROW(p.validate(), DomainError);
    p.max_level = 4;
    p.stop_delta = 0;
    EXPECT_THROW(p.validate(), DomainError);
}

TEST(Extrapolation, ExactForSqrtGapModel) {
    const double limit = 0.3, c = 0.7;
    const double a9 = limit + c * std::sqrt(1.0 / 512), a10 = limit + c * std::sqrt(1.0 / 1024);
    EXPECT_NEAR(sqrt_gap_extrapolate(a9, a10), limit, 1e-14);
}
