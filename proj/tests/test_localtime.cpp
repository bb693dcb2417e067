#include "ammfd/amm.hpp"
#include "ammfd/localtime.hpp"
#include "ammfd/parallel.hpp"
#include "ammfd/stats.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

using namespace ammfd;
using ammfd::testing::constant_path;
using ammfd::testing::piecewise_linear;

TEST(TriangleWave, Values)
{
    double const c = 0.25;
    EXPECT_DOUBLE_EQ(triangle_wave(0.0, c), 0.0);
    EXPECT_DOUBLE_EQ(triangle_wave(3 * c, c), -c);
    EXPECT_DOUBLE_EQ(triangle_wave(5 * c, c), c);
    EXPECT_DOUBLE_EQ(triangle_wave(c, c), c);
    EXPECT_DOUBLE_EQ(triangle_wave(-c, c), -c);
    EXPECT_DOUBLE_EQ(triangle_wave(0.1, c), 0.1);
    EXPECT_DOUBLE_EQ(triangle_wave(0.4, c), 2 * c - 0.4);
}

TEST(TriangleWave, PeriodicBoundedAndLipschitz)
{
    double const c = 0.37;
    double prev = triangle_wave(-10.0, c);
    for (int i = 1; i <= 20000; ++i) {
        double const x = -10.0 + i * 1e-3;
        double const y = triangle_wave(x, c);
        ASSERT_LE(std::abs(y), c + 1e-15);
        ASSERT_NEAR(y, triangle_wave(x + 4 * c, c), 1e-12);
        ASSERT_LE(std::abs(y - prev), 1e-3 + 1e-12);
        if (x >= c && x <= 3 * c) {
            ASSERT_NEAR(y, 2 * c - x, 1e-12);
        }
        prev = y;
    }
}

TEST(ELevels, SignsAlternate)
{
    double const c = 0.5;
    auto const levels = e_levels_in_range(-2.0, 2.0, c);
    ASSERT_EQ(levels.size(), 4u);
    EXPECT_DOUBLE_EQ(levels[0].value(c), -1.5);
    EXPECT_DOUBLE_EQ(levels[3].value(c), 1.5);
    for (auto const& l : levels) {
        // F peaks at +c on the (4k+1)c levels
        EXPECT_DOUBLE_EQ(triangle_wave(l.value(c), c), l.sign() * c);
    }
}

TEST(EstimateLocalTimes, ConstantPathAtLevel)
{
    double const dt = 1e-3;
    double const h = 0.05;
    auto const W = constant_path(dt, 1001, 0.25);
    std::vector<double> const levels{0.25};
    auto const ltf = estimate_local_times(W, levels, h);
    EXPECT_NEAR(ltf.final_value(0), W.horizon() / (2 * h), 1e-9);
    EXPECT_EQ(ltf.value(0, 0), 0.0);
}

TEST(EstimateLocalTimes, FarLevelIsZero)
{
    auto const W = simulate_brownian(10000, 1e-4, {1, 2});
    std::vector<double> const levels{50.0};
    auto const ltf = estimate_local_times(W, levels, default_bandwidth(1e-4));
    EXPECT_EQ(ltf.final_value(0), 0.0);
}

TEST(EstimateLocalTimes, RejectsBadInput)
{
    auto const W = constant_path(1e-3, 10);
    std::vector<double> const levels{0.0};
    EXPECT_THROW(estimate_local_times(W, levels, 0.0), std::invalid_argument);
    EXPECT_THROW(estimate_local_times(W, levels, -1.0), std::invalid_argument);
    EXPECT_THROW(estimate_local_times(W, std::span<double const>{}, 0.1), std::invalid_argument);
}

TEST(EstimateLocalTimes, NondecreasingAndFlatAwayFromLevel)
{
    double const dt = 1e-4;
    double const h = default_bandwidth(dt);
    auto const W = simulate_brownian(20000, dt, {4, 4});
    std::vector<double> const levels{-0.25, 0.0, 0.25};
    auto const ltf = estimate_local_times(W, levels, h);
    for (std::size_t l = 0; l < levels.size(); ++l) {
        auto const s = ltf.series(l);
        ASSERT_EQ(s[0], 0.0);
        for (std::size_t i = 1; i < s.size(); ++i) {
            ASSERT_GE(s[i], s[i - 1]);
            if (std::abs(W[i - 1] - levels[l]) > h) {
                ASSERT_EQ(s[i], s[i - 1]);
            }
        }
    }
}

TEST(EstimateLocalTimes, MeanAtZeroMatchesExpectedAbsoluteValue)
{
    double const dt = 1e-5;
    std::size_t const n = 10000;
    double const h = default_bandwidth(dt);
    std::vector<double> const levels{0.0};
    auto const l1 = parallel_map(n, [&](std::size_t i) {
        auto const W = simulate_brownian(steps_for_horizon(1.0, dt), dt, {2024, i});
        return estimate_local_times(W, levels, h).final_value(0);
    });
    EXPECT_NEAR(sample_mean(l1) / std::sqrt(2.0 / std::numbers::pi), 1.0, 0.03);
}

TEST(Decomposition, InsideBandVIsZero)
{
    auto const fee = FeeParams::from_c(0.25);
    auto const W = piecewise_linear(1e-4, {0.0, 0.15, -0.15, 0.1}, 1.0 / 1024);
    auto const d = build_decomposition(W, fee, 0.05);
    for (std::size_t i = 0; i < W.size(); ++i) {
        ASSERT_EQ(d.V[i], 0.0);
        ASSERT_DOUBLE_EQ(d.beta[i], W[i]);
    }
}

TEST(Decomposition, IdentityAndBandHoldExactly)
{
    auto const fee = FeeParams::from_c(0.25);
    double const dt = 1e-4;
    for (std::size_t p = 0; p < 10; ++p) {
        auto const W = simulate_brownian(steps_for_horizon(3.0, dt), dt, {17, p});
        auto const d = build_decomposition(W, fee, default_bandwidth(dt));
        ASSERT_EQ(d.V[0], 0.0);
        for (std::size_t i = 0; i < W.size(); ++i) {
            ASSERT_EQ(d.beta[i], d.FW[i] + d.V[i]);
            ASSERT_LE(std::abs(d.V[i] - d.beta[i]), fee.c() + 1e-12);
        }
    }
}

TEST(Decomposition, VHasFiniteVariationBoundedByL)
{
    auto const fee = FeeParams::from_c(0.25);
    double const dt = 1e-4;
    auto const W = simulate_brownian(steps_for_horizon(5.0, dt), dt, {6, 1});
    auto const d = build_decomposition(W, fee, default_bandwidth(dt));
    auto const L = additive_functional(d.ltf);
    EXPECT_GT(L.back(), 0.0);
    EXPECT_LE(total_variation(d.V), L.back() + 1e-9);
}

TEST(Decomposition, VMonotoneAwayFromOppositeLevels)
{
    auto const fee = FeeParams::from_c(0.25);
    double const c = fee.c();
    double const dt = 1e-4;
    double const h = default_bandwidth(dt);
    for (std::size_t p = 0; p < 10; ++p) {
        auto const W = simulate_brownian(steps_for_horizon(3.0, dt), dt, {61, p});
        auto const d = build_decomposition(W, fee, h);
        for (std::size_t i = 0; i + 1 < W.size(); ++i) {
            if (d.FW[i] > -c + h) {
                ASSERT_GE(d.V[i + 1], d.V[i]);
            }
            if (d.FW[i] < c - h) {
                ASSERT_LE(d.V[i + 1], d.V[i]);
            }
        }
    }
}

TEST(Decomposition, BetaHasUnitQuadraticVariation)
{
    auto const fee = FeeParams::from_c(0.25);
    double const dt = 1e-4;
    auto const qv = parallel_map(100, [&](std::size_t i) {
        auto const W = simulate_brownian(steps_for_horizon(1.0, dt), dt, {303, i});
        return quadratic_variation(build_decomposition(W, fee, default_bandwidth(dt)).beta);
    });
    EXPECT_NEAR(sample_mean(qv), 1.0, 0.05);
}

TEST(Decomposition, BetaOneIsStandardNormal)
{
    auto const fee = FeeParams::from_c(0.25);
    double const dt = 1e-4;
    auto const b1 = parallel_map(2000, [&](std::size_t i) {
        auto const W = simulate_brownian(steps_for_horizon(1.0, dt), dt, {404, i});
        return build_decomposition(W, fee, default_bandwidth(dt)).beta.back();
    });
    auto const r = ks_one_sample(b1, normal_cdf, 0.05);
    EXPECT_TRUE(r.pass) << r.statistic;
}

TEST(Decomposition, VOneMatchesAmmUOne)
{
    auto const fee = FeeParams::from_c(0.25);
    double const dt = 1e-5;
    std::size_t const n = 2000;
    auto const v1 = parallel_map(n, [&](std::size_t i) {
        auto const W = simulate_brownian(steps_for_horizon(1.0, dt), dt, {505, i});
        return build_decomposition(W, fee, default_bandwidth(dt)).V.back();
    });
    auto const u1 = parallel_map(n, [&](std::size_t i) {
        auto const B = simulate_brownian(steps_for_horizon(1.0, dt), dt, {506, i});
        return construct_amm_path(B, fee).U.back();
    });
    auto const r = ks_two_sample(v1, u1, 0.05);
    EXPECT_TRUE(r.pass) << r.statistic;
}

TEST(AdditiveFunctional, ZeroAndSingleLevelFields)
{
    auto const W = constant_path(1e-3, 100, 0.0);
    std::vector<double> const far{5.0};
    auto const zero = additive_functional(estimate_local_times(W, far, 0.1));
    for (double v : zero.values()) {
        ASSERT_EQ(v, 0.0);
    }

    auto const B = simulate_brownian(5000, 1e-4, {3, 3});
    std::vector<double> const one{0.05};
    auto const ltf = estimate_local_times(B, one, 0.05);
    auto const L = additive_functional(ltf);
    auto const s = ltf.series(0);
    for (std::size_t i = 0; i < B.size(); ++i) {
        ASSERT_NEAR(L[i], s[i], 1e-12);
    }
}

TEST(AdditiveFunctional, PositiveByHorizonTen)
{
    auto const fee = FeeParams::from_c(0.5);
    double const dt = 1e-3;
    std::size_t const n = 1000;
    auto const positive = parallel_map(n, [&](std::size_t i) {
        auto const W = simulate_brownian(steps_for_horizon(10.0, dt), dt, {88, i});
        return additive_functional(estimate_e_local_times(W, fee, default_bandwidth(dt))).back() > 0.0 ? 1 : 0;
    });
    std::size_t total = 0;
    for (int p : positive) {
        total += static_cast<std::size_t>(p);
    }
    EXPECT_GT(static_cast<double>(total) / static_cast<double>(n), 0.99);
}

TEST(InverseLocalTime, IdentityFunctional)
{
    double const dt = 1.0 / 64;
    std::vector<double> t(129);
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = static_cast<double>(i) * dt;
    }
    std::vector<double> const ells{0.3, 1.0, 5.0};
    auto const inv = inverse_local_time(SamplePath{dt, t}, ells);
    ASSERT_FALSE(inv.censored(0));
    EXPECT_EQ(*inv.index[0], 20u);
    EXPECT_DOUBLE_EQ(*inv.sigma(0), 20 * dt);
    EXPECT_EQ(*inv.index[1], 65u);
    EXPECT_TRUE(inv.censored(2));
    EXPECT_FALSE(inv.sigma(2).has_value());
}

TEST(InverseLocalTime, RejectsBadInput)
{
    SamplePath const dec{1e-3, {0.0, 0.2, 0.1}};
    std::vector<double> const ells{0.05};
    EXPECT_THROW(inverse_local_time(dec, ells), std::invalid_argument);
    SamplePath const inc{1e-3, {0.0, 0.1, 0.2}};
    std::vector<double> const bad{0.1, 0.1};
    EXPECT_THROW(inverse_local_time(inc, bad), std::invalid_argument);
}

TEST(InverseLocalTime, MonotoneOnSimulatedPaths)
{
    auto const fee = FeeParams::from_c(0.25);
    double const dt = 1e-4;
    std::vector<double> ells;
    for (int j = 1; j <= 60; ++j) {
        ells.push_back(0.05 * j);
    }
    for (std::size_t p = 0; p < 20; ++p) {
        auto const W = simulate_brownian(steps_for_horizon(4.0, dt), dt, {909, p});
        auto const L = additive_functional(estimate_e_local_times(W, fee, default_bandwidth(dt)));
        auto const inv = inverse_local_time(L, ells);
        bool seen_censored = false;
        for (std::size_t j = 0; j < ells.size(); ++j) {
            if (inv.censored(j)) {
                seen_censored = true;
                EXPECT_GE(ells[j], L.back());
                continue;
            }
            ASSERT_FALSE(seen_censored);
            EXPECT_GT(L[*inv.index[j]], ells[j]);
            if (*inv.index[j] > 0) {
                EXPECT_LE(L[*inv.index[j] - 1], ells[j]);
            }
            if (j > 0 && !inv.censored(j - 1)) {
                ASSERT_GE(*inv.index[j], *inv.index[j - 1]);
            }
        }
    }
}
