#include "ammfd/amm.hpp"
#include "ammfd/parallel.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstddef>
#include <vector>

using namespace ammfd;
using ammfd::testing::piecewise_linear;

namespace {

constexpr double kC = 0.25;
constexpr double kStep = 1.0 / 128.0;

FeeParams fee() { return FeeParams::from_c(kC); }

}  // namespace

TEST(FeeParams, GammaAndCAreLinked)
{
    auto const f = FeeParams::from_gamma(0.997);
    EXPECT_DOUBLE_EQ(f.c(), std::log(1.0 / 0.997));
    EXPECT_GT(f.c(), 0.0);
    auto const g = FeeParams::from_c(0.25);
    EXPECT_DOUBLE_EQ(g.gamma(), std::exp(-0.25));

    EXPECT_THROW(FeeParams::from_gamma(1.0), std::invalid_argument);
    EXPECT_THROW(FeeParams::from_gamma(0.0), std::invalid_argument);
    EXPECT_THROW(FeeParams::from_gamma(1.5), std::invalid_argument);
    EXPECT_THROW(FeeParams::from_c(0.0), std::invalid_argument);
    EXPECT_THROW(FeeParams::from_c(-1.0), std::invalid_argument);
}

TEST(ConstructAmm, BouncingBetweenBarriersLeavesUAtZero)
{
    auto const B = piecewise_linear(1e-3, {0.0, kC, -kC, kC}, kStep);
    auto const cons = construct_amm_path(B, fee());
    for (std::size_t i = 0; i < B.size(); ++i) {
        ASSERT_EQ(cons.U[i], 0.0) << "i = " << i;
    }
    ASSERT_EQ(cons.stopping_indices.size(), 3u);
    EXPECT_TRUE(cons.event_A);
    EXPECT_EQ(cons.stopping_indices[0], 32u);
    EXPECT_EQ(cons.stopping_indices[1], 96u);
    EXPECT_EQ(cons.stopping_indices[2], 160u);
    EXPECT_TRUE(check_skorokhod(cons, fee(), 0.0).within(0.0));
}

TEST(ConstructAmm, RiseThenFall)
{
    auto const B = piecewise_linear(1e-3, {0.0, 2 * kC, -2 * kC}, kStep);
    auto const cons = construct_amm_path(B, fee());
    ASSERT_TRUE(cons.event_A);
    ASSERT_EQ(cons.stopping_indices.size(), 2u);
    EXPECT_EQ(cons.stopping_indices[0], 32u);
    // drawdown of 2c from the peak at index 64 lands at B = 0
    EXPECT_EQ(cons.stopping_indices[1], 128u);
    EXPECT_EQ(B[128], 0.0);

    EXPECT_EQ(cons.U[32], 0.0);
    EXPECT_DOUBLE_EQ(cons.U[64], kC);
    EXPECT_DOUBLE_EQ(cons.U[100], kC);
    EXPECT_DOUBLE_EQ(cons.U[128], kC);
    EXPECT_DOUBLE_EQ(cons.U.back(), -kC);
    for (std::size_t i = 129; i < B.size(); ++i) {
        EXPECT_DOUBLE_EQ(cons.U[i], B[i] + kC);
    }
}

TEST(ConstructAmm, MirroredOnComplementOfA)
{
    auto const B = piecewise_linear(1e-3, {0.0, -2 * kC, 2 * kC}, kStep);
    auto const cons = construct_amm_path(B, fee());
    EXPECT_FALSE(cons.event_A);
    EXPECT_FALSE(cons.leg_is_up(0));
    EXPECT_TRUE(cons.leg_is_up(1));
    EXPECT_DOUBLE_EQ(cons.U[64], -kC);
    EXPECT_DOUBLE_EQ(cons.U.back(), kC);
}

TEST(ConstructAmm, PathInsideBandNeverStops)
{
    auto const B = piecewise_linear(1e-3, {0.0, 0.2, -0.2, 0.1, -0.24}, kStep / 4);
    auto const cons = construct_amm_path(B, fee());
    EXPECT_TRUE(cons.stopping_indices.empty());
    for (double u : cons.U.values()) {
        ASSERT_EQ(u, 0.0);
    }
    auto const r = check_skorokhod(cons, fee(), 0.05);
    EXPECT_EQ(r.a, 0.0);
    EXPECT_EQ(r.b, 0.0);
    EXPECT_EQ(r.c, 0.0);
    EXPECT_EQ(r.d, 0.0);
}

TEST(ConstructAmm, RejectsNonzeroStart)
{
    SamplePath const B{1e-3, {0.1, 0.2}};
    EXPECT_THROW(construct_amm_path(B, fee()), std::invalid_argument);
}

TEST(CheckSkorokhod, PlantedBandFault)
{
    auto const B = simulate_brownian(20000, 1e-4, {11, 0});
    auto const cons = construct_amm_path(B, fee());
    std::vector<double> u(cons.U.values().begin(), cons.U.values().end());
    u[10000] = B[10000] + kC + 0.1;
    auto const r = check_skorokhod(B, SamplePath{B.dt(), u}, fee(), grid_tolerance(B.dt()));
    EXPECT_NEAR(r.b, 0.1, 1e-12);
    EXPECT_EQ(r.first_failure(grid_tolerance(B.dt())), "b");
}

TEST(CheckSkorokhod, RejectsBadInput)
{
    auto const B = simulate_brownian(100, 1e-3, {1, 0});
    auto const cons = construct_amm_path(B, fee());
    EXPECT_THROW(check_skorokhod(cons, fee(), -1.0), std::invalid_argument);
    SamplePath const other{1e-3, std::vector<double>(50, 0.0)};
    EXPECT_THROW(check_skorokhod(B, other, fee(), 0.1), std::invalid_argument);
    SamplePath const coarse{2e-3, std::vector<double>(B.size(), 0.0)};
    EXPECT_THROW(check_skorokhod(B, coarse, fee(), 0.1), std::invalid_argument);
}

TEST(CheckSkorokhod, SimulatedPathsSatisfyAllProperties)
{
    double const dt = 1e-4;
    double const tol = grid_tolerance(dt);
    auto const reports = parallel_map(50, [&](std::size_t i) {
        auto const B = simulate_brownian(steps_for_horizon(4.0, dt), dt, {99, i});
        return check_skorokhod(construct_amm_path(B, fee()), fee(), tol);
    });
    for (auto const& r : reports) {
        EXPECT_TRUE(r.within(tol)) << "a=" << r.a << " b=" << r.b << " c=" << r.c << " d=" << r.d;
    }
}

TEST(CheckSkorokhod, PerturbedProcessesFail)
{
    double const dt = 1e-4;
    double const tol = grid_tolerance(dt);
    std::size_t detected = 0;
    std::size_t const n = 20;
    for (std::size_t i = 0; i < n; ++i) {
        auto const B = simulate_brownian(steps_for_horizon(4.0, dt), dt, {5, i});
        auto const cons = construct_amm_path(B, fee());
        std::vector<double> u(cons.U.values().begin(), cons.U.values().end());
        // a slow extra oscillation of amplitude c/2 keeps U continuous but
        // moves it away from the barriers
        for (std::size_t k = 0; k < u.size(); ++k) {
            u[k] += 0.5 * kC * std::sin(2.0 * M_PI * B.time(k));
        }
        auto const r = check_skorokhod(B, SamplePath{dt, u}, fee(), tol);
        detected += r.within(tol) ? 0 : 1;
    }
    EXPECT_EQ(detected, n);
}

TEST(AmmInvariants, BandFlatnessAndMonotoneLegs)
{
    double const dt = 1e-4;
    double const tol = grid_tolerance(dt);
    auto const f = fee();
    for (std::size_t p = 0; p < 20; ++p) {
        auto const B = simulate_brownian(steps_for_horizon(3.0, dt), dt, {321, p});
        auto const cons = construct_amm_path(B, f);
        auto const& U = cons.U;
        auto const& T = cons.stopping_indices;
        ASSERT_FALSE(T.empty());

        for (std::size_t i = 0; i <= T[0]; ++i) {
            ASSERT_EQ(U[i], 0.0);
        }
        for (std::size_t i = 0; i < B.size(); ++i) {
            ASSERT_LE(U[i], B[i] + kC + tol);
            ASSERT_GE(U[i], B[i] - kC - tol);
        }
        // strictly inside the band U does not move
        for (std::size_t i = 1; i < B.size(); ++i) {
            bool const inside_prev = U[i - 1] > B[i - 1] - kC + tol && U[i - 1] < B[i - 1] + kC - tol;
            bool const inside_now = U[i] > B[i] - kC + tol && U[i] < B[i] + kC - tol;
            if (inside_prev && inside_now) {
                ASSERT_EQ(U[i], U[i - 1]);
            }
        }
        for (std::size_t m = 0; m < T.size(); ++m) {
            std::size_t const end = m + 1 < T.size() ? T[m + 1] : B.size() - 1;
            bool const up = cons.leg_is_up(m);
            EXPECT_NE(up, cons.leg_is_up(m + 1));
            for (std::size_t i = T[m] + 1; i <= end; ++i) {
                if (up) {
                    ASSERT_GE(U[i], U[i - 1]);
                } else {
                    ASSERT_LE(U[i], U[i - 1]);
                }
            }
        }
        EXPECT_EQ(cons.leg_is_up(0), cons.event_A);

        // U meets the lower barrier at the start of up-legs, the upper at the start of down-legs
        for (std::size_t m = 0; m < T.size(); ++m) {
            std::size_t const i = T[m];
            if (cons.leg_is_up(m)) {
                EXPECT_NEAR(U[i], B[i] - kC, tol);
            } else {
                EXPECT_NEAR(U[i], B[i] + kC, tol);
            }
        }
    }
}

TEST(AmmInvariants, EventAIsFair)
{
    double const dt = 1e-3;
    std::size_t const n = 4000;
    auto const flags = parallel_map(n, [&](std::size_t i) {
        auto const B = simulate_brownian(steps_for_horizon(2.0, dt), dt, {777, i});
        auto const cons = construct_amm_path(B, fee());
        return cons.stopping_indices.empty() ? -1 : (cons.event_A ? 1 : 0);
    });
    std::size_t hits = 0;
    std::size_t started = 0;
    for (int f : flags) {
        if (f >= 0) {
            ++started;
            hits += static_cast<std::size_t>(f);
        }
    }
    ASSERT_GT(started, n * 99 / 100);
    double const p = static_cast<double>(hits) / static_cast<double>(started);
    EXPECT_NEAR(p, 0.5, 3.0 * std::sqrt(0.25 / static_cast<double>(started)));
}

TEST(PriceLevels, ZeroUGivesUnitPoolPrice)
{
    auto const B = piecewise_linear(1e-3, {0.0, 0.1, -0.1}, kStep / 4);
    auto const cons = construct_amm_path(B, fee());
    auto const pl = to_price_levels(cons);
    for (double v : pl.p_tilde.values()) {
        EXPECT_EQ(v, 1.0);
    }
    EXPECT_DOUBLE_EQ(pl.p[10], std::exp(B[10]));
}

TEST(PriceLevels, LowerBandTouchAtT0)
{
    auto const B = piecewise_linear(1e-3, {0.0, kC}, kStep);
    auto const f = fee();
    auto const cons = construct_amm_path(B, f);
    auto const pl = to_price_levels(cons);
    std::size_t const i = cons.stopping_indices.at(0);
    EXPECT_EQ(cons.U[i], 0.0);
    EXPECT_NEAR(pl.p_tilde[i], f.gamma() * pl.p[i], 1e-15);
}

TEST(PriceLevels, BandHoldsWithMultiplicativeSlack)
{
    double const dt = 1e-4;
    double const tol = grid_tolerance(dt);
    auto const f = fee();
    auto const B = simulate_brownian(steps_for_horizon(2.0, dt), dt, {8, 8});
    auto const pl = to_price_levels(construct_amm_path(B, f));
    for (std::size_t i = 0; i < B.size(); ++i) {
        ASSERT_LE(pl.p_tilde[i], pl.p[i] / f.gamma() * std::exp(tol));
        ASSERT_GE(pl.p_tilde[i], f.gamma() * pl.p[i] * std::exp(-tol));
    }
}
