#pragma once

// The law-verification battery: every closed-form statement about U, V,
// the embedded chain and the hitting schedule, checked by Monte Carlo at a
// pinned tolerance. Shared by the `laws` command and the acceptance suite.

#include "ammfd/amm.hpp"
#include "ammfd/localtime.hpp"
#include "ammfd/parallel.hpp"
#include "ammfd/paths.hpp"
#include "ammfd/stats.hpp"
#include "ammfd/timechange.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ammfd {

struct LawsConfig {
    double c = 0.25;
    std::uint64_t master_seed = 20240611;
    double bandwidth_mult = 5.0;
    /// Path counts are quoted for a reference of 1000 paths and scale by
    /// this factor; below 1 the battery is under-powered.
    double path_scale = 1.0;
    std::size_t k_exact = 200;
    std::size_t k_path = 50;
    std::size_t k_lln = 100;
    bool exact_only = false;

    bool under_powered() const noexcept { return path_scale < 1.0; }
    /// The box kernel smooths the alternating level sum; a width beyond c/8
    /// visibly shrinks Var V_t, so coarse grids get a narrower window.
    double bandwidth(double dt) const { return std::min(default_bandwidth(dt, bandwidth_mult), c / 8.0); }
    std::size_t paths(std::size_t reference) const
    {
        return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(path_scale * static_cast<double>(reference))));
    }
};

struct CriterionReport {
    std::string id;
    std::string name;
    std::vector<TestResult> results;
    double seconds = 0.0;
    double time_limit = 0.0;

    bool within_time() const noexcept { return time_limit <= 0.0 || seconds <= time_limit; }
    bool pass() const noexcept
    {
        return within_time() && std::ranges::all_of(results, [](TestResult const& r) { return r.pass; });
    }
};

namespace detail {

inline TestResult relative_error(double estimate, double target, double tol, std::size_t n, std::string what)
{
    return TestResult::distance(std::abs(estimate / target - 1.0), tol, n,
                                what + " = " + std::to_string(estimate) + " vs " + std::to_string(target));
}

class Stopwatch {
public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace detail

/// Hitting schedules on a fine grid, shared by the exit-time, leg
/// local-time, path CLT and LLN criteria.
struct HittingCampaign {
    double c = 0.0;
    double dt = 0.0;
    double horizon = 0.0;
    std::vector<HittingSchedule> schedules;
    double seconds = 0.0;
};

inline HittingCampaign run_hitting_campaign(LawsConfig const& cfg, std::size_t n_paths, double dt, std::size_t k_max)
{
    detail::Stopwatch clock;
    auto const fee = FeeParams::from_c(cfg.c);
    double const leg = 4.0 * cfg.c * cfg.c;
    // mean of H_{2k+1} is about (2k+1) legs; the margin leaves > 4 sd
    double const horizon = 1.2 * leg * static_cast<double>(2 * k_max + 1) + 10.0 * leg;
    std::size_t const steps = steps_for_horizon(horizon, dt);
    double const h = cfg.bandwidth(dt);
    HittingCampaign out{cfg.c, dt, horizon, {}, 0.0};
    out.schedules = parallel_map(n_paths, [&](std::size_t i) {
        auto const W = simulate_brownian(steps, dt, {cfg.master_seed + 2000, i});
        auto const ltf = estimate_e_local_times(W, fee, h);
        return build_hitting_schedule(W, fee, ltf);
    });
    out.seconds = clock.seconds();
    return out;
}

/// Runs the battery lazily; the hitting campaign is simulated once.
class LawBattery {
public:
    explicit LawBattery(LawsConfig cfg) : cfg_{cfg}, fee_{FeeParams::from_c(cfg.c)} {}

    LawsConfig const& config() const noexcept { return cfg_; }

    CriterionReport skorokhod() const
    {
        detail::Stopwatch clock;
        double const dt = 1e-4;
        double const tol = grid_tolerance(dt);
        std::size_t const n = cfg_.paths(1000);
        auto const reports = parallel_map(n, [&](std::size_t i) {
            auto const B = simulate_brownian(steps_for_horizon(4.0, dt), dt, {cfg_.master_seed + 1000, i});
            return check_skorokhod(construct_amm_path(B, fee_), fee_, tol);
        });
        ViolationReport worst;
        for (auto const& r : reports) {
            worst.merge(r);
        }
        CriterionReport rep{"1", "Skorokhod properties (a)-(d)", {}, 0.0, 60.0};
        rep.results.push_back(TestResult::distance(worst.a, tol, n, "(a) |U_0|"));
        rep.results.push_back(TestResult::distance(worst.b, tol, n, "(b) band excursion"));
        rep.results.push_back(TestResult::distance(worst.c, tol, n, "(c) decrease below upper barrier"));
        rep.results.push_back(TestResult::distance(worst.d, tol, n, "(d) increase above lower barrier"));
        rep.seconds = clock.seconds();
        return rep;
    }

    CriterionReport mean_exit_time()
    {
        auto const& camp = campaign();
        detail::Stopwatch clock;
        std::vector<double> legs;
        for (auto const& s : camp.schedules) {
            auto const d = s.leg_durations(1);
            legs.insert(legs.end(), d.begin(), d.end());
        }
        double const target = 4.0 * cfg_.c * cfg_.c;
        CriterionReport rep{"2", "mean 2c-exit time = 4c^2", {}, 0.0, 300.0};
        double const mean = legs.empty() ? 0.0 : sample_mean(legs);
        rep.results.push_back(TestResult::distance(std::abs(mean - target), 0.02 * target, legs.size(),
                                                   "mean leg duration " + std::to_string(mean)));
        rep.results.push_back(
            TestResult::distance(legs.size() >= 10'000 ? 0.0 : 1.0, 0.0, legs.size(), "at least 1e4 legs"));
        rep.seconds = clock.seconds() + camp.seconds;
        return rep;
    }

    CriterionReport exit_local_time_exact() const
    {
        detail::Stopwatch clock;
        std::size_t const n = 100'000;
        ExactLawSamplers s{cfg_.c, {cfg_.master_seed + 3000, 0}};
        std::vector<double> draws(n);
        for (auto& d : draws) {
            d = sample_exit_local_time(s);
        }
        CriterionReport rep{"3a", "exit local time ~ 2c e (exact sampler)", {}, 0.0, 10.0};
        rep.results.push_back(ks_one_sample(draws, exponential_cdf(2.0 * cfg_.c), std::nullopt,
                                            "KS vs Exp(mean 2c), 99% band"));
        rep.seconds = clock.seconds();
        return rep;
    }

    CriterionReport exit_local_time_paths()
    {
        auto const& camp = campaign();
        detail::Stopwatch clock;
        std::size_t const n = cfg_.paths(2000);
        // legs j = 1, 2, ... of each path are i.i.d.; take the leading ones
        std::vector<double> measured;
        for (std::size_t j = 1; measured.size() < n && j < 2 * cfg_.k_lln; ++j) {
            for (auto const& s : camp.schedules) {
                if (measured.size() < n && j < s.leg_local_time.size()) {
                    measured.push_back(s.leg_local_time[j]);
                }
            }
        }
        ExactLawSamplers s{cfg_.c, {cfg_.master_seed + 3000, 1}};
        std::vector<double> exact(n);
        for (auto& d : exact) {
            d = sample_exit_local_time(s);
        }
        CriterionReport rep{"3b", "leg local times vs exact sampler", {}, 0.0, 300.0};
        rep.results.push_back(ks_two_sample(measured, exact, 0.07, "two-sample KS, path vs exact"));
        rep.seconds = clock.seconds() + camp.seconds;
        return rep;
    }

    CriterionReport embedded_chain() const
    {
        detail::Stopwatch clock;
        double const dt = 2.5e-5;
        double const c = cfg_.c;
        std::size_t const n = cfg_.paths(10'000);
        std::size_t const holdings = 4;
        // first arrival plus four holdings take ~17 c^2; 40 c^2 leaves a thin tail
        double const horizon = 40.0 * c * c;
        std::size_t const steps = steps_for_horizon(horizon, dt);
        double const h = cfg_.bandwidth(dt);
        auto const chains = parallel_map(n, [&](std::size_t i) {
            auto const W = simulate_brownian(steps, dt, {cfg_.master_seed + 4000, i});
            return extract_embedded_chain(W, estimate_e_local_times(W, fee_, h), fee_);
        });
        std::size_t starts_up = 0;
        std::size_t started = 0;
        for (auto const& ch : chains) {
            if (!ch.empty()) {
                ++started;
                starts_up += ch.initial_state() > 0.0 ? 1 : 0;
            }
        }
        auto const est = estimate_jump_rate(chains, {100, holdings});
        double const freq = started ? static_cast<double>(starts_up) / static_cast<double>(started) : 0.0;

        CriterionReport rep{"4", "embedded chain: start and jump rates", {}, 0.0, 600.0};
        rep.results.push_back(TestResult::distance(std::abs(freq - 0.5), 0.02, started,
                                                   "P(start at +c) = " + std::to_string(freq)));
        rep.results.push_back(
            detail::relative_error(est.rate_up, 1.0 / (4.0 * c), 0.07, est.n_up, "rate of +2c jumps"));
        rep.results.push_back(
            detail::relative_error(est.rate_down, 1.0 / (4.0 * c), 0.07, est.n_down, "rate of -2c jumps"));
        rep.results.push_back(detail::relative_error(est.total(), 1.0 / (2.0 * c), 0.05,
                                                     est.uncensored_holdings, "total jump rate"));
        rep.results.push_back(TestResult::distance(static_cast<double>(est.short_chains), 0.01 * static_cast<double>(n),
                                                   n, "chains cut before 4 holdings"));
        rep.seconds = clock.seconds();
        return rep;
    }

    CriterionReport clt_exact() const
    {
        detail::Stopwatch clock;
        ExactLawSamplers s{cfg_.c, {cfg_.master_seed + 5000, 0}};
        auto const stats = clt_statistics(s, cfg_.k_exact, 10'000);
        CriterionReport rep{"5", "CLT V_{H_{2k+1}} / (c sqrt(8k)), exact tier", {}, 0.0, 10.0};
        rep.results.push_back(ks_one_sample(stats.stat_i, normal_cdf, 0.05, "KS vs N(0,1), k = " + std::to_string(cfg_.k_exact)));
        rep.seconds = clock.seconds();
        return rep;
    }

    CriterionReport clt_paths()
    {
        auto const& camp = campaign();
        detail::Stopwatch clock;
        auto const stats = clt_statistics(camp.schedules, cfg_.k_path);
        CriterionReport rep{"6", "CLT V_{H_{2k+1}} / sqrt(H_{2k+1}), path tier", {}, 0.0, 900.0};
        rep.results.push_back(ks_one_sample(stats.stat_ii, normal_cdf, 0.08, "KS vs N(0,1), k = " + std::to_string(cfg_.k_path)));
        rep.results.push_back(TestResult::distance(static_cast<double>(stats.excluded), 0.01 * static_cast<double>(camp.schedules.size()),
                                                   camp.schedules.size(), "schedules without H_{2k+1}"));
        rep.seconds = clock.seconds() + camp.seconds;
        return rep;
    }

    CriterionReport lln()
    {
        auto const& camp = campaign();
        detail::Stopwatch clock;
        auto const stats = clt_statistics(camp.schedules, cfg_.k_lln);
        double const target = 4.0 * cfg_.c * cfg_.c;
        double const mean = stats.lln.empty() ? 0.0 : sample_mean(stats.lln);
        CriterionReport rep{"7", "LLN H_{2k+1} / 2k -> 4c^2", {}, 0.0, 0.0};
        rep.results.push_back(detail::relative_error(mean, target, 0.02, stats.lln.size(), "mean H_{2k+1}/2k"));
        rep.results.push_back(TestResult::distance(static_cast<double>(stats.excluded), 0.01 * static_cast<double>(camp.schedules.size()),
                                                   camp.schedules.size(), "schedules without H_{2k+1}"));
        rep.seconds = clock.seconds() + camp.seconds;
        return rep;
    }

    CriterionReport law_equivalence() const
    {
        detail::Stopwatch clock;
        double const dt = 1e-5;
        std::size_t const n = cfg_.paths(2000);
        std::size_t const steps = steps_for_horizon(1.0, dt);
        double const h = cfg_.bandwidth(dt);
        auto const u1 = parallel_map(n, [&](std::size_t i) {
            auto const B = simulate_brownian(steps, dt, {cfg_.master_seed + 8000, i});
            return construct_amm_path(B, fee_).U.back();
        });
        auto const v1 = parallel_map(n, [&](std::size_t i) {
            auto const W = simulate_brownian(steps, dt, {cfg_.master_seed + 8001, i});
            return build_decomposition(W, fee_, h).V.back();
        });
        CriterionReport rep{"8", "U_1 (reflection) ~ V_1 (local times)", {}, 0.0, 600.0};
        rep.results.push_back(ks_two_sample(u1, v1, 0.07, "two-sample KS"));
        rep.seconds = clock.seconds();
        return rep;
    }

    CriterionReport long_horizon_clt() const
    {
        detail::Stopwatch clock;
        double const dt = 1e-3;
        double const t = 100.0;
        std::size_t const n = cfg_.paths(2000);
        double const h = cfg_.bandwidth(dt);
        auto const vt = parallel_map(n, [&](std::size_t i) {
            auto const W = simulate_brownian(steps_for_horizon(t, dt), dt, {cfg_.master_seed + 9000, i});
            return build_decomposition(W, fee_, h).V.back();
        });
        auto const stats = clt_statistics(std::span<HittingSchedule const>{}, 1, vt, t);
        CriterionReport rep{"9", "CLT V_t / sqrt(t)", {}, 0.0, 0.0};
        rep.results.push_back(TestResult::distance(cfg_.c / std::sqrt(t), 0.05, 1, "c / sqrt(t) small"));
        rep.results.push_back(ks_one_sample(stats.stat_iii, normal_cdf, 0.07, "KS vs N(0,1), t = 100"));
        rep.seconds = clock.seconds();
        return rep;
    }

    CriterionReport paired_variance() const
    {
        detail::Stopwatch clock;
        std::size_t const n = 100'000;
        ExactLawSamplers s{cfg_.c, {cfg_.master_seed + 10000, 0}};
        std::vector<double> draws(n);
        for (auto& d : draws) {
            d = s.paired_increment();
        }
        double const target = 8.0 * cfg_.c * cfg_.c;
        CriterionReport rep{"10", "Var[2c(e1 - e2)] = 8c^2", {}, 0.0, 5.0};
        rep.results.push_back(detail::relative_error(sample_variance(draws), target, 0.05, n, "sample variance"));
        rep.seconds = clock.seconds();
        return rep;
    }

    /// Runs every criterion, reporting each as soon as it finishes.
    std::vector<CriterionReport> run_all(std::function<void(CriterionReport const&)> const& on_done = {})
    {
        std::vector<CriterionReport> out;
        auto record = [&](CriterionReport r) {
            if (on_done) {
                on_done(r);
            }
            out.push_back(std::move(r));
        };
        record(exit_local_time_exact());
        record(clt_exact());
        record(paired_variance());
        if (cfg_.exact_only) {
            return out;
        }
        record(skorokhod());
        record(mean_exit_time());
        record(exit_local_time_paths());
        record(embedded_chain());
        record(clt_paths());
        record(lln());
        record(law_equivalence());
        record(long_horizon_clt());
        return out;
    }

private:
    HittingCampaign const& campaign()
    {
        if (!campaign_) {
            std::size_t const k_max = std::max(cfg_.k_lln, cfg_.k_path);
            campaign_ = run_hitting_campaign(cfg_, cfg_.paths(1000), 1e-5, k_max);
        }
        return *campaign_;
    }

    LawsConfig cfg_;
    FeeParams fee_;
    std::optional<HittingCampaign> campaign_;
};

}  // namespace ammfd
