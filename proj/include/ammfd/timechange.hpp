#pragma once

// Time changes of W: the chain seen through the inverse local time on E,
// and the schedule of successive 2c-exits H_k. Exact samplers for the laws
// both reduce to live here as well.

#include "ammfd/amm.hpp"
#include "ammfd/localtime.hpp"
#include "ammfd/paths.hpp"
#include "ammfd/rng.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace ammfd {

class CensoredError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// W observed under the inverse of the additive functional on E.
///
/// State i is entered when W first reaches its level after leaving the
/// previous one; jump_ells[i] is the functional at that grid index, so
/// jump_ells[0] is the value on first arrival at +-c (close to zero). The
/// last state is always censored by the horizon at end_ell.
struct EmbeddedChain {
    double c = 0.0;
    std::vector<double> jump_ells;
    std::vector<ELevel> levels;
    std::vector<double> states;
    /// +1 on levels congruent to c mod 4c, -1 on levels congruent to -c.
    std::vector<int> reduced;
    double end_ell = 0.0;

    bool empty() const noexcept { return states.empty(); }
    double initial_state() const { return states.front(); }
    std::size_t n_jumps() const noexcept { return states.empty() ? 0 : states.size() - 1; }

    void push(ELevel level, double ell)
    {
        levels.push_back(level);
        states.push_back(level.value(c));
        reduced.push_back(level.sign());
        jump_ells.push_back(ell);
    }
};

/// `ltf` must hold the E-levels of W's range; the functional is their sum.
inline EmbeddedChain extract_embedded_chain(SamplePath const& W, LocalTimeField const& ltf, FeeParams const& fee)
{
    if (ltf.n_points() != W.size()) {
        throw std::invalid_argument("extract_embedded_chain: local time field does not match path");
    }
    double const c = fee.c();
    auto const w = W.values();
    EmbeddedChain chain;
    chain.c = c;
    chain.end_ell = ltf.total(w.size() - 1);

    std::size_t i = 0;
    while (i < w.size() && std::abs(w[i]) < c) {
        ++i;
    }
    if (i == w.size()) {
        return chain;
    }
    ELevel level = w[i] >= c ? ELevel{0} : ELevel{-1};
    chain.push(level, ltf.total(i));
    for (++i; i < w.size(); ++i) {
        double const x = level.value(c);
        if (w[i] >= x + 2.0 * c) {
            level = level.up();
            chain.push(level, ltf.total(i));
        } else if (w[i] <= x - 2.0 * c) {
            level = level.down();
            chain.push(level, ltf.total(i));
        }
    }
    return chain;
}

struct JumpRateEstimate {
    double rate_up = 0.0;
    double rate_down = 0.0;
    std::size_t n_up = 0;
    std::size_t n_down = 0;
    /// Local time spent in the completed holdings that were used.
    double exposure = 0.0;
    std::size_t uncensored_holdings = 0;
    /// Chains with fewer completed holdings than requested (skipped).
    std::size_t short_chains = 0;
    bool sufficient = false;

    double total() const noexcept { return rate_up + rate_down; }
};

struct JumpRateOptions {
    std::size_t min_holdings = 100;
    /// Use exactly this many leading holdings per chain (0: all completed).
    std::size_t holdings_per_chain = 0;
};

/// Exponential MLE per jump direction over completed holdings.
///
/// The last holding of a chain is cut by the real-time horizon and is not
/// used. Its exposure cannot be kept either: the horizon usually falls while
/// W travels between levels, a stretch on which the functional is frozen,
/// so counting that exposure without its jump biases the rate low. Taking a
/// fixed number of leading holdings per chain avoids the small-sample bias
/// of stopping at the horizon.
inline JumpRateEstimate estimate_jump_rate(std::span<EmbeddedChain const> chains, JumpRateOptions options = {})
{
    JumpRateEstimate est;
    for (auto const& chain : chains) {
        std::size_t used = chain.n_jumps();
        if (options.holdings_per_chain > 0) {
            if (used < options.holdings_per_chain) {
                ++est.short_chains;
                continue;
            }
            used = options.holdings_per_chain;
        }
        if (used == 0) {
            continue;
        }
        est.exposure += chain.jump_ells[used] - chain.jump_ells.front();
        for (std::size_t i = 1; i <= used; ++i) {
            (chain.states[i] > chain.states[i - 1] ? est.n_up : est.n_down) += 1;
        }
        est.uncensored_holdings += used;
    }
    est.sufficient = est.uncensored_holdings >= options.min_holdings && est.exposure > 0.0;
    if (est.exposure > 0.0) {
        est.rate_up = static_cast<double>(est.n_up) / est.exposure;
        est.rate_down = static_cast<double>(est.n_down) / est.exposure;
    }
    return est;
}

/// Integral over [0, ell] of the reduced chain (+1 / -1).
inline double chain_integral(EmbeddedChain const& chain, double ell)
{
    if (chain.empty()) {
        throw CensoredError("chain_integral: empty chain");
    }
    if (ell > chain.end_ell) {
        throw CensoredError("chain_integral: ell beyond the observed local time");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < chain.states.size(); ++i) {
        double const start = i == 0 ? 0.0 : chain.jump_ells[i];
        if (start >= ell) {
            break;
        }
        double const stop = i + 1 < chain.states.size() ? std::min(chain.jump_ells[i + 1], ell) : ell;
        acc += chain.reduced[i] * (stop - start);
    }
    return acc;
}

struct HittingSchedule {
    double dt = 0.0;
    double c = 0.0;
    /// Grid indices of H_0, H_1, ... (H_0 == H_1 on the event W hits c first).
    std::vector<std::size_t> H;
    std::vector<double> anchors;
    /// leg_local_time[j]: local time at anchors[j] accrued on [H_j, H_{j+1}).
    std::vector<double> leg_local_time;
    std::vector<double> V_at_H;
    bool event_script_A = false;
    /// The horizon cut a leg short (or H_0 was never reached).
    bool censored_tail = true;

    bool reached() const noexcept { return !H.empty(); }
    std::size_t size() const noexcept { return H.size(); }
    double time(std::size_t k) const { return static_cast<double>(H.at(k)) * dt; }

    /// Durations H_{k+1} - H_k for k >= first.
    std::vector<double> leg_durations(std::size_t first = 1) const
    {
        std::vector<double> out;
        for (std::size_t k = first; k + 1 < H.size(); ++k) {
            out.push_back(static_cast<double>(H[k + 1] - H[k]) * dt);
        }
        return out;
    }
};

/// Sign (-1)^(j-1) of leg j in V_{H_m}.
constexpr int leg_sign(std::size_t j) noexcept { return j % 2 == 0 ? -1 : 1; }

/// H_k by successive 2c-exits from the last anchor.
///
/// Leg local times use the occupation kernel of `ltf` (same bandwidth)
/// re-centered at each anchor W_{H_j}, since grid overshoot moves anchors
/// off E. A path that never reaches +-c yields an empty schedule.
inline HittingSchedule build_hitting_schedule(SamplePath const& W, FeeParams const& fee, LocalTimeField const& ltf)
{
    if (ltf.n_points() != W.size() || ltf.dt() != W.dt()) {
        throw std::invalid_argument("build_hitting_schedule: local time field does not match path");
    }
    double const c = fee.c();
    double const h = ltf.bandwidth();
    double const scale = ltf.scale();
    auto const w = W.values();

    HittingSchedule s;
    s.dt = W.dt();
    s.c = c;

    std::size_t i = 0;
    while (i < w.size() && std::abs(w[i]) < c) {
        ++i;
    }
    if (i == w.size()) {
        return s;
    }
    s.event_script_A = w[i] >= c;
    s.H.push_back(i);
    s.anchors.push_back(w[i]);
    s.V_at_H.push_back(0.0);
    if (s.event_script_A) {
        s.H.push_back(i);
        s.anchors.push_back(w[i]);
        s.leg_local_time.push_back(0.0);
        s.V_at_H.push_back(0.0);
    }

    s.censored_tail = false;
    for (;;) {
        std::size_t const start = s.H.back();
        double const anchor = s.anchors.back();
        std::size_t count = 0;
        std::size_t j = start;
        for (; j < w.size(); ++j) {
            if (j > start && std::abs(w[j] - anchor) >= 2.0 * c) {
                break;
            }
            if (std::abs(w[j] - anchor) <= h) {
                ++count;
            }
        }
        if (j == w.size()) {
            s.censored_tail = true;
            break;
        }
        double const leg = scale * static_cast<double>(count);
        std::size_t const leg_index = s.leg_local_time.size();
        s.leg_local_time.push_back(leg);
        s.V_at_H.push_back(s.V_at_H.back() + leg_sign(leg_index) * leg);
        s.H.push_back(j);
        s.anchors.push_back(w[j]);
    }
    return s;
}

/// Exact draws from the laws the path functionals reduce to.
class ExactLawSamplers {
public:
    ExactLawSamplers(double c, SeedSpec seed) : c_{c}, seed_{seed}, rng_{seed}
    {
        if (!(c > 0.0)) {
            throw std::invalid_argument("ExactLawSamplers: c must be positive");
        }
    }

    double c() const noexcept { return c_; }
    SeedSpec seed() const noexcept { return seed_; }

    /// Local time at 0 of Brownian motion when it first leaves (-2c, 2c).
    double exit_local_time() { return 2.0 * c_ * rng_.exponential(); }

    /// 2c (-X e_0 + sum_{j=1}^{m-1} (-1)^{j-1} e_j), X ~ Bernoulli(1/2).
    double V_at_H(std::size_t m)
    {
        bool const x = rng_.bernoulli_half();
        return V_at_H_given(m, x);
    }

    double V_at_H_given(std::size_t m, bool x)
    {
        if (m < 2) {
            throw std::invalid_argument("V_at_H: m must be >= 2");
        }
        double const e0 = rng_.exponential();
        double sum = x ? -e0 : 0.0;
        for (std::size_t j = 1; j < m; ++j) {
            sum += (j % 2 == 1 ? 1.0 : -1.0) * rng_.exponential();
        }
        return 2.0 * c_ * sum;
    }

    /// One centered pair 2c (e_1 - e_2).
    double paired_increment() { return 2.0 * c_ * (rng_.exponential() - rng_.exponential()); }

private:
    double c_;
    SeedSpec seed_;
    PathRng rng_;
};

inline double sample_exit_local_time(ExactLawSamplers& s) { return s.exit_local_time(); }

inline double sample_V_at_H(ExactLawSamplers& s, std::size_t m) { return s.V_at_H(m); }

struct NormalizedSamples {
    std::size_t k = 0;
    std::vector<double> stat_i;    ///< V_{H_{2k+1}} / (c sqrt(8k))
    std::vector<double> stat_ii;   ///< V_{H_{2k+1}} / sqrt(H_{2k+1})
    std::vector<double> stat_iii;  ///< V_t / sqrt(t)
    std::vector<double> lln;       ///< H_{2k+1} / (2k)
    std::size_t excluded = 0;
    bool sufficient = false;
};

inline constexpr std::size_t kMinCltSamples = 500;

/// Exact tier: only statistic (i) is available.
inline NormalizedSamples clt_statistics(ExactLawSamplers& s, std::size_t k, std::size_t n)
{
    if (k < 1) {
        throw std::invalid_argument("clt_statistics: k must be >= 1");
    }
    NormalizedSamples out;
    out.k = k;
    double const norm = s.c() * std::sqrt(8.0 * static_cast<double>(k));
    out.stat_i.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.stat_i.push_back(s.V_at_H(2 * k + 1) / norm);
    }
    out.sufficient = n >= kMinCltSamples;
    return out;
}

/// Path tier from hitting schedules; `terminal_V` (taken at time t) feeds
/// statistic (iii) when given. Schedules without H_{2k+1} are excluded.
inline NormalizedSamples clt_statistics(std::span<HittingSchedule const> schedules, std::size_t k,
                                        std::span<double const> terminal_V = {}, double t = 0.0)
{
    if (k < 1) {
        throw std::invalid_argument("clt_statistics: k must be >= 1");
    }
    if (!terminal_V.empty() && !(t > 0.0)) {
        throw std::invalid_argument("clt_statistics: terminal time must be positive");
    }
    NormalizedSamples out;
    out.k = k;
    std::size_t const m = 2 * k + 1;
    for (auto const& s : schedules) {
        if (s.size() <= m) {
            ++out.excluded;
            continue;
        }
        double const v = s.V_at_H[m];
        double const hm = s.time(m);
        out.stat_i.push_back(v / (s.c * std::sqrt(8.0 * static_cast<double>(k))));
        out.stat_ii.push_back(v / std::sqrt(hm));
        out.lln.push_back(hm / (2.0 * static_cast<double>(k)));
    }
    for (double v : terminal_V) {
        out.stat_iii.push_back(v / std::sqrt(t));
    }
    out.sufficient = out.stat_i.size() >= kMinCltSamples;
    return out;
}

}  // namespace ammfd
