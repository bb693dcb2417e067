#pragma once

// Brownian local times on the fold levels of the triangle wave.
//
// F folds the line into [-c, c] with period 4c. Its kinks sit on the level
// set E = {(2k+1)c}; levels (4k+1)c carry +1 and levels (4k-1)c carry -1 in
// V = sum_k (L^{(4k+1)c} - L^{(4k-1)c}), and F(W) = beta - V.

#include "ammfd/amm.hpp"
#include "ammfd/paths.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace ammfd {

/// Index k of the level (2k+1)c in E.
struct ELevel {
    long k = 0;

    double value(double c) const noexcept { return static_cast<double>(2 * k + 1) * c; }
    /// +1 for levels congruent to c mod 4c, -1 for levels congruent to -c.
    int sign() const noexcept { return (k % 2 == 0) ? 1 : -1; }
    ELevel up() const noexcept { return ELevel{k + 1}; }
    ELevel down() const noexcept { return ELevel{k - 1}; }

    friend constexpr bool operator==(ELevel, ELevel) = default;
    friend constexpr auto operator<=>(ELevel, ELevel) = default;
};

/// Levels of E inside [lo, hi], ascending.
inline std::vector<ELevel> e_levels_in_range(double lo, double hi, double c)
{
    if (!(c > 0.0)) {
        throw std::invalid_argument("e_levels_in_range: c must be positive");
    }
    std::vector<ELevel> out;
    auto const k_lo = static_cast<long>(std::ceil((lo / c - 1.0) / 2.0));
    auto const k_hi = static_cast<long>(std::floor((hi / c - 1.0) / 2.0));
    for (long k = k_lo; k <= k_hi; ++k) {
        out.push_back(ELevel{k});
    }
    return out;
}

/// 4c-periodic triangle wave: x on [-c, c], 2c - x on [c, 3c].
inline double triangle_wave(double x, double c)
{
    if (std::abs(x) <= c) {
        return x;
    }
    double const period = 4.0 * c;
    double y = std::fmod(x + c, period);
    if (y < 0.0) {
        y += period;
    }
    return y <= 2.0 * c ? y - c : 3.0 * c - y;
}

inline double default_bandwidth(double dt, double mult = 5.0) { return mult * std::sqrt(dt); }

/// Occupation-kernel local time estimates at a fixed set of levels.
///
/// L^x at grid index i is dt / (2h) times the number of indices j < i with
/// |W_j - x| <= h. Only the contributing indices are stored, so the field is
/// cheap even for very long paths.
class LocalTimeField {
public:
    LocalTimeField(double dt, double bandwidth, std::size_t n_points, std::vector<double> levels,
                   std::vector<std::vector<std::size_t>> hits)
        : dt_{dt}, bandwidth_{bandwidth}, n_points_{n_points}, levels_{std::move(levels)},
          hits_{std::move(hits)}
    {
    }

    double dt() const noexcept { return dt_; }
    double bandwidth() const noexcept { return bandwidth_; }
    std::size_t n_points() const noexcept { return n_points_; }
    std::size_t n_levels() const noexcept { return levels_.size(); }
    std::span<double const> levels() const noexcept { return levels_; }
    double scale() const noexcept { return dt_ / (2.0 * bandwidth_); }

    /// Grid indices contributing to the given level, ascending.
    std::span<std::size_t const> hits(std::size_t level) const noexcept { return hits_[level]; }

    double value(std::size_t level, std::size_t i) const
    {
        auto const& h = hits_[level];
        auto const count = std::lower_bound(h.begin(), h.end(), i) - h.begin();
        return scale() * static_cast<double>(count);
    }

    double final_value(std::size_t level) const { return value(level, n_points_ - 1); }

    std::vector<double> series(std::size_t level) const
    {
        std::vector<double> out(n_points_, 0.0);
        std::size_t count = 0;
        auto const& h = hits_[level];
        auto it = h.begin();
        for (std::size_t i = 0; i < n_points_; ++i) {
            while (it != h.end() && *it < i) {
                ++count;
                ++it;
            }
            out[i] = scale() * static_cast<double>(count);
        }
        return out;
    }

    /// Sum over all tracked levels at grid index i.
    double total(std::size_t i) const
    {
        std::size_t count = 0;
        for (auto const& h : hits_) {
            count += static_cast<std::size_t>(std::lower_bound(h.begin(), h.end(), i) - h.begin());
        }
        return scale() * static_cast<double>(count);
    }

private:
    double dt_;
    double bandwidth_;
    std::size_t n_points_;
    std::vector<double> levels_;
    std::vector<std::vector<std::size_t>> hits_;
};

inline LocalTimeField estimate_local_times(SamplePath const& W, std::span<double const> levels,
                                           double bandwidth)
{
    if (!(bandwidth > 0.0)) {
        throw std::invalid_argument("estimate_local_times: bandwidth must be positive");
    }
    if (levels.empty()) {
        throw std::invalid_argument("estimate_local_times: no levels given");
    }
    std::vector<double> sorted(levels.begin(), levels.end());
    std::ranges::sort(sorted);
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    std::vector<std::vector<std::size_t>> hits(sorted.size());
    auto const w = W.values();
    for (std::size_t i = 0; i < w.size(); ++i) {
        auto it = std::lower_bound(sorted.begin(), sorted.end(), w[i] - bandwidth);
        for (; it != sorted.end() && *it <= w[i] + bandwidth; ++it) {
            if (std::abs(w[i] - *it) <= bandwidth) {
                hits[static_cast<std::size_t>(it - sorted.begin())].push_back(i);
            }
        }
    }
    return LocalTimeField{W.dt(), bandwidth, w.size(), std::move(sorted), std::move(hits)};
}

/// E-levels covering the range of W padded by `padding` on both sides.
inline std::vector<double> e_level_values_for(SamplePath const& W, double c, double padding)
{
    auto const [lo, hi] = std::ranges::minmax(W.values());
    std::vector<double> out;
    for (auto level : e_levels_in_range(lo - padding, hi + padding, c)) {
        out.push_back(level.value(c));
    }
    return out;
}

/// Local times of W on the E-levels (default padding 2c around its range).
inline LocalTimeField estimate_e_local_times(SamplePath const& W, FeeParams const& fee, double bandwidth,
                                             std::optional<double> padding = std::nullopt)
{
    double const c = fee.c();
    return estimate_local_times(W, e_level_values_for(W, c, padding.value_or(2.0 * c)), bandwidth);
}

struct TriangleDecomposition {
    SamplePath W;
    SamplePath FW;
    SamplePath V;
    SamplePath beta;
    LocalTimeField ltf;
};

namespace detail {

// Left-point cumulative sum: out[0] = 0, out[i] = sum_{j < i} delta[j].
inline std::vector<double> shifted_prefix_sum(std::vector<double> const& delta)
{
    std::vector<double> out(delta.size(), 0.0);
    double acc = 0.0;
    for (std::size_t i = 1; i < delta.size(); ++i) {
        acc += delta[i - 1];
        out[i] = acc;
    }
    return out;
}

inline int level_sign(double level, double c)
{
    return ELevel{std::lround((level / c - 1.0) / 2.0)}.sign();
}

}  // namespace detail

/// V from the alternating local-time sum and beta := F(W) + V.
inline TriangleDecomposition build_decomposition(SamplePath const& W, FeeParams const& fee, double bandwidth,
                                                 std::optional<double> padding = std::nullopt)
{
    double const c = fee.c();
    auto ltf = estimate_e_local_times(W, fee, bandwidth, padding);
    std::size_t const n = W.size();

    std::vector<double> delta(n, 0.0);
    for (std::size_t l = 0; l < ltf.n_levels(); ++l) {
        double const signed_scale = detail::level_sign(ltf.levels()[l], c) * ltf.scale();
        for (auto j : ltf.hits(l)) {
            delta[j] += signed_scale;
        }
    }
    auto v = detail::shifted_prefix_sum(delta);

    std::vector<double> fw(n);
    std::vector<double> beta(n);
    for (std::size_t i = 0; i < n; ++i) {
        fw[i] = triangle_wave(W[i], c);
        beta[i] = fw[i] + v[i];
    }
    double const dt = W.dt();
    return TriangleDecomposition{W, SamplePath{dt, std::move(fw)}, SamplePath{dt, std::move(v)},
                                 SamplePath{dt, std::move(beta)}, std::move(ltf)};
}

/// Sum of the estimates over every tracked level.
inline SamplePath additive_functional(LocalTimeField const& ltf)
{
    std::vector<double> delta(ltf.n_points(), 0.0);
    for (std::size_t l = 0; l < ltf.n_levels(); ++l) {
        for (auto j : ltf.hits(l)) {
            delta[j] += ltf.scale();
        }
    }
    return SamplePath{ltf.dt(), detail::shifted_prefix_sum(delta)};
}

struct InverseLocalTimeMap {
    double dt = 0.0;
    std::vector<double> ell_grid;
    /// First grid index where the functional exceeds ell; empty when censored.
    std::vector<std::optional<std::size_t>> index;

    bool censored(std::size_t j) const noexcept { return !index[j].has_value(); }
    std::optional<double> sigma(std::size_t j) const
    {
        if (!index[j]) {
            return std::nullopt;
        }
        return static_cast<double>(*index[j]) * dt;
    }
};

inline InverseLocalTimeMap inverse_local_time(SamplePath const& L, std::span<double const> ell_grid)
{
    auto const l = L.values();
    for (std::size_t i = 1; i < l.size(); ++i) {
        if (l[i] < l[i - 1]) {
            throw std::invalid_argument("inverse_local_time: functional must be nondecreasing");
        }
    }
    for (std::size_t j = 1; j < ell_grid.size(); ++j) {
        if (!(ell_grid[j] > ell_grid[j - 1])) {
            throw std::invalid_argument("inverse_local_time: ell grid must be increasing");
        }
    }
    InverseLocalTimeMap out;
    out.dt = L.dt();
    out.ell_grid.assign(ell_grid.begin(), ell_grid.end());
    out.index.reserve(ell_grid.size());
    std::size_t i = 0;
    for (double ell : ell_grid) {
        while (i < l.size() && !(l[i] > ell)) {
            ++i;
        }
        out.index.push_back(i < l.size() ? std::optional<std::size_t>{i} : std::nullopt);
    }
    return out;
}

}  // namespace ammfd
