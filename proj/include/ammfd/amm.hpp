#pragma once

// AMM log-price driven by arbitrage against a reference market.
//
// With p = exp(B) the reference price and p~ = exp(U) the pool price, the
// fee retention factor gamma keeps the pool inside gamma*p <= p~ <= p/gamma,
// i.e. B - c <= U <= B + c with c = log(1/gamma). U only moves when it is
// pushed by one of the two moving barriers.

#include "ammfd/paths.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace ammfd {

class FeeParams {
public:
    static FeeParams from_gamma(double gamma)
    {
        if (!(gamma > 0.0 && gamma < 1.0)) {
            throw std::invalid_argument("FeeParams: gamma must lie in (0, 1)");
        }
        return FeeParams{gamma, std::log(1.0 / gamma)};
    }

    static FeeParams from_c(double c)
    {
        if (!(c > 0.0) || !std::isfinite(c)) {
            throw std::invalid_argument("FeeParams: c must be positive and finite");
        }
        return FeeParams{std::exp(-c), c};
    }

    double gamma() const noexcept { return gamma_; }
    /// Half width of the no-arbitrage band in log-price units.
    double c() const noexcept { return c_; }

private:
    FeeParams(double gamma, double c) : gamma_{gamma}, c_{c} {}

    double gamma_;
    double c_;
};

struct AmmConstruction {
    SamplePath B;
    SamplePath U;
    /// Grid indices of T_0, T_1, ...
    std::vector<std::size_t> stopping_indices;
    /// B reached +c before -c. Meaningless when stopping_indices is empty.
    bool event_A = false;

    /// Direction of U on the leg starting at stopping_indices[m].
    bool leg_is_up(std::size_t m) const noexcept { return (m % 2 == 0) == event_A; }
};

/// Builds U from B with the stopping-time recursion, at grid resolution.
///
/// T_0 is the first index with |B| >= c; its sign decides event A. On an
/// up-leg U is the running sup of B since the last stopping time minus c,
/// and the leg ends at the first index where the drawdown from that sup
/// reaches 2c. Down-legs mirror this with the running inf plus c. The value
/// at a stopping time still follows the leg that ends there, so U inherits
/// the grid overshoot at every T_m.
inline AmmConstruction construct_amm_path(SamplePath const& B, FeeParams const& fee)
{
    if (B.front() != 0.0) {
        throw std::invalid_argument("construct_amm_path: B must start at 0");
    }
    double const c = fee.c();
    double const band = 2.0 * c;
    auto const b = B.values();
    std::size_t const n = b.size();

    std::vector<double> u(n, 0.0);
    std::vector<std::size_t> stops;
    bool event_A = false;

    std::size_t first = 0;
    while (first < n && std::abs(b[first]) < c) {
        ++first;
    }
    if (first < n) {
        // a single grid value cannot sit on both sides, so the sign at T_0 decides
        event_A = b[first] >= c;
        stops.push_back(first);
        bool up = event_A;
        double extremum = b[first];
        for (std::size_t i = first + 1; i < n; ++i) {
            if (up) {
                extremum = std::max(extremum, b[i]);
                u[i] = extremum - c;
                if (extremum - b[i] >= band) {
                    stops.push_back(i);
                    up = false;
                    extremum = b[i];
                }
            } else {
                extremum = std::min(extremum, b[i]);
                u[i] = extremum + c;
                if (b[i] - extremum >= band) {
                    stops.push_back(i);
                    up = true;
                    extremum = b[i];
                }
            }
        }
    }
    return AmmConstruction{B, SamplePath{B.dt(), std::move(u)}, std::move(stops), event_A};
}

/// Largest violation of each characterizing property on the grid.
struct ViolationReport {
    double a = 0.0;  ///< |U_0|
    double b = 0.0;  ///< excursion outside [B - c, B + c]
    double c = 0.0;  ///< decrease of U while strictly below the upper barrier
    double d = 0.0;  ///< increase of U while strictly above the lower barrier

    double max() const noexcept { return std::max({a, b, c, d}); }
    bool within(double tol) const noexcept { return max() <= tol; }

    /// Name of the first property exceeding tol, or empty when all hold.
    std::string_view first_failure(double tol) const noexcept
    {
        if (a > tol) return "a";
        if (b > tol) return "b";
        if (c > tol) return "c";
        if (d > tol) return "d";
        return {};
    }

    ViolationReport& merge(ViolationReport const& other) noexcept
    {
        a = std::max(a, other.a);
        b = std::max(b, other.b);
        c = std::max(c, other.c);
        d = std::max(d, other.d);
        return *this;
    }
};

namespace detail {

// Max of u[i] - u[j] (sign = +1, decrease) or u[j] - u[i] (sign = -1,
// increase) over i <= j inside maximal runs where active(k) holds.
template <typename Active>
double worst_move_in_runs(std::span<double const> u, Active active, double sign)
{
    double worst = 0.0;
    bool in_run = false;
    double best_start = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (!active(k)) {
            in_run = false;
            continue;
        }
        double const v = sign * u[k];
        if (!in_run) {
            in_run = true;
            best_start = v;
        }
        best_start = std::max(best_start, v);
        worst = std::max(worst, best_start - v);
    }
    return worst;
}

}  // namespace detail

inline ViolationReport check_skorokhod(SamplePath const& B, SamplePath const& U, FeeParams const& fee,
                                       double tol)
{
    if (!(tol >= 0.0)) {
        throw std::invalid_argument("check_skorokhod: tol must be >= 0");
    }
    if (!B.same_grid(U)) {
        throw std::invalid_argument("check_skorokhod: B and U live on different grids");
    }
    double const c = fee.c();
    auto const b = B.values();
    auto const u = U.values();

    ViolationReport r;
    r.a = std::abs(u[0]);
    for (std::size_t i = 0; i < u.size(); ++i) {
        r.b = std::max({r.b, b[i] - c - u[i], u[i] - b[i] - c});
    }
    r.c = detail::worst_move_in_runs(
        u, [&](std::size_t k) { return u[k] < b[k] + c - tol; }, 1.0);
    r.d = detail::worst_move_in_runs(
        u, [&](std::size_t k) { return u[k] > b[k] - c + tol; }, -1.0);
    return r;
}

inline ViolationReport check_skorokhod(AmmConstruction const& cons, FeeParams const& fee, double tol)
{
    return check_skorokhod(cons.B, cons.U, fee, tol);
}

struct PriceLevels {
    SamplePath p;
    SamplePath p_tilde;
};

/// Reference price exp(B) and pool price exp(U).
inline PriceLevels to_price_levels(AmmConstruction const& cons)
{
    if (!cons.B.same_grid(cons.U)) {
        throw std::invalid_argument("to_price_levels: B and U live on different grids");
    }
    auto exp_of = [](SamplePath const& x) {
        std::vector<double> out(x.size());
        std::ranges::transform(x.values(), out.begin(), [](double v) { return std::exp(v); });
        return SamplePath{x.dt(), std::move(out)};
    };
    return PriceLevels{exp_of(cons.B), exp_of(cons.U)};
}

/// Default grid tolerance for the band and monotonicity checks.
inline double grid_tolerance(double dt) { return 5.0 * std::sqrt(dt); }

}  // namespace ammfd
