#pragma once

#include "ammfd/rng.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ammfd {

/// Values on the uniform grid t_i = i * dt, i = 0..n.
class SamplePath {
public:
    SamplePath(double dt, std::vector<double> values) : dt_{dt}, values_{std::move(values)}
    {
        if (!(dt_ > 0.0) || !std::isfinite(dt_)) {
            throw std::invalid_argument("SamplePath: dt must be positive and finite");
        }
        if (values_.empty()) {
            throw std::invalid_argument("SamplePath: at least one value required");
        }
    }

    double dt() const noexcept { return dt_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::size_t steps() const noexcept { return values_.size() - 1; }
    double horizon() const noexcept { return static_cast<double>(steps()) * dt_; }
    double time(std::size_t i) const noexcept { return static_cast<double>(i) * dt_; }

    double operator[](std::size_t i) const noexcept { return values_[i]; }
    double front() const noexcept { return values_.front(); }
    double back() const noexcept { return values_.back(); }
    std::span<double const> values() const noexcept { return values_; }

    bool same_grid(SamplePath const& other) const noexcept
    {
        return dt_ == other.dt_ && values_.size() == other.values_.size();
    }

private:
    double dt_;
    std::vector<double> values_;
};

/// Standard Brownian motion sampled exactly on the grid.
inline SamplePath simulate_brownian(std::size_t n_steps, double dt, SeedSpec seed)
{
    if (n_steps == 0) {
        throw std::invalid_argument("simulate_brownian: n_steps must be >= 1");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("simulate_brownian: dt must be positive");
    }
    PathRng rng{seed};
    double const scale = std::sqrt(dt);
    std::vector<double> values(n_steps + 1);
    values[0] = 0.0;
    double x = 0.0;
    for (std::size_t i = 1; i <= n_steps; ++i) {
        x += scale * rng.normal();
        values[i] = x;
    }
    return SamplePath{dt, std::move(values)};
}

inline double quadratic_variation(SamplePath const& path)
{
    if (path.size() < 2) {
        throw std::invalid_argument("quadratic_variation: path needs at least two points");
    }
    auto const v = path.values();
    double sum = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        double const d = v[i] - v[i - 1];
        sum += d * d;
    }
    return sum;
}

inline double total_variation(SamplePath const& path)
{
    auto const v = path.values();
    double sum = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        sum += std::abs(v[i] - v[i - 1]);
    }
    return sum;
}

inline std::vector<double> increments(SamplePath const& path)
{
    auto const v = path.values();
    std::vector<double> out;
    out.reserve(v.size() - 1);
    for (std::size_t i = 1; i < v.size(); ++i) {
        out.push_back(v[i] - v[i - 1]);
    }
    return out;
}

/// Number of grid steps covering [0, horizon], rounded to the nearest step.
inline std::size_t steps_for_horizon(double horizon, double dt)
{
    if (!(dt > 0.0) || !(horizon >= dt)) {
        throw std::invalid_argument("steps_for_horizon: need dt > 0 and horizon >= dt");
    }
    return static_cast<std::size_t>(std::llround(horizon / dt));
}

}  // namespace ammfd
