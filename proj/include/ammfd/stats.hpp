#pragma once

// Goodness-of-fit and interval helpers shared by the law checks.
//
// KS tests report the sup distance against a fixed 99% asymptotic band
// (1.63 / sqrt(n_eff)) rather than a p-value.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ammfd {

struct EmpiricalSample {
    std::vector<double> values;
    std::optional<std::vector<double>> weights;

    EmpiricalSample() = default;
    EmpiricalSample(std::vector<double> v) : values{std::move(v)} {}  // NOLINT(implicit)
    EmpiricalSample(std::vector<double> v, std::vector<double> w) : values{std::move(v)}, weights{std::move(w)}
    {
        if (weights->size() != values.size()) {
            throw std::invalid_argument("EmpiricalSample: weights and values differ in length");
        }
        if (!std::ranges::all_of(*weights, [](double x) { return x > 0.0; })) {
            throw std::invalid_argument("EmpiricalSample: weights must be positive");
        }
    }

    std::size_t size() const noexcept { return values.size(); }

    /// Kish effective sample size; equals size() when unweighted.
    double effective_size() const
    {
        if (!weights) {
            return static_cast<double>(values.size());
        }
        double s = 0.0;
        double s2 = 0.0;
        for (double w : *weights) {
            s += w;
            s2 += w * w;
        }
        return s * s / s2;
    }
};

struct TestResult {
    double statistic = 0.0;
    double threshold = 0.0;
    std::size_t n = 0;
    bool pass = false;
    std::string description;

    static TestResult distance(double statistic, double threshold, std::size_t n, std::string description)
    {
        return TestResult{statistic, threshold, n, statistic <= threshold, std::move(description)};
    }
};

inline constexpr double kKs99 = 1.63;

/// Standard normal CDF.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

inline std::function<double(double)> exponential_cdf(double mean)
{
    return [mean](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x / mean); };
}

namespace detail {

// (value, weight) pairs sorted by value, weights normalized to sum 1.
inline std::vector<std::pair<double, double>> sorted_masses(EmpiricalSample const& s)
{
    std::vector<std::pair<double, double>> out(s.size());
    double total = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        double const w = s.weights ? (*s.weights)[i] : 1.0;
        out[i] = {s.values[i], w};
        total += w;
    }
    std::ranges::sort(out, {}, &std::pair<double, double>::first);
    for (auto& p : out) {
        p.second /= total;
    }
    return out;
}

}  // namespace detail

inline TestResult ks_one_sample(EmpiricalSample const& sample, std::function<double(double)> const& cdf,
                                std::optional<double> threshold = std::nullopt,
                                std::string description = "ks_one_sample")
{
    if (sample.size() == 0) {
        throw std::invalid_argument("ks_one_sample: empty sample");
    }
    auto const masses = detail::sorted_masses(sample);
    double below = 0.0;
    double d = 0.0;
    std::size_t i = 0;
    while (i < masses.size()) {
        double const x = masses[i].first;
        double const f = cdf(x);
        double above = below;
        while (i < masses.size() && masses[i].first == x) {
            above += masses[i].second;
            ++i;
        }
        d = std::max({d, above - f, f - below});
        below = above;
    }
    double const n_eff = sample.effective_size();
    double const limit = threshold.value_or(kKs99 / std::sqrt(n_eff));
    return TestResult::distance(d, limit, sample.size(), std::move(description));
}

inline TestResult ks_two_sample(EmpiricalSample const& a, EmpiricalSample const& b,
                                std::optional<double> threshold = std::nullopt,
                                std::string description = "ks_two_sample")
{
    if (a.size() == 0 || b.size() == 0) {
        throw std::invalid_argument("ks_two_sample: empty input");
    }
    auto const ma = detail::sorted_masses(a);
    auto const mb = detail::sorted_masses(b);
    double fa = 0.0;
    double fb = 0.0;
    double d = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < ma.size() || j < mb.size()) {
        double const x = j == mb.size() || (i < ma.size() && ma[i].first <= mb[j].first) ? ma[i].first
                                                                                         : mb[j].first;
        while (i < ma.size() && ma[i].first == x) {
            fa += ma[i++].second;
        }
        while (j < mb.size() && mb[j].first == x) {
            fb += mb[j++].second;
        }
        d = std::max(d, std::abs(fa - fb));
    }
    double const na = a.effective_size();
    double const nb = b.effective_size();
    double const limit = threshold.value_or(kKs99 * std::sqrt((na + nb) / (na * nb)));
    return TestResult::distance(d, limit, a.size() + b.size(), std::move(description));
}

struct MeanInterval {
    double mean = 0.0;
    double half_width = 0.0;

    bool contains(double x) const noexcept { return std::abs(x - mean) <= half_width; }
};

/// Sample mean with z * s / sqrt(n) half width.
inline MeanInterval mean_ci(EmpiricalSample const& sample, double z)
{
    std::size_t const n = sample.size();
    if (n < 2) {
        throw std::invalid_argument("mean_ci: need at least two values");
    }
    double const mean = std::accumulate(sample.values.begin(), sample.values.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double v : sample.values) {
        ss += (v - mean) * (v - mean);
    }
    double const sd = std::sqrt(ss / static_cast<double>(n - 1));
    return MeanInterval{mean, z * sd / std::sqrt(static_cast<double>(n))};
}

inline double sample_variance(std::vector<double> const& v)
{
    if (v.size() < 2) {
        throw std::invalid_argument("sample_variance: need at least two values");
    }
    double const mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) {
        ss += (x - mean) * (x - mean);
    }
    return ss / static_cast<double>(v.size() - 1);
}

inline double sample_mean(std::vector<double> const& v)
{
    if (v.empty()) {
        throw std::invalid_argument("sample_mean: empty");
    }
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

/// Pearson correlation of two equally long sequences.
inline double correlation(std::vector<double> const& x, std::vector<double> const& y)
{
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("correlation: need two sequences of equal length >= 2");
    }
    double const mx = sample_mean(x);
    double const my = sample_mean(y);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

inline double lag1_autocorrelation(std::vector<double> const& x)
{
    if (x.size() < 3) {
        throw std::invalid_argument("lag1_autocorrelation: need at least three values");
    }
    std::vector<double> head(x.begin(), x.end() - 1);
    std::vector<double> tail(x.begin() + 1, x.end());
    return correlation(head, tail);
}

}  // namespace ammfd
