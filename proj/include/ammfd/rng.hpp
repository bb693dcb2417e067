#pragma once

// Reproducible per-path random streams.
//
// Every stream is keyed by a 64-bit master seed and addressed by a 64-bit
// path index, so the numbers a path receives never depend on how many
// other paths were generated before it or on which thread generated it.
// Seeding goes through the Philox4x32-10 block cipher (Salmon et al.,
// SC 2011); the stream is xoshiro256++ (Blackman and Vigna).

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>

namespace ammfd {

struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t path_index = 0;

    friend constexpr bool operator==(SeedSpec const&, SeedSpec const&) = default;
};

namespace detail {

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

// Marsaglia-Tsang ziggurat with 256 layers for the standard normal.
struct ZigguratTables {
    static constexpr double kR = 3.6541528853610088;
    static constexpr double kArea = 4.92867323399e-3;

    std::array<double, 257> x{};
    std::array<double, 257> f{};

    ZigguratTables() noexcept
    {
        auto density = [](double v) { return std::exp(-0.5 * v * v); };
        x[0] = kArea / density(kR);
        x[1] = kR;
        for (int i = 2; i < 256; ++i) {
            x[i] = std::sqrt(-2.0 * std::log(kArea / x[i - 1] + density(x[i - 1])));
        }
        x[256] = 0.0;
        for (int i = 0; i < 257; ++i) {
            f[i] = density(x[i]);
        }
    }
};

inline ZigguratTables const& ziggurat_tables() noexcept
{
    static ZigguratTables const tables;
    return tables;
}

}  // namespace detail

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with ten rounds.
constexpr PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) noexcept
{
    for (int round = 0; round < 10; ++round) {
        std::uint64_t const p0 = std::uint64_t{detail::kPhiloxM0} * ctr[0];
        std::uint64_t const p1 = std::uint64_t{detail::kPhiloxM1} * ctr[2];
        auto const hi0 = static_cast<std::uint32_t>(p0 >> 32);
        auto const lo0 = static_cast<std::uint32_t>(p0);
        auto const hi1 = static_cast<std::uint32_t>(p1 >> 32);
        auto const lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += detail::kPhiloxW0;
        key[1] += detail::kPhiloxW1;
    }
    return ctr;
}

/// Random stream of one path.
///
/// The 256-bit state of a xoshiro256++ generator is two Philox blocks,
/// philox(ctr = {b, 0, index_lo, index_hi}, key = {seed_lo, seed_hi}) for
/// b = 0, 1. The state is therefore a pure function of (seed, index), and
/// the stream itself runs at xoshiro speed.
class PathRng {
public:
    explicit PathRng(SeedSpec seed) noexcept
    {
        PhiloxKey const key{static_cast<std::uint32_t>(seed.master_seed),
                            static_cast<std::uint32_t>(seed.master_seed >> 32)};
        auto const lo = static_cast<std::uint32_t>(seed.path_index);
        auto const hi = static_cast<std::uint32_t>(seed.path_index >> 32);
        for (std::uint32_t b = 0; b < 2; ++b) {
            auto const out = philox4x32_10({b, 0, lo, hi}, key);
            state_[2 * b] = (std::uint64_t{out[1]} << 32) | out[0];
            state_[2 * b + 1] = (std::uint64_t{out[3]} << 32) | out[2];
        }
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
            state_[0] = 0x9E3779B97F4A7C15ull;
        }
    }

    std::uint64_t next_u64() noexcept
    {
        std::uint64_t const result = rotl(state_[0] + state_[3], 23) + state_[0];
        std::uint64_t const t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform() noexcept
    {
        return (static_cast<double>(static_cast<std::int64_t>(next_u64() >> 11)) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal (ziggurat; exact, not an approximation).
    double normal() noexcept
    {
        auto const& t = *tables_;
        for (;;) {
            std::uint64_t const bits = next_u64();
            auto const layer = static_cast<std::size_t>(bits & 0xffu);
            // signed 53-bit integer plus one half, scaled into (-1, 1)
            auto const centered = static_cast<std::int64_t>(bits >> 11) - (std::int64_t{1} << 52);
            double const u = (static_cast<double>(centered) + 0.5) * 0x1.0p-52;
            double const x = u * t.x[layer];
            if (std::abs(x) < t.x[layer + 1]) {
                return x;
            }
            if (layer == 0) {
                // tail beyond R (Marsaglia 1964)
                double a = 0.0;
                double b = 0.0;
                do {
                    a = -std::log(uniform()) / detail::ZigguratTables::kR;
                    b = -std::log(uniform());
                } while (2.0 * b < a * a);
                return u < 0.0 ? -(detail::ZigguratTables::kR + a) : detail::ZigguratTables::kR + a;
            }
            double const y = t.f[layer + 1] + uniform() * (t.f[layer] - t.f[layer + 1]);
            if (y < std::exp(-0.5 * x * x)) {
                return x;
            }
        }
    }

    /// Standard exponential (mean 1).
    double exponential() noexcept { return -std::log(uniform()); }

    bool bernoulli_half() noexcept { return (next_u64() >> 63) != 0; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> state_{};
    detail::ZigguratTables const* tables_ = &detail::ziggurat_tables();
};

}  // namespace ammfd
