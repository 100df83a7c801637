#pragma once

// Straightforward reference computations for the statistics tests.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace micropat::oracle {

// Plain Pearson correlation over 0/1 values.
inline std::optional<double> pearson_bits(const std::vector<bool>& a, const std::vector<bool>& b)
{
    std::size_t n = a.size();
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double x = a[i] - ma, y = b[i] - mb;
        sab += x * y;
        saa += x * x;
        sbb += y * y;
    }
    if (saa == 0 || sbb == 0)
        return std::nullopt;
    return sab / std::sqrt(saa * sbb);
}

// Upper-tail critical value of χ²(1): the square of the two-sided normal
// quantile, found by bisection on erfc.
inline double chi2_df1_critical(double alpha)
{
    double lo = 0, hi = 40;
    for (int i = 0; i < 200; ++i) {
        double mid = (lo + hi) / 2;
        if (std::erfc(mid / std::sqrt(2.0)) > alpha)
            lo = mid;
        else
            hi = mid;
    }
    double z = (lo + hi) / 2;
    return z * z;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Closed form for df = 1: X = (Z + sqrt(λ))².
inline double power_df1(std::uint64_t n, double w, double alpha)
{
    double z = std::sqrt(chi2_df1_critical(alpha));
    double s = std::sqrt(static_cast<double>(n) * w * w);
    return normal_cdf(s - z) + normal_cdf(-s - z);
}

inline std::uint64_t sample_size_df1(double w, double alpha, double power)
{
    std::uint64_t n = 1;
    while (power_df1(n, w, alpha) < power)
        ++n;
    return n;
}

// Monte Carlo: one set of standard normal draws reused for every n, so the
// simulated power is monotone in n.
inline std::uint64_t simulated_sample_size_df1(double w, double alpha, double power, std::size_t draws,
                                               std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<double> z(draws);
    for (auto& v : z)
        v = normal(rng);
    double crit = chi2_df1_critical(alpha);
    auto simulated = [&](std::uint64_t n) {
        double s = std::sqrt(static_cast<double>(n) * w * w);
        std::size_t hits = 0;
        for (double v : z)
            if ((v + s) * (v + s) > crit)
                ++hits;
        return static_cast<double>(hits) / static_cast<double>(draws);
    };
    std::uint64_t lo = 1, hi = 1;
    while (simulated(hi) < power)
        hi *= 2;
    while (hi - lo > 1) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        (simulated(mid) >= power ? hi : lo) = mid;
    }
    return simulated(lo) >= power ? lo : hi;
}

}  // namespace micropat::oracle
