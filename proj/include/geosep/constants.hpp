#ifndef GEOSEP_CONSTANTS_HPP
#define GEOSEP_CONSTANTS_HPP

#include "error.hpp"
#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace geosep {

/// k-volume of the unit ball in R^k.
[[nodiscard]] inline double unit_ball_volume(int k)
{
    return std::pow(std::numbers::pi, k / 2.0) / std::tgamma(k / 2.0 + 1.0);
}

/// (k-1)-volume of the unit sphere in R^k.
[[nodiscard]] inline double unit_sphere_area(int k)
{
    return 2.0 * std::pow(std::numbers::pi, k / 2.0) / std::tgamma(k / 2.0);
}

/// Rounds the balancing iteration needs: ceil(log_c(2/3)) for c in (1/2, 1).
[[nodiscard]] inline int balancing_round_cap(double c)
{
    if (!(c > 0.5 && c < 1.0))
        throw ValidationError("balance constant must lie in (1/2, 1)");
    // Guard against log ratios landing a hair above an integer.
    const double x = std::log(2.0 / 3.0) / std::log(c);
    const double nearest = std::round(x);
    if (std::abs(x - nearest) < 1e-9)
        return static_cast<int>(nearest);
    return static_cast<int>(std::ceil(x));
}

inline void require_dimension(int d)
{
    if (d < kMinDimension || d > kMaxDimension)
        throw ValidationError("dimension " + std::to_string(d) + " outside supported range [2, 16]");
}

/**
 * The dimension-dependent constants of the separator proofs, at the weakest
 * values that make every inequality of the sphere argument go through when the
 * minimal balls are replaced by the center-anchored 2-approximation:
 *
 *   center_fraction  c_d  = 8^-d / 8
 *   cap_multiplier   C'_d = max(1, (2^(d+1) sigma_d / tau_(d-1))^(1/(d-1)))
 *   budget_multiplier C_d = max(5, 4^(1-1/d) c_d^(-1/d), (8 C'_d)^((d-1)/d))
 */
struct Constants
{
    int d = 2;
    double center_fraction = 0.0;   // c_d
    double budget_multiplier = 0.0; // C_d
    double cap_multiplier = 0.0;    // C'_d
    double sample_multiplier = 2.0; // anchors sampled per round = ceil(sample_multiplier * 9^d)

    [[nodiscard]] static Constants for_dimension(int d, double sample_multiplier = 2.0)
    {
        require_dimension(d);
        Constants k;
        k.d = d;
        k.sample_multiplier = sample_multiplier;
        k.center_fraction = std::pow(8.0, -d) / 8.0;
        k.cap_multiplier = min_cap_multiplier(d);
        k.budget_multiplier = min_budget_multiplier(d, k.center_fraction, k.cap_multiplier);
        return k;
    }

    [[nodiscard]] static double min_cap_multiplier(int d)
    {
        const double v = std::pow(2.0, d + 1) * unit_sphere_area(d) / unit_ball_volume(d - 1);
        return std::max(1.0, std::pow(v, 1.0 / (d - 1)));
    }

    /// Smallest C_d for which the high-degree step certifies Delta <= c n and
    /// the random-sphere step certifies E|X3| <= Sigma/4.
    [[nodiscard]] static double min_budget_multiplier(int d, double c, double cap_mult)
    {
        const double from_degree = std::pow(4.0, 1.0 - 1.0 / d) * std::pow(c, -1.0 / d);
        const double from_cap = std::pow(8.0 * cap_mult, (d - 1.0) / d);
        return std::max({5.0, from_degree, from_cap});
    }

    [[nodiscard]] static double tau(int k) { return unit_ball_volume(k); }
    [[nodiscard]] static double sigma(int k) { return unit_sphere_area(k); }

    /// Per-round balance of the radial ball cut with the exact (all-centers) anchor.
    [[nodiscard]] double ball_exact_balance() const { return 1.0 - std::pow(5.0, -d); }
    /// Per-round balance of the radial ball cut with sampled anchors.
    [[nodiscard]] double ball_sampled_balance() const { return 1.0 - std::pow(9.0, -d); }
    [[nodiscard]] double sphere_balance() const { return 1.0 - center_fraction; }

    [[nodiscard]] std::size_t sample_count() const
    {
        return static_cast<std::size_t>(std::ceil(sample_multiplier * std::pow(9.0, d)));
    }

    /// Smallest n for which 8^d (4 c_d + 1/n) <= 1 - 4 c_d, i.e. the covering
    /// argument bounds the centers inside the doubled anchor ball.
    [[nodiscard]] double min_covering_n() const
    {
        const double room = 1.0 - 4.0 * center_fraction - std::pow(8.0, d) * 4.0 * center_fraction;
        return room > 0.0 ? std::pow(8.0, d) / room : INFINITY;
    }

    /// Names of violated defining inequalities (empty when all hold).
    [[nodiscard]] std::vector<std::string> violated_inequalities() const
    {
        std::vector<std::string> bad;
        constexpr double slack = 1e-12;
        const double cap_floor =
            std::pow(std::pow(2.0, d + 1) * sigma(d) / tau(d - 1), 1.0 / (d - 1));
        if (cap_multiplier < cap_floor * (1 - slack))
            bad.emplace_back("cap_multiplier >= (2^(d+1) sigma_d / tau_(d-1))^(1/(d-1))");
        if (budget_multiplier < 5.0)
            bad.emplace_back("budget_multiplier >= 5");
        if (budget_multiplier < std::pow(4.0, 1.0 - 1.0 / d) * std::pow(center_fraction, -1.0 / d) * (1 - slack))
            bad.emplace_back("budget_multiplier >= 4^(1-1/d) c_d^(-1/d)");
        if (budget_multiplier < std::pow(8.0 * cap_multiplier, (d - 1.0) / d) * (1 - slack))
            bad.emplace_back("budget_multiplier >= (8 C'_d)^((d-1)/d)");
        if (!(center_fraction > 0.0) || std::pow(8.0, d) * 4.0 * center_fraction >= 1.0 - 4.0 * center_fraction)
            bad.emplace_back("8^d * 4 c_d < 1 - 4 c_d");
        return bad;
    }
};

} // namespace geosep

#endif // GEOSEP_CONSTANTS_HPP
