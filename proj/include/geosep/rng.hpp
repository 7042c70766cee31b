#ifndef GEOSEP_RNG_HPP
#define GEOSEP_RNG_HPP

#include <cmath>
#include <cstdint>
#include <limits>

namespace geosep {

namespace detail {

constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

/**
 * Counter-based 64-bit generator: output i of a stream is mix64(key + (i+1)*phi).
 *
 * Streams are derived, never advanced: `substream(a)` hashes the parent key with
 * `a`, so the draws of round r, attempt t are `Rng(seed).substream(r).substream(t)`
 * regardless of how many numbers earlier rounds consumed. All conversions to
 * reals and bounded integers are done here (not via <random> distributions) so
 * that sequences are identical across standard libraries.
 */
class Rng
{
public:
    using result_type = std::uint64_t;

    explicit constexpr Rng(std::uint64_t seed) noexcept : key_(detail::mix64(seed ^ 0x6a09e667f3bcc909ULL)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept
    {
        ++counter_;
        return detail::mix64(key_ + counter_ * kPhi);
    }

    [[nodiscard]] constexpr Rng substream(std::uint64_t index) const noexcept
    {
        Rng child(0);
        child.key_ = detail::mix64(key_ ^ detail::mix64(index + kPhi));
        return child;
    }

    /// Uniform in [0, 1).
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi].
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) noexcept
    {
        // Lemire's multiply-shift with rejection.
        std::uint64_t x = (*this)();
        __uint128_t m = static_cast<__uint128_t>(x) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                x = (*this)();
                m = static_cast<__uint128_t>(x) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Standard normal via Box-Muller (one value per call).
    double normal() noexcept
    {
        double u1 = uniform();
        while (u1 <= 0.0)
            u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

private:
    static constexpr std::uint64_t kPhi = 0x9e3779b97f4a7c15ULL;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace geosep

#endif // GEOSEP_RNG_HPP
