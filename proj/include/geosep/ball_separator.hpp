#ifndef GEOSEP_BALL_SEPARATOR_HPP
#define GEOSEP_BALL_SEPARATOR_HPP

#include "constants.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "graph.hpp"
#include "instance.hpp"
#include "rng.hpp"
#include "separator.hpp"
#include "spatial.hpp"
#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace geosep {

/// Center-anchored ball: the center is the center of body `index`.
struct Anchor
{
    Vertex index = 0;
    double radius = 0.0;
};

/// ceil(fraction * n) clamped to [1, n].
[[nodiscard]] inline std::size_t anchor_count(double fraction, std::size_t n)
{
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw ValidationError("anchor fraction must lie in (0, 1]");
    const auto k = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
    return std::clamp<std::size_t>(k, 1, std::max<std::size_t>(n, 1));
}

namespace detail {

/// Squared distance from p to its k-th nearest center in `set` (p included).
inline double kth_nearest_sq(const Instance& inst, std::span<const Vertex> set, Vertex p, std::size_t k,
                             std::vector<double>& scratch)
{
    scratch.clear();
    const Coords cp = inst.center(p);
    for (Vertex v : set)
        scratch.push_back(squared_distance(cp, inst.center(v)));
    auto nth = scratch.begin() + static_cast<std::ptrdiff_t>(k - 1);
    std::nth_element(scratch.begin(), nth, scratch.end());
    return *nth;
}

} // namespace detail

/**
 * Over every center p of `set`, r_p = distance to the k-th nearest center of
 * the set counting p itself; returns the minimizer (first index on ties).
 * This is within a factor 2 of the smallest ball holding k centers.
 *
 * A few probes give an upper bound rho on the optimum; afterwards each p only
 * looks at centers within rho, which keeps dense instances far from n^2.
 */
[[nodiscard]] inline Anchor anchor_exact_in(const Instance& inst, std::span<const Vertex> set, std::size_t k)
{
    if (set.empty())
        throw ValidationError("anchor: empty point set");
    k = std::clamp<std::size_t>(k, 1, set.size());
    std::vector<double> scratch;
    if (set.size() <= 512) {
        Anchor best{set[0], std::numeric_limits<double>::infinity()};
        for (Vertex p : set) {
            const double r2 = detail::kth_nearest_sq(inst, set, p, k, scratch);
            if (r2 < best.radius) {
                best.index = p;
                best.radius = r2;
            }
        }
        best.radius = std::sqrt(best.radius);
        return best;
    }

    double bound2 = std::numeric_limits<double>::infinity();
    const std::size_t probes = 32;
    for (std::size_t i = 0; i < probes; ++i) {
        const Vertex p = set[i * set.size() / probes];
        bound2 = std::min(bound2, detail::kth_nearest_sq(inst, set, p, k, scratch));
    }
    const double bound = std::sqrt(bound2);
    CellGrid grid(inst.dimension(), set, bound, [&](Vertex v) { return inst.center(v); });
    Anchor best{set[0], std::numeric_limits<double>::infinity()};
    for (Vertex p : set) {
        scratch.clear();
        const Coords cp = inst.center(p);
        grid.for_each_near(cp, bound, [&](Vertex v) {
            const double d2 = squared_distance(cp, inst.center(v));
            if (d2 <= bound2)
                scratch.push_back(d2);
        });
        if (scratch.size() < k)
            continue;
        auto nth = scratch.begin() + static_cast<std::ptrdiff_t>(k - 1);
        std::nth_element(scratch.begin(), nth, scratch.end());
        if (*nth < best.radius) {
            best.index = p;
            best.radius = *nth;
        }
    }
    if (!std::isfinite(best.radius))
        throw InternalError("anchor: probe bound missed every center");
    best.radius = std::sqrt(best.radius);
    return best;
}

[[nodiscard]] inline Anchor anchor_exact(const Instance& inst, double fraction)
{
    if (inst.size() == 0)
        throw ValidationError("anchor_exact: empty instance");
    std::vector<Vertex> all(inst.size());
    std::iota(all.begin(), all.end(), Vertex{0});
    return anchor_exact_in(inst, all, anchor_count(fraction, inst.size()));
}

/// Same contract as anchor_exact_in, minimized over `samples` uniform draws (with replacement).
[[nodiscard]] inline Anchor anchor_sampled_in(const Instance& inst, std::span<const Vertex> set, std::size_t k,
                                              std::size_t samples, Rng& rng)
{
    if (set.empty())
        throw ValidationError("anchor: empty point set");
    if (samples >= set.size())
        return anchor_exact_in(inst, set, k);
    k = std::clamp<std::size_t>(k, 1, set.size());
    std::vector<double> scratch;
    Anchor best{set[0], std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < samples; ++i) {
        const Vertex p = set[rng.below(set.size())];
        const double r2 = detail::kth_nearest_sq(inst, set, p, k, scratch);
        if (r2 < best.radius || (r2 == best.radius && p < best.index)) {
            best.index = p;
            best.radius = r2;
        }
    }
    best.radius = std::sqrt(best.radius);
    return best;
}

[[nodiscard]] inline Anchor anchor_sampled(const Instance& inst, double fraction, std::size_t samples, Rng& rng)
{
    if (inst.size() == 0)
        throw ValidationError("anchor_sampled: empty instance");
    std::vector<Vertex> all(inst.size());
    std::iota(all.begin(), all.end(), Vertex{0});
    return anchor_sampled_in(inst, all, anchor_count(fraction, inst.size()), samples, rng);
}

/**
 * Radius range for the random sphere around an anchor. Normally [R, 2R]. When
 * R = 0 (at least k coincident centers) we use [delta/4, delta/2] with delta the
 * nearest positive center distance, so the co-centered bodies are cut or
 * enclosed and every other center stays outside. With no positive distance at
 * all the bodies are concentric and [rmin/2, rmin] is used.
 */
struct CutRange
{
    double lo = 0.0;
    double hi = 0.0;
    bool degenerate = false;
};

[[nodiscard]] inline CutRange cut_range(const Instance& inst, std::span<const Vertex> set, const Anchor& a)
{
    if (a.radius > 0.0)
        return {a.radius, 2.0 * a.radius, false};
    const Coords c = inst.center(a.index);
    double delta2 = std::numeric_limits<double>::infinity();
    double rmin = std::numeric_limits<double>::infinity();
    for (Vertex v : set) {
        const double d2 = squared_distance(c, inst.center(v));
        if (d2 > 0.0)
            delta2 = std::min(delta2, d2);
        rmin = std::min(rmin, inst.radius(v));
    }
    if (std::isfinite(delta2)) {
        const double delta = std::sqrt(delta2);
        return {delta / 4.0, delta / 2.0, true};
    }
    return {rmin / 2.0, rmin, true};
}

struct RadialCut
{
    double radius = 0.0;
    VertexSet separator; // bodies meeting the cut sphere
    VertexSet inside;    // strictly inside
    VertexSet outside;   // strictly outside
};

/// Splits `set` by the sphere of radius rho around body `center`'s center.
[[nodiscard]] inline RadialCut split_by_sphere(const Instance& inst, std::span<const Vertex> set, Vertex center,
                                               double rho, double eps = 0.0)
{
    RadialCut cut;
    cut.radius = rho;
    const Coords c = inst.center(center);
    for (Vertex v : set) {
        const double d2 = squared_distance(c, inst.center(v));
        const double r = inst.radius(v);
        if (body_crosses_sphere_sq(inst.kind(), d2, r, rho, eps))
            cut.separator.push_back(v);
        else if (d2 < rho * rho && (inst.kind() == Kind::Ball || r < rho))
            cut.inside.push_back(v);
        else
            cut.outside.push_back(v);
    }
    return cut;
}

/// One draw of the radial cut: cut radius uniform over cut_range(anchor).
[[nodiscard]] inline RadialCut radial_cut_round(const Instance& inst, std::span<const Vertex> set,
                                                const Anchor& anchor, Rng& rng, double eps = 0.0)
{
    const CutRange range = cut_range(inst, set, anchor);
    return split_by_sphere(inst, set, anchor.index, rng.uniform(range.lo, range.hi), eps);
}

enum class AnchorMode { Exact, Sampled };

[[nodiscard]] inline std::string_view to_string(AnchorMode m) noexcept
{
    return m == AnchorMode::Exact ? "exact" : "sampled";
}

struct BallParams
{
    AnchorMode mode = AnchorMode::Sampled;
    int retry_budget = 16;
    double sample_multiplier = 2.0;
    /// A draw is accepted only if |X| <= size_slack * 4 (sum (deg+1)^(1/(d-1)))^((d-1)/d).
    double size_slack = 2.0;
    double epsilon = 0.0;
};

/// Anchor fraction and per-round balance constant of a mode.
[[nodiscard]] inline double ball_fraction(AnchorMode mode, int d)
{
    return mode == AnchorMode::Exact ? std::pow(5.0, -d) : std::pow(9.0, -d);
}

[[nodiscard]] inline double ball_balance(AnchorMode mode, int d) { return 1.0 - ball_fraction(mode, d); }

/// 4 (sum_{v in W} (deg_W(v) + 1)^(1/(d-1)))^((d-1)/d), degrees inside the working set.
[[nodiscard]] inline double ply_size_bound(const IntersectionGraph& g, const Mask& active, std::span<const Vertex> set,
                                           int d)
{
    std::vector<double> w;
    w.reserve(set.size());
    for (Vertex v : set)
        w.push_back(static_cast<double>(degree_in(g, active, v)) + 1.0);
    return 4.0 * power_sum_bound(w, d);
}

/**
 * Ball separator: the balancing loop over radial cuts. Each round anchors a
 * ball holding a fraction of the working centers (5^-d exact, 9^-d sampled),
 * draws the cut radius and accepts the draw if it is (1 - fraction)-balanced on
 * the working set and within the size budget; otherwise redraws, up to
 * retry_budget draws per round.
 */
[[nodiscard]] inline SeparatorResult separate_balls(const Instance& inst, const IntersectionGraph& g,
                                                    std::uint64_t seed, const BallParams& params = {})
{
    if (inst.kind() != Kind::Ball)
        throw ValidationError("ball separator needs a ball instance");
    if (inst.size() == 0)
        throw ValidationError("ball separator: empty instance");
    if (g.n() != inst.size())
        throw ValidationError("graph and instance sizes differ");
    if (params.retry_budget < 1)
        throw ValidationError("retry budget must be at least 1");
    const int d = inst.dimension();
    const double fraction = ball_fraction(params.mode, d);
    const double c = 1.0 - fraction;
    const auto samples =
        static_cast<std::size_t>(std::ceil(params.sample_multiplier * std::pow(9.0, d)));
    const Rng base(seed);

    auto round = [&](const VertexSet& working, int r) {
        RoundOutcome out;
        const Mask active = mask_of(g.n(), working);
        const std::size_t k = anchor_count(fraction, working.size());
        const double size_cap = params.size_slack * ply_size_bound(g, active, working, d);
        const std::size_t limit = balance_threshold(c, working.size());
        json draws = json::array();
        for (int t = 0; t < params.retry_budget; ++t) {
            Rng rng = base.substream(static_cast<std::uint64_t>(r)).substream(static_cast<std::uint64_t>(t));
            const Anchor anchor = params.mode == AnchorMode::Exact
                                      ? anchor_exact_in(inst, working, k)
                                      : anchor_sampled_in(inst, working, k, samples, rng);
            const CutRange range = cut_range(inst, working, anchor);
            const RadialCut cut =
                split_by_sphere(inst, working, anchor.index, rng.uniform(range.lo, range.hi), params.epsilon);

            // Covering check of the analysis: centers within 2R of the anchor.
            std::size_t covered = 0;
            const double two_r = 2.0 * range.lo;
            for (Vertex v : working)
                covered += squared_distance(inst.center(anchor.index), inst.center(v)) <= two_r * two_r ? 1 : 0;
            const double covering_cap = std::pow(8.0, d) * static_cast<double>(k);

            Mask rest = active;
            for (Vertex v : cut.separator)
                rest[v] = 0;
            const std::size_t largest = largest_component_in(g, rest);
            const bool balanced = largest <= std::max<std::size_t>(limit, 1);
            const bool small = static_cast<double>(cut.separator.size()) <= size_cap;
            ++out.attempts;
            draws.push_back({{"anchor", anchor.index},
                             {"anchor_radius", anchor.radius},
                             {"degenerate", range.degenerate},
                             {"cut_radius", cut.radius},
                             {"X", cut.separator.size()},
                             {"inside", cut.inside.size()},
                             {"outside", cut.outside.size()},
                             {"largest", largest},
                             {"covered", covered},
                             {"covering_ok", static_cast<double>(covered) <= covering_cap},
                             {"accepted", balanced && small}});
            if (balanced && small) {
                out.ok = true;
                out.separator = cut.separator;
                out.stages.assign(cut.separator.size(), Stage::RadialCut);
                break;
            }
        }
        if (!out.ok)
            out.failure = "no acceptable radial cut in " + std::to_string(params.retry_budget) + " draws";
        out.trace = {{"round", r}, {"n", working.size()}, {"k", k}, {"size_cap", size_cap}, {"draws", draws}};
        return out;
    };

    SeparatorResult res = balance_loop(g, round, c);
    res.seed = seed;
    res.mode = std::string("ball/") + std::string(to_string(params.mode));
    return res;
}

} // namespace geosep

#endif // GEOSEP_BALL_SEPARATOR_HPP
