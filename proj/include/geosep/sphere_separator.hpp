#ifndef GEOSEP_SPHERE_SEPARATOR_HPP
#define GEOSEP_SPHERE_SEPARATOR_HPP

#include "ball_separator.hpp"
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
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace geosep {

/**
 * Operating constants of the sphere pipeline.
 *
 * `certified` uses the constants for which every inequality of the analysis
 * holds (see Constants). At d = 2 that is c = 1/512 and C ~ 45, which makes the
 * budget Sigma exceed n for any graph of fewer than several thousand vertices,
 * so every round degenerates into the trivial all-vertex separator.
 * `practical` keeps the cap multiplier and the structure of every step, takes
 * C = 4.5 (Step 1 still guarantees Delta <= Sigma/4 for any C > 4) and a center
 * fraction of 1/16, raised per round to (floor(Sigma/4) + 1)/n when X1 alone
 * would otherwise use up the balance slack (at most 1/5).
 */
struct SphereParams
{
    double center_fraction = 0.0;   // c
    double budget_multiplier = 0.0; // C
    double cap_multiplier = 0.0;    // C'
    bool adaptive_fraction = false;
    double max_center_fraction = 0.2;
    int retry_budget = 16;
    double epsilon = 0.0;
    std::string preset = "custom";

    [[nodiscard]] static SphereParams certified(int d)
    {
        const Constants k = Constants::for_dimension(d);
        SphereParams p;
        p.center_fraction = k.center_fraction;
        p.budget_multiplier = k.budget_multiplier;
        p.cap_multiplier = k.cap_multiplier;
        p.preset = "certified";
        return p;
    }

    [[nodiscard]] static SphereParams practical(int d)
    {
        SphereParams p = certified(d);
        p.center_fraction = 1.0 / 16.0;
        p.budget_multiplier = 4.5;
        p.adaptive_fraction = true;
        p.preset = "practical";
        return p;
    }

    [[nodiscard]] static SphereParams preset_named(const std::string& name, int d)
    {
        if (name == "certified")
            return certified(d);
        if (name == "practical")
            return practical(d);
        throw ValidationError("unknown constants preset '" + name + "' (expected certified or practical)");
    }

    [[nodiscard]] double balance() const { return 1.0 - center_fraction; }

    /// Center fraction used by a round with budget sigma on n vertices.
    [[nodiscard]] double round_fraction(double sigma, std::size_t n) const
    {
        if (!adaptive_fraction || n == 0)
            return center_fraction;
        const double needed = (std::floor(sigma / 4.0) + 1.0) / static_cast<double>(n);
        return std::max(center_fraction, std::min(max_center_fraction, needed));
    }

    /// C >= 4^(1-1/d) c^(-1/d): Step 1 then also forces Delta <= c n.
    [[nodiscard]] bool certifies_degree_bound(int d) const
    {
        return budget_multiplier >= std::pow(4.0, 1.0 - 1.0 / d) * std::pow(center_fraction, -1.0 / d) * (1 - 1e-12);
    }

    void validate() const
    {
        if (!(center_fraction > 0.0 && center_fraction <= 0.2))
            throw ValidationError("sphere center fraction must lie in (0, 1/5]");
        if (adaptive_fraction && !(max_center_fraction >= center_fraction && max_center_fraction <= 0.2))
            throw ValidationError("sphere max center fraction must lie in [c, 1/5]");
        if (!(budget_multiplier > 4.0))
            throw ValidationError("sphere budget multiplier must exceed 4");
        if (!(cap_multiplier > 0.0))
            throw ValidationError("sphere cap multiplier must be positive");
        if (retry_budget < 1)
            throw ValidationError("retry budget must be at least 1");
    }
};

/// Sigma = C (sum_v deg(v)^(1/(d-1)))^(1-1/d), degrees inside the active set.
[[nodiscard]] inline double sphere_budget(const IntersectionGraph& g, const Mask& active, std::span<const Vertex> set,
                                          int d, double budget_multiplier)
{
    std::vector<double> w;
    w.reserve(set.size());
    for (Vertex v : set)
        w.push_back(static_cast<double>(degree_in(g, active, v)));
    return budget_multiplier * power_sum_bound(w, d);
}

// ---------------------------------------------------------------------------
// Nested spheres

struct NestedCut
{
    VertexSet separator;        // N(median) inside the active set
    Vertex median = 0;
    std::size_t containing = 0; // spheres with p strictly inside
};

/**
 * Spheres of `set` containing p, ordered by radius then index (a linear
 * extension of containment); X = neighbors of the median one. Every component
 * of G[set] - X then has at most |set| - s vertices.
 */
[[nodiscard]] inline NestedCut nested_separator_in(const Instance& inst, const IntersectionGraph& g,
                                                   const Mask& active, std::span<const Vertex> set, Coords p,
                                                   std::size_t s)
{
    if (p.size() != static_cast<std::size_t>(inst.dimension()))
        throw ValidationError("nested_separator: point dimension mismatch");
    std::vector<Vertex> chain;
    for (Vertex v : set) {
        const double r = inst.radius(v);
        if (squared_distance(p, inst.center(v)) < r * r)
            chain.push_back(v);
    }
    if (s == 0 || chain.size() < 2 * s)
        throw ValidationError("nested_separator: " + std::to_string(chain.size()) +
                              " spheres contain p, need at least 2s = " + std::to_string(2 * s));
    std::stable_sort(chain.begin(), chain.end(),
                     [&](Vertex a, Vertex b) { return inst.radius(a) < inst.radius(b); });
    NestedCut out;
    out.containing = chain.size();
    out.median = chain[(chain.size() - 1) / 2];
    for (Vertex w : g.neighbors(out.median))
        if (active[w])
            out.separator.push_back(w);
    return out;
}

[[nodiscard]] inline NestedCut nested_separator(const Instance& inst, const IntersectionGraph& g, Coords p,
                                                std::size_t s)
{
    if (inst.kind() != Kind::Sphere)
        throw ValidationError("nested_separator needs a sphere instance");
    std::vector<Vertex> all(inst.size());
    std::iota(all.begin(), all.end(), Vertex{0});
    return nested_separator_in(inst, g, Mask(inst.size(), 1), all, p, s);
}

// ---------------------------------------------------------------------------
// Step 1

struct Step1
{
    VertexSet x1;
    std::size_t delta = 0; // max degree of G[set] - X1
};

/// X1 = the floor(Sigma/4) vertices of highest degree (ties by lower index).
[[nodiscard]] inline Step1 step1_high_degree(const IntersectionGraph& g, const Mask& active,
                                             std::span<const Vertex> set, double sigma)
{
    Step1 out;
    std::vector<std::pair<std::size_t, Vertex>> by_degree;
    by_degree.reserve(set.size());
    for (Vertex v : set)
        by_degree.emplace_back(degree_in(g, active, v), v);
    const auto take = std::min<std::size_t>(set.size(), static_cast<std::size_t>(std::floor(sigma / 4.0)));
    std::partial_sort(by_degree.begin(), by_degree.begin() + static_cast<std::ptrdiff_t>(take), by_degree.end(),
                      [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });
    Mask rest = active;
    for (std::size_t i = 0; i < take; ++i) {
        out.x1.push_back(by_degree[i].second);
        rest[by_degree[i].second] = 0;
    }
    std::sort(out.x1.begin(), out.x1.end());
    for (Vertex v : set)
        if (rest[v])
            out.delta = std::max(out.delta, degree_in(g, rest, v));
    return out;
}

[[nodiscard]] inline Step1 step1_high_degree(const IntersectionGraph& g, double sigma)
{
    std::vector<Vertex> all(g.n());
    std::iota(all.begin(), all.end(), Vertex{0});
    return step1_high_degree(g, Mask(g.n(), 1), all, sigma);
}

// ---------------------------------------------------------------------------
// Step 2

struct Step2
{
    std::optional<Vertex> s0;   // localizing sphere
    std::size_t containers = 0; // spheres of S1 that contain S0
    bool nested = false;        // early exit through the nested-sphere lemma
    std::optional<Vertex> median;
    VertexSet x2;
    VertexSet s2; // sorted
};

/**
 * S0 = smallest sphere of S1 (ties by index) with at least k centers of S1
 * strictly inside. Spheres are scanned in radius order and the count stops as
 * soon as it reaches k.
 */
[[nodiscard]] inline std::optional<Vertex> localizing_sphere(const Instance& inst, std::span<const Vertex> s1,
                                                             std::size_t k)
{
    if (s1.empty())
        return std::nullopt;
    std::vector<Vertex> order(s1.begin(), s1.end());
    std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return inst.radius(a) < inst.radius(b); });
    const double median_r = inst.radius(order[order.size() / 2]);
    CellGrid grid(inst.dimension(), s1, 2.0 * median_r, [&](Vertex v) { return inst.center(v); });
    for (Vertex t : order) {
        const Coords c = inst.center(t);
        const double r = inst.radius(t);
        std::size_t count = 0;
        grid.for_each_near(c, r, [&](Vertex v) {
            if (squared_distance(c, inst.center(v)) < r * r)
                ++count;
        });
        if (count >= k)
            return t;
    }
    return std::nullopt;
}

/// Step 2 on the vertex set S1 of a round whose working set has n vertices.
[[nodiscard]] inline Step2 step2_localize(const Instance& inst, const IntersectionGraph& g, const Mask& s1_mask,
                                          std::span<const Vertex> s1, std::size_t n, double c, double eps = 0.0)
{
    Step2 out;
    const std::size_t k = anchor_count(std::min(1.0, 4.0 * c), n);
    out.s0 = localizing_sphere(inst, s1, k);
    if (!out.s0) {
        out.s2.assign(s1.begin(), s1.end());
        return out;
    }
    const Vertex s0 = *out.s0;
    const Coords c0 = inst.center(s0);
    const double r0 = inst.radius(s0);
    for (Vertex t : s1)
        if (sphere_relation_sq(squared_distance(c0, inst.center(t)), r0, inst.radius(t), eps) ==
            SphereRelation::FirstInsideSecond)
            ++out.containers;

    if (static_cast<double>(out.containers) >= 2.0 * c * static_cast<double>(n)) {
        const auto s = static_cast<std::size_t>(std::ceil(c * static_cast<double>(n) - 1e-9));
        NestedCut cut = nested_separator_in(inst, g, s1_mask, s1, c0, std::max<std::size_t>(s, 1));
        out.nested = true;
        out.median = cut.median;
        out.x2 = std::move(cut.separator);
        return out;
    }

    Mask in_x2(g.n(), 0);
    for (Vertex w : g.neighbors(s0))
        if (s1_mask[w]) {
            out.x2.push_back(w);
            in_x2[w] = 1;
        }
    for (Vertex t : s1)
        if (t != s0 && !in_x2[t] &&
            sphere_relation_sq(squared_distance(inst.center(t), c0), inst.radius(t), r0, eps) ==
                SphereRelation::FirstInsideSecond)
            out.s2.push_back(t);
    return out;
}

// ---------------------------------------------------------------------------
// Step 3

/// Cap radius of the sphere (rho around the cut center) inside a ball at distance D; 0 if they only touch.
[[nodiscard]] inline double cap_radius_unchecked(double D, double rho, double r)
{
    if (D == 0.0)
        return rho;
    const double h = (rho * rho + D * D - r * r) / (2.0 * D);
    if (h < 0.0)
        return rho;
    const double c2 = rho * rho - h * h;
    return c2 > 0.0 ? std::sqrt(c2) : 0.0;
}

struct Step3Setup
{
    Anchor b_in;
    CutRange range;                  // S_rand radius drawn from [lo, hi]; lo plays R
    std::vector<std::size_t> degree; // degree in G(S2), indexed by vertex
};

[[nodiscard]] inline Step3Setup step3_prepare(const Instance& inst, const IntersectionGraph& g,
                                              std::span<const Vertex> s2, std::size_t k)
{
    Step3Setup st;
    st.b_in = anchor_exact_in(inst, s2, k);
    st.range = cut_range(inst, s2, st.b_in);
    const Mask m = mask_of(g.n(), s2);
    st.degree.assign(g.n(), 0);
    for (Vertex v : s2)
        st.degree[v] = degree_in(g, m, v);
    return st;
}

/**
 * X3 for one S_rand radius: spheres of S2 crossing S_rand whose cap radius is at
 * most C' R (deg/Sigma)^(1/(d-1)). Degree-0 spheres get threshold 0 and are
 * never taken; an isolated sphere cannot connect anything.
 */
[[nodiscard]] inline VertexSet step3_select(const Instance& inst, std::span<const Vertex> s2, const Step3Setup& st,
                                            double sigma, double cap_multiplier, double rho, double eps = 0.0)
{
    const int d = inst.dimension();
    const Coords c = inst.center(st.b_in.index);
    const double R = st.range.lo;
    VertexSet x3;
    for (Vertex v : s2) {
        if (st.degree[v] == 0)
            continue;
        const double d2 = squared_distance(c, inst.center(v));
        const double r = inst.radius(v);
        if (!sphere_crosses_sphere_sq(d2, r, rho, eps))
            continue;
        const double threshold =
            cap_multiplier * R * std::pow(static_cast<double>(st.degree[v]) / sigma, 1.0 / (d - 1));
        if (cap_radius_unchecked(std::sqrt(d2), rho, r) <= threshold)
            x3.push_back(v);
    }
    return x3;
}

struct Step3
{
    Step3Setup setup;
    double rho = 0.0;
    VertexSet x3;
    int attempts = 0;
    bool ok = false;
};

/// Draws S_rand until |X3| <= Sigma/4, at most `retry_budget` times.
[[nodiscard]] inline Step3 step3_random_sphere(const Instance& inst, const IntersectionGraph& g,
                                               std::span<const Vertex> s2, double sigma, double cap_multiplier,
                                               std::size_t k, Rng& rng, int retry_budget = 16, double eps = 0.0)
{
    Step3 out;
    out.setup = step3_prepare(inst, g, s2, k);
    for (int t = 0; t < retry_budget; ++t) {
        ++out.attempts;
        out.rho = rng.uniform(out.setup.range.lo, out.setup.range.hi);
        out.x3 = step3_select(inst, s2, out.setup, sigma, cap_multiplier, out.rho, eps);
        if (static_cast<double>(out.x3.size()) <= sigma / 4.0) {
            out.ok = true;
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Step 4

struct Step4
{
    VertexSet x4;
    VertexSet packing; // S_1, S_2, ... in selection order
};

/**
 * Greedy packing over S3 = S2 - X3: repeatedly take the largest remaining
 * sphere crossing S_rand (ties by index), put its G(S3)-neighborhood in X4 and
 * drop every remaining sphere meeting the closed ball it bounds. The balls of
 * the chosen spheres are pairwise disjoint; this is re-checked.
 */
[[nodiscard]] inline Step4 step4_greedy_packing(const Instance& inst, const IntersectionGraph& g,
                                                std::span<const Vertex> s3, Coords cut_center, double rho,
                                                double eps = 0.0)
{
    Step4 out;
    const Mask s3_mask = mask_of(g.n(), s3);
    std::vector<Vertex> cands;
    for (Vertex v : s3)
        if (sphere_crosses_sphere_sq(squared_distance(cut_center, inst.center(v)), inst.radius(v), rho, eps))
            cands.push_back(v);
    std::stable_sort(cands.begin(), cands.end(), [&](Vertex a, Vertex b) { return inst.radius(a) > inst.radius(b); });
    std::vector<char> alive(cands.size(), 1);
    Mask in_x4(g.n(), 0);
    for (std::size_t i = 0; i < cands.size(); ++i) {
        if (!alive[i])
            continue;
        const Vertex si = cands[i];
        out.packing.push_back(si);
        for (Vertex w : g.neighbors(si))
            if (s3_mask[w])
                in_x4[w] = 1;
        const Coords ci = inst.center(si);
        const double ri = inst.radius(si);
        for (std::size_t j = i; j < cands.size(); ++j)
            if (alive[j] &&
                ball_crosses_sphere_sq(squared_distance(ci, inst.center(cands[j])), ri, inst.radius(cands[j]), eps))
                alive[j] = 0;
    }
    for (Vertex v : s3)
        if (in_x4[v])
            out.x4.push_back(v);

    for (std::size_t i = 0; i < out.packing.size(); ++i)
        for (std::size_t j = i + 1; j < out.packing.size(); ++j) {
            const Vertex a = out.packing[i];
            const Vertex b = out.packing[j];
            const double sum = inst.radius(b) + inst.radius(a);
            if (!(squared_distance(inst.center(a), inst.center(b)) > sum * sum))
                throw InternalError("packing balls " + std::to_string(a) + " and " + std::to_string(b) +
                                    " are not disjoint");
        }
    return out;
}

// ---------------------------------------------------------------------------
// Pipeline

namespace detail {

inline json index_list(std::span<const Vertex> vs) { return json(std::vector<Vertex>(vs.begin(), vs.end())); }

inline void append(RoundOutcome& out, std::span<const Vertex> vs, Stage stage)
{
    for (Vertex v : vs) {
        out.separator.push_back(v);
        out.stages.push_back(stage);
    }
}

} // namespace detail

/**
 * Sphere separator: Steps 1-4 as the round function of the balancing loop with
 * per-round balance 1 - c. The trace of every round records the budgets and
 * the geometric checks (packing volume inequality, component buckets).
 */
[[nodiscard]] inline SeparatorResult separate_spheres(const Instance& inst, const IntersectionGraph& g,
                                                      std::uint64_t seed, SphereParams params)
{
    if (inst.kind() != Kind::Sphere)
        throw ValidationError("sphere separator needs a sphere instance");
    if (inst.size() == 0)
        throw ValidationError("sphere separator: empty instance");
    if (g.n() != inst.size())
        throw ValidationError("graph and instance sizes differ");
    params.validate();
    const int d = inst.dimension();
    const double eps = params.epsilon;
    const Rng base(seed);

    auto round = [&](const VertexSet& working, int r) {
        RoundOutcome out;
        const std::size_t n = working.size();
        const Mask active = mask_of(g.n(), working);
        const double sigma = sphere_budget(g, active, working, d, params.budget_multiplier);
        const double c = params.round_fraction(sigma, n);
        out.balance = 1.0 - c;
        SphereParams at_c = params;
        at_c.center_fraction = c;
        const bool check_degree = at_c.certifies_degree_bound(d);
        json tr = {{"round", r}, {"n", n}, {"Sigma", sigma}, {"c", c}};
        if (sigma >= static_cast<double>(n)) {
            out.ok = true;
            out.trivial = true;
            out.attempts = 1;
            detail::append(out, working, Stage::Trivial);
            tr["trivial"] = true;
            out.trace = std::move(tr);
            return out;
        }
        tr["trivial"] = false;

        // Step 1
        const Step1 s1 = step1_high_degree(g, active, working, sigma);
        tr["Delta"] = s1.delta;
        tr["X1"] = detail::index_list(s1.x1);
        if (static_cast<double>(s1.delta) > sigma / 4.0)
            throw InternalError("round " + std::to_string(r) + ": Delta = " + std::to_string(s1.delta) +
                                " exceeds Sigma/4 after removing X1");
        if (check_degree && static_cast<double>(s1.delta) > c * static_cast<double>(n))
            throw InternalError("round " + std::to_string(r) + ": Delta exceeds c n");
        Mask s1_mask = active;
        for (Vertex v : s1.x1)
            s1_mask[v] = 0;
        VertexSet s1_set;
        for (Vertex v : working)
            if (s1_mask[v])
                s1_set.push_back(v);

        // Step 2
        const Step2 s2 = step2_localize(inst, g, s1_mask, s1_set, n, c, eps);
        tr["S0"] = s2.s0 ? json(*s2.s0) : json(nullptr);
        tr["containers"] = s2.containers;
        tr["X2_nested"] = s2.nested;
        tr["X2"] = detail::index_list(s2.x2);
        tr["S2"] = s2.s2.size();
        detail::append(out, s1.x1, Stage::HighDegree);
        if (s2.nested) {
            tr["early_exit"] = "nested";
            tr["median"] = *s2.median;
            detail::append(out, s2.x2, Stage::Nested);
            out.ok = true;
            out.attempts = 1;
            out.trace = std::move(tr);
            return out;
        }
        detail::append(out, s2.x2, Stage::Neighborhood);
        if (static_cast<double>(s2.s2.size()) < (1.0 - c) * static_cast<double>(n)) {
            tr["early_exit"] = "small_S2";
            out.ok = true;
            out.attempts = 1;
            out.trace = std::move(tr);
            return out;
        }
        tr["early_exit"] = nullptr;

        // Steps 3 and 4, redrawn until balanced
        const std::size_t k = anchor_count(std::min(1.0, 4.0 * c), n);
        const Step3Setup setup = step3_prepare(inst, g, s2.s2, k);
        const Coords center = inst.center(setup.b_in.index);
        const double R = setup.range.lo;
        tr["k"] = k;
        tr["B_in"] = {{"index", setup.b_in.index},
                      {"center", std::vector<double>(center.begin(), center.end())},
                      {"radius", setup.b_in.radius},
                      {"R", R},
                      {"degenerate", setup.range.degenerate}};
        const std::size_t limit = std::max<std::size_t>(balance_threshold(1.0 - c, n), 1);
        const Mask s2_mask = mask_of(g.n(), s2.s2);
        json draws = json::array();
        for (int t = 0; t < params.retry_budget; ++t) {
            ++out.attempts;
            Rng rng = base.substream(static_cast<std::uint64_t>(r)).substream(static_cast<std::uint64_t>(t));
            const double rho = rng.uniform(setup.range.lo, setup.range.hi);
            VertexSet x3 = step3_select(inst, s2.s2, setup, sigma, params.cap_multiplier, rho, eps);
            json draw = {{"S_rand_radius", rho}, {"X3", x3.size()}};
            if (static_cast<double>(x3.size()) > sigma / 4.0) {
                draw["accepted"] = false;
                draw["reason"] = "X3 over budget";
                draws.push_back(std::move(draw));
                continue;
            }
            Mask s3_mask = s2_mask;
            for (Vertex v : x3)
                s3_mask[v] = 0;
            VertexSet s3;
            for (Vertex v : s2.s2)
                if (s3_mask[v])
                    s3.push_back(v);
            const Step4 s4 = step4_greedy_packing(inst, g, s3, center, rho, eps);

            // Packing volume inequality: sum tau_(d-1) r~^(d-1) <= sigma_d (2R)^(d-1).
            double lhs = 0.0;
            for (Vertex v : s4.packing) {
                const double D = std::sqrt(squared_distance(center, inst.center(v)));
                lhs += Constants::tau(d - 1) * std::pow(cap_radius_unchecked(D, rho, inst.radius(v)), d - 1);
            }
            const double rhs = Constants::sigma(d) * std::pow(2.0 * R, d - 1);
            if (lhs > rhs * (1.0 + 1e-9))
                throw InternalError("round " + std::to_string(r) + ": packing volume " + std::to_string(lhs) +
                                    " exceeds " + std::to_string(rhs));

            // Component buckets of G(S3) - X4.
            Mask rest = s3_mask;
            for (Vertex v : s4.x4)
                rest[v] = 0;
            std::size_t b_pack = 0, b_in = 0, b_out = 0, max_pack = 0, max_in = 0, max_out = 0;
            for (const auto& comp : components_in(g, rest)) {
                auto in_ball_of = [&](Vertex v) -> std::optional<Vertex> {
                    for (Vertex s : s4.packing) {
                        if (s == v)
                            return s;
                        if (sphere_relation_sq(squared_distance(inst.center(v), inst.center(s)), inst.radius(v),
                                               inst.radius(s), eps) == SphereRelation::FirstInsideSecond)
                            return s;
                    }
                    return std::nullopt;
                };
                auto inside_cut = [&](Vertex v) {
                    const double D = std::sqrt(squared_distance(center, inst.center(v)));
                    return D + inst.radius(v) < rho;
                };
                const auto ball = in_ball_of(comp.front());
                bool ok = true;
                if (ball) {
                    for (Vertex v : comp)
                        ok = ok && in_ball_of(v) == ball;
                    b_pack += comp.size();
                    max_pack = std::max(max_pack, comp.size());
                } else if (inside_cut(comp.front())) {
                    for (Vertex v : comp)
                        ok = ok && !in_ball_of(v) && inside_cut(v);
                    b_in += comp.size();
                    max_in = std::max(max_in, comp.size());
                } else {
                    for (Vertex v : comp)
                        ok = ok && !in_ball_of(v) && !inside_cut(v) &&
                             !sphere_crosses_sphere_sq(squared_distance(center, inst.center(v)), inst.radius(v), rho,
                                                       eps);
                    b_out += comp.size();
                    max_out = std::max(max_out, comp.size());
                }
                if (!ok)
                    throw InternalError("round " + std::to_string(r) +
                                        ": a residual component straddles the packing/cut classification");
            }
            if (max_pack + 1 > k)
                throw InternalError("round " + std::to_string(r) + ": component inside a packing ball has " +
                                    std::to_string(max_pack) + " >= k vertices");
            if (b_out + k > s2.s2.size())
                throw InternalError("round " + std::to_string(r) + ": outside bucket exceeds |S2| - k");
            const double inside_cap = std::pow(8.0, d) * static_cast<double>(k);

            Mask after = s1_mask;
            for (Vertex v : s2.x2)
                after[v] = 0;
            for (Vertex v : x3)
                after[v] = 0;
            for (Vertex v : s4.x4)
                after[v] = 0;
            const std::size_t largest = largest_component_in(g, after);
            const bool balanced = largest <= limit;
            draw["X4"] = s4.x4.size();
            draw["packing"] = s4.packing.size();
            draw["largest"] = largest;
            draw["accepted"] = balanced;
            if (!balanced)
                draw["reason"] = "not balanced";
            draws.push_back(std::move(draw));
            if (!balanced)
                continue;

            detail::append(out, x3, Stage::RandomSphere);
            detail::append(out, s4.x4, Stage::Packing);
            out.ok = true;
            tr["X3"] = detail::index_list(x3);
            tr["X4"] = detail::index_list(s4.x4);
            tr["packing"] = detail::index_list(s4.packing);
            tr["S_rand"] = {{"center", std::vector<double>(center.begin(), center.end())}, {"radius", rho}};
            tr["volume_lhs"] = lhs;
            tr["volume_rhs"] = rhs;
            tr["packing_disjoint"] = true;
            tr["X4_within_budget"] = static_cast<double>(s4.x4.size()) <= sigma / 4.0;
            tr["buckets"] = {{"packing", b_pack},
                             {"inside", b_in},
                             {"outside", b_out},
                             {"largest_inside", max_in},
                             {"inside_cap", inside_cap},
                             {"inside_within_cap", static_cast<double>(b_in) <= inside_cap}};
            break;
        }
        tr["draws"] = std::move(draws);
        if (!out.ok)
            out.failure = "no acceptable S_rand in " + std::to_string(params.retry_budget) + " draws";
        out.trace = std::move(tr);
        return out;
    };

    SeparatorResult res = balance_loop(g, round, params.balance());
    res.seed = seed;
    res.mode = "sphere/" + params.preset;
    return res;
}

} // namespace geosep

#endif // GEOSEP_SPHERE_SEPARATOR_HPP
