#ifndef GEOSEP_VERIFY_HPP
#define GEOSEP_VERIFY_HPP

#include "error.hpp"
#include "graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace geosep {

/// Largest component size allowed by a c-balanced separator of an n-vertex graph.
[[nodiscard]] inline std::size_t balance_threshold(double c, std::size_t n)
{
    return static_cast<std::size_t>(std::floor(c * static_cast<double>(n) + 1e-9));
}

struct BalanceCheck
{
    bool balanced = false;
    std::size_t largest = 0;
    std::size_t threshold = 0;
};

/// Every component of G \ X has at most floor(c n) vertices.
[[nodiscard]] inline BalanceCheck check_balanced(const IntersectionGraph& g, std::span<const Vertex> separator,
                                                 double c = 2.0 / 3.0)
{
    BalanceCheck out;
    out.threshold = balance_threshold(c, g.n());
    for (const auto& comp : components(g, separator))
        out.largest = std::max(out.largest, comp.size());
    out.balanced = out.largest <= out.threshold;
    return out;
}

/// Union-find with path halving and union by size.
class DisjointSet
{
public:
    explicit DisjointSet(std::size_t n) : parent_(n), size_(n, 1)
    {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) noexcept
    {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::size_t a, std::size_t b) noexcept
    {
        a = find(a);
        b = find(b);
        if (a == b)
            return false;
        if (size_[a] < size_[b])
            std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        return true;
    }

    std::size_t size_of(std::size_t x) noexcept { return size_[find(x)]; }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

struct SeparationAudit
{
    bool labels_consistent = true;   // every surviving edge stays inside one labelled component
    bool sizes_match = true;         // union-find component sizes equal the labelled ones
    std::size_t cross_edges = 0;     // surviving edges whose endpoints carry different labels
    std::vector<std::size_t> component_sizes; // from union-find, sorted descending
};

/**
 * Independent re-check of a separation: recomputes components of G \ X with
 * union-find and scans every edge against the claimed per-vertex component
 * labels (label < 0 marks separator vertices).
 */
[[nodiscard]] inline SeparationAudit audit_separation(const IntersectionGraph& g, std::span<const Vertex> separator,
                                                      std::span<const std::int64_t> labels)
{
    SeparationAudit audit;
    const std::size_t n = g.n();
    Mask removed = mask_of(n, separator);
    DisjointSet uf(n);
    for (auto [u, v] : g.edges()) {
        if (removed[u] || removed[v])
            continue;
        uf.unite(u, v);
        if (labels.size() == n && labels[u] != labels[v]) {
            ++audit.cross_edges;
            audit.labels_consistent = false;
        }
    }
    std::vector<std::size_t> claimed;
    if (labels.size() == n) {
        std::int64_t max_label = -1;
        for (std::size_t v = 0; v < n; ++v) {
            if (removed[v] != (labels[v] < 0))
                audit.labels_consistent = false;
            max_label = std::max(max_label, labels[v]);
        }
        claimed.assign(static_cast<std::size_t>(max_label + 1), 0);
        for (std::size_t v = 0; v < n; ++v)
            if (labels[v] >= 0)
                ++claimed[static_cast<std::size_t>(labels[v])];
        std::sort(claimed.rbegin(), claimed.rend());
    }
    for (std::size_t v = 0; v < n; ++v)
        if (!removed[v] && uf.find(v) == v)
            audit.component_sizes.push_back(uf.size_of(v));
    std::sort(audit.component_sizes.rbegin(), audit.component_sizes.rend());
    if (labels.size() == n)
        audit.sizes_match = claimed == audit.component_sizes;
    return audit;
}

// ---------------------------------------------------------------------------
// Bounds

struct BoundReport
{
    std::size_t n = 0;
    std::size_t m = 0;
    int d = 2;
    double degree_sum_bound = 0.0; // (sum deg^(1/(d-1)))^(1-1/d)
    double ply_proxy_bound = 0.0;  // same with ply <= deg + 1
    double edge_bound = 0.0;       // m^(1/d) n^(1-2/d)
    std::optional<std::size_t> t;
    std::optional<double> ktt_bound; // t^(1/d) n^(1-1/d)
    std::size_t achieved = 0;

    /// achieved / bound, or nullopt when the bound is 0.
    [[nodiscard]] static std::optional<double> ratio(std::size_t achieved, double bound)
    {
        if (bound <= 0.0)
            return std::nullopt;
        return static_cast<double>(achieved) / bound;
    }

    /// degree_sum_bound <= 2^(1/d) edge_bound, the Hoelder step from degrees to edges.
    [[nodiscard]] bool holder_chain_holds() const
    {
        return degree_sum_bound <= std::pow(2.0, 1.0 / d) * edge_bound * (1.0 + 1e-12) + 1e-12;
    }
};

/// (sum_v w(v)^(1/(d-1)))^(1-1/d) over the given weights.
[[nodiscard]] inline double power_sum_bound(std::span<const double> weights, int d)
{
    const double p = 1.0 / (d - 1);
    double s = 0.0;
    for (double w : weights)
        s += w > 0.0 ? std::pow(w, p) : 0.0;
    return std::pow(s, 1.0 - 1.0 / d);
}

[[nodiscard]] inline BoundReport bounds(const IntersectionGraph& g, int d, std::size_t achieved,
                                        std::optional<std::size_t> t = std::nullopt)
{
    if (d < 2)
        throw ValidationError("bounds: d must be at least 2");
    BoundReport r;
    r.n = g.n();
    r.m = g.m();
    r.d = d;
    r.achieved = achieved;
    std::vector<double> deg(g.n());
    std::vector<double> ply(g.n());
    for (Vertex v = 0; v < g.n(); ++v) {
        deg[v] = static_cast<double>(g.degree(v));
        ply[v] = deg[v] + 1.0;
    }
    r.degree_sum_bound = power_sum_bound(deg, d);
    r.ply_proxy_bound = power_sum_bound(ply, d);
    const auto n = static_cast<double>(r.n);
    r.edge_bound = r.m == 0 ? 0.0 : std::pow(static_cast<double>(r.m), 1.0 / d) * std::pow(n, 1.0 - 2.0 / d);
    if (t) {
        r.t = t;
        r.ktt_bound = std::pow(static_cast<double>(*t), 1.0 / d) * std::pow(n, 1.0 - 1.0 / d);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Brute-force oracle

inline constexpr std::size_t kBruteForceMaxVertices = 20;

struct MinSeparator
{
    std::size_t size = 0;
    VertexSet witness;
};

/**
 * Minimum-cardinality c-balanced separator by enumerating vertex subsets in
 * order of size, then lexicographically; the witness is the first hit.
 */
[[nodiscard]] inline MinSeparator brute_force_min_separator(const IntersectionGraph& g, double c = 2.0 / 3.0)
{
    const std::size_t n = g.n();
    if (n > kBruteForceMaxVertices)
        throw ValidationError("brute_force_min_separator: refusing n = " + std::to_string(n) + " > 20");
    const std::size_t limit = balance_threshold(c, n);
    std::vector<std::uint32_t> adj(n, 0);
    for (Vertex v = 0; v < n; ++v)
        for (Vertex w : g.neighbors(v))
            adj[v] |= std::uint32_t{1} << w;

    auto largest_after = [&](std::uint32_t removed) {
        std::uint32_t left = ((n == 32) ? ~0U : ((std::uint32_t{1} << n) - 1)) & ~removed;
        std::size_t best = 0;
        while (left != 0) {
            std::uint32_t comp = left & (~left + 1);
            std::uint32_t frontier = comp;
            while (frontier != 0) {
                const int v = std::countr_zero(frontier);
                frontier &= frontier - 1;
                const std::uint32_t fresh = adj[static_cast<std::size_t>(v)] & left & ~comp;
                comp |= fresh;
                frontier |= fresh;
            }
            left &= ~comp;
            best = std::max(best, static_cast<std::size_t>(std::popcount(comp)));
        }
        return best;
    };

    std::vector<std::size_t> pick;
    for (std::size_t s = 0; s <= n; ++s) {
        pick.resize(s);
        std::iota(pick.begin(), pick.end(), std::size_t{0});
        while (true) {
            std::uint32_t mask = 0;
            for (std::size_t v : pick)
                mask |= std::uint32_t{1} << v;
            if (largest_after(mask) <= limit) {
                MinSeparator out;
                out.size = s;
                out.witness.assign(pick.begin(), pick.end());
                return out;
            }
            // next combination in lexicographic order
            std::size_t i = s;
            while (i > 0 && pick[i - 1] == n - s + i - 1)
                --i;
            if (i == 0)
                break;
            ++pick[i - 1];
            for (std::size_t j = i; j < s; ++j)
                pick[j] = pick[j - 1] + 1;
        }
    }
    throw InternalError("brute_force_min_separator: removing every vertex must be balanced");
}

/// Least-squares slope of log(size) against log(n).
[[nodiscard]] inline double scaling_fit(std::span<const std::pair<double, double>> points)
{
    if (points.size() < 3)
        throw ValidationError("scaling_fit: need at least 3 points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(points[i].first > 0.0) || !(points[i].second > 0.0))
            throw ValidationError("scaling_fit: n and size must be positive");
        if (i > 0 && !(points[i].first > points[i - 1].first))
            throw ValidationError("scaling_fit: n must be strictly increasing");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto k = static_cast<double>(points.size());
    for (auto [n, size] : points) {
        const double x = std::log(n);
        const double y = std::log(size);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = k * sxx - sx * sx;
    return (k * sxy - sx * sy) / denom;
}

} // namespace geosep

#endif // GEOSEP_VERIFY_HPP
