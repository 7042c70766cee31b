#ifndef GEOSEP_GRAPH_HPP
#define GEOSEP_GRAPH_HPP

#include "error.hpp"
#include "geometry.hpp"
#include "instance.hpp"
#include "spatial.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

namespace geosep {

using Vertex = std::uint32_t;
using VertexSet = std::vector<Vertex>;

/// Undirected simple graph in CSR form with sorted neighbor lists.
class IntersectionGraph
{
public:
    IntersectionGraph() : offsets_{0} {}

    /// Builds from an edge list; duplicates, orientation and order are normalized.
    static IntersectionGraph from_edges(std::size_t n, std::vector<std::pair<Vertex, Vertex>> edges)
    {
        for (auto& [u, v] : edges) {
            if (u >= n || v >= n)
                throw ValidationError("edge endpoint out of range");
            if (u == v)
                throw ValidationError("self-loop on vertex " + std::to_string(u));
            if (u > v)
                std::swap(u, v);
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

        IntersectionGraph g;
        g.offsets_.assign(n + 1, 0);
        for (auto [u, v] : edges) {
            ++g.offsets_[u + 1];
            ++g.offsets_[v + 1];
        }
        std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
        g.neighbors_.resize(g.offsets_.back());
        std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
        for (auto [u, v] : edges) {
            g.neighbors_[fill[u]++] = v;
            g.neighbors_[fill[v]++] = u;
        }
        for (std::size_t v = 0; v < n; ++v)
            std::sort(g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]),
                      g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]));
        return g;
    }

    [[nodiscard]] std::size_t n() const noexcept { return offsets_.size() - 1; }
    [[nodiscard]] std::size_t m() const noexcept { return neighbors_.size() / 2; }
    [[nodiscard]] std::size_t degree(Vertex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
    [[nodiscard]] std::span<const Vertex> neighbors(Vertex v) const noexcept
    {
        return {neighbors_.data() + offsets_[v], degree(v)};
    }
    [[nodiscard]] bool adjacent(Vertex u, Vertex v) const noexcept
    {
        auto nb = neighbors(u);
        return std::binary_search(nb.begin(), nb.end(), v);
    }
    [[nodiscard]] std::vector<std::size_t> degrees() const
    {
        std::vector<std::size_t> out(n());
        for (Vertex v = 0; v < n(); ++v)
            out[v] = degree(v);
        return out;
    }

    /// Edges (i, j) with i < j in lexicographic order.
    [[nodiscard]] std::vector<std::pair<Vertex, Vertex>> edges() const
    {
        std::vector<std::pair<Vertex, Vertex>> out;
        out.reserve(m());
        for (Vertex u = 0; u < n(); ++u)
            for (Vertex v : neighbors(u))
                if (u < v)
                    out.emplace_back(u, v);
        return out;
    }

    friend bool operator==(const IntersectionGraph&, const IntersectionGraph&) = default;

private:
    std::vector<std::size_t> offsets_;
    std::vector<Vertex> neighbors_;
};

struct BuildOptions
{
    double epsilon = 0.0;
    /// Bucket centers into a uniform grid of side 2 * max radius and only test
    /// pairs in neighboring cells. Produces the same graph as the pairwise scan.
    bool accelerate = true;
};

/// Reference O(n^2) builder.
[[nodiscard]] inline IntersectionGraph build_graph_pairwise(const Instance& inst, double epsilon = 0.0)
{
    const std::size_t n = inst.size();
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (Vertex i = 0; i < n; ++i)
        for (Vertex j = i + 1; j < n; ++j)
            if (bodies_intersect_sq(inst.kind(), squared_distance(inst.center(i), inst.center(j)), inst.radius(i),
                                    inst.radius(j), epsilon))
                edges.emplace_back(i, j);
    return IntersectionGraph::from_edges(n, std::move(edges));
}

/// Intersection graph of the instance: balls adjacent iff they meet, spheres
/// adjacent iff their relation is Intersect.
[[nodiscard]] inline IntersectionGraph build_graph(const Instance& inst, BuildOptions opts = {})
{
    if (!opts.accelerate)
        return build_graph_pairwise(inst, opts.epsilon);
    const std::size_t n = inst.size();
    std::vector<Vertex> ids(n);
    std::iota(ids.begin(), ids.end(), Vertex{0});
    const double rmax = inst.max_radius();
    // Any intersecting pair (ball or sphere) has center distance <= r_i + r_j <= r_i + rmax.
    const double slack = opts.epsilon > 0.0 ? std::sqrt(opts.epsilon) : 0.0;
    CellGrid grid(inst.dimension(), ids, 2.0 * rmax, [&](Vertex i) { return inst.center(i); });
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (Vertex i = 0; i < n; ++i) {
        const Coords ci = inst.center(i);
        const double ri = inst.radius(i);
        grid.for_each_near(ci, ri + rmax + slack, [&](Vertex j) {
            if (j > i &&
                bodies_intersect_sq(inst.kind(), squared_distance(ci, inst.center(j)), ri, inst.radius(j), opts.epsilon))
                edges.emplace_back(i, j);
        });
    }
    return IntersectionGraph::from_edges(n, std::move(edges));
}

/// "i j" per line, zero-based, i < j, sorted.
inline void write_edge_list(const IntersectionGraph& g, std::ostream& out)
{
    for (auto [u, v] : g.edges())
        out << u << ' ' << v << '\n';
}

// ---------------------------------------------------------------------------
// Components and subgraphs

/// Membership mask over the vertices of a graph.
using Mask = std::vector<char>;

[[nodiscard]] inline Mask mask_of(std::size_t n, std::span<const Vertex> vs)
{
    Mask m(n, 0);
    for (Vertex v : vs) {
        if (v >= n)
            throw ValidationError("vertex " + std::to_string(v) + " out of range");
        m[v] = 1;
    }
    return m;
}

/**
 * Connected components of G restricted to `active` vertices. Each component is
 * sorted; components are ordered by their minimum vertex.
 */
[[nodiscard]] inline std::vector<VertexSet> components_in(const IntersectionGraph& g, const Mask& active)
{
    const std::size_t n = g.n();
    std::vector<char> seen(n, 0);
    std::vector<VertexSet> out;
    std::vector<Vertex> stack;
    for (Vertex s = 0; s < n; ++s) {
        if (!active[s] || seen[s])
            continue;
        VertexSet comp;
        seen[s] = 1;
        stack.push_back(s);
        while (!stack.empty()) {
            const Vertex v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (Vertex w : g.neighbors(v))
                if (active[w] && !seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

/// Components of G minus `removed`.
[[nodiscard]] inline std::vector<VertexSet> components(const IntersectionGraph& g, std::span<const Vertex> removed)
{
    Mask active(g.n(), 1);
    for (Vertex v : removed) {
        if (v >= g.n())
            throw ValidationError("removed vertex " + std::to_string(v) + " out of range");
        active[v] = 0;
    }
    return components_in(g, active);
}

/// Size of the largest component of G[active].
[[nodiscard]] inline std::size_t largest_component_in(const IntersectionGraph& g, const Mask& active)
{
    std::size_t best = 0;
    for (const auto& c : components_in(g, active))
        best = std::max(best, c.size());
    return best;
}

struct InducedSubgraph
{
    IntersectionGraph graph;
    VertexSet old_of_new;                 // new index -> original index
    std::vector<std::int64_t> new_of_old; // original index -> new index, -1 when dropped
};

[[nodiscard]] inline InducedSubgraph induced(const IntersectionGraph& g, std::span<const Vertex> keep)
{
    InducedSubgraph sub;
    sub.new_of_old.assign(g.n(), -1);
    sub.old_of_new.assign(keep.begin(), keep.end());
    std::sort(sub.old_of_new.begin(), sub.old_of_new.end());
    sub.old_of_new.erase(std::unique(sub.old_of_new.begin(), sub.old_of_new.end()), sub.old_of_new.end());
    for (std::size_t i = 0; i < sub.old_of_new.size(); ++i) {
        if (sub.old_of_new[i] >= g.n())
            throw ValidationError("kept vertex out of range");
        sub.new_of_old[sub.old_of_new[i]] = static_cast<std::int64_t>(i);
    }
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (std::size_t i = 0; i < sub.old_of_new.size(); ++i)
        for (Vertex w : g.neighbors(sub.old_of_new[i])) {
            const auto j = sub.new_of_old[w];
            if (j > static_cast<std::int64_t>(i))
                edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(j));
        }
    sub.graph = IntersectionGraph::from_edges(sub.old_of_new.size(), std::move(edges));
    return sub;
}

/// Degree of v counting only active neighbors.
[[nodiscard]] inline std::size_t degree_in(const IntersectionGraph& g, const Mask& active, Vertex v)
{
    std::size_t d = 0;
    for (Vertex w : g.neighbors(v))
        d += active[w] ? 1 : 0;
    return d;
}

/// Exact degeneracy by repeatedly peeling a minimum-degree vertex.
[[nodiscard]] inline std::size_t degeneracy(const IntersectionGraph& g)
{
    const std::size_t n = g.n();
    if (n == 0)
        return 0;
    std::vector<std::size_t> deg = g.degrees();
    const std::size_t maxdeg = *std::max_element(deg.begin(), deg.end());
    std::vector<std::vector<Vertex>> buckets(maxdeg + 1);
    for (Vertex v = 0; v < n; ++v)
        buckets[deg[v]].push_back(v);
    std::vector<char> removed(n, 0);
    std::size_t result = 0;
    std::size_t cur = 0;
    for (std::size_t done = 0; done < n;) {
        cur = cur > 0 ? cur - 1 : 0;
        while (buckets[cur].empty())
            ++cur;
        const Vertex v = buckets[cur].back();
        buckets[cur].pop_back();
        if (removed[v] || deg[v] != cur)
            continue; // stale entry
        removed[v] = 1;
        ++done;
        result = std::max(result, cur);
        for (Vertex w : g.neighbors(v))
            if (!removed[w]) {
                --deg[w];
                buckets[deg[w]].push_back(w);
            }
    }
    return result;
}

} // namespace geosep

#endif // GEOSEP_GRAPH_HPP
