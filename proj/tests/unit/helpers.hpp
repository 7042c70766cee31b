#ifndef GEOSEP_TEST_HELPERS_HPP
#define GEOSEP_TEST_HELPERS_HPP

#include <geosep/graph.hpp>

#include <numeric>
#include <vector>

namespace testing_helpers {

using geosep::IntersectionGraph;
using geosep::Vertex;

inline IntersectionGraph path_graph(std::size_t n)
{
    std::vector<std::pair<Vertex, Vertex>> e;
    for (Vertex i = 0; i + 1 < n; ++i)
        e.emplace_back(i, i + 1);
    return IntersectionGraph::from_edges(n, e);
}

inline IntersectionGraph complete_graph(std::size_t n)
{
    std::vector<std::pair<Vertex, Vertex>> e;
    for (Vertex i = 0; i < n; ++i)
        for (Vertex j = i + 1; j < n; ++j)
            e.emplace_back(i, j);
    return IntersectionGraph::from_edges(n, e);
}

/// k x k grid graph, vertex (i, j) -> i * k + j.
inline IntersectionGraph grid_graph(std::size_t k)
{
    std::vector<std::pair<Vertex, Vertex>> e;
    for (Vertex i = 0; i < k; ++i)
        for (Vertex j = 0; j < k; ++j) {
            const Vertex v = static_cast<Vertex>(i * k + j);
            if (j + 1 < k)
                e.emplace_back(v, v + 1);
            if (i + 1 < k)
                e.emplace_back(v, static_cast<Vertex>(v + k));
        }
    return IntersectionGraph::from_edges(k * k, e);
}

inline std::vector<Vertex> all_vertices(std::size_t n)
{
    std::vector<Vertex> v(n);
    std::iota(v.begin(), v.end(), Vertex{0});
    return v;
}

} // namespace testing_helpers

#endif
