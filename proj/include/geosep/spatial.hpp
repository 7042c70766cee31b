#ifndef GEOSEP_SPATIAL_HPP
#define GEOSEP_SPATIAL_HPP

#include "geometry.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

namespace geosep {

/**
 * Uniform hash grid over a set of points. Range queries visit every point whose
 * cell meets the query box; callers apply the exact predicate themselves, so
 * results are identical to a brute-force scan.
 */
class CellGrid
{
public:
    /// `points(i)` must return the coordinates of item `ids[i]`.
    template <class PointFn>
    CellGrid(int d, std::span<const std::uint32_t> ids, double cell_side, PointFn&& points)
        : d_(d), side_(cell_side > 0.0 && std::isfinite(cell_side) ? cell_side : 1.0)
    {
        cells_.reserve(ids.size());
        for (std::uint32_t id : ids) {
            const Coords p = points(id);
            cells_[key_of(p)].push_back(id);
        }
    }

    [[nodiscard]] double cell_side() const noexcept { return side_; }
    [[nodiscard]] std::size_t occupied_cells() const noexcept { return cells_.size(); }

    /// Calls f(id) for every stored id whose cell meets the box [q - r, q + r].
    template <class F>
    void for_each_near(Coords q, double r, F&& f) const
    {
        Key lo{};
        Key hi{};
        double box_cells = 1.0;
        for (int j = 0; j < d_; ++j) {
            lo[static_cast<std::size_t>(j)] = cell_index(q[static_cast<std::size_t>(j)] - r);
            hi[static_cast<std::size_t>(j)] = cell_index(q[static_cast<std::size_t>(j)] + r);
            box_cells *= static_cast<double>(hi[static_cast<std::size_t>(j)] - lo[static_cast<std::size_t>(j)] + 1);
        }
        if (box_cells > static_cast<double>(cells_.size())) {
            for (const auto& [key, ids] : cells_) {
                bool inside = true;
                for (int j = 0; j < d_ && inside; ++j) {
                    const auto s = static_cast<std::size_t>(j);
                    inside = key[s] >= lo[s] && key[s] <= hi[s];
                }
                if (inside)
                    for (std::uint32_t id : ids)
                        f(id);
            }
            return;
        }
        Key cur = lo;
        while (true) {
            if (auto it = cells_.find(cur); it != cells_.end())
                for (std::uint32_t id : it->second)
                    f(id);
            int j = 0;
            while (j < d_) {
                const auto s = static_cast<std::size_t>(j);
                if (cur[s] < hi[s]) {
                    ++cur[s];
                    break;
                }
                cur[s] = lo[s];
                ++j;
            }
            if (j == d_)
                break;
        }
    }

private:
    using Key = std::array<std::int64_t, kMaxDimension>;

    struct KeyHash
    {
        std::size_t operator()(const Key& k) const noexcept
        {
            std::uint64_t h = 0xcbf29ce484222325ULL;
            for (std::int64_t v : k) {
                h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            }
            return static_cast<std::size_t>(h);
        }
    };

    [[nodiscard]] std::int64_t cell_index(double x) const noexcept
    {
        return static_cast<std::int64_t>(std::floor(x / side_));
    }

    [[nodiscard]] Key key_of(Coords p) const noexcept
    {
        Key k{};
        for (int j = 0; j < d_; ++j)
            k[static_cast<std::size_t>(j)] = cell_index(p[static_cast<std::size_t>(j)]);
        return k;
    }

    int d_;
    double side_;
    std::unordered_map<Key, std::vector<std::uint32_t>, KeyHash> cells_;
};

} // namespace geosep

#endif // GEOSEP_SPATIAL_HPP
