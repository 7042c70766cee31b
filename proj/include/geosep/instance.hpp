#ifndef GEOSEP_INSTANCE_HPP
#define GEOSEP_INSTANCE_HPP

#include "constants.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace geosep {

using json = nlohmann::ordered_json;

/**
 * A homogeneous collection of balls or spheres in R^d. Centers are stored flat
 * (n * d doubles) so the hot loops stay cache friendly; `body(i)` materializes a
 * checked Body when a value type is wanted.
 */
class Instance
{
public:
    Instance(int dimension, Kind kind) : d_(dimension), kind_(kind) { require_dimension(dimension); }

    [[nodiscard]] int dimension() const noexcept { return d_; }
    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t size() const noexcept { return radii_.size(); }
    [[nodiscard]] bool empty() const noexcept { return radii_.empty(); }

    [[nodiscard]] Coords center(std::size_t i) const noexcept
    {
        return Coords(coords_.data() + i * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_));
    }
    [[nodiscard]] double radius(std::size_t i) const noexcept { return radii_[i]; }
    [[nodiscard]] std::span<const double> radii() const noexcept { return radii_; }
    [[nodiscard]] Body body(std::size_t i) const { return Body(Point(center(i)), radius(i), kind_); }

    void add(Coords center, double radius)
    {
        const std::size_t index = size();
        if (center.size() != static_cast<std::size_t>(d_))
            throw ValidationError("body " + std::to_string(index) + ": center has " + std::to_string(center.size()) +
                                  " coordinates, instance dimension is " + std::to_string(d_));
        for (double c : center)
            if (!std::isfinite(c))
                throw ValidationError("body " + std::to_string(index) + ": non-finite center coordinate");
        if (!(radius > 0.0) || !std::isfinite(radius))
            throw ValidationError("body " + std::to_string(index) + ": radius must be positive and finite, got " +
                                  std::to_string(radius));
        coords_.insert(coords_.end(), center.begin(), center.end());
        radii_.push_back(radius);
    }

    void add(const Body& body)
    {
        if (body.kind != kind_)
            throw ValidationError("mixed body kinds: instance holds " + std::string(to_string(kind_)) + "s");
        add(body.center.coords(), body.radius);
    }

    [[nodiscard]] double max_radius() const noexcept
    {
        return radii_.empty() ? 0.0 : *std::max_element(radii_.begin(), radii_.end());
    }

    /// Free-form provenance: generator name, parameters, seed, achieved values.
    json metadata = json::object();

    friend bool operator==(const Instance& a, const Instance& b)
    {
        return a.d_ == b.d_ && a.kind_ == b.kind_ && a.coords_ == b.coords_ && a.radii_ == b.radii_ &&
               a.metadata == b.metadata;
    }

private:
    int d_;
    Kind kind_;
    std::vector<double> coords_;
    std::vector<double> radii_;
};

// ---------------------------------------------------------------------------
// Generators

/// n bodies with centers uniform in [0, box_side]^d and radii uniform in [r_min, r_max].
[[nodiscard]] inline Instance gen_random(std::size_t n, int d, double r_min, double r_max, double box_side, Kind kind,
                                         std::uint64_t seed)
{
    require_dimension(d);
    if (n < 1)
        throw ValidationError("gen_random: n must be at least 1");
    if (!(r_min > 0.0) || !(r_min <= r_max) || !std::isfinite(r_max))
        throw ValidationError("gen_random: need 0 < r_min <= r_max");
    if (!(box_side > 0.0) || !std::isfinite(box_side))
        throw ValidationError("gen_random: box side must be positive");

    Instance inst(d, kind);
    Rng rng(seed);
    std::vector<double> c(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < n; ++i) {
        for (auto& x : c)
            x = rng.uniform() * box_side;
        inst.add(c, r_min == r_max ? r_min : rng.uniform(r_min, r_max));
    }
    inst.metadata = {{"generator", "random_uniform"},
                     {"parameters", {{"n", n}, {"d", d}, {"r_min", r_min}, {"r_max", r_max}, {"box_side", box_side}}},
                     {"seed", seed}};
    return inst;
}

namespace detail {

/// Largest k with k^d <= n.
inline std::size_t grid_side(std::size_t n, int d)
{
    auto k = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(n), 1.0 / d)));
    auto pow_le = [&](std::size_t base) {
        long double p = 1;
        for (int i = 0; i < d; ++i)
            p *= static_cast<long double>(base);
        return p <= static_cast<long double>(n);
    };
    while (k > 0 && !pow_le(k))
        --k;
    while (pow_le(k + 1))
        ++k;
    return k;
}

/// Number of unordered vertex pairs of {1..k}^d at each squared distance.
inline std::map<std::uint64_t, std::uint64_t> grid_distance_histogram(std::size_t k, int d)
{
    std::map<std::uint64_t, std::uint64_t> hist;
    std::vector<std::size_t> a(static_cast<std::size_t>(d), 0);
    while (true) {
        std::uint64_t s = 0;
        std::uint64_t pairs = 1;
        int nonzero = 0;
        for (std::size_t v : a) {
            s += static_cast<std::uint64_t>(v) * v;
            pairs *= static_cast<std::uint64_t>(k - v);
            nonzero += v != 0 ? 1 : 0;
        }
        if (nonzero > 0)
            hist[s] += pairs * (std::uint64_t{1} << (nonzero - 1));
        int j = 0;
        while (j < d && ++a[static_cast<std::size_t>(j)] == k)
            a[static_cast<std::size_t>(j++)] = 0;
        if (j == d)
            break;
    }
    return hist;
}

} // namespace detail

/// Upper slack on the grid generator's edge count: it lands in [m/2, grid_edge_slack(d) * m].
[[nodiscard]] inline double grid_edge_slack(int d) { return 2.0 * d; }

/**
 * Bodies of radius r/2 centered at the points of {1..k}^d, k = floor(n^(1/d)).
 * r >= 1 is the smallest pairwise grid distance whose threshold graph has at
 * least m/2 edges; the count must also stay within grid_edge_slack(d) * m.
 */
[[nodiscard]] inline Instance gen_grid(std::size_t n, std::size_t m, int d, Kind kind)
{
    require_dimension(d);
    if (n < 2)
        throw ValidationError("gen_grid: n must be at least 2");
    const std::uint64_t max_m = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    if (m < n || m > max_m)
        throw ValidationError("gen_grid: need n <= m <= n(n-1)/2, got m = " + std::to_string(m));
    const std::size_t k = detail::grid_side(n, d);
    if (k < 2)
        throw ValidationError("gen_grid: n too small for a grid with side >= 2 in dimension " + std::to_string(d));

    const auto hist = detail::grid_distance_histogram(k, d);
    std::uint64_t edges = 0;
    std::uint64_t chosen = 0;
    for (auto [s, count] : hist) {
        edges += count;
        if (2 * edges >= m) {
            chosen = s;
            break;
        }
    }
    if (chosen == 0 || static_cast<double>(edges) > grid_edge_slack(d) * static_cast<double>(m))
        throw ValidationError("gen_grid: no threshold radius gives an edge count in [m/2, " +
                              std::to_string(grid_edge_slack(d)) + " m] for m = " + std::to_string(m));

    const double r = std::sqrt(static_cast<double>(chosen));
    Instance inst(d, kind);
    std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
    std::vector<double> c(static_cast<std::size_t>(d));
    while (true) {
        // Row-major with the last coordinate fastest.
        for (int j = 0; j < d; ++j)
            c[static_cast<std::size_t>(j)] = static_cast<double>(idx[static_cast<std::size_t>(j)] + 1);
        inst.add(c, r / 2.0);
        int j = d - 1;
        while (j >= 0 && ++idx[static_cast<std::size_t>(j)] == k)
            idx[static_cast<std::size_t>(j--)] = 0;
        if (j < 0)
            break;
    }
    inst.metadata = {{"generator", "grid_lower_bound"},
                     {"parameters", {{"n", n}, {"m", m}, {"d", d}}},
                     {"side", k},
                     {"r", r},
                     {"edges", edges}};
    return inst;
}

namespace detail {

inline std::vector<double> random_offset(Rng& rng, int d, double max_norm)
{
    std::vector<double> v(static_cast<std::size_t>(d));
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (auto& x : v) {
            x = rng.normal();
            norm2 += x * x;
        }
    } while (norm2 == 0.0);
    const double scale = max_norm * rng.uniform() / std::sqrt(norm2);
    for (auto& x : v)
        x *= scale;
    return v;
}

} // namespace detail

/// Relative size of the center jitter in nested families, as a fraction of the radius gap.
inline constexpr double kNestedJitter = 1e-3;

/// n spheres with radii 1..n around the origin, each strictly inside the next.
[[nodiscard]] inline Instance gen_nested_chain(std::size_t n, int d, std::uint64_t seed)
{
    require_dimension(d);
    if (n < 2)
        throw ValidationError("gen_nested_chain: n must be at least 2");
    Instance inst(d, Kind::Sphere);
    Rng rng(seed);
    const double gap = 1.0;
    for (std::size_t i = 0; i < n; ++i)
        inst.add(detail::random_offset(rng, d, kNestedJitter * gap / 2.0), gap * static_cast<double>(i + 1));
    inst.metadata = {{"generator", "nested_chain"}, {"parameters", {{"n", n}, {"d", d}}}, {"seed", seed}};
    return inst;
}

/**
 * 2a spheres forming K_{a,a}: family A nested around the origin, family B
 * nested around (10, 0, ..., 0), all radii in [6, 9) so every A-sphere crosses
 * every B-sphere. Indices 0..a-1 are family A.
 */
[[nodiscard]] inline Instance gen_nested_bipartite(std::size_t a, int d, std::uint64_t seed)
{
    require_dimension(d);
    if (a < 1)
        throw ValidationError("gen_nested_bipartite: a must be at least 1");
    Instance inst(d, Kind::Sphere);
    Rng rng(seed);
    const double separation = 10.0;
    const double gap = 3.0 / static_cast<double>(a);
    for (int family = 0; family < 2; ++family) {
        for (std::size_t i = 0; i < a; ++i) {
            auto c = detail::random_offset(rng, d, kNestedJitter * gap / 2.0);
            c[0] += family * separation;
            inst.add(c, 6.0 + gap * static_cast<double>(i));
        }
    }
    inst.metadata = {{"generator", "nested_bipartite"}, {"parameters", {{"a", a}, {"d", d}}}, {"seed", seed}};
    return inst;
}

// ---------------------------------------------------------------------------
// File I/O

[[nodiscard]] inline json to_json(const Instance& inst)
{
    json bodies = json::array();
    for (std::size_t i = 0; i < inst.size(); ++i) {
        auto c = inst.center(i);
        bodies.push_back({{"center", std::vector<double>(c.begin(), c.end())}, {"radius", inst.radius(i)}});
    }
    return {{"dimension", inst.dimension()},
            {"kind", std::string(to_string(inst.kind()))},
            {"bodies", std::move(bodies)},
            {"metadata", inst.metadata}};
}

[[nodiscard]] inline Instance instance_from_json(const json& doc)
{
    auto field = [&](const json& obj, const char* key, const std::string& where) -> const json& {
        if (!obj.is_object() || !obj.contains(key))
            throw ParseError(where + ": missing field '" + key + "'");
        return obj.at(key);
    };
    const json& dim = field(doc, "dimension", "instance");
    if (!dim.is_number_integer())
        throw ParseError("instance.dimension: expected an integer");
    const json& kind = field(doc, "kind", "instance");
    if (!kind.is_string())
        throw ParseError("instance.kind: expected \"ball\" or \"sphere\"");
    const json& bodies = field(doc, "bodies", "instance");
    if (!bodies.is_array())
        throw ParseError("instance.bodies: expected an array");

    Instance inst(dim.get<int>(), kind_from_string(kind.get<std::string>()));
    std::vector<double> c;
    for (std::size_t i = 0; i < bodies.size(); ++i) {
        const std::string where = "bodies[" + std::to_string(i) + "]";
        const json& b = bodies[i];
        if (b.contains("kind") && b.at("kind") != kind)
            throw ValidationError(where + ": mixed body kinds are not supported");
        const json& center = field(b, "center", where);
        const json& radius = field(b, "radius", where);
        if (!center.is_array())
            throw ParseError(where + ".center: expected an array of numbers");
        if (!radius.is_number())
            throw ParseError(where + ".radius: expected a number");
        c.clear();
        for (const auto& x : center) {
            if (!x.is_number())
                throw ParseError(where + ".center: expected an array of numbers");
            c.push_back(x.get<double>());
        }
        inst.add(c, radius.get<double>());
    }
    if (inst.empty())
        throw ValidationError("instance has no bodies");
    if (doc.contains("metadata"))
        inst.metadata = doc.at("metadata");
    return inst;
}

inline void save(const Instance& inst, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot open '" + path + "' for writing");
    out << to_json(inst).dump(1) << '\n';
    if (!out)
        throw Error("write to '" + path + "' failed");
}

[[nodiscard]] inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

[[nodiscard]] inline Instance parse_instance_json(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    return instance_from_json(doc);
}

/// One body per row: x1,...,xd,radius. Blank lines and lines starting with '#' are skipped.
[[nodiscard]] inline Instance parse_instance_csv(const std::string& text, int d, Kind kind)
{
    Instance inst(d, kind);
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    std::vector<double> row;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == '#')
            continue;
        row.clear();
        std::istringstream fields(line);
        std::string cell;
        std::size_t col = 0;
        while (std::getline(fields, cell, ',')) {
            ++col;
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (cell.find_first_not_of(" \t", used) != std::string::npos)
                    throw std::invalid_argument("trailing characters");
            } catch (const std::exception&) {
                throw ParseError("line " + std::to_string(line_no) + ", field " + std::to_string(col) +
                                 ": not a number: '" + cell + "'");
            }
        }
        if (row.size() != static_cast<std::size_t>(d) + 1)
            throw ValidationError("line " + std::to_string(line_no) + ": expected " + std::to_string(d + 1) +
                                  " fields (d coordinates + radius), got " + std::to_string(row.size()));
        const double r = row.back();
        row.pop_back();
        inst.add(row, r);
    }
    if (inst.empty())
        throw ValidationError("CSV instance has no bodies");
    return inst;
}

/// JSON by default; `.csv` paths need the dimension and kind supplied by the caller.
[[nodiscard]] inline Instance load(const std::string& path)
{
    return parse_instance_json(read_file(path));
}

[[nodiscard]] inline Instance load_csv(const std::string& path, int d, Kind kind)
{
    return parse_instance_csv(read_file(path), d, kind);
}

} // namespace geosep

#endif // GEOSEP_INSTANCE_HPP
