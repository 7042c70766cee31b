#ifndef GEOSEP_GEOMETRY_HPP
#define GEOSEP_GEOMETRY_HPP

/**
 * Predicates and measurements for balls and spheres in R^d.
 *
 * Every comparison is done on squared quantities. `eps` is an absolute slack on
 * those squared comparisons that widens the equality band; it defaults to 0,
 * which gives closed-set semantics (tangency counts as intersection).
 */

#include "error.hpp"

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace geosep {

inline constexpr int kMinDimension = 2;
inline constexpr int kMaxDimension = 16;

using Coords = std::span<const double>;

/// A point in R^d, 2 <= d <= 16, finite coordinates.
class Point
{
public:
    Point() = default;
    explicit Point(std::vector<double> coords) : coords_(std::move(coords)) { validate(); }
    Point(std::initializer_list<double> coords) : coords_(coords) { validate(); }
    explicit Point(Coords coords) : coords_(coords.begin(), coords.end()) { validate(); }

    [[nodiscard]] int dimension() const noexcept { return static_cast<int>(coords_.size()); }
    [[nodiscard]] Coords coords() const noexcept { return coords_; }
    [[nodiscard]] double operator[](std::size_t i) const { return coords_[i]; }
    operator Coords() const noexcept { return coords_; } // NOLINT(google-explicit-constructor)

    friend bool operator==(const Point&, const Point&) = default;

private:
    void validate() const
    {
        if (coords_.size() < kMinDimension || coords_.size() > kMaxDimension)
            throw ValidationError("point dimension " + std::to_string(coords_.size()) + " outside [2, 16]");
        for (double c : coords_)
            if (!std::isfinite(c))
                throw ValidationError("point has a non-finite coordinate");
    }

    std::vector<double> coords_;
};

enum class Kind { Ball, Sphere };

[[nodiscard]] inline std::string_view to_string(Kind kind) noexcept
{
    return kind == Kind::Ball ? "ball" : "sphere";
}

[[nodiscard]] inline Kind kind_from_string(std::string_view s)
{
    if (s == "ball")
        return Kind::Ball;
    if (s == "sphere")
        return Kind::Sphere;
    throw ValidationError("unknown body kind '" + std::string(s) + "' (expected ball or sphere)");
}

/// A closed ball or a sphere (the boundary of one).
struct Body
{
    Point center;
    double radius = 0.0;
    Kind kind = Kind::Ball;

    Body() = default;
    Body(Point c, double r, Kind k) : center(std::move(c)), radius(r), kind(k)
    {
        if (!(radius > 0.0) || !std::isfinite(radius))
            throw ValidationError("body radius must be positive and finite");
    }

    friend bool operator==(const Body&, const Body&) = default;
};

enum class SphereRelation { Intersect, FirstInsideSecond, SecondInsideFirst, Disjoint };

[[nodiscard]] inline std::string_view to_string(SphereRelation rel) noexcept
{
    switch (rel) {
    case SphereRelation::Intersect: return "intersect";
    case SphereRelation::FirstInsideSecond: return "first_inside_second";
    case SphereRelation::SecondInsideFirst: return "second_inside_first";
    case SphereRelation::Disjoint: return "disjoint";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Raw predicates on coordinate spans. No dimension checks; hot loops use these.

[[nodiscard]] inline double squared_distance(Coords p, Coords q) noexcept
{
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double t = p[i] - q[i];
        s += t * t;
    }
    return s;
}

[[nodiscard]] inline SphereRelation sphere_relation_sq(double d2, double r1, double r2, double eps = 0.0) noexcept
{
    const double sum = r1 + r2;
    const double diff = r1 - r2;
    if (d2 > sum * sum + eps)
        return SphereRelation::Disjoint;
    if (d2 < diff * diff - eps)
        return r1 < r2 ? SphereRelation::FirstInsideSecond : SphereRelation::SecondInsideFirst;
    return SphereRelation::Intersect;
}

[[nodiscard]] inline bool balls_intersect_sq(double d2, double r1, double r2, double eps = 0.0) noexcept
{
    const double sum = r1 + r2;
    return d2 <= sum * sum + eps;
}

/// Closed ball of radius r at squared distance d2 meets the sphere of radius rho.
[[nodiscard]] inline bool ball_crosses_sphere_sq(double d2, double r, double rho, double eps = 0.0) noexcept
{
    const double outer = rho + r;
    if (d2 > outer * outer + eps)
        return false;
    if (rho <= r)
        return true;
    const double inner = rho - r;
    return d2 >= inner * inner - eps;
}

[[nodiscard]] inline bool sphere_crosses_sphere_sq(double d2, double r, double rho, double eps = 0.0) noexcept
{
    return sphere_relation_sq(d2, r, rho, eps) == SphereRelation::Intersect;
}

/// Kind-dispatched intersection test for two bodies of the same kind.
[[nodiscard]] inline bool bodies_intersect_sq(Kind kind, double d2, double r1, double r2, double eps = 0.0) noexcept
{
    return kind == Kind::Ball ? balls_intersect_sq(d2, r1, r2, eps) : sphere_crosses_sphere_sq(d2, r1, r2, eps);
}

[[nodiscard]] inline bool body_crosses_sphere_sq(Kind kind, double d2, double r, double rho, double eps = 0.0) noexcept
{
    return kind == Kind::Ball ? ball_crosses_sphere_sq(d2, r, rho, eps) : sphere_crosses_sphere_sq(d2, r, rho, eps);
}

// ---------------------------------------------------------------------------
// Checked operations on Points and Bodies.

namespace detail {

inline void require_same_dimension(Coords p, Coords q)
{
    if (p.size() != q.size())
        throw ValidationError("dimension mismatch: " + std::to_string(p.size()) + " vs " + std::to_string(q.size()));
}

inline void require_kind(const Body& b, Kind kind, const char* what)
{
    if (b.kind != kind)
        throw ValidationError(std::string(what) + ": expected " + std::string(to_string(kind)) + " but got " +
                              std::string(to_string(b.kind)));
}

} // namespace detail

[[nodiscard]] inline double dist(Coords p, Coords q)
{
    detail::require_same_dimension(p, q);
    return std::sqrt(squared_distance(p, q));
}

[[nodiscard]] inline SphereRelation spheres_relation(const Body& s1, const Body& s2, double eps = 0.0)
{
    detail::require_kind(s1, Kind::Sphere, "spheres_relation");
    detail::require_kind(s2, Kind::Sphere, "spheres_relation");
    detail::require_same_dimension(s1.center, s2.center);
    return sphere_relation_sq(squared_distance(s1.center, s2.center), s1.radius, s2.radius, eps);
}

[[nodiscard]] inline bool balls_intersect(const Body& b1, const Body& b2, double eps = 0.0)
{
    detail::require_kind(b1, Kind::Ball, "balls_intersect");
    detail::require_kind(b2, Kind::Ball, "balls_intersect");
    detail::require_same_dimension(b1.center, b2.center);
    return balls_intersect_sq(squared_distance(b1.center, b2.center), b1.radius, b2.radius, eps);
}

/// Does `body` meet the sphere of radius `cut_radius` around `cut_center`?
[[nodiscard]] inline bool body_crosses_sphere(const Body& body, Coords cut_center, double cut_radius, double eps = 0.0)
{
    if (!(cut_radius > 0.0))
        throw ValidationError("cut radius must be positive");
    detail::require_same_dimension(body.center, cut_center);
    return body_crosses_sphere_sq(body.kind, squared_distance(body.center, cut_center), body.radius, cut_radius,
                                  eps);
}

/**
 * Radius of the cap cut from the sphere (cut_center, cut_radius) by the closed
 * ball of radius `ball_radius` whose center is at distance `d` from cut_center.
 *
 * Base-circle radius for caps up to a hemisphere, the cut radius beyond that.
 * Requires the ball to meet the cut sphere.
 */
[[nodiscard]] inline double cap_radius_at(double d, double cut_radius, double ball_radius)
{
    const double a = cut_radius;
    const double b = ball_radius;
    if (d - b > a || a > d + b)
        throw ValidationError("cap_radius: ball does not meet the cut sphere");
    if (d == 0.0)
        return a;
    const double h = (a * a + d * d - b * b) / (2.0 * d);
    if (h < 0.0)
        return a;
    const double c2 = a * a - h * h;
    return c2 > 0.0 ? std::sqrt(c2) : 0.0;
}

[[nodiscard]] inline double cap_radius(Coords cut_center, double cut_radius, const Body& s)
{
    if (!(cut_radius > 0.0))
        throw ValidationError("cut radius must be positive");
    detail::require_same_dimension(s.center, cut_center);
    return cap_radius_at(std::sqrt(squared_distance(cut_center, s.center)), cut_radius, s.radius);
}

} // namespace geosep

#endif // GEOSEP_GEOMETRY_HPP
