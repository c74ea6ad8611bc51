#pragma once

// Distance and convergence diagnostics: geodesic metric on S², brute-force
// Hausdorff distance between finite point sets, contraction factors and a
// finite-difference conformality probe for the Möbius maps.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "qfractal/affine.hpp"
#include "qfractal/error.hpp"
#include "qfractal/mobius.hpp"
#include "qfractal/vec.hpp"

namespace qfractal {

/// Great-circle distance in radians, atan2(‖a×b‖, a·b).
inline double geodesic_distance(const UnitVec3& a, const UnitVec3& b)
{
    return std::atan2(norm(cross(a.vec(), b.vec())), dot(a.vec(), b.vec()));
}

enum class MetricTag { euclidean2, geodesic_s2 };

/// Non-empty finite point set together with the metric it lives in. Planar
/// points are stored with z = 0.
class PointSet {
public:
    static constexpr double unit_tolerance = 1e-10;

    static PointSet planar(std::span<const Vec2> points)
    {
        std::vector<Vec3> p;
        p.reserve(points.size());
        for (const auto& v : points)
            p.push_back({v.x, v.y, 0.0});
        return PointSet(MetricTag::euclidean2, std::move(p));
    }

    static PointSet spherical(std::span<const UnitVec3> points)
    {
        std::vector<Vec3> p;
        p.reserve(points.size());
        for (const auto& v : points)
            p.push_back(v.vec());
        return PointSet(MetricTag::geodesic_s2, std::move(p));
    }

    static PointSet spherical(std::span<const Vec3> points)
    {
        for (const auto& v : points)
            if (std::abs(norm(v) - 1.0) > unit_tolerance)
                throw ValidationError("PointSet: spherical point is not unit length");
        return PointSet(MetricTag::geodesic_s2, {points.begin(), points.end()});
    }

    MetricTag metric() const { return tag_; }
    std::size_t size() const { return points_.size(); }
    const std::vector<Vec3>& points() const { return points_; }

    double distance(const Vec3& a, const Vec3& b) const
    {
        if (tag_ == MetricTag::euclidean2)
            return std::hypot(a.x - b.x, a.y - b.y);
        return std::atan2(norm(cross(a, b)), dot(a, b));
    }

private:
    PointSet(MetricTag tag, std::vector<Vec3> points) : tag_(tag), points_(std::move(points))
    {
        if (points_.empty())
            throw ValidationError("PointSet: point set is empty");
    }

    MetricTag tag_;
    std::vector<Vec3> points_;
};

/// d(y, Z) = min over z of d(y, z).
inline double point_set_distance(const Vec3& y, const PointSet& z)
{
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : z.points())
        best = std::min(best, z.distance(y, p));
    return best;
}

/// d(Y, Z) = max over y in Y of d(y, Z). Not symmetric.
inline double directed_distance(const PointSet& y, const PointSet& z)
{
    if (y.metric() != z.metric())
        throw ValidationError("directed_distance: point sets use different metrics");
    double worst = 0.0;
    for (const auto& p : y.points())
        worst = std::max(worst, point_set_distance(p, z));
    return worst;
}

/// h(Y, Z) = max(d(Y, Z), d(Z, Y)).
inline double hausdorff_distance(const PointSet& y, const PointSet& z)
{
    return std::max(directed_distance(y, z), directed_distance(z, y));
}

/// Largest singular value of the linear part. Values >= 1 mean the map is
/// not a contraction.
inline double contraction_factor(const AffineMap2& m) { return largest_singular_value(m.linear); }

namespace detail {

inline double angle_between(const Vec3& a, const Vec3& b)
{
    return std::atan2(norm(cross(a, b)), dot(a, b));
}

/// phi_q(p + delta) − phi_q(p), rearranged so that no O(1) terms cancel:
/// with N(p) = (1 − q²) p + 2 (1 + q·p) q and D(p) = 1 + q² + 2 q·p,
/// N(p+δ)/D(p+δ) − N(p)/D(p) = (L δ · D(p) − 2 (q·δ) N(p)) / (D(p) D(p+δ)),
/// L δ = (1 − q²) δ + 2 (q·δ) q.
inline Vec3 mobius_secant(const Vec3& q, const Vec3& p, const Vec3& delta)
{
    const double q2 = dot(q, q);
    const double qd = dot(q, delta);
    const double d0 = 1.0 + q2 + 2.0 * dot(q, p);
    const double d1 = d0 + 2.0 * qd;
    const Vec3 n0 = (1.0 - q2) * p + (2.0 * (1.0 + dot(q, p))) * q;
    const Vec3 l_delta = (1.0 - q2) * delta + (2.0 * qd) * q;
    return (d0 * l_delta - (2.0 * qd) * n0) / (d0 * d1);
}

} // namespace detail

/// Central finite-difference pushforward of tangent `u` at `x` under phi_q,
/// along the great circle through x in direction u, projected onto the
/// tangent plane at phi_q(x).
inline Vec3 mobius_pushforward(const Vec3& q, const UnitVec3& x, const Vec3& u, double step)
{
    const Vec3 uhat = u / norm(u);
    const Vec3 before = std::cos(step) * x.vec() - std::sin(step) * uhat;
    const Vec3 chord = (2.0 * std::sin(step)) * uhat;
    const Vec3 d = detail::mobius_secant(q, before, chord) / (2.0 * step);
    const Vec3 y = mobius_apply(q, x).vec();
    return d - dot(d, y) * y;
}

/// |angle(dphi u, dphi v) − angle(u, v)| in radians, with dphi the central
/// finite-difference pushforward (default step 1e-6).
inline double conformality_defect(const Vec3& q, const UnitVec3& x, const Vec3& u, const Vec3& v,
                                  double step = 1e-6)
{
    detail::require_inside_ball(q);
    const double nu = norm(u), nv = norm(v);
    if (!(nu > 0.0) || !(nv > 0.0))
        throw ValidationError("conformality_defect: tangent vectors must be nonzero");
    constexpr double tangent_tolerance = 1e-10;
    if (std::abs(dot(u, x.vec())) > tangent_tolerance * nu || std::abs(dot(v, x.vec())) > tangent_tolerance * nv)
        throw ValidationError("conformality_defect: vectors are not tangent at x");

    const Vec3 du = mobius_pushforward(q, x, u, step);
    const Vec3 dv = mobius_pushforward(q, x, v, step);
    return std::abs(detail::angle_between(du, dv) - detail::angle_between(u, v));
}

} // namespace qfractal
