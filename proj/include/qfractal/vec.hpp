#pragma once

#include <array>
#include <cmath>
#include <string>

#include "qfractal/error.hpp"

namespace qfractal {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    constexpr bool operator==(const Vec3&) const = default;
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

struct Vec2 {
    double x = 0.0, y = 0.0;

    constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr bool operator==(const Vec2&) const = default;
};

inline double norm(const Vec2& v) { return std::hypot(v.x, v.y); }

/// A point of the unit sphere S². Construction from an arbitrary vector
/// normalizes it; vectors further than `tolerance` from unit length are
/// rejected so that callers cannot silently feed garbage.
class UnitVec3 {
public:
    static constexpr double default_tolerance = 1e-12;

    constexpr UnitVec3() : v_{0.0, 0.0, 1.0} {}

    explicit UnitVec3(const Vec3& v, double tolerance = default_tolerance)
    {
        const double n = norm(v);
        if (!(std::abs(n - 1.0) <= tolerance))
            throw ValidationError("UnitVec3: vector norm " + std::to_string(n) +
                                  " deviates from 1 by more than tolerance");
        v_ = v / n;
    }

    UnitVec3(double x, double y, double z) : UnitVec3(Vec3{x, y, z}) {}

    /// Normalizes any nonzero vector.
    static UnitVec3 normalized(const Vec3& v)
    {
        const double n = norm(v);
        if (!(n > 0.0) || !std::isfinite(n))
            throw ValidationError("UnitVec3: cannot normalize a zero or non-finite vector");
        return UnitVec3(v / n, unchecked_tag{});
    }

    constexpr const Vec3& vec() const { return v_; }
    constexpr double x() const { return v_.x; }
    constexpr double y() const { return v_.y; }
    constexpr double z() const { return v_.z; }
    constexpr operator const Vec3&() const { return v_; }

    constexpr UnitVec3 operator-() const { return UnitVec3(-v_, unchecked_tag{}); }
    constexpr bool operator==(const UnitVec3&) const = default;

private:
    struct unchecked_tag {};
    constexpr UnitVec3(const Vec3& v, unchecked_tag) : v_(v) {}

    Vec3 v_;

    friend UnitVec3 renormalize(const Vec3& v, double& defect);
};

/// Divides by the norm and reports |‖v‖ − 1| through `defect`.
inline UnitVec3 renormalize(const Vec3& v, double& defect)
{
    const double n = norm(v);
    defect = std::abs(n - 1.0);
    return UnitVec3(v / n, UnitVec3::unchecked_tag{});
}

} // namespace qfractal
