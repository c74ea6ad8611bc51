#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "qfractal/vec.hpp"

namespace qfractal {

using Mat2 = std::array<std::array<double, 2>, 2>;
using Mat3 = std::array<std::array<double, 3>, 3>;

/// Planar affine map x -> A x + a.
struct AffineMap2 {
    Mat2 linear{{{1.0, 0.0}, {0.0, 1.0}}};
    Vec2 translation{};

    constexpr Vec2 operator()(const Vec2& p) const
    {
        return {linear[0][0] * p.x + linear[0][1] * p.y + translation.x,
                linear[1][0] * p.x + linear[1][1] * p.y + translation.y};
    }

    /// The 3x3 form [[A, a], [0, 1]] acting on (x, 1).
    constexpr Mat3 homogeneous() const
    {
        return {{{linear[0][0], linear[0][1], translation.x},
                 {linear[1][0], linear[1][1], translation.y},
                 {0.0, 0.0, 1.0}}};
    }

    /// Composition: (*this * other)(p) = (*this)(other(p)).
    constexpr AffineMap2 operator*(const AffineMap2& o) const
    {
        AffineMap2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                r.linear[i][j] = linear[i][0] * o.linear[0][j] + linear[i][1] * o.linear[1][j];
        r.translation = (*this)(o.translation);
        return r;
    }

    constexpr bool operator==(const AffineMap2&) const = default;
};

inline Vec2 affine_apply(const AffineMap2& m, const Vec2& p) { return m(p); }

/// Largest singular value of a 2x2 matrix:
/// sqrt((‖A‖_F² + sqrt(‖A‖_F⁴ − 4 det(A)²)) / 2).
inline double largest_singular_value(const Mat2& a)
{
    const double frob2 = a[0][0] * a[0][0] + a[0][1] * a[0][1] + a[1][0] * a[1][0] + a[1][1] * a[1][1];
    const double det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    const double disc = std::max(0.0, frob2 * frob2 - 4.0 * det * det);
    return std::sqrt(0.5 * (frob2 + std::sqrt(disc)));
}

} // namespace qfractal
