#pragma once

// Random instances for property checks: points and tangents of S², boost
// vectors and SL(2,C) elements.

#include <cmath>
#include <random>

#include "qfractal/pauli.hpp"
#include "qfractal/vec.hpp"

namespace qfractal {

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    double normal() { return normal_(engine_); }

    Vec3 gaussian3() { return {normal(), normal(), normal()}; }

    /// Uniform on S² (normalized Gaussian).
    UnitVec3 unit()
    {
        for (;;) {
            const Vec3 g = gaussian3();
            if (norm(g) > 1e-8)
                return UnitVec3::normalized(g);
        }
    }

    /// Random unit tangent vector at x.
    Vec3 tangent(const UnitVec3& x)
    {
        for (;;) {
            const Vec3 g = gaussian3();
            const Vec3 t = g - dot(g, x.vec()) * x.vec();
            const double n = norm(t);
            if (n > 1e-6)
                return t / n;
        }
    }

    /// q = alpha n with n uniform on S² and alpha uniform in (lo, hi).
    Vec3 boost(double alpha_lo, double alpha_hi)
    {
        double a = 0.0;
        while (!(a > 0.0))
            a = uniform(alpha_lo, alpha_hi);
        return a * unit().vec();
    }

    ComplexMinkowski4 complex4()
    {
        ComplexMinkowski4 a;
        for (auto& c : a)
            c = Complex(normal(), normal());
        return a;
    }

    /// Complex coordinates a^mu scaled so that a.a = 1.
    ComplexMinkowski4 unit_complex4()
    {
        for (;;) {
            ComplexMinkowski4 a = complex4();
            const Complex q = a[0] * a[0] - a[1] * a[1] - a[2] * a[2] - a[3] * a[3];
            if (std::abs(q) < 1e-3)
                continue;
            const Complex s = std::sqrt(q);
            for (auto& c : a)
                c /= s;
            return a;
        }
    }

    SL2C sl2c() { return SL2C::from_coordinates(unit_complex4()); }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace qfractal
