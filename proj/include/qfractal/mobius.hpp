#pragma once

// Conformal maps of S² induced by Lorentz boosts, their scalar factors and
// the place-dependent selection probabilities built from them.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qfractal/error.hpp"
#include "qfractal/pauli.hpp"
#include "qfractal/vec.hpp"

namespace qfractal {

namespace detail {

inline void require_inside_ball(const Vec3& q)
{
    const double q2 = dot(q, q);
    if (!(q2 < 1.0))
        throw DomainError("boost vector must satisfy |q| < 1, got |q| = " + std::to_string(std::sqrt(q2)));
}

} // namespace detail

/// Result of one map application before renormalization.
struct MobiusImage {
    UnitVec3 point;
    double defect = 0.0; ///< |‖raw image‖ − 1| before renormalization
};

/// phi_q(p) = ((1 − q²) p + 2 (1 + q·p) q) / (1 + q² + 2 q·p), renormalized
/// onto S². Assumes |q| < 1 without checking; the hot loop of the chaos game
/// validates q once per generator instead of once per step.
inline MobiusImage mobius_apply_unchecked(const Vec3& q, const UnitVec3& p)
{
    const double q2 = dot(q, q);
    const double qp = dot(q, p.vec());
    const double denom = 1.0 + q2 + 2.0 * qp;
    const Vec3 raw = ((1.0 - q2) * p.vec() + (2.0 * (1.0 + qp)) * q) / denom;
    MobiusImage out;
    out.point = renormalize(raw, out.defect);
    return out;
}

/// The Möbius map phi_q of the sphere. Throws DomainError for |q| >= 1.
inline UnitVec3 mobius_apply(const Vec3& q, const UnitVec3& p)
{
    detail::require_inside_ball(q);
    return mobius_apply_unchecked(q, p).point;
}

/// lambda(q, x) = (1 + q² + 2 q·x) / 4.
inline double lambda_factor(const Vec3& q, const UnitVec3& x)
{
    detail::require_inside_ball(q);
    return (1.0 + dot(q, q) + 2.0 * dot(q, x.vec())) / 4.0;
}

/// dS'/dS(x) = (1 − q²)² / (1 + q² + 2 q·x)².
inline double area_distortion(const Vec3& q, const UnitVec3& x)
{
    detail::require_inside_ball(q);
    const double q2 = dot(q, q);
    const double d = 1.0 + q2 + 2.0 * dot(q, x.vec());
    return (1.0 - q2) * (1.0 - q2) / (d * d);
}

/// Half-normalized projector (I + sigma(y)) / 2.
inline ComplexMat2 half_projector(const Vec3& y)
{
    return (ComplexMat2::identity() + sigma_of_vec(y).matrix()) * 0.5;
}

struct MatrixRouteImage {
    UnitVec3 point;
    double lambda = 0.0;
};

/// Evaluates phi_q through 2x2 matrices: M = P(q) P(p) P(q) with
/// P(y) = (I + sigma(y)) / 2, lambda = Tr M and x' read from M / lambda = P(x').
/// Independent of the closed form; used as its oracle.
inline MatrixRouteImage mobius_apply_matrix(const Vec3& q, const UnitVec3& p)
{
    detail::require_inside_ball(q);
    const ComplexMat2 pq = half_projector(q);
    const ComplexMat2 m = pq * half_projector(p.vec()) * pq;
    const double lambda = m.trace().real();
    // x'^k = 1/2 Tr(sigma_k (2 M / lambda)).
    const Vec3 raw{(sigma(1) * m).trace().real() / lambda, (sigma(2) * m).trace().real() / lambda,
                   (sigma(3) * m).trace().real() / lambda};
    return {UnitVec3::normalized(raw), lambda};
}

/// One IFS generator: the boost with direction n and velocity alpha, q = alpha n.
class BoostGenerator {
public:
    BoostGenerator(const UnitVec3& n, double alpha) : n_(n), alpha_(alpha)
    {
        if (!(alpha > 0.0 && alpha < 1.0))
            throw DomainError("BoostGenerator: alpha must lie in (0, 1), got " + std::to_string(alpha));
    }

    const UnitVec3& direction() const { return n_; }
    double alpha() const { return alpha_; }
    Vec3 q() const { return alpha_ * n_.vec(); }

private:
    UnitVec3 n_;
    double alpha_;
};

/// P(q) = I + sigma(q), the unnormalized boost matrix (eigenvalues 1 ± alpha).
inline HermMat2 boost_of(const BoostGenerator& g)
{
    return HermMat2(ComplexMat2::identity() + sigma_of_vec(g.q()).matrix());
}

enum class ProbabilityMode { lambda_weighted, uniform };

/// An ordered, non-empty list of generators plus the selection rule.
/// `symmetric_fast_path()` is derived from the generators (all alpha equal and
/// the directions summing to zero within 1e-9), never supplied by the caller.
class GeneratorSystem {
public:
    static constexpr double symmetry_tolerance = 1e-9;

    explicit GeneratorSystem(std::vector<BoostGenerator> generators,
                             ProbabilityMode mode = ProbabilityMode::lambda_weighted)
        : generators_(std::move(generators)), mode_(mode)
    {
        if (generators_.empty())
            throw ValidationError("GeneratorSystem: generator list is empty");
        qs_.reserve(generators_.size());
        for (const auto& g : generators_)
            qs_.push_back(g.q());

        const double alpha0 = generators_.front().alpha();
        Vec3 sum{};
        bool equal_alpha = true;
        for (const auto& g : generators_) {
            sum = sum + g.direction().vec();
            equal_alpha = equal_alpha && g.alpha() == alpha0;
        }
        symmetric_ = equal_alpha && norm(sum) <= symmetry_tolerance;
    }

    std::size_t size() const { return generators_.size(); }
    const std::vector<BoostGenerator>& generators() const { return generators_; }
    const BoostGenerator& operator[](std::size_t i) const { return generators_[i]; }
    std::span<const Vec3> qs() const { return qs_; }
    ProbabilityMode probability_mode() const { return mode_; }
    bool symmetric_fast_path() const { return symmetric_; }

private:
    std::vector<BoostGenerator> generators_;
    std::vector<Vec3> qs_;
    ProbabilityMode mode_;
    bool symmetric_ = false;
};

/// p_i(x) = lambda(q_i, x) / sum_j lambda(q_j, x), written into `out`
/// (size N). Always the general formula, regardless of symmetry.
inline void probabilities_general(const GeneratorSystem& system, const UnitVec3& x, std::span<double> out)
{
    double total = 0.0;
    const auto qs = system.qs();
    for (std::size_t i = 0; i < qs.size(); ++i) {
        const double lam = (1.0 + dot(qs[i], qs[i]) + 2.0 * dot(qs[i], x.vec())) / 4.0;
        out[i] = lam;
        total += lam;
    }
    for (std::size_t i = 0; i < qs.size(); ++i)
        out[i] /= total;
}

/// p_i(x) = (1 + alpha² + 2 alpha n_i·x) / (N (1 + alpha²)). Valid only when
/// all alpha are equal and the directions sum to zero.
inline void probabilities_symmetric(const GeneratorSystem& system, const UnitVec3& x, std::span<double> out)
{
    const double alpha = system[0].alpha();
    const double a2 = 1.0 + alpha * alpha;
    const double norm_factor = 1.0 / (double(system.size()) * a2);
    for (std::size_t i = 0; i < system.size(); ++i)
        out[i] = (a2 + 2.0 * alpha * dot(system[i].direction().vec(), x.vec())) * norm_factor;
}

/// Selection probabilities at x according to the system's mode; uses the
/// simplified formula when the symmetric fast path applies.
inline void probabilities(const GeneratorSystem& system, const UnitVec3& x, std::span<double> out)
{
    if (out.size() != system.size())
        throw ValidationError("probabilities: output span size mismatch");
    if (system.probability_mode() == ProbabilityMode::uniform) {
        for (auto& p : out)
            p = 1.0 / double(system.size());
    } else if (system.symmetric_fast_path()) {
        probabilities_symmetric(system, x, out);
    } else {
        probabilities_general(system, x, out);
    }
}

inline std::vector<double> probabilities(const GeneratorSystem& system, const UnitVec3& x)
{
    std::vector<double> p(system.size());
    probabilities(system, x, p);
    return p;
}

} // namespace qfractal
