#pragma once

// 2x2 complex matrix algebra: Pauli basis, the Minkowski <-> Hermitian
// encoding, the checkmark/tilde (anti-)involutions and the SL(2,C) action
// on Hermitian matrices together with the induced Lorentz matrix.

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "qfractal/error.hpp"
#include "qfractal/vec.hpp"

namespace qfractal {

using Complex = std::complex<double>;
using Minkowski4 = std::array<double, 4>;
using ComplexMinkowski4 = std::array<Complex, 4>;

/// Dense 2x2 complex matrix, entries a11 a12 / a21 a22.
struct ComplexMat2 {
    Complex a11{}, a12{}, a21{}, a22{};

    static constexpr ComplexMat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr ComplexMat2 zero() { return {}; }

    ComplexMat2 operator+(const ComplexMat2& o) const { return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22}; }
    ComplexMat2 operator-(const ComplexMat2& o) const { return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22}; }
    ComplexMat2 operator-() const { return {-a11, -a12, -a21, -a22}; }
    ComplexMat2 operator*(Complex s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }
    ComplexMat2 operator/(Complex s) const { return {a11 / s, a12 / s, a21 / s, a22 / s}; }

    ComplexMat2 operator*(const ComplexMat2& o) const
    {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }

    bool operator==(const ComplexMat2&) const = default;

    Complex trace() const { return a11 + a22; }
    Complex det() const { return a11 * a22 - a12 * a21; }
    ComplexMat2 transpose() const { return {a11, a21, a12, a22}; }
    ComplexMat2 conj() const { return {std::conj(a11), std::conj(a12), std::conj(a21), std::conj(a22)}; }
    ComplexMat2 adjoint() const { return transpose().conj(); }
};

inline ComplexMat2 operator*(Complex s, const ComplexMat2& m) { return m * s; }

/// Largest entrywise modulus, used as the distance in all matrix tolerances.
inline double max_abs(const ComplexMat2& m)
{
    return std::max({std::abs(m.a11), std::abs(m.a12), std::abs(m.a21), std::abs(m.a22)});
}

inline double max_abs_diff(const ComplexMat2& a, const ComplexMat2& b) { return max_abs(a - b); }

/// Pauli matrix sigma_mu, mu = 0..3 (sigma_0 = I).
inline ComplexMat2 sigma(int mu)
{
    using namespace std::complex_literals;
    switch (mu) {
    case 0: return {1.0, 0.0, 0.0, 1.0};
    case 1: return {0.0, 1.0, 1.0, 0.0};
    case 2: return {0.0, -1.0i, 1.0i, 0.0};
    case 3: return {1.0, 0.0, 0.0, -1.0};
    default: throw DomainError("sigma: index must be in 0..3, got " + std::to_string(mu));
    }
}

/// Hermitian 2x2 matrix; equivalently a real Minkowski 4-vector.
class HermMat2 {
public:
    static constexpr double hermiticity_tolerance = 1e-10;

    HermMat2() = default;

    /// Symmetrizes (X + X*)/2 when the anti-Hermitian part is below
    /// tolerance; rejects the input otherwise.
    explicit HermMat2(const ComplexMat2& m)
    {
        const double defect = max_abs_diff(m, m.adjoint());
        if (!(defect <= hermiticity_tolerance))
            throw ValidationError("HermMat2: matrix is not Hermitian (defect " + std::to_string(defect) + ")");
        const ComplexMat2 h = (m + m.adjoint()) * 0.5;
        m_ = {h.a11.real(), h.a12, std::conj(h.a12), h.a22.real()};
    }

    const ComplexMat2& matrix() const { return m_; }
    operator const ComplexMat2&() const { return m_; }

    double trace() const { return m_.a11.real() + m_.a22.real(); }
    double det() const { return m_.a11.real() * m_.a22.real() - std::norm(m_.a12); }

    /// Eigenvalues in ascending order.
    std::array<double, 2> eigenvalues() const
    {
        const double half_tr = 0.5 * trace();
        const double half_diff = 0.5 * (m_.a11.real() - m_.a22.real());
        const double r = std::hypot(half_diff, std::abs(m_.a12));
        return {half_tr - r, half_tr + r};
    }

private:
    ComplexMat2 m_{};
};

/// SL(2,C) element: a 2x2 complex matrix with unit determinant.
class SL2C {
public:
    static constexpr double det_tolerance = 1e-12;

    SL2C() : m_(ComplexMat2::identity()) {}

    explicit SL2C(const ComplexMat2& m) : m_(m)
    {
        const double defect = std::abs(m.det() - 1.0);
        if (!(defect <= det_tolerance))
            throw ValidationError("SL2C: |det - 1| = " + std::to_string(defect) + " exceeds tolerance");
    }

    /// Rescales an invertible matrix by a square root of its determinant.
    static SL2C normalized(const ComplexMat2& m)
    {
        const Complex d = m.det();
        if (std::abs(d) == 0.0)
            throw ValidationError("SL2C: cannot normalize a singular matrix");
        return SL2C(m / std::sqrt(d));
    }

    /// Builds A = a^mu sigma_mu; requires (a0)^2 - (a1)^2 - (a2)^2 - (a3)^2 = 1.
    static SL2C from_coordinates(const ComplexMinkowski4& a)
    {
        const Complex q = a[0] * a[0] - a[1] * a[1] - a[2] * a[2] - a[3] * a[3];
        if (!(std::abs(q - 1.0) <= det_tolerance))
            throw ValidationError("SL2C: complex coordinates violate a.a = 1");
        ComplexMat2 m{};
        for (int mu = 0; mu < 4; ++mu)
            m = m + sigma(mu) * a[mu];
        return SL2C(m);
    }

    /// a^mu = 1/2 Tr(sigma_mu A).
    ComplexMinkowski4 coordinates() const
    {
        ComplexMinkowski4 a{};
        for (int mu = 0; mu < 4; ++mu)
            a[mu] = 0.5 * (sigma(mu) * m_).trace();
        return a;
    }

    const ComplexMat2& matrix() const { return m_; }
    operator const ComplexMat2&() const { return m_; }

    SL2C operator*(const SL2C& o) const { return SL2C(m_ * o.m_, unchecked_tag{}); }

private:
    struct unchecked_tag {};
    SL2C(const ComplexMat2& m, unchecked_tag) : m_(m) {}

    ComplexMat2 m_;
};

/// Real 4x4 matrix Lambda^mu_nu; row = output index, column = input index.
struct LorentzMat4 {
    std::array<std::array<double, 4>, 4> m{};

    static LorentzMat4 identity()
    {
        LorentzMat4 l;
        for (int i = 0; i < 4; ++i)
            l.m[i][i] = 1.0;
        return l;
    }

    double& operator()(int mu, int nu) { return m[mu][nu]; }
    double operator()(int mu, int nu) const { return m[mu][nu]; }

    LorentzMat4 operator*(const LorentzMat4& o) const
    {
        LorentzMat4 r;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double s = 0.0;
                for (int k = 0; k < 4; ++k)
                    s += m[i][k] * o.m[k][j];
                r.m[i][j] = s;
            }
        return r;
    }

    Minkowski4 operator*(const Minkowski4& x) const
    {
        Minkowski4 r{};
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k)
                r[i] += m[i][k] * x[k];
        return r;
    }

    LorentzMat4 transpose() const
    {
        LorentzMat4 r;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                r.m[i][j] = m[j][i];
        return r;
    }
};

inline double max_abs_diff(const LorentzMat4& a, const LorentzMat4& b)
{
    double d = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            d = std::max(d, std::abs(a.m[i][j] - b.m[i][j]));
    return d;
}

/// max |(Lᵀ η L − η)_ij| with η = diag(1,−1,−1,−1).
inline double metric_defect(const LorentzMat4& l)
{
    constexpr std::array<double, 4> eta{1.0, -1.0, -1.0, -1.0};
    double d = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k)
                s += l.m[k][i] * eta[k] * l.m[k][j];
            d = std::max(d, std::abs(s - (i == j ? eta[i] : 0.0)));
        }
    return d;
}

inline double minkowski_form(const Minkowski4& x)
{
    return x[0] * x[0] - x[1] * x[1] - x[2] * x[2] - x[3] * x[3];
}

// ---------------------------------------------------------------------------
// Encodings

/// v^1 sigma_1 + v^2 sigma_2 + v^3 sigma_3.
inline HermMat2 sigma_of_vec(const Vec3& v)
{
    return HermMat2(ComplexMat2{v.z, Complex(v.x, -v.y), Complex(v.x, v.y), -v.z});
}

/// X = [[x0+x3, x1−i x2], [x1+i x2, x0−x3]].
inline HermMat2 herm_from_minkowski(const Minkowski4& x)
{
    return HermMat2(ComplexMat2{x[0] + x[3], Complex(x[1], -x[2]), Complex(x[1], x[2]), x[0] - x[3]});
}

/// x^mu = 1/2 Tr(sigma_mu X).
inline Minkowski4 minkowski_from_herm(const HermMat2& h)
{
    const ComplexMat2& m = h.matrix();
    return {0.5 * (m.a11.real() + m.a22.real()), m.a12.real(), -m.a12.imag(),
            0.5 * (m.a11.real() - m.a22.real())};
}

/// Validating overload for raw matrices.
inline Minkowski4 minkowski_from_herm(const ComplexMat2& m) { return minkowski_from_herm(HermMat2(m)); }

// ---------------------------------------------------------------------------
// (Anti-)involutions, C = [[0,−1],[1,0]]

/// A✓ = C Aᵗ C⁻¹; satisfies A A✓ = det(A) I.
inline ComplexMat2 checkmark(const ComplexMat2& a)
{
    // C Aᵗ C⁻¹ worked out entrywise.
    return {a.a22, -a.a12, -a.a21, a.a11};
}

/// Ã = C Ā C⁻¹; equals A* for A in SL(2,C).
inline ComplexMat2 tilde(const ComplexMat2& a)
{
    return {std::conj(a.a22), -std::conj(a.a21), -std::conj(a.a12), std::conj(a.a11)};
}

inline ComplexMat2 adjoint(const ComplexMat2& a) { return a.adjoint(); }

// ---------------------------------------------------------------------------
// SL(2,C) action and the induced Lorentz matrix

/// X' = A X A*.
inline HermMat2 act_adjoint(const SL2C& a, const HermMat2& x)
{
    const ComplexMat2& am = a.matrix();
    return HermMat2(am * x.matrix() * am.adjoint());
}

/// Lambda^mu_nu = 1/2 Tr(sigma_mu A sigma_nu A*). This is the reference
/// definition; lorentz_closed_form is checked against it.
inline LorentzMat4 lorentz_from_sl2c(const SL2C& a)
{
    const ComplexMat2& am = a.matrix();
    const ComplexMat2 am_star = am.adjoint();
    LorentzMat4 l;
    for (int nu = 0; nu < 4; ++nu) {
        const ComplexMat2 image = am * sigma(nu) * am_star;
        for (int mu = 0; mu < 4; ++mu)
            l(mu, nu) = 0.5 * (sigma(mu) * image).trace().real();
    }
    return l;
}

namespace detail {

inline int levi_civita(int j, int k, int l)
{
    // indices 0..2
    if (j == k || k == l || j == l)
        return 0;
    return ((j + 1) % 3 == k) ? 1 : -1;
}

} // namespace detail

/// Lorentz matrix straight from the complex coordinates a^mu of A = a^mu sigma_mu:
///   Lambda^0_0 = |a0|^2 + |a|^2
///   Lambda^j_0 = 2 Re(conj(a0) a^j) + i eps_jkl a^k conj(a^l)
///   Lambda^0_j = 2 Re(conj(a0) a^j) − i eps_jkl a^k conj(a^l)
///   Lambda^j_k = (a.conj(a)) delta_jk + 2 Re(a^j conj(a^k)) + 2 Im(conj(a0) a^l) eps_jkl
/// where a.conj(a) is the Minkowski product. The first row carries the
/// conjugated cross term: Lambda^0_j and Lambda^j_0 coincide only when A is
/// Hermitian.
inline LorentzMat4 lorentz_closed_form(const ComplexMinkowski4& a)
{
    constexpr double tolerance = 1e-10;
    const Complex aa = a[0] * a[0] - a[1] * a[1] - a[2] * a[2] - a[3] * a[3];
    if (!(std::abs(aa - 1.0) <= tolerance))
        throw ValidationError("lorentz_closed_form: coordinates violate a.a = 1");

    const Complex a0bar = std::conj(a[0]);
    double spatial_sq = 0.0;
    for (int k = 1; k < 4; ++k)
        spatial_sq += std::norm(a[k]);
    const double a_dot_abar = std::norm(a[0]) - spatial_sq;

    LorentzMat4 l;
    l(0, 0) = std::norm(a[0]) + spatial_sq;
    for (int j = 0; j < 3; ++j) {
        // i eps_jkl a^k conj(a^l) is real: it equals 2 (u x v)_j for a = u + i v.
        Complex cross{};
        for (int k = 0; k < 3; ++k)
            for (int m = 0; m < 3; ++m)
                if (const int e = detail::levi_civita(j, k, m))
                    cross += double(e) * Complex(0.0, 1.0) * a[k + 1] * std::conj(a[m + 1]);
        const double sym = 2.0 * (a0bar * a[j + 1]).real();
        l(j + 1, 0) = sym + cross.real();
        l(0, j + 1) = sym - cross.real();

        for (int k = 0; k < 3; ++k) {
            double v = (j == k ? a_dot_abar : 0.0) + 2.0 * (a[j + 1] * std::conj(a[k + 1])).real();
            for (int m = 0; m < 3; ++m)
                if (const int e = detail::levi_civita(j, k, m))
                    v += 2.0 * (a0bar * a[m + 1]).imag() * e;
            l(j + 1, k + 1) = v;
        }
    }
    return l;
}

// ---------------------------------------------------------------------------
// Polar decomposition

struct PolarDecomposition {
    SL2C unitary;
    SL2C positive;
};

/// Positive square root of a positive-definite 2x2 Hermitian matrix. For
/// H with eigenvalues mu1, mu2, sqrt(H) = (H + sqrt(det H) I) / sqrt(tr H + 2 sqrt(det H)),
/// which is the eigendecomposition route written without eigenvectors.
inline HermMat2 positive_sqrt(const HermMat2& h)
{
    const auto ev = h.eigenvalues();
    if (!(ev[0] > 0.0))
        throw ValidationError("positive_sqrt: matrix is not positive definite");
    const double s = std::sqrt(ev[0] * ev[1]);
    const double t = std::sqrt(ev[0]) + std::sqrt(ev[1]);
    return HermMat2((h.matrix() + ComplexMat2::identity() * s) / t);
}

/// A = U P with U unitary and P = sqrt(A* A) positive, both in SL(2,C).
inline PolarDecomposition polar_decompose(const SL2C& a)
{
    const HermMat2 ata(a.matrix().adjoint() * a.matrix());
    const HermMat2 p = positive_sqrt(ata);
    // det P = 1, so P⁻¹ = P✓.
    const ComplexMat2 u = a.matrix() * checkmark(p.matrix());
    return {SL2C::normalized(u), SL2C::normalized(p.matrix())};
}

// ---------------------------------------------------------------------------
// Identity suite

struct PauliIdentityReport {
    double two_index_trace = 0.0;   ///< max |1/2 Tr(σ_μσ_ν) − δ_μν|
    double three_index_trace = 0.0; ///< max |1/2 Tr(σ_kσ_lσ_m) − i ε_klm|
    double four_index_trace = 0.0;  ///< max |1/2 Tr(σ_jσ_kσ_lσ_m) − (δδ + δδ − δδ)|
    double product_rule = 0.0;      ///< max |σ_kσ_l − (δ_kl I + i ε_klm σ_m)|
    double hermiticity = 0.0;       ///< max |σ_μ* − σ_μ|

    double max_deviation() const
    {
        return std::max({two_index_trace, three_index_trace, four_index_trace, product_rule, hermiticity});
    }
    bool passed(double tolerance = 1e-14) const { return max_deviation() <= tolerance; }
};

/// Evaluates every Pauli-matrix identity over all index combinations by
/// explicit matrix products.
inline PauliIdentityReport pauli_identity_suite()
{
    const Complex i(0.0, 1.0);
    const auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };
    PauliIdentityReport r;

    for (int mu = 0; mu < 4; ++mu) {
        r.hermiticity = std::max(r.hermiticity, max_abs_diff(sigma(mu).adjoint(), sigma(mu)));
        for (int nu = 0; nu < 4; ++nu)
            r.two_index_trace = std::max(
                r.two_index_trace, std::abs(0.5 * (sigma(mu) * sigma(nu)).trace() - delta(mu, nu)));
    }

    for (int k = 1; k <= 3; ++k)
        for (int l = 1; l <= 3; ++l) {
            ComplexMat2 expected = ComplexMat2::identity() * delta(k, l);
            for (int m = 1; m <= 3; ++m) {
                const double eps = detail::levi_civita(k - 1, l - 1, m - 1);
                expected = expected + sigma(m) * (i * eps);
                r.three_index_trace = std::max(
                    r.three_index_trace,
                    std::abs(0.5 * (sigma(k) * sigma(l) * sigma(m)).trace() - i * eps));
                for (int j = 1; j <= 3; ++j) {
                    const double rhs =
                        delta(j, k) * delta(l, m) + delta(j, m) * delta(k, l) - delta(j, l) * delta(k, m);
                    r.four_index_trace = std::max(
                        r.four_index_trace,
                        std::abs(0.5 * (sigma(j) * sigma(k) * sigma(l) * sigma(m)).trace() - rhs));
                }
            }
            r.product_rule = std::max(r.product_rule, max_abs_diff(sigma(k) * sigma(l), expected));
        }
    return r;
}

} // namespace qfractal
