#pragma once

// Chaos-game drivers for spherical (Möbius) and planar (affine) iterated
// function systems, generator presets and the deterministic Hutchinson step.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <initializer_list>
#include <ostream>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "qfractal/affine.hpp"
#include "qfractal/error.hpp"
#include "qfractal/mobius.hpp"
#include "qfractal/vec.hpp"

namespace qfractal {

/// Uniform reals in [0, 1) from std::mt19937_64, using the top 53 bits of
/// each draw: (x >> 11) * 2^-53. The generator identity is part of the
/// reproducibility contract of every run.
class UniformRng {
public:
    static constexpr std::string_view algorithm = "mt19937_64/53-bit";

    explicit UniformRng(std::uint64_t seed) : engine_(seed) {}

    double operator()() { return double(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// Configuration and summaries

template <class Point>
constexpr Point default_initial_point()
{
    if constexpr (std::is_same_v<Point, UnitVec3>)
        return UnitVec3{};
    else
        return Point{};
}

template <class Point>
struct ChaosGameConfig {
    std::uint64_t seed = 1;
    std::uint64_t n_points = 1;
    std::uint64_t burn_in = 1000;
    Point initial_point = default_initial_point<Point>();

    void validate() const
    {
        if (n_points < 1)
            throw ValidationError("ChaosGameConfig: n_points must be at least 1");
    }
};

using SphereConfig = ChaosGameConfig<UnitVec3>;
using PlaneConfig = ChaosGameConfig<Vec2>;

template <class Point>
struct RunSummary {
    std::uint64_t points_emitted = 0;
    std::uint64_t burn_in = 0;
    std::vector<std::uint64_t> selection_counts;
    /// Sum over all steps (burn-in included) of p_i(x_t): the expected
    /// selection count of map i given the realized trajectory.
    std::vector<double> expected_counts;
    /// Sum over all steps of p_i(x_t) (1 − p_i(x_t)).
    std::vector<double> count_variance;
    Point final_point = default_initial_point<Point>();
    double wall_time_seconds = 0.0;
    /// Largest pre-renormalization norm defect seen (spherical runs only).
    double max_renorm_defect = 0.0;

    std::uint64_t total_selections() const
    {
        std::uint64_t s = 0;
        for (auto c : selection_counts)
            s += c;
        return s;
    }
};

/// Thrown when the point sink fails; carries the summary up to the failure.
template <class Point>
class RunAborted : public std::runtime_error {
public:
    RunAborted(const std::string& what, RunSummary<Point> partial)
        : std::runtime_error(what), summary(std::move(partial))
    {
    }
    RunSummary<Point> summary;
};

// ---------------------------------------------------------------------------
// Map selection

/// Smallest index i with p_0 + ... + p_i > r. When rounding leaves the
/// cumulative sum at or below r, the last index is selected.
inline std::size_t select_index(std::span<const double> probs, double r)
{
    double cumulative = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        cumulative += probs[i];
        if (cumulative > r)
            return i;
    }
    return probs.size() - 1;
}

/// One chaos-game step with an externally supplied uniform r in [0, 1).
/// Indices are 0-based.
inline std::pair<std::size_t, UnitVec3> chaos_step(const GeneratorSystem& system, const UnitVec3& x, double r)
{
    if (!(r >= 0.0 && r < 1.0))
        throw DomainError("chaos_step: r must lie in [0, 1)");
    std::vector<double> p(system.size());
    probabilities(system, x, p);
    const std::size_t i = select_index(p, r);
    return {i, mobius_apply_unchecked(system.qs()[i], x).point};
}

// ---------------------------------------------------------------------------
// Presets

enum class Preset { cube8, octa6, custom };

inline Preset parse_preset(std::string_view name)
{
    if (name == "cube8")
        return Preset::cube8;
    if (name == "octa6")
        return Preset::octa6;
    if (name == "custom")
        return Preset::custom;
    throw ValidationError("unknown preset '" + std::string(name) + "' (expected cube8, octa6 or custom)");
}

inline std::string_view to_string(Preset p)
{
    switch (p) {
    case Preset::cube8: return "cube8";
    case Preset::octa6: return "octa6";
    case Preset::custom: return "custom";
    }
    return "?";
}

/// Vertex directions of a preset polyhedron. cube8 is the cube inscribed in
/// S² with one vertex at the north pole, i.e. (±1,±1,±1)/√3 rotated so that
/// (1,1,1)/√3 lands on (0,0,1).
inline std::vector<UnitVec3> preset_directions(Preset preset)
{
    switch (preset) {
    case Preset::cube8: {
        const double s2 = std::sqrt(2.0);
        const double s23 = std::sqrt(2.0 / 3.0);
        const double third = 1.0 / 3.0;
        return {
            UnitVec3::normalized({0.0, 0.0, 1.0}),
            UnitVec3::normalized({2.0 * s2 / 3.0, 0.0, third}),
            UnitVec3::normalized({-s2 / 3.0, s23, third}),
            UnitVec3::normalized({-s2 / 3.0, -s23, third}),
            UnitVec3::normalized({s2 / 3.0, s23, -third}),
            UnitVec3::normalized({s2 / 3.0, -s23, -third}),
            UnitVec3::normalized({-2.0 * s2 / 3.0, 0.0, -third}),
            UnitVec3::normalized({0.0, 0.0, -1.0}),
        };
    }
    case Preset::octa6:
        return {
            UnitVec3(1.0, 0.0, 0.0), UnitVec3(-1.0, 0.0, 0.0), UnitVec3(0.0, 1.0, 0.0),
            UnitVec3(0.0, -1.0, 0.0), UnitVec3(0.0, 0.0, 1.0), UnitVec3(0.0, 0.0, -1.0),
        };
    case Preset::custom:
        break;
    }
    throw ValidationError("preset 'custom' has no built-in directions; supply generators explicitly");
}

inline GeneratorSystem preset_generators(Preset preset, double alpha,
                                         ProbabilityMode mode = ProbabilityMode::lambda_weighted)
{
    std::vector<BoostGenerator> gens;
    for (const auto& n : preset_directions(preset))
        gens.emplace_back(n, alpha);
    return GeneratorSystem(std::move(gens), mode);
}

// ---------------------------------------------------------------------------
// Text point stream

/// Point sink writing one point per line, coordinates separated by single
/// spaces with 17 significant digits (round-trips every double).
class PointTextWriter {
public:
    explicit PointTextWriter(std::ostream& out) : out_(&out) {}

    void operator()(const UnitVec3& p) { write({p.x(), p.y(), p.z()}); }
    void operator()(const Vec2& p) { write({p.x, p.y}); }

    static std::string format(double v)
    {
        char buf[32];
        const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
        return std::string(buf, r.ptr);
    }

private:
    void write(std::initializer_list<double> coords)
    {
        std::string line;
        for (double c : coords) {
            if (!line.empty())
                line += ' ';
            line += format(c);
        }
        line += '\n';
        out_->write(line.data(), std::streamsize(line.size()));
        if (!*out_)
            throw std::runtime_error("point stream write failed");
    }

    std::ostream* out_;
};

// ---------------------------------------------------------------------------
// Spherical chaos game

/// Runs the chaos game on S². `sink(const UnitVec3&)` receives exactly
/// config.n_points points after config.burn_in discarded steps. Identical
/// (system, config) produce a bit-identical stream.
template <class Sink>
RunSummary<UnitVec3> run_chaos_game(const GeneratorSystem& system, const SphereConfig& config, Sink&& sink)
{
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = system.size();
    const auto qs = system.qs();

    RunSummary<UnitVec3> summary;
    summary.burn_in = config.burn_in;
    summary.selection_counts.assign(n, 0);
    summary.expected_counts.assign(n, 0.0);
    summary.count_variance.assign(n, 0.0);

    UniformRng rng(config.seed);
    std::vector<double> p(n);
    UnitVec3 x = config.initial_point;
    const std::uint64_t total = config.burn_in + config.n_points;

    for (std::uint64_t step = 0; step < total; ++step) {
        probabilities(system, x, p);
        const std::size_t i = select_index(p, rng());
        for (std::size_t k = 0; k < n; ++k) {
            summary.expected_counts[k] += p[k];
            summary.count_variance[k] += p[k] * (1.0 - p[k]);
        }
        ++summary.selection_counts[i];
        const MobiusImage img = mobius_apply_unchecked(qs[i], x);
        summary.max_renorm_defect = std::max(summary.max_renorm_defect, img.defect);
        x = img.point;
        if (step >= config.burn_in) {
            try {
                sink(x);
            } catch (const std::exception& e) {
                summary.final_point = x;
                throw RunAborted<UnitVec3>(std::string("point sink failed: ") + e.what(), std::move(summary));
            }
            ++summary.points_emitted;
        }
    }
    summary.final_point = x;
    summary.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return summary;
}

// ---------------------------------------------------------------------------
// Planar affine systems

/// Affine maps with constant selection probabilities.
struct AffineSystem {
    std::vector<AffineMap2> maps;
    std::vector<double> probabilities;

    void validate() const
    {
        if (maps.empty() || maps.size() != probabilities.size())
            throw ValidationError("AffineSystem: need one probability per map");
        double sum = 0.0;
        for (double p : probabilities) {
            if (!(p > 0.0))
                throw ValidationError("AffineSystem: probabilities must be positive");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw ValidationError("AffineSystem: probabilities must sum to 1");
    }

    /// Rejects systems whose maps are not all strict contractions.
    void require_contractive() const
    {
        for (const auto& m : maps)
            if (!(largest_singular_value(m.linear) < 1.0))
                throw ValidationError("AffineSystem: map is not a contraction");
    }
};

/// The three half-scale maps with translations (0,0), (0.5,0), (0.25,0.5),
/// each chosen with probability 1/3.
inline AffineSystem sierpinski_system()
{
    const Mat2 half{{{0.5, 0.0}, {0.0, 0.5}}};
    return {{AffineMap2{half, {0.0, 0.0}}, AffineMap2{half, {0.5, 0.0}}, AffineMap2{half, {0.25, 0.5}}},
            {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
}

template <class Sink>
RunSummary<Vec2> run_chaos_game(const AffineSystem& system, const PlaneConfig& config, Sink&& sink)
{
    config.validate();
    system.validate();
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = system.maps.size();

    RunSummary<Vec2> summary;
    summary.burn_in = config.burn_in;
    summary.selection_counts.assign(n, 0);
    summary.expected_counts.assign(n, 0.0);
    summary.count_variance.assign(n, 0.0);

    UniformRng rng(config.seed);
    Vec2 x = config.initial_point;
    const std::uint64_t total = config.burn_in + config.n_points;
    for (std::uint64_t step = 0; step < total; ++step) {
        const std::size_t i = select_index(system.probabilities, rng());
        ++summary.selection_counts[i];
        x = system.maps[i](x);
        if (step >= config.burn_in) {
            try {
                sink(x);
            } catch (const std::exception& e) {
                summary.final_point = x;
                throw RunAborted<Vec2>(std::string("point sink failed: ") + e.what(), std::move(summary));
            }
            ++summary.points_emitted;
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        const double p = system.probabilities[k];
        summary.expected_counts[k] = p * double(total);
        summary.count_variance[k] = p * (1.0 - p) * double(total);
    }
    summary.final_point = x;
    summary.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return summary;
}

// ---------------------------------------------------------------------------
// Hutchinson operator

/// Removes points within `tolerance` (max-norm) of their lexicographic
/// predecessor. Exact for the dyadic point sets produced by the Sierpinski maps.
inline void deduplicate(std::vector<Vec2>& points, double tolerance = 1e-12)
{
    std::sort(points.begin(), points.end(),
              [](const Vec2& a, const Vec2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    const auto last = std::unique(points.begin(), points.end(), [tolerance](const Vec2& a, const Vec2& b) {
        return std::abs(a.x - b.x) <= tolerance && std::abs(a.y - b.y) <= tolerance;
    });
    points.erase(last, points.end());
}

/// F(Y) = f_1(Y) ∪ ... ∪ f_n(Y), deduplicated within 1e-12.
inline std::vector<Vec2> hutchinson_step(std::span<const AffineMap2> maps, std::span<const Vec2> points)
{
    if (points.empty())
        throw ValidationError("hutchinson_step: point set is empty");
    std::vector<Vec2> out;
    out.reserve(maps.size() * points.size());
    for (const auto& m : maps)
        for (const auto& p : points)
            out.push_back(m(p));
    deduplicate(out);
    return out;
}

/// Y_depth = F^depth(Y_0).
inline std::vector<Vec2> hutchinson_iterate(std::span<const AffineMap2> maps, std::vector<Vec2> seed, int depth)
{
    for (int d = 0; d < depth; ++d)
        seed = hutchinson_step(maps, seed);
    return seed;
}

} // namespace qfractal
