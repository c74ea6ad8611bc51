// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all
// pass. Tolerances and sample counts are fixed here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qfractal/commands.hpp"
#include "qfractal/ifs.hpp"
#include "qfractal/metrics.hpp"
#include "qfractal/mobius.hpp"
#include "qfractal/pauli.hpp"
#include "qfractal/raster.hpp"
#include "qfractal/sampling.hpp"

using namespace qfractal;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!detail.empty())
            detail += "; ";
        detail += what + (ok ? "" : " [FAILED]");
        pass = pass && ok;
    }
};

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string pgm_bytes(const HistogramGrid& grid, ToneMode mode)
{
    std::ostringstream out(std::ios::binary);
    write_pgm(tone_map(grid, mode), out);
    return out.str();
}

// 1. Closed-form Möbius map and λ against the Pauli-matrix route.
Outcome oracle_equivalence()
{
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    Sampler s(1001);
    double dx = 0.0, dl = 0.0;
    for (int i = 0; i < 1'000'000; ++i) {
        const Vec3 q = s.boost(0.0, 0.95);
        const UnitVec3 x = s.unit();
        const MatrixRouteImage m = mobius_apply_matrix(q, x);
        dx = std::max(dx, norm(mobius_apply(q, x).vec() - m.point.vec()));
        dl = std::max(dl, std::abs(lambda_factor(q, x) - m.lambda));
    }
    const double t = seconds_since(t0);
    o.require(dx < 1e-12, "max|dx| = " + fmt("%.2e", dx) + " < 1e-12");
    o.require(dl < 1e-12, "max|dlambda| = " + fmt("%.2e", dl) + " < 1e-12");
    o.require(t < 30.0, "time " + fmt("%.2f", t) + " s < 30 s");
    return o;
}

// 2. Angle preservation by finite differences.
Outcome conformality()
{
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    Sampler s(1002);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Vec3 q = s.boost(0.0, 0.95);
        const UnitVec3 x = s.unit();
        const Vec3 u = s.tangent(x), v = s.tangent(x);
        worst = std::max(worst, conformality_defect(q, x, u, v, 1e-6));
    }
    const double t = seconds_since(t0);
    o.require(worst < 1e-4, "max angle defect = " + fmt("%.2e", worst) + " < 1e-4");
    o.require(t < 5.0, "time " + fmt("%.3f", t) + " s < 5 s");
    return o;
}

// 3. λ at the extreme points and at the critical latitude.
Outcome lambda_structure()
{
    Outcome o;
    Sampler s(1003);
    double worst = 0.0;
    for (int k = 1; k <= 9; ++k) {
        const double a = 0.1 * k;
        for (int trial = 0; trial < 100; ++trial) {
            const UnitVec3 n = trial == 0 ? UnitVec3(0, 0, 1) : s.unit();
            const Vec3 q = a * n.vec();
            const double lmax = lambda_factor(q, n);
            const double lmin = lambda_factor(q, -n);
            const Vec3 t = s.tangent(n);
            const UnitVec3 crit = UnitVec3::normalized(-a * n.vec() + std::sqrt(1.0 - a * a) * t);
            worst = std::max({worst, std::abs(lmax - (1 + a) * (1 + a) / 4), std::abs(lmin - (1 - a) * (1 - a) / 4),
                              std::abs(lambda_factor(q, crit) - std::sqrt(lmax * lmin))});
        }
    }
    o.require(worst <= 1e-14, "max deviation = " + fmt("%.2e", worst) + " <= 1e-14");
    return o;
}

// 4. Selection probabilities for the two presets.
Outcome probability_normalization()
{
    Outcome o;
    Sampler s(1004);
    double sum_dev = 0.0, formula_dev = 0.0;
    for (Preset preset : {Preset::cube8, Preset::octa6}) {
        const GeneratorSystem sys = preset_generators(preset, 0.71);
        std::vector<double> pg(sys.size()), ps(sys.size());
        for (int i = 0; i < 10'000; ++i) {
            const UnitVec3 x = s.unit();
            probabilities_general(sys, x, pg);
            probabilities_symmetric(sys, x, ps);
            double sum = 0.0;
            for (std::size_t k = 0; k < sys.size(); ++k) {
                sum += pg[k];
                formula_dev = std::max(formula_dev, std::abs(pg[k] - ps[k]));
            }
            sum_dev = std::max(sum_dev, std::abs(sum - 1.0));
        }
    }
    const double p1 = probabilities(preset_generators(Preset::cube8, 0.71), UnitVec3(0, 0, 1))[0];
    o.require(sum_dev < 1e-12, "max|sum p - 1| = " + fmt("%.2e", sum_dev) + " < 1e-12");
    o.require(formula_dev < 1e-12, "general vs simplified = " + fmt("%.2e", formula_dev) + " < 1e-12");
    o.require(std::abs(p1 - 0.24302) <= 5e-6, "cube8 p_1(north pole) = " + fmt("%.7f", p1) + ", required 0.24302 +- 5e-6");
    return o;
}

// 5. Area distortion: sphere average and pointwise finite differences.
Outcome area_distortion_check()
{
    Outcome o;
    Sampler s(1005);
    const Vec3 q = preset_generators(Preset::cube8, 0.71)[1].q();
    constexpr int n = 1'000'000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = area_distortion(q, s.unit());
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    o.require(std::abs(mean - 1.0) < 3.0 * se,
              "MC mean = " + fmt("%.5f", mean) + ", |mean - 1| / SE = " + fmt("%.2f", std::abs(mean - 1.0) / se) + " < 3");

    // Black-box Jacobian: central differences along two orthogonal great
    // circles, area of the image parallelogram.
    const double h = 1e-5;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Vec3 qi = s.boost(0.0, 0.9);
        const UnitVec3 x = s.unit();
        const Vec3 e1 = s.tangent(x), e2 = cross(x.vec(), e1);
        const auto push = [&](const Vec3& e) {
            const UnitVec3 plus = UnitVec3::normalized(std::cos(h) * x.vec() + std::sin(h) * e);
            const UnitVec3 minus = UnitVec3::normalized(std::cos(h) * x.vec() - std::sin(h) * e);
            return (mobius_apply(qi, plus).vec() - mobius_apply(qi, minus).vec()) / (2.0 * std::sin(h));
        };
        worst = std::max(worst, std::abs(norm(cross(push(e1), push(e2))) - area_distortion(qi, x)));
    }
    o.require(worst < 1e-5, "max |FD Jacobian - dS'/dS| = " + fmt("%.2e", worst) + " < 1e-5");
    return o;
}

// 6. SL(2,C) to Lorentz pipeline and Pauli identities.
Outcome lorentz_pipeline()
{
    Outcome o;
    Sampler s(1006);
    double closed = 0.0, metric = 0.0, hom = 0.0;
    for (int i = 0; i < 10'000; ++i) {
        const ComplexMinkowski4 a = s.unit_complex4();
        const SL2C m = SL2C::from_coordinates(a);
        const LorentzMat4 l = lorentz_from_sl2c(m);
        closed = std::max(closed, max_abs_diff(lorentz_closed_form(a), l));
        metric = std::max(metric, metric_defect(l));
        const SL2C b = s.sl2c();
        hom = std::max(hom, max_abs_diff(lorentz_from_sl2c(m * b), l * lorentz_from_sl2c(b)));
    }
    const double pauli = pauli_identity_suite().max_deviation();
    o.require(closed <= 1e-10, "closed form vs trace = " + fmt("%.2e", closed) + " <= 1e-10");
    o.require(metric <= 1e-10, "metric defect = " + fmt("%.2e", metric) + " <= 1e-10");
    o.require(hom <= 1e-9, "homomorphism = " + fmt("%.2e", hom) + " <= 1e-9");
    o.require(pauli <= 1e-14, "Pauli identities = " + fmt("%.2e", pauli) + " <= 1e-14");
    return o;
}

// 7. Sierpinski triangle: contraction, Hutchinson convergence, chaos game.
Outcome sierpinski()
{
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const AffineSystem sys = sierpinski_system();
    bool half = true;
    for (const auto& m : sys.maps)
        half = half && contraction_factor(m) == 0.5;
    o.require(half, "contraction factors == 0.5");

    std::vector<std::vector<Vec2>> levels{{{0.0, 0.0}}};
    for (int d = 1; d <= 9; ++d)
        levels.push_back(hutchinson_step(sys.maps, levels.back()));
    std::vector<double> h;
    for (int d = 0; d < 9; ++d)
        h.push_back(hausdorff_distance(PointSet::planar(levels[d + 1]), PointSet::planar(levels[d])));
    double worst_ratio = 0.0;
    for (int n = 2; n <= 8; ++n)
        worst_ratio = std::max(worst_ratio, h[n] / h[n - 1]);
    o.require(worst_ratio <= 0.5 + 1e-9, "max residual ratio n=2..8 = " + fmt("%.12f", worst_ratio) + " <= 0.5 + 1e-9");

    PlaneConfig cfg;
    cfg.n_points = 100'000;
    cfg.burn_in = 50;
    std::vector<Vec2> pts;
    pts.reserve(cfg.n_points);
    run_chaos_game(sys, cfg, [&](const Vec2& p) { pts.push_back(p); });
    const double d = directed_distance(PointSet::planar(pts), PointSet::planar(levels[8]));
    o.require(d <= 0.01, "max distance to depth-8 set = " + fmt("%.2e", d) + " <= 0.01");
    const double t = seconds_since(t0);
    o.require(t < 60.0, "time " + fmt("%.2f", t) + " s < 60 s");
    return o;
}

// 8. Desk-scale cube render: runtime, determinism, multi-chain merge.
Outcome end_to_end()
{
    Outcome o;
    RunConfig cfg;
    cfg.preset = Preset::cube8;
    cfg.alpha = 0.71;
    cfg.points = 10'000'000;
    cfg.res_x = cfg.res_y = 600;
    cfg.seed = 1;

    auto t0 = std::chrono::steady_clock::now();
    const HistogramGrid first = render(cfg).grid;
    const std::string bytes = pgm_bytes(first, ToneMode::log);
    const double t = seconds_since(t0);
    o.require(t < 60.0, "single chain 1e7 points " + fmt("%.2f", t) + " s < 60 s");
    o.require(bytes.size() == 15 + 360000, "PGM size " + std::to_string(bytes.size()));
    o.require(pgm_bytes(render(cfg).grid, ToneMode::log) == bytes, "repeat run byte-identical");

    RunConfig multi = cfg;
    multi.seeds = 4;
    const HistogramGrid merged = render(multi).grid;
    HistogramGrid acc = first;
    for (std::uint64_t k = 1; k < 4; ++k) {
        RunConfig single = cfg;
        single.seed = cfg.seed + k;
        acc.merge_from(render(single).grid);
    }
    o.require(merged == acc, "4-chain grid == merge of single runs");
    return o;
}

// 9. Octahedron alpha sweep: determinism and selection frequencies.
Outcome octahedron_sweep()
{
    Outcome o;
    double worst_z = 0.0;
    bool deterministic = true;
    for (int k = 4; k <= 9; ++k) {
        const double a = 0.1 * k;
        const GeneratorSystem sys = preset_generators(Preset::octa6, a);
        SphereConfig cfg;
        cfg.seed = 1;
        cfg.n_points = 1'000'000;
        const auto run = [&](RunSummary<UnitVec3>& summary) {
            HistogramGrid g = HistogramGrid::for_tone(600, 600, GridDomain::upper_hemisphere_xy, ToneMode::log);
            summary = run_chaos_game(sys, cfg, [&](const UnitVec3& p) { g.bin_point(p.vec()); });
            return pgm_bytes(g, ToneMode::log);
        };
        RunSummary<UnitVec3> s1, s2;
        deterministic = deterministic && run(s1) == run(s2);
        for (std::size_t i = 0; i < sys.size(); ++i) {
            const double z = std::abs(double(s1.selection_counts[i]) - s1.expected_counts[i]) / std::sqrt(s1.count_variance[i]);
            worst_z = std::max(worst_z, z);
        }
    }
    o.require(deterministic, "six panels byte-identical on rerun");
    o.require(worst_z <= 4.0, "max |count - sum p| / sigma = " + fmt("%.2f", worst_z) + " <= 4");
    return o;
}

// 10. Raster contracts.
Outcome raster_contracts()
{
    Outcome o;
    HistogramGrid g = HistogramGrid::for_tone(600, 600, GridDomain::upper_hemisphere_xy, ToneMode::log);
    SphereConfig cfg;
    cfg.n_points = 200'000;
    std::uint64_t upper = 0;
    run_chaos_game(preset_generators(Preset::cube8, 0.71), cfg, [&](const UnitVec3& p) {
        upper += p.z() >= 0.0;
        g.bin_point(p.vec());
    });
    o.require(g.total_hits() == upper, "total hits " + std::to_string(g.total_hits()) + " == upper-hemisphere points");

    std::ostringstream one(std::ios::binary), two(std::ios::binary);
    write_pgm(GrayImage{1, 1, {0}}, one);
    write_pgm(GrayImage{2, 1, {0, 255}}, two);
    o.require(one.str() == std::string("\x50\x35\x0A\x31\x20\x31\x0A\x32\x35\x35\x0A\x00", 12) &&
                  two.str() == std::string("P5\n2 1\n255\n\x00\xFF", 13),
              "PGM bytes exact");

    const double e = std::numbers::e;
    const bool log_ok = log_tone(1, e * e) == 0 && log_tone(e, e * e) == 128 && log_tone(e * e, e * e) == 255;
    const GrayImage ones = tone_map(HistogramGrid(4, 4, GridDomain::unit_square, 1), ToneMode::log);
    HistogramGrid hot(4, 4, GridDomain::unit_square, 0);
    hot.bin_point(Vec2{0.5, 0.25});
    const GrayImage lin = tone_map(hot, ToneMode::linear);
    int lit = 0;
    for (auto v : lin.pixels)
        lit += v != 0;
    const bool tone_ok = log_ok && std::all_of(ones.pixels.begin(), ones.pixels.end(), [](auto v) { return v == 0; }) &&
                         lin.at(1, 2) == 255 && lit == 1;
    o.require(tone_ok, "tone-map examples exact");

    HistogramGrid b = HistogramGrid::for_tone(600, 600, GridDomain::upper_hemisphere_xy, ToneMode::log);
    const bool bin_ok = b.bin_point(Vec3{0, 0, 1}) == CellIndex{300, 300} && b.bin_point(Vec3{-1, 0, 0})->ix == 0 &&
                        b.bin_point(Vec3{1, 0, 0})->ix == 599;
    o.require(bin_ok, "binning examples exact");
    return o;
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"oracle equivalence", oracle_equivalence},
        {"conformality", conformality},
        {"lambda structure", lambda_structure},
        {"probability normalization", probability_normalization},
        {"area distortion", area_distortion_check},
        {"Lorentz pipeline", lorentz_pipeline},
        {"Sierpinski", sierpinski},
        {"end-to-end fractal run", end_to_end},
        {"octahedron sweep", octahedron_sweep},
        {"raster contracts", raster_contracts},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        failed += !o.pass;
        std::printf("%s  %2zu %-26s %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
