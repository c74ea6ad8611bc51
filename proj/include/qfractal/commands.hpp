#pragma once

// The render, check and sweep subcommands. Each returns a process exit
// status: 0 success, 1 runtime failure, 2 usage error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>
#include <variant>
#include <vector>

#include "qfractal/checks.hpp"
#include "qfractal/config.hpp"
#include "qfractal/ifs.hpp"
#include "qfractal/raster.hpp"

namespace qfractal {

enum ExitStatus : int { exit_ok = 0, exit_failure = 1, exit_usage = 2 };

/// Merged histograms plus one summary per chain.
struct RenderResult {
    HistogramGrid grid;
    std::optional<HistogramGrid> lower;
    std::vector<std::variant<RunSummary<UnitVec3>, RunSummary<Vec2>>> chains;
};

namespace detail {

struct ChainOutput {
    HistogramGrid grid;
    std::optional<HistogramGrid> lower;
    std::variant<RunSummary<UnitVec3>, RunSummary<Vec2>> summary;
};

/// Opens the optional point dump; the returned sink is a no-op without one.
class PointDump {
public:
    explicit PointDump(const std::optional<std::string>& path)
    {
        if (!path)
            return;
        file_.open(*path);
        if (!file_)
            throw std::runtime_error("cannot open point dump '" + *path + "'");
        writer_.emplace(file_);
    }

    template <class Point>
    void operator()(const Point& p)
    {
        if (writer_)
            (*writer_)(p);
    }

private:
    std::ofstream file_;
    std::optional<PointTextWriter> writer_;
};

inline ChainOutput run_chain(const RunConfig& cfg, const GeneratorSystem* system, std::uint64_t seed)
{
    PointDump dump(cfg.dump_points);
    if (cfg.mode == RunMode::sierpinski) {
        HistogramGrid g = HistogramGrid::for_tone(cfg.res_x, cfg.res_y, GridDomain::unit_square, cfg.tone);
        PlaneConfig pc;
        pc.seed = seed;
        pc.n_points = cfg.points;
        pc.burn_in = cfg.burn_in;
        auto s = run_chaos_game(sierpinski_system(), pc, [&](const Vec2& p) {
            dump(p);
            g.bin_point(p);
        });
        return {std::move(g), std::nullopt, std::move(s)};
    }
    HistogramGrid g = HistogramGrid::for_tone(cfg.res_x, cfg.res_y, GridDomain::upper_hemisphere_xy, cfg.tone);
    std::optional<HistogramGrid> lower;
    if (cfg.lower_hemisphere)
        lower = HistogramGrid::for_tone(cfg.res_x, cfg.res_y, GridDomain::lower_hemisphere_xy, cfg.tone);
    SphereConfig sc;
    sc.seed = seed;
    sc.n_points = cfg.points;
    sc.burn_in = cfg.burn_in;
    auto s = run_chaos_game(*system, sc, [&](const UnitVec3& p) {
        dump(p);
        if (p.z() >= 0.0)
            g.bin_point(p.vec());
        else if (lower)
            lower->bin_point(p.vec());
    });
    return {std::move(g), std::move(lower), std::move(s)};
}

/// "dir/name.pgm" -> "dir/name<suffix>.pgm".
inline std::string with_suffix(const std::string& path, const std::string& suffix)
{
    const std::filesystem::path p(path);
    std::filesystem::path out = p.parent_path() / (p.stem().string() + suffix + p.extension().string());
    return out.string();
}

inline void write_image(const HistogramGrid& grid, const RunConfig& cfg, const std::string& path)
{
    const GrayImage img = tone_map(grid, cfg.tone, cfg.flip);
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open output file '" + path + "'");
    if (cfg.plain)
        write_pgm_plain(img, out);
    else
        write_pgm(img, out);
}

inline std::string format_point(const UnitVec3& p)
{
    return PointTextWriter::format(p.x()) + ' ' + PointTextWriter::format(p.y()) + ' ' + PointTextWriter::format(p.z());
}

inline std::string format_point(const Vec2& p) { return PointTextWriter::format(p.x) + ' ' + PointTextWriter::format(p.y); }

} // namespace detail

/// Runs cfg.seeds chains with seeds seed, seed + 1, ... (concurrently, one
/// thread each) and merges their grids.
inline RenderResult render(const RunConfig& cfg)
{
    std::optional<GeneratorSystem> system;
    if (cfg.mode == RunMode::quantum)
        system = make_system(cfg, cfg.alpha);

    std::vector<std::optional<detail::ChainOutput>> outputs(cfg.seeds);
    std::vector<std::exception_ptr> errors(cfg.seeds);
    const auto work = [&](std::size_t k) {
        try {
            outputs[k] = detail::run_chain(cfg, system ? &*system : nullptr, cfg.seed + k);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    };
    if (cfg.seeds == 1) {
        work(0);
    } else {
        std::vector<std::jthread> threads;
        for (std::size_t k = 0; k < cfg.seeds; ++k)
            threads.emplace_back(work, k);
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);

    RenderResult result{std::move(outputs[0]->grid), std::move(outputs[0]->lower), {}};
    result.chains.push_back(std::move(outputs[0]->summary));
    for (std::size_t k = 1; k < cfg.seeds; ++k) {
        result.grid.merge_from(outputs[k]->grid);
        if (result.lower)
            result.lower->merge_from(*outputs[k]->lower);
        result.chains.push_back(std::move(outputs[k]->summary));
    }
    return result;
}

/// Renders and writes the image(s), then prints the summary as "key: value"
/// lines. The wall-time line is the only nondeterministic one.
inline int cmd_render(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    try {
        validate(cfg);
        const RenderResult r = render(cfg);
        detail::write_image(r.grid, cfg, cfg.out);
        std::string lower_path;
        if (r.lower) {
            lower_path = detail::with_suffix(cfg.out, "_lower");
            detail::write_image(*r.lower, cfg, lower_path);
        }

        std::uint64_t emitted = 0, burn_in = 0;
        std::vector<std::uint64_t> counts;
        std::vector<double> expected;
        double wall = 0.0, defect = 0.0;
        std::vector<std::string> finals;
        for (const auto& chain : r.chains)
            std::visit(
                [&](const auto& s) {
                    emitted += s.points_emitted;
                    burn_in += s.burn_in;
                    counts.resize(s.selection_counts.size());
                    expected.resize(s.expected_counts.size());
                    for (std::size_t i = 0; i < counts.size(); ++i) {
                        counts[i] += s.selection_counts[i];
                        expected[i] += s.expected_counts[i];
                    }
                    wall = std::max(wall, s.wall_time_seconds);
                    defect = std::max(defect, s.max_renorm_defect);
                    finals.push_back(detail::format_point(s.final_point));
                },
                chain);

        out << "mode: " << (cfg.mode == RunMode::quantum ? "quantum" : "sierpinski") << '\n';
        if (cfg.mode == RunMode::quantum)
            out << "preset: " << to_string(cfg.preset) << '\n' << "alpha: " << cfg.alpha << '\n';
        out << "seed: " << cfg.seed << '\n' << "seeds: " << cfg.seeds << '\n';
        out << "points: " << emitted << '\n' << "burn_in: " << burn_in << '\n';
        out << "selections:";
        for (auto c : counts)
            out << ' ' << c;
        out << "\nexpected_selections:" << std::fixed << std::setprecision(1);
        for (auto e : expected)
            out << ' ' << e;
        out << std::defaultfloat << std::setprecision(6) << '\n';
        for (std::size_t k = 0; k < finals.size(); ++k)
            out << "final_point" << (finals.size() > 1 ? "_" + std::to_string(k) : "") << ": " << finals[k] << '\n';
        if (cfg.mode == RunMode::quantum)
            out << "max_renorm_defect: " << defect << '\n';
        out << "binned: " << r.grid.total_hits() << '\n';
        out << "output: " << cfg.out << '\n';
        if (r.lower)
            out << "binned_lower: " << r.lower->total_hits() << '\n' << "output_lower: " << lower_path << '\n';
        if (cfg.dump_points)
            out << "points_file: " << *cfg.dump_points << '\n';
        out << "wall_time_s: " << wall << '\n';
        return exit_ok;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

inline int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err, const CheckHooks& hooks = {})
{
    try {
        CheckOptions opts;
        opts.samples = cfg.samples;
        opts.seed = cfg.seed;
        opts.hooks = hooks;
        bool ok = true;
        out << std::left << std::setw(32) << "check" << std::setw(10) << "samples" << std::setw(14)
            << "max_dev" << std::setw(10) << "tol" << "result\n";
        for (const CheckResult& r : run_checks(opts)) {
            ok = ok && r.passed();
            out << std::setw(32) << r.name << std::setw(10) << r.samples << std::setw(14) << std::setprecision(3)
                << std::scientific << r.max_deviation << std::setw(10) << r.tolerance << std::defaultfloat
                << (r.passed() ? "PASS" : "FAIL") << '\n';
        }
        return ok ? exit_ok : exit_failure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

/// One image per alpha, named <out stem>_a<alpha with two decimals>.pgm.
/// Custom generators all take the panel's alpha.
inline int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    if (cfg.alphas.empty()) {
        err << "error: sweep needs a non-empty --alphas list\n";
        return exit_usage;
    }
    if (cfg.mode != RunMode::quantum) {
        err << "error: sweep applies to quantum mode only\n";
        return exit_usage;
    }
    for (double a : cfg.alphas) {
        RunConfig panel = cfg;
        panel.alpha = a;
        for (auto& g : panel.generators)
            g.alpha = a;
        char suffix[32];
        std::snprintf(suffix, sizeof suffix, "_a%.2f", a);
        panel.out = detail::with_suffix(cfg.out, suffix);
        if (panel.dump_points)
            panel.dump_points = detail::with_suffix(*cfg.dump_points, suffix);
        out << "# panel alpha=" << a << '\n';
        if (const int rc = cmd_render(panel, out, err); rc != exit_ok)
            return rc;
    }
    return exit_ok;
}

} // namespace qfractal
