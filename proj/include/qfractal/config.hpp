#pragma once

// Run configuration for the command-line tool. Settings arrive as (key, value)
// pairs from a config file or from flags; both paths share apply_setting so
// anything expressible one way is expressible the other.
//
// File format, one setting per line:
//
//     # comment
//     preset = custom
//     generator = 0 0 1 0.6      # nx ny nz alpha, repeatable
//     res = 600x600

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qfractal/error.hpp"
#include "qfractal/ifs.hpp"
#include "qfractal/mobius.hpp"
#include "qfractal/raster.hpp"

namespace qfractal {

/// A malformed setting. `where()` is "file:line" or "--flag".
class ConfigError : public ValidationError {
public:
    ConfigError(std::string where, const std::string& msg)
        : ValidationError(where + ": " + msg), where_(std::move(where))
    {
    }
    const std::string& where() const { return where_; }

private:
    std::string where_;
};

enum class RunMode { quantum, sierpinski };

struct CustomGenerator {
    Vec3 n;
    double alpha;
};

struct RunConfig {
    RunMode mode = RunMode::quantum;
    Preset preset = Preset::cube8;
    double alpha = 0.71;
    std::vector<CustomGenerator> generators;
    std::uint64_t points = 1'000'000;
    std::uint64_t burn_in = 1000;
    std::uint64_t seed = 1;
    std::uint64_t seeds = 1;
    std::size_t res_x = 600, res_y = 600;
    ProbabilityMode probability = ProbabilityMode::lambda_weighted;
    ToneMode tone = ToneMode::log;
    bool lower_hemisphere = false;
    bool flip = false;
    bool plain = false;
    std::string out = "out.pgm";
    std::optional<std::string> dump_points; ///< text dump of every emitted point
    std::vector<double> alphas;
    std::optional<std::uint64_t> samples;
};

/// Tolerance on |n| for custom generator directions; smaller deviations are
/// normalized away.
inline constexpr double direction_norm_tolerance = 1e-6;

namespace detail {

inline std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == ','))
            ++i;
        const std::size_t j = i;
        while (i < s.size() && !(s[i] == ' ' || s[i] == '\t' || s[i] == ','))
            ++i;
        if (i > j)
            out.push_back(s.substr(j, i - j));
    }
    return out;
}

inline double parse_real(std::string_view s, const std::string& where)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
        throw ConfigError(where, "malformed number '" + std::string(s) + "'");
    return v;
}

/// Non-negative integer; scientific notation is accepted when the value is
/// integral ("1e7").
inline std::uint64_t parse_count(std::string_view s, const std::string& where)
{
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc{} && ptr == s.data() + s.size())
        return v;
    const double d = parse_real(s, where);
    if (d < 0.0 || d != std::floor(d) || d > 1.8e19)
        throw ConfigError(where, "expected a non-negative integer, got '" + std::string(s) + "'");
    return static_cast<std::uint64_t>(d);
}

inline bool parse_bool(std::string_view s, const std::string& where)
{
    if (s == "true" || s == "1" || s == "yes" || s == "on")
        return true;
    if (s == "false" || s == "0" || s == "no" || s == "off")
        return false;
    throw ConfigError(where, "expected a boolean, got '" + std::string(s) + "'");
}

inline double parse_alpha(std::string_view s, const std::string& where)
{
    const double a = parse_real(s, where);
    if (!(a > 0.0 && a < 1.0))
        throw ConfigError(where, "alpha must lie in (0, 1), got " + std::string(s));
    return a;
}

} // namespace detail

/// Applies one setting to `cfg`. `where` labels errors. Repeated "generator"
/// settings append.
inline void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value, const std::string& where)
{
    using namespace detail;
    value = trim(value);
    if (key == "mode") {
        if (value == "quantum")
            cfg.mode = RunMode::quantum;
        else if (value == "sierpinski")
            cfg.mode = RunMode::sierpinski;
        else
            throw ConfigError(where, "mode must be quantum or sierpinski, got '" + std::string(value) + "'");
    } else if (key == "preset") {
        try {
            cfg.preset = parse_preset(value);
        } catch (const ValidationError& e) {
            throw ConfigError(where, e.what());
        }
    } else if (key == "alpha") {
        cfg.alpha = parse_alpha(value, where);
    } else if (key == "generator") {
        const auto tok = split_ws(value);
        if (tok.size() != 4)
            throw ConfigError(where, "generator needs 'nx ny nz alpha'");
        const Vec3 n{parse_real(tok[0], where), parse_real(tok[1], where), parse_real(tok[2], where)};
        if (std::abs(norm(n) - 1.0) > direction_norm_tolerance)
            throw ConfigError(where, "generator direction is not a unit vector (|n| = " + std::to_string(norm(n)) + ")");
        cfg.generators.push_back({n / norm(n), parse_alpha(tok[3], where)});
    } else if (key == "points") {
        cfg.points = parse_count(value, where);
    } else if (key == "burn-in") {
        cfg.burn_in = parse_count(value, where);
    } else if (key == "seed") {
        cfg.seed = parse_count(value, where);
    } else if (key == "seeds") {
        cfg.seeds = parse_count(value, where);
    } else if (key == "res") {
        const auto x = value.find('x');
        if (x == std::string_view::npos)
            throw ConfigError(where, "res must look like 600x600");
        cfg.res_x = parse_count(value.substr(0, x), where);
        cfg.res_y = parse_count(value.substr(x + 1), where);
    } else if (key == "probability") {
        if (value == "lambda")
            cfg.probability = ProbabilityMode::lambda_weighted;
        else if (value == "uniform")
            cfg.probability = ProbabilityMode::uniform;
        else
            throw ConfigError(where, "probability must be lambda or uniform");
    } else if (key == "tone") {
        if (value == "log")
            cfg.tone = ToneMode::log;
        else if (value == "linear")
            cfg.tone = ToneMode::linear;
        else
            throw ConfigError(where, "tone must be log or linear");
    } else if (key == "lower-hemisphere") {
        cfg.lower_hemisphere = parse_bool(value, where);
    } else if (key == "flip") {
        cfg.flip = parse_bool(value, where);
    } else if (key == "plain") {
        cfg.plain = parse_bool(value, where);
    } else if (key == "out") {
        if (value.empty())
            throw ConfigError(where, "out must not be empty");
        cfg.out = std::string(value);
    } else if (key == "dump-points") {
        if (value.empty())
            throw ConfigError(where, "dump-points must not be empty");
        cfg.dump_points = std::string(value);
    } else if (key == "alphas") {
        cfg.alphas.clear();
        for (auto tok : split_ws(value))
            cfg.alphas.push_back(parse_alpha(tok, where));
    } else if (key == "samples") {
        cfg.samples = parse_count(value, where);
    } else {
        throw ConfigError(where, "unknown key '" + std::string(key) + "'");
    }
}

/// Parses "key = value" lines from `in` into `cfg`. `name` prefixes error
/// locations.
inline void apply_config_stream(RunConfig& cfg, std::istream& in, const std::string& name)
{
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        std::string_view s = line;
        if (lineno == 1 && s.starts_with("\xEF\xBB\xBF"))
            s.remove_prefix(3);
        if (const auto hash = s.find('#'); hash != std::string_view::npos)
            s = s.substr(0, hash);
        s = detail::trim(s);
        if (s.empty())
            continue;
        const std::string where = name + ":" + std::to_string(lineno);
        const auto eq = s.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(where, "expected 'key = value'");
        apply_setting(cfg, detail::trim(s.substr(0, eq)), s.substr(eq + 1), where);
    }
}

inline void apply_config_file(RunConfig& cfg, const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(path, "cannot open config file");
    apply_config_stream(cfg, in, path);
}

/// Cross-field checks run after every source has been applied.
inline void validate(const RunConfig& cfg)
{
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
        throw ConfigError("alpha", "alpha must lie in (0, 1)");
    if (cfg.res_x < 16 || cfg.res_y < 16)
        throw ConfigError("res", "resolution must be at least 16x16");
    if (cfg.points < 1)
        throw ConfigError("points", "points must be at least 1");
    if (cfg.seeds < 1)
        throw ConfigError("seeds", "seeds must be at least 1");
    if (cfg.dump_points && cfg.seeds > 1)
        throw ConfigError("dump-points", "a point dump needs a single chain (seeds = 1)");
    if (cfg.samples && *cfg.samples < 1)
        throw ConfigError("samples", "samples must be at least 1");
    if (cfg.mode == RunMode::quantum) {
        if (cfg.preset == Preset::custom && cfg.generators.empty())
            throw ConfigError("generator", "preset custom requires at least one generator");
        if (cfg.preset != Preset::custom && !cfg.generators.empty())
            throw ConfigError("generator", "generators are only allowed with preset custom");
    }
}

inline GeneratorSystem make_system(const RunConfig& cfg, double alpha)
{
    if (cfg.preset != Preset::custom)
        return preset_generators(cfg.preset, alpha, cfg.probability);
    std::vector<BoostGenerator> gens;
    for (const auto& g : cfg.generators)
        gens.emplace_back(UnitVec3::normalized(g.n), g.alpha);
    return GeneratorSystem(std::move(gens), cfg.probability);
}

} // namespace qfractal
