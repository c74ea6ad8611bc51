#pragma once

// Command-line parsing for the qfractal tool, kept out of main() so tests can
// drive it in-process.

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qfractal/commands.hpp"
#include "qfractal/config.hpp"

namespace qfractal::cli {

enum class Command { render, check, sweep };

struct Invocation {
    Command command = Command::render;
    RunConfig config;
};

namespace detail {

/// Raw flag values; applied on top of the config file after parsing.
struct Flags {
    std::optional<std::string> config;
    std::vector<std::pair<std::string, std::optional<std::string>>> values;
    std::vector<std::string> generators;
    bool lower_hemisphere = false, flip = false, plain = false;
};

inline constexpr const char* value_keys[][2] = {
    {"mode", "quantum | sierpinski"},
    {"preset", "cube8 | octa6 | custom"},
    {"alpha", "boost velocity in (0, 1)"},
    {"points", "points emitted per chain"},
    {"burn-in", "discarded initial steps"},
    {"seed", "RNG seed of the first chain"},
    {"seeds", "number of chains; chain k uses seed + k"},
    {"res", "grid resolution, e.g. 600x600"},
    {"probability", "lambda | uniform"},
    {"tone", "log | linear"},
    {"out", "output PGM path"},
    {"dump-points", "also write every emitted point as text, one per line"},
    {"alphas", "comma or space separated alpha list (sweep)"},
    {"samples", "sample count for every check (check)"},
};

inline void add_options(CLI::App& app, Flags& f)
{
    app.add_option("--config", f.config, "config file of 'key = value' lines");
    f.values.reserve(std::size(value_keys)); // CLI11 binds to the elements by address
    for (const auto& [key, help] : value_keys) {
        auto& slot = f.values.emplace_back(key, std::nullopt);
        app.add_option(std::string("--") + key, slot.second, help);
    }
    app.add_option("--generator", f.generators, "custom generator 'nx ny nz alpha' (repeatable)");
    app.add_flag("--lower-hemisphere", f.lower_hemisphere, "also render z < 0 to <out>_lower.pgm");
    app.add_flag("--flip", f.flip, "put iy = 0 at the bottom of the image");
    app.add_flag("--plain", f.plain, "write plain-text PGM (P2)");
}

/// Config file first, then flags on top.
inline RunConfig build_config(const Flags& f)
{
    RunConfig cfg;
    if (f.config)
        apply_config_file(cfg, *f.config);
    for (const auto& [key, value] : f.values)
        if (value)
            apply_setting(cfg, key, *value, "--" + key);
    if (!f.generators.empty()) {
        cfg.generators.clear();
        for (const auto& g : f.generators)
            apply_setting(cfg, "generator", g, "--generator");
    }
    cfg.lower_hemisphere = cfg.lower_hemisphere || f.lower_hemisphere;
    cfg.flip = cfg.flip || f.flip;
    cfg.plain = cfg.plain || f.plain;
    return cfg;
}

} // namespace detail

/// Parses arguments (without the program name). A leading flag implies the
/// render subcommand. Returns the invocation, or the exit status when parsing
/// ends the program (help, usage or configuration errors).
inline std::variant<Invocation, int> parse(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Chaos-game fractals of Möbius boosts on the sphere", "qfractal"};
    app.require_subcommand(1);
    detail::Flags flags[3];
    CLI::App* subs[3] = {
        app.add_subcommand("render", "run the chaos game and write a PGM (default)"),
        app.add_subcommand("check", "run the numerical self-checks"),
        app.add_subcommand("sweep", "render one image per --alphas entry"),
    };
    for (int i = 0; i < 3; ++i)
        detail::add_options(*subs[i], flags[i]);

    if (args.empty()) {
        err << app.help();
        return int(exit_usage);
    }
    if (args[0].starts_with("--") && args[0] != "--help")
        args.insert(args.begin(), "render");
    std::reverse(args.begin(), args.end()); // CLI11 consumes a reversed vector

    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return int(exit_usage);
    }

    for (int i = 0; i < 3; ++i)
        if (subs[i]->parsed()) {
            try {
                return Invocation{Command(i), detail::build_config(flags[i])};
            } catch (const ConfigError& e) {
                err << "error: " << e.what() << '\n';
                return int(exit_usage);
            }
        }
    return int(exit_usage);
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
    auto parsed = parse(std::move(args), out, err);
    if (const int* status = std::get_if<int>(&parsed))
        return *status;
    const Invocation& inv = std::get<Invocation>(parsed);
    switch (inv.command) {
    case Command::render: return cmd_render(inv.config, out, err);
    case Command::check: return cmd_check(inv.config, out, err);
    case Command::sweep: return cmd_sweep(inv.config, out, err);
    }
    return exit_usage;
}

} // namespace qfractal::cli
