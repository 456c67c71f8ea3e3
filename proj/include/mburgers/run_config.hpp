#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "presets.hpp"

namespace mburgers {

enum class Command { shock, simulate, exact_odd, picard, abel_check, convergence, reproduce_figures };

inline const std::vector<std::pair<Command, std::string>>& command_names()
{
    static const std::vector<std::pair<Command, std::string>> names{
        {Command::shock, "shock"},         {Command::simulate, "simulate"},
        {Command::exact_odd, "exact-odd"}, {Command::picard, "picard"},
        {Command::abel_check, "abel-check"}, {Command::convergence, "convergence"},
        {Command::reproduce_figures, "reproduce-figures"}};
    return names;
}

inline std::string command_summary(Command c)
{
    switch (c) {
    case Command::shock: return "tabulate a travelling shock profile";
    case Command::simulate: return "run the finite-difference solver";
    case Command::exact_odd: return "evaluate the exact solution for odd data";
    case Command::picard: return "iterate the integral formulation";
    case Command::abel_check: return "check the Abel inversions";
    case Command::convergence: return "grid refinement study";
    case Command::reproduce_figures: return "profile and interface figures";
    }
    return "";
}

inline const std::string& command_name(Command c)
{
    for (const auto& [k, n] : command_names())
        if (k == c) return n;
    throw std::logic_error("command_name: bad command");
}

/// A configuration problem; the message is one line and says how to fix it.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thrown after --help output has been printed.
struct HelpShown {};

enum class ParamType { real, integer, text, preset, choice, boolean, real_list };

struct ParamSpec {
    std::string name;
    ParamType type;
    std::string fallback;
    std::string help;
    std::vector<std::string> choices = {};
};

inline const std::vector<ParamSpec>& command_schema(Command c)
{
    using P = ParamType;
    static const std::map<Command, std::vector<ParamSpec>> schema{
        {Command::shock,
         {{"w_plus", P::real, "1", "right state W+ > 0"},
          {"w_minus", P::real, "-1", "left state W- < 0"},
          {"t", P::real, "0", "time of the profile"},
          {"x_min", P::real, "-10", "left end of the sample window"},
          {"x_max", P::real, "10", "right end of the sample window"},
          {"points", P::integer, "401", "number of samples"}}},
        {Command::simulate,
         {{"ic", P::preset, "IC1", "initial data preset"},
          {"L", P::real, "30", "half-length of the truncated line"},
          {"h", P::real, "0.01", "grid step"},
          {"tau", P::real, "0.002", "time step"},
          {"T", P::real, "4", "final time"},
          {"coupling", P::choice, "implicit", "interface coupling", {"implicit", "lagged", "predictor_corrector"}},
          {"stride", P::integer, "50", "steps between stored profiles"},
          {"x_stride", P::integer, "5", "grid nodes between written profile samples"},
          {"scale", P::real, "1", "factor applied to the initial data"}}},
        {Command::exact_odd,
         {{"data", P::choice, "y_exp", "odd initial profile u0 on y > 0", {"y_exp", "gaussian"}},
          {"times", P::real_list, "1,4,16,64", "comma separated output times"},
          {"y_max", P::real, "20", "right end of the sample window"},
          {"points", P::integer, "401", "samples per time"}}},
        {Command::picard,
         {{"ic", P::preset, "IC1", "initial data preset"},
          {"T", P::real, "0.5", "time horizon"},
          {"levels", P::integer, "64", "time levels"},
          {"tol", P::real, "2e-4", "fixed-point tolerance"},
          {"max_iter", P::integer, "60", "iteration cap"},
          {"y_step", P::real, "0.05", "space step of the iterates"},
          {"y_extent", P::real, "16", "space extent of the iterates"},
          {"nested", P::boolean, "false", "gamma outer, fields inner"},
          {"fd_h", P::real, "0.005", "grid step of the comparison run"},
          {"fd_tau", P::real, "0.0005", "time step of the comparison run"},
          {"gamma_tol", P::real, "5e-3", "allowed gap to the comparison run"}}},
        {Command::abel_check,
         {{"times", P::real_list, "0.25,1,4", "comma separated check times"},
          {"tol", P::real, "1e-5", "residual bound"},
          {"bumps", P::integer, "20", "random perturbations for the uniqueness probe"}}},
        {Command::convergence,
         {{"case", P::choice, "odd", "odd (exact oracle) or general (self convergence)", {"odd", "general"}},
          {"levels", P::integer, "4", "refinement levels"},
          {"h0", P::real, "0.04", "coarsest grid step"},
          {"tau0", P::real, "0.01", "coarsest time step"},
          {"L", P::real, "30", "half-length of the truncated line"},
          {"scaling", P::choice, "linear", "time step refinement", {"linear", "quadratic"}},
          {"ic", P::preset, "IC1", "initial data for the general case"},
          {"T", P::real, "1", "final time for the general case"},
          {"min_order", P::real, "1.9", "required observed order in the odd case"}}},
        {Command::reproduce_figures,
         {{"L", P::real, "30", "half-length of the truncated line"},
          {"h", P::real, "0.01", "grid step"},
          {"tau", P::real, "0.002", "time step"},
          {"x_stride", P::integer, "5", "grid nodes between written profile samples"}}}};
    return schema.at(c);
}

struct RunConfig {
    Command command = Command::simulate;
    std::map<std::string, std::string> parameters;
    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 20240601;

    const std::string& text(const std::string& key) const
    {
        const auto it = parameters.find(key);
        if (it == parameters.end()) throw std::logic_error("RunConfig: no parameter '" + key + "'");
        return it->second;
    }
    double real(const std::string& key) const { return std::stod(text(key)); }
    long integer(const std::string& key) const { return std::stol(text(key)); }
    bool flag(const std::string& key) const { return text(key) == "true"; }
    std::vector<double> reals(const std::string& key) const
    {
        std::vector<double> out;
        std::stringstream ss(text(key));
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
        return out;
    }
};

namespace detail {

inline std::string trim(std::string s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline bool parses_real(const std::string& s)
{
    if (s.empty()) return false;
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        return used == s.size() && std::isfinite(v);
    } catch (const std::exception&) {
        return false;
    }
}

inline bool parses_integer(const std::string& s)
{
    long v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return !s.empty() && ec == std::errc() && p == s.data() + s.size();
}

inline std::string joined(const std::vector<std::string>& items)
{
    std::string out;
    for (const auto& i : items) out += (out.empty() ? "" : ", ") + i;
    return out;
}

// Normalises the value in place.
inline void check_value(const ParamSpec& p, std::string& v)
{
    auto bad = [&](const std::string& expected) {
        throw ConfigError("parameter '" + p.name + "' expects " + expected + ", got '" + v + "' (e.g. --" + p.name +
                          " " + p.fallback + ")");
    };
    switch (p.type) {
    case ParamType::real:
        if (!parses_real(v)) bad("a real number");
        break;
    case ParamType::integer:
        if (!parses_integer(v)) bad("an integer");
        break;
    case ParamType::boolean:
        if (v == "1" || v == "yes" || v == "on") v = "true";
        if (v == "0" || v == "no" || v == "off") v = "false";
        if (v != "true" && v != "false") bad("true or false");
        break;
    case ParamType::preset: {
        const auto& names = presets::names();
        if (std::find(names.begin(), names.end(), v) == names.end())
            throw ConfigError("unknown preset '" + v + "' for '" + p.name + "' (expected " + joined(names) + ")");
        break;
    }
    case ParamType::choice:
        if (std::find(p.choices.begin(), p.choices.end(), v) == p.choices.end())
            throw ConfigError("parameter '" + p.name + "' must be one of " + joined(p.choices) + ", got '" + v + "'");
        break;
    case ParamType::real_list: {
        std::stringstream ss(v);
        std::string item;
        int count = 0;
        while (std::getline(ss, item, ',')) {
            if (!parses_real(trim(item))) bad("a comma separated list of reals");
            ++count;
        }
        if (count == 0) bad("a comma separated list of reals");
        break;
    }
    case ParamType::text:
        break;
    }
}

inline std::map<std::string, std::string> read_key_values(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "' (check the --config path)");
    std::map<std::string, std::string> out;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(number) + ": expected key=value, got '" + line + "'");
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

} // namespace detail

/// Merges defaults, an optional key=value file and command-line flags (highest precedence).
inline RunConfig parse_config(const std::vector<std::string>& args)
{
    CLI::App app{"Modular Burgers viscous shock toolkit", "mburgers"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_help_flag("--help", "print help and exit");
    std::string config_file, out_dir, seed_text;
    app.add_option("--config", config_file, "flat key=value file (flags override it)");
    app.add_option("--out", out_dir, "output directory (default: out)");
    app.add_option("--seed", seed_text, "seed for randomized checks");

    std::map<Command, CLI::App*> subs;
    std::map<Command, std::map<std::string, std::string>> given;
    for (const auto& [cmd, name] : command_names()) {
        auto* sub = app.add_subcommand(name, command_summary(cmd));
        sub->set_help_flag("--help", "print help for this command and exit");
        subs[cmd] = sub;
        for (const auto& p : command_schema(cmd)) {
            std::string desc = p.help + " [default " + p.fallback + "]";
            sub->add_option("--" + p.name, given[cmd][p.name], desc);
        }
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, std::cout, std::cerr);
        throw HelpShown{};
    } catch (const CLI::ParseError& e) {
        std::string msg = e.what();
        if (dynamic_cast<const CLI::RequiredError*>(&e))
            msg = "missing command; expected one of shock, simulate, exact-odd, picard, abel-check, convergence, "
                  "reproduce-figures";
        throw ConfigError(msg + " (run with --help for usage)");
    }

    RunConfig cfg;
    bool found = false;
    for (const auto& [cmd, sub] : subs)
        if (sub->parsed()) {
            cfg.command = cmd;
            found = true;
        }
    if (!found) throw ConfigError("unknown command (run with --help for the list)");

    const auto& schema = command_schema(cfg.command);
    for (const auto& p : schema) cfg.parameters[p.name] = p.fallback;

    std::map<std::string, std::string> file_values;
    if (!config_file.empty()) file_values = detail::read_key_values(config_file);
    for (const auto& [key, value] : file_values) {
        if (key == "out") {
            cfg.output_dir = value;
            continue;
        }
        if (key == "seed") {
            seed_text = seed_text.empty() ? value : seed_text;
            continue;
        }
        if (!cfg.parameters.contains(key)) {
            std::vector<std::string> names;
            for (const auto& p : schema) names.push_back(p.name);
            throw ConfigError("unknown key '" + key + "' in " + config_file + " for command " +
                              command_name(cfg.command) + " (valid keys: " + detail::joined(names) + ", out, seed)");
        }
        cfg.parameters[key] = value;
    }

    auto* sub = subs.at(cfg.command);
    for (const auto& p : schema)
        if (sub->count("--" + p.name) > 0) cfg.parameters[p.name] = given[cfg.command][p.name];
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (!seed_text.empty()) {
        if (!detail::parses_integer(seed_text) || seed_text.front() == '-')
            throw ConfigError("seed expects a nonnegative integer, got '" + seed_text + "' (e.g. --seed 7)");
        cfg.seed = std::stoull(seed_text);
    }

    for (const auto& p : schema) detail::check_value(p, cfg.parameters[p.name]);
    return cfg;
}

inline RunConfig parse_config(int argc, const char* const* argv)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return parse_config(args);
}

} // namespace mburgers
