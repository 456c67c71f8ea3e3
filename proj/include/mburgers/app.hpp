#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <boost/version.hpp>
#include <json.hpp>

#include "abel.hpp"
#include "convergence.hpp"
#include "diagnostics.hpp"
#include "fd_solver.hpp"
#include "heat_kernel.hpp"
#include "io.hpp"
#include "picard.hpp"
#include "presets.hpp"
#include "run_config.hpp"
#include "shock.hpp"

namespace mburgers {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int config_error = 2;
inline constexpr int solver_failure = 3;
inline constexpr int check_failure = 4;
} // namespace exit_code

inline constexpr const char* tool_version = "1.0.0";

namespace app {

using nlohmann::json;

struct Outcome {
    int code = exit_code::ok;
    json results = json::object();
    std::vector<std::string> artifacts;
    std::vector<std::string> failures;

    void fail(int c, const std::string& why)
    {
        failures.push_back(why);
        if (code == exit_code::ok || c == exit_code::solver_failure) code = c;
    }
};

class Session {
public:
    explicit Session(const RunConfig& cfg) : cfg_(cfg) { std::filesystem::create_directories(cfg.output_dir); }

    const RunConfig& cfg() const { return cfg_; }
    Outcome& outcome() { return outcome_; }

    void csv(const std::string& name, const io::Table& t)
    {
        io::write_csv(cfg_.output_dir / name, t);
        outcome_.artifacts.push_back(name);
    }

    void svg(const std::string& name, const io::Plot& p)
    {
        io::write_svg(cfg_.output_dir / name, p);
        outcome_.artifacts.push_back(name);
    }

private:
    RunConfig cfg_;
    Outcome outcome_;
};

inline void profile_rows(io::Table& t, const SolverState& s, const FdConfig& cfg, long x_stride, double window = 1e300)
{
    const auto p = reconstruct(s, cfg);
    const double time = s.k * cfg.tau;
    for (std::size_t i = 0; i < p.x.size(); ++i) {
        const bool edge = i == 0 || i + 1 == p.x.size() || p.y[i] == 0.0;
        if (std::abs(p.y[i]) > window) continue;
        if (!edge && static_cast<long>(i) % x_stride != 0) continue;
        t.add(time, p.x[i], p.u[i], p.w[i]);
    }
}

inline io::Table interface_table(const Trajectory& tr)
{
    io::Table t{{"t", "gamma", "xi", "h1_energy", "sup_norm"}, {}};
    for (std::size_t k = 0; k < tr.gamma_series.size(); ++k)
        t.add(tr.time_of(static_cast<long>(k)), tr.gamma_series[k], tr.xi_series[k], tr.norm_series[k].energy,
              tr.norm_series[k].sup_norm);
    return t;
}

inline double energy_tolerance(const FdConfig& c)
{
    return c.ic.v_minus.value(0.5) == 0.0 && c.ic.v_minus.value(2.0) == 0.0 ? 1e-10 : 10.0 * c.tau * c.tau;
}

inline void run_shock(Session& s)
{
    const auto& c = s.cfg();
    const ShockProfile p(c.real("w_plus"), c.real("w_minus"));
    const long n = c.integer("points");
    if (n < 2) throw ConfigError("parameter 'points' must be at least 2 (e.g. --points 401)");
    const double a = c.real("x_min"), b = c.real("x_max"), t = c.real("t");
    io::Table tab{{"x", "w", "w_x", "w_xx"}, {}};
    for (long i = 0; i < n; ++i) {
        const double x = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
        const double z = x - p.speed() * t;
        tab.add(x, p.eval(z, 0), p.eval(z, 1), p.eval(z, 2, z == 0.0 ? std::optional(Side::plus) : std::nullopt));
    }
    s.csv("shock.csv", tab);
    const double r = p.interface_jump_residual();
    auto& out = s.outcome();
    out.results = {{"speed", p.speed() + 0.0}, {"interface_residual", r}};
    if (std::abs(r) > 1e-12) out.fail(exit_code::check_failure, "interface jump residual " + io::cell(r));
}

inline void run_simulate(Session& s)
{
    const auto& c = s.cfg();
    auto ic = initial_condition(c.text("ic"));
    const double scale = c.real("scale");
    if (scale != 1.0) ic = ic.scaled(scale);
    FdConfig fc = FdConfig::with_step(c.real("L"), c.real("h"), c.real("tau"), c.real("T"), ic);
    const std::string coupling = c.text("coupling");
    fc.coupling = coupling == "lagged" ? Coupling::lagged
                  : coupling == "predictor_corrector" ? Coupling::predictor_corrector
                                                      : Coupling::implicit;
    try {
        fc.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string(e.what()) + " (adjust L, h, tau or T)");
    }
    if (scale == 1.0) check_initial_compat(fc.ic);

    const auto tr = simulate(fc, {c.integer("stride"), {}});
    io::Table traj{{"t", "x", "u", "w"}, {}};
    for (const auto& snap : tr.snapshots) profile_rows(traj, snap, fc, c.integer("x_stride"));
    s.csv("trajectory.csv", traj);
    s.csv("interface.csv", interface_table(tr));

    const auto violations = positivity_check(tr);
    io::Table pos{{"t", "x", "w"}, {}};
    for (const auto& v : violations) pos.add(v.t, v.x, v.w);
    s.csv("positivity.csv", pos);

    const auto energy = energy_monotonicity_report(tr, energy_tolerance(fc));
    const auto fit = fit_xi_infinity(tr);
    auto& out = s.outcome();
    out.results = {{"complete", tr.complete},
                   {"final_time", tr.final_time()},
                   {"xi_T", fit.xi_at_T},
                   {"xi_inf", fit.xi_extrapolated},
                   {"decay_rate", fit.rate ? json(*fit.rate) : json(nullptr)},
                   {"positivity_violations", violations.size()},
                   {"energy_violations", energy.size()}};
    if (!tr.complete) out.fail(exit_code::solver_failure, tr.failure);
    if (!violations.empty())
        out.fail(exit_code::check_failure, std::to_string(violations.size()) + " positivity violations");
    if (!energy.empty()) out.fail(exit_code::check_failure, std::to_string(energy.size()) + " energy increases");
}

inline void run_exact_odd(Session& s)
{
    const auto& c = s.cfg();
    const AnalyticField u0 = c.text("data") == "y_exp" ? presets::y_exp() : presets::gaussian_plus();
    const auto times = c.reals("times");
    const long n = c.integer("points");
    const double y_max = c.real("y_max");
    if (n < 2 || !(y_max > 0.0)) throw ConfigError("need points >= 2 and y_max > 0 (e.g. --points 401 --y_max 20)");
    for (double t : times)
        if (!(t > 0.0)) throw ConfigError("exact-odd times must be positive (e.g. --times 1,4,16)");

    QuadratureSpec q;
    io::Table tab{{"t", "y", "u", "u_y", "u_yy"}, {}};
    std::vector<double> ys;
    for (long i = 0; i < n; ++i) ys.push_back(y_max * static_cast<double>(i) / static_cast<double>(n - 1));
    for (double t : times)
        for (double y : ys)
            tab.add(t, y, odd_exact_solution(u0, t, y, 0, q), odd_exact_solution(u0, t, y, 1, q),
                    odd_exact_solution(u0, t, y, 2, q));
    s.csv("exact_odd.csv", tab);

    std::vector<double> late;
    for (double t : times)
        if (t >= 1.0) late.push_back(t);
    const auto norms = discrete_norms(PerturbationField::sample(0.001, 40001, u0));
    auto sampler = [&](double t, double y, int order) { return odd_exact_solution(u0, t, y, order, q); };
    const auto checks = decay_bound_check(sampler, norms, late, ys);
    io::Table dec{{"t", "order", "sup", "bound", "margin"}, {}};
    auto& out = s.outcome();
    int failed = 0;
    for (const auto& d : checks) {
        dec.add(d.t, d.order, d.lhs, d.rhs, d.margin());
        if (!d.pass()) ++failed;
    }
    s.csv("decay_bounds.csv", dec);
    out.results = {{"decay_checks", checks.size()}, {"decay_failures", failed}};
    if (failed) out.fail(exit_code::check_failure, std::to_string(failed) + " decay bound failures");
}

inline void run_picard(Session& s)
{
    const auto& c = s.cfg();
    const auto ic = initial_condition(c.text("ic"));
    PicardConfig pc;
    pc.T = c.real("T");
    pc.levels = static_cast<int>(c.integer("levels"));
    pc.tol = c.real("tol");
    pc.max_iter = static_cast<int>(c.integer("max_iter"));
    pc.y_step = c.real("y_step");
    pc.y_extent = c.real("y_extent");
    pc.nested = c.flag("nested");
    try {
        pc.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string(e.what()) + " (adjust the picard parameters)");
    }
    const auto up = trace_from_split(ic, 1), um = trace_from_split(ic, -1);
    const auto res = picard_solve(up, um, pc);

    const FdConfig fc = FdConfig::with_step(30.0, c.real("fd_h"), c.real("fd_tau"), pc.T, ic);
    const auto tr = simulate(fc, {0, {}});
    if (!tr.complete) throw SolverFailure("comparison run failed: " + tr.failure);
    const GammaSignal fd_gamma(fc.tau, tr.gamma_series);

    io::Table tab{{"t", "gamma", "gamma_fd", "continuity", "interface", "dynamical_plus", "dynamical_minus",
                   "gamma_equation"},
                  {}};
    double gap = 0.0;
    for (const auto& r : res.residuals) {
        const double g = fd_gamma(r.t);
        gap = std::max(gap, std::abs(r.gamma - g));
        tab.add(r.t, r.gamma, g, r.continuity, r.interface, r.dynamical_plus, r.dynamical_minus, r.gamma_equation);
    }
    s.csv("picard_gamma.csv", tab);
    io::Table it{{"iteration", "change"}, {}};
    for (std::size_t i = 0; i < res.report.changes.size(); ++i) it.add(i + 1, res.report.changes[i]);
    s.csv("picard_iterations.csv", it);

    const auto& rep = res.report;
    auto& out = s.outcome();
    out.results = {{"iterations", rep.iterations},
                   {"converged", rep.converged},
                   {"continuity_residual", rep.continuity_residual},
                   {"interface_residual", rep.interface_residual},
                   {"dynamical_residual", rep.dynamical_residual},
                   {"gamma_equation_residual", rep.gamma_equation_residual},
                   {"gamma_gap_to_fd", gap},
                   {"data_norm", rep.data_norm},
                   {"data_small", rep.data_small},
                   {"weighted_sup_ratio", weighted_sup_ratio(res.state, 0.25)}};
    if (!rep.converged) out.fail(exit_code::solver_failure, rep.message);
    const double bound = 10.0 * pc.tol;
    if (rep.continuity_residual > bound || rep.interface_residual > bound)
        out.fail(exit_code::check_failure, "continuity/interface residual above 10 tol");
    if (gap > c.real("gamma_tol")) out.fail(exit_code::check_failure, "gamma differs from the comparison run by " + io::cell(gap));
}

struct NamedAbelProblem {
    std::string name;
    AbelProblem problem;
};

/// Data used by abel-check and the acceptance suite.
inline std::vector<NamedAbelProblem> abel_test_problems()
{
    return {{"from_f:eta*exp(-eta)", AbelProblem::with_f(presets::y_exp())},
            {"from_g:exp(-tau-eta)", AbelProblem::with_g([](double tau, double eta) { return std::exp(-tau - eta); })},
            {"local:exp(-tau)", AbelProblem::with_h([](double tau) { return std::exp(-tau); })}};
}

inline void run_abel_check(Session& s)
{
    const auto& c = s.cfg();
    const auto times = c.reals("times");
    const double tol = c.real("tol");
    for (double t : times)
        if (!(t > 0.0)) throw ConfigError("abel-check times must be positive (e.g. --times 0.25,1,4)");
    auto& out = s.outcome();
    io::Table tab{{"problem", "t", "gamma", "residual"}, {}};
    double worst = 0.0;
    for (const auto& [name, p] : abel_test_problems())
        for (double t : times) {
            const double r = abel_residual(p, t);
            worst = std::max(worst, std::abs(r));
            tab.add(name, t, solve_abel(p, t), r);
        }
    const auto unit = AbelProblem::with_h([](double) { return 1.0; });
    const double point = solve_abel_local(unit, std::numbers::pi);
    tab.add(std::string("local:1"), std::numbers::pi, point, point - 1.0);
    s.csv("abel_residuals.csv", tab);

    // Perturbing a solution by a bump must not lower its residual.
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> amp(0.05, 0.5), width(0.05, 0.5), unit01(0.0, 1.0);
    io::Table uq{{"problem", "bump", "t", "residual", "perturbed_residual"}, {}};
    int worse = 0;
    const auto bumps = c.integer("bumps");
    const double t = 1.0;
    for (const auto& [name, p] : abel_test_problems()) {
        const double base = std::abs(abel_residual(p, t));
        for (long b = 0; b < bumps; ++b) {
            const double a = amp(rng) * (unit01(rng) < 0.5 ? -1.0 : 1.0), centre = t * unit01(rng), w = width(rng);
            auto perturbed = [&](double tau) {
                const double z = (tau - centre) / w;
                return solve_abel(p, tau) + a * std::exp(-z * z);
            };
            const double r = std::abs(abel_residual_of(p, perturbed, t));
            if (!(r > base)) ++worse;
            uq.add(name, b, t, base, r);
        }
    }
    s.csv("abel_uniqueness.csv", uq);
    out.results = {{"max_residual", worst}, {"local_unit_at_pi", point}, {"uniqueness_failures", worse}};
    if (worst > tol) out.fail(exit_code::check_failure, "abel residual " + io::cell(worst) + " above " + io::cell(tol));
    if (std::abs(point - 1.0) > 1e-8) out.fail(exit_code::check_failure, "local inversion at pi is " + io::cell(point));
    if (worse) out.fail(exit_code::check_failure, std::to_string(worse) + " bumps did not raise the residual");
}

inline void run_convergence(Session& s)
{
    const auto& c = s.cfg();
    const bool odd = c.text("case") == "odd";
    const int levels = static_cast<int>(c.integer("levels"));
    if (levels < 3) throw ConfigError("convergence needs at least 3 levels (e.g. --levels 4)");
    ConvergenceOptions opt;
    opt.which = odd ? ConvergenceCase::odd : ConvergenceCase::general;
    opt.scaling = c.text("scaling") == "linear" ? TimeScaling::linear : TimeScaling::quadratic;
    const auto ic = odd ? initial_condition("odd") : initial_condition(c.text("ic"));
    const FdConfig base = FdConfig::with_step(c.real("L"), c.real("h0"), c.real("tau0"), c.real("T"), ic);
    const auto rows = convergence_study(base, levels, opt);
    io::Table tab{{"level", "h", "tau", "error", "order"}, {}};
    auto& out = s.outcome();
    const double min_order = c.real("min_order");
    double lowest = 1e300;
    for (const auto& r : rows) {
        tab.add(r.level, r.h, r.tau, r.error, r.order ? io::cell(*r.order) : std::string(""));
        if (r.order) lowest = std::min(lowest, *r.order);
        if (odd && r.error > 5.0 * (r.h * r.h + r.tau * r.tau))
            out.fail(exit_code::check_failure, "level " + std::to_string(r.level) + " error above 5(h^2 + tau^2)");
    }
    s.csv("convergence.csv", tab);
    out.results = {{"case", c.text("case")}, {"lowest_order", lowest}};
    // The interface coupling is first order in time, so the general case only needs order 0.9.
    const double floor = odd ? min_order : 0.9;
    if (lowest < floor)
        out.fail(exit_code::check_failure, "observed order " + io::cell(lowest) + " below " + io::cell(floor));
}

struct FigureSpec {
    std::string prefix;
    std::string ic;
    double T;
    std::vector<double> times;
    double xi_lo, xi_hi;
};

inline void run_reproduce_figures(Session& s)
{
    const auto& c = s.cfg();
    const std::vector<FigureSpec> figs{{"fig1", "IC1", 4.0, {0.0, 0.5, 1.0, 2.0, 3.0, 4.0}, -0.13, -0.09},
                                       {"fig2", "IC2", 12.0, {0.0, 1.0, 2.0, 4.0, 8.0, 12.0}, -0.54, -0.44}};
    auto& out = s.outcome();
    for (const auto& f : figs) {
        const FdConfig fc = FdConfig::with_step(c.real("L"), c.real("h"), c.real("tau"), f.T, initial_condition(f.ic));
        const auto tr = simulate(fc, {0, f.times});
        if (!tr.complete) throw SolverFailure(f.prefix + ": " + tr.failure);
        io::Table prof{{"t", "x", "u", "w"}, {}};
        for (const auto& snap : tr.snapshots) profile_rows(prof, snap, fc, c.integer("x_stride"), 10.0);
        s.csv(f.prefix + "_profiles.csv", prof);
        s.csv(f.prefix + "_interface.csv", interface_table(tr));

        const auto prof_back = io::read_csv(c.output_dir / (f.prefix + "_profiles.csv"));
        s.svg(f.prefix + "_profiles.svg", {f.ic + ": u(t,x) versus x", "x", "u", io::series_from(prof_back, "x", "u", "t")});
        const auto intf_back = io::read_csv(c.output_dir / (f.prefix + "_interface.csv"));
        auto lines = io::series_from(intf_back, "t", "xi");
        const auto g = io::series_from(intf_back, "t", "gamma");
        lines.insert(lines.end(), g.begin(), g.end());
        s.svg(f.prefix + "_interface.svg", {f.ic + ": interface position and speed", "t", "xi, gamma", lines});

        const auto fit = fit_xi_infinity(tr);
        out.results[f.prefix] = {{"ic", f.ic}, {"T", f.T}, {"xi_T", fit.xi_at_T}, {"xi_inf", fit.xi_extrapolated}};
        if (fit.xi_extrapolated < f.xi_lo || fit.xi_extrapolated > f.xi_hi)
            out.fail(exit_code::check_failure, f.prefix + ": xi_inf " + io::cell(fit.xi_extrapolated) + " outside [" +
                                                   io::cell(f.xi_lo) + ", " + io::cell(f.xi_hi) + "]");
    }
}

} // namespace app

/// Executes one command, writes its artifacts and a manifest, and returns the exit code.
inline int run(const RunConfig& cfg, std::ostream& log = std::cout)
{
    const auto start = std::chrono::steady_clock::now();
    std::optional<app::Session> session;
    int code = exit_code::ok;
    std::string error;
    try {
        session.emplace(cfg);
        switch (cfg.command) {
        case Command::shock: app::run_shock(*session); break;
        case Command::simulate: app::run_simulate(*session); break;
        case Command::exact_odd: app::run_exact_odd(*session); break;
        case Command::picard: app::run_picard(*session); break;
        case Command::abel_check: app::run_abel_check(*session); break;
        case Command::convergence: app::run_convergence(*session); break;
        case Command::reproduce_figures: app::run_reproduce_figures(*session); break;
        }
        code = session->outcome().code;
    } catch (const ConfigError& e) {
        code = exit_code::config_error;
        error = e.what();
    } catch (const std::domain_error& e) {
        code = exit_code::config_error;
        error = e.what();
    } catch (const std::invalid_argument& e) {
        code = exit_code::config_error;
        error = e.what();
    } catch (const std::exception& e) {
        code = exit_code::solver_failure;
        error = e.what();
    }
    if (!session) {
        log << "error: " << error << '\n';
        return code;
    }

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    auto& out = session->outcome();
    nlohmann::json manifest{{"tool", "mburgers"},
                            {"version", tool_version},
                            {"command", command_name(cfg.command)},
                            {"parameters", cfg.parameters},
                            {"seed", cfg.seed},
                            {"output_dir", cfg.output_dir.string()},
                            {"artifacts", out.artifacts},
                            {"results", out.results},
                            {"failures", out.failures},
                            {"exit_code", code},
                            {"compiler", __VERSION__},
                            {"boost", BOOST_LIB_VERSION},
                            {"wall_time_seconds", wall}};
    if (!error.empty()) manifest["error"] = error;
    io::write_json(cfg.output_dir / "manifest.json", manifest);

    log << command_name(cfg.command) << ": " << out.results.dump() << '\n';
    for (const auto& f : out.failures) log << "check failed: " << f << '\n';
    if (!error.empty()) log << "error: " << error << '\n';
    return code;
}

} // namespace mburgers
