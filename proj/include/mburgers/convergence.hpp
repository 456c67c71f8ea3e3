#pragma once

#include <algorithm>
#include <cmath>
#include <future>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "fd_solver.hpp"
#include "heat_kernel.hpp"

namespace mburgers {

enum class ConvergenceCase { odd, general };
enum class TimeScaling { linear, quadratic }; // tau ~ h or tau ~ h^2

struct ConvergenceRow {
    int level;
    double h;
    double tau;
    double error;
    std::optional<double> order;
};

struct ConvergenceOptions {
    ConvergenceCase which = ConvergenceCase::odd;
    TimeScaling scaling = TimeScaling::linear;
    std::vector<double> check_times{0.5, 1.0, 2.0};
    double compare_up_to = 12.0; // odd case: nodes with y beyond this are skipped
};

namespace detail {

inline FdConfig refined(const FdConfig& base, int level, TimeScaling scaling)
{
    FdConfig c = base;
    const double f = std::ldexp(1.0, level);
    c.N = static_cast<int>(std::lround((base.N + 1) * f)) - 1;
    c.tau = scaling == TimeScaling::linear ? base.tau / f : base.tau / (f * f);
    return c;
}

inline double odd_sector_error(const FdConfig& cfg, std::span<const double> times, double up_to)
{
    SimulateOptions opt;
    opt.stride = 0;
    opt.record_times.assign(times.begin(), times.end());
    const auto tr = simulate(cfg, opt);
    if (!tr.complete) throw SolverFailure("convergence run failed: " + tr.failure);
    QuadratureSpec q;
    const double h = cfg.h();
    double err = 0.0;
    for (double t : times) {
        const long k = std::lround(t / cfg.tau);
        const auto it = std::find_if(tr.snapshots.begin(), tr.snapshots.end(), [k](const auto& s) { return s.k == k; });
        if (it == tr.snapshots.end()) throw std::logic_error("convergence: missing snapshot");
        for (std::size_t n = 0; n < it->v_plus.size(); ++n) {
            const double y = (n + 1) * h;
            if (y > up_to) break;
            err = std::max(err, std::abs(it->v_plus[n] - odd_exact_solution(cfg.ic.v_plus, t, y, 0, q)));
        }
    }
    return err;
}

} // namespace detail

/// Odd case: sup error of v+ against the exact half-line solution at the check times.
/// General case: |xi_l(T) - xi_{l+1}(T)| between successive levels.
inline std::vector<ConvergenceRow> convergence_study(const FdConfig& base, int levels, const ConvergenceOptions& opt = {})
{
    if (levels < 3) throw std::invalid_argument("convergence_study: need at least 3 levels");
    std::vector<ConvergenceRow> rows;
    std::vector<double> errors(levels);

    if (opt.which == ConvergenceCase::odd) {
        for (double y : {0.5, 1.0, 3.0})
            if (base.ic.v_minus.value(y) != 0.0) throw std::invalid_argument("convergence_study: odd case needs v- = 0");
        FdConfig b = base;
        b.T = *std::max_element(opt.check_times.begin(), opt.check_times.end());
        std::vector<std::future<double>> jobs;
        for (int l = 0; l < levels; ++l)
            jobs.push_back(std::async(std::launch::async, [&, l] {
                return detail::odd_sector_error(detail::refined(b, l, opt.scaling), opt.check_times, opt.compare_up_to);
            }));
        for (int l = 0; l < levels; ++l) errors[l] = jobs[l].get();
    } else {
        std::vector<std::future<double>> jobs;
        for (int l = 0; l <= levels; ++l)
            jobs.push_back(std::async(std::launch::async, [&, l] {
                const auto tr = simulate(detail::refined(base, l, opt.scaling), {0, {}});
                if (!tr.complete) throw SolverFailure("convergence run failed: " + tr.failure);
                return tr.xi_series.back();
            }));
        std::vector<double> xi(levels + 1);
        for (int l = 0; l <= levels; ++l) xi[l] = jobs[l].get();
        for (int l = 0; l < levels; ++l) errors[l] = std::abs(xi[l] - xi[l + 1]);
    }

    for (int l = 0; l < levels; ++l) {
        const auto c = detail::refined(base, l, opt.scaling);
        std::optional<double> order;
        if (l > 0 && errors[l] > 0.0 && errors[l - 1] > 0.0) order = std::log2(errors[l - 1] / errors[l]);
        rows.push_back({l, c.h(), c.tau, errors[l], order});
    }
    return rows;
}

} // namespace mburgers
