#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "fd_solver.hpp"
#include "fields.hpp"
#include "shock.hpp"

namespace mburgers {

struct NormReport {
    double l2 = 0.0;
    double linf = 0.0;
    std::optional<double> h1, h2;
    std::optional<double> w1inf, w2inf;
    std::optional<double> alpha;
    std::optional<double> alpha_weighted_w2inf;

    // ||u'||_2 and ||u''||_2 recovered from the nested norms.
    double d1_l2() const { return h1 ? std::sqrt(std::max(0.0, *h1 * *h1 - l2 * l2)) : 0.0; }
    double d2_l2() const { return h2 && h1 ? std::sqrt(std::max(0.0, *h2 * *h2 - *h1 * *h1)) : 0.0; }
};

namespace detail {

inline double trapezoid_squared(std::span<const double> v, double h)
{
    double s = 0.0;
    for (double x : v) s += x * x;
    s -= 0.5 * (v.front() * v.front() + v.back() * v.back());
    return h * s;
}

inline double max_abs(std::span<const double> v)
{
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace detail

inline NormReport discrete_norms(const PerturbationField& f, std::optional<double> alpha = std::nullopt)
{
    const double h = f.step();
    NormReport r;
    const double mass = detail::trapezoid_squared(f.values(), h);
    r.l2 = std::sqrt(mass);
    r.linf = detail::max_abs(f.values());
    if (f.has_d1()) {
        const double slope = detail::trapezoid_squared(f.d1_values(), h);
        r.h1 = std::sqrt(mass + slope);
        r.w1inf = std::max(r.linf, detail::max_abs(f.d1_values()));
        if (f.has_d2()) {
            r.h2 = std::sqrt(mass + slope + detail::trapezoid_squared(f.d2_values(), h));
            r.w2inf = std::max(*r.w1inf, detail::max_abs(f.d2_values()));
        }
    }
    if (alpha && f.has_d1() && f.has_d2()) {
        const double a = *alpha;
        double m = 0.0;
        for (std::size_t n = 0; n < f.size(); ++n) {
            const double e = std::exp(a * f.node(n));
            const double u = f.values()[n], u1 = f.d1_values()[n], u2 = f.d2_values()[n];
            m = std::max({m, std::abs(e * u), std::abs(e * (u1 + a * u)), std::abs(e * (u2 + 2.0 * a * u1 + a * a * u))});
        }
        r.alpha = a;
        r.alpha_weighted_w2inf = m;
    }
    return r;
}

struct EnergyViolation {
    long step;
    double increase;
};

/// Steps k where E(k) - E(k-1) exceeds tol.
inline std::vector<EnergyViolation> energy_monotonicity_report(std::span<const LevelNorms> series, double tol)
{
    std::vector<EnergyViolation> out;
    for (std::size_t k = 1; k < series.size(); ++k) {
        const double inc = series[k].energy - series[k - 1].energy;
        if (inc > tol) out.push_back({static_cast<long>(k), inc});
    }
    return out;
}

inline std::vector<EnergyViolation> energy_monotonicity_report(const Trajectory& tr, double tol)
{
    return energy_monotonicity_report(tr.norm_series, tol);
}

/// Right-hand sides of the t >= 1 sup-norm decay bounds for u, u_x, u_xx.
inline double decay_bound_rhs(double t, int order, const NormReport& u0)
{
    const double rate = std::pow(8.0 * std::numbers::pi * t, -0.25);
    const double a = u0.l2, b = u0.d1_l2(), c = u0.d2_l2();
    switch (order) {
    case 0: return 2.0 * rate * a;
    case 1: return rate * (2.0 * b + a);
    default: return rate * (2.0 * c + 2.0 * b + a);
    }
}

struct DecayCheck {
    double t;
    int order;
    double lhs;
    double rhs;
    bool pass() const { return lhs <= rhs; }
    double margin() const { return rhs - lhs; }
};

/// sampler(t, x, order) gives u, u_x or u_xx; the sup is taken over the nodes of xs.
template <class Sampler>
std::vector<DecayCheck> decay_bound_check(Sampler&& sampler, const NormReport& u0, std::span<const double> times,
                                          std::span<const double> xs)
{
    std::vector<DecayCheck> out;
    for (double t : times) {
        if (t < 1.0) throw std::domain_error("decay_bound_check: bounds hold for t >= 1");
        for (int order = 0; order < 3; ++order) {
            double sup = 0.0;
            for (double x : xs) sup = std::max(sup, std::abs(sampler(t, x, order)));
            out.push_back({t, order, sup, decay_bound_rhs(t, order, u0)});
        }
    }
    return out;
}

struct InterfaceResidual {
    double t;
    double r1; // difference of the two one-sided expressions for xi'
    double r2; // [u_yy] + 2 u_y at the interface
};

struct OneSided {
    double d1, d2;
};

/// One-sided derivatives at 0 of a function vanishing at 0, from samples at h, 2h, 3h.
inline OneSided one_sided_derivatives(double f1, double f2, double f3, double h)
{
    return {(18.0 * f1 - 9.0 * f2 + 2.0 * f3) / (6.0 * h), (-5.0 * f1 + 4.0 * f2 - f3) / (h * h)};
}

inline InterfaceResidual interface_residual(const SolverState& s, double h, double t)
{
    auto right = [&](int n) { return 0.5 * (s.v_plus[n] + s.v_minus[n]); };
    auto left = [&](int n) { return 0.5 * (s.v_minus[n] - s.v_plus[n]); }; // u(-y_n)
    const auto r = one_sided_derivatives(right(0), right(1), right(2), h);
    const auto l = one_sided_derivatives(left(0), left(1), left(2), h);
    const double uy_p = r.d1, uyy_p = r.d2;
    const double uy_m = -l.d1, uyy_m = l.d2;
    const double from_right = -(uy_p + uyy_p) / (1.0 + uy_p);
    const double from_left = (uy_m - uyy_m) / (1.0 + uy_m);
    return {t, from_right - from_left, uyy_p - uyy_m + 2.0 * uy_p};
}

inline std::vector<InterfaceResidual> interface_residuals(const Trajectory& tr)
{
    std::vector<InterfaceResidual> out;
    for (const auto& s : tr.snapshots) out.push_back(interface_residual(s, tr.config.h(), tr.time_of(s.k)));
    return out;
}

struct XiFit {
    double xi_at_T;
    double xi_extrapolated;
    std::optional<double> rate;
};

/// xi(T) + gamma(T)/lambda with lambda from a least-squares fit of log|gamma| over the last third.
inline XiFit fit_xi_infinity(std::span<const double> xi, std::span<const double> gamma, double dt)
{
    const double xi_T = xi.back();
    XiFit fallback{xi_T, xi_T, std::nullopt};
    const std::size_t K = gamma.size() - 1;
    if (K < 6) return fallback;
    const std::size_t first = 2 * K / 3;
    const double sign = std::copysign(1.0, gamma[K]);
    double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
    std::size_t n = 0;
    for (std::size_t k = first; k <= K; ++k) {
        if (!(gamma[k] * sign > 1e-300)) return fallback;
        const double t = k * dt, l = std::log(std::abs(gamma[k]));
        st += t;
        sl += l;
        stt += t * t;
        stl += t * l;
        ++n;
    }
    const double den = n * stt - st * st;
    if (!(den > 0.0)) return fallback;
    const double slope = (n * stl - st * sl) / den;
    const double lambda = -slope;
    if (!(lambda > 1e-8) || !std::isfinite(lambda)) return fallback;
    return {xi_T, xi_T + gamma[K] / lambda, lambda};
}

inline XiFit fit_xi_infinity(const Trajectory& tr)
{
    return fit_xi_infinity(tr.xi_series, tr.gamma_series, tr.config.tau);
}

struct PositivityViolation {
    double t;
    double x;
    double w;
};

/// Nodes with |x - xi| > h where sign(w) differs from sign(x - xi).
inline std::vector<PositivityViolation> positivity_check(const Trajectory& tr)
{
    std::vector<PositivityViolation> out;
    const double h = tr.config.h();
    for (const auto& s : tr.snapshots) {
        const double t = tr.time_of(s.k);
        for (std::size_t n = 1; n < s.v_plus.size(); ++n) {
            const double y = (n + 1) * h;
            const double w_right = standing_shock(y) + 0.5 * (s.v_plus[n] + s.v_minus[n]);
            const double w_left = -standing_shock(y) + 0.5 * (s.v_minus[n] - s.v_plus[n]);
            if (!(w_right > 0.0)) out.push_back({t, s.xi + y, w_right});
            if (!(w_left < 0.0)) out.push_back({t, s.xi - y, w_left});
        }
    }
    return out;
}

namespace young {

inline double l1(std::span<const double> f, double h)
{
    double s = 0.0;
    for (double x : f) s += std::abs(x);
    return h * s;
}

inline double l2(std::span<const double> f, double h)
{
    double s = 0.0;
    for (double x : f) s += x * x;
    return std::sqrt(h * s);
}

// (f * g)_i = h sum_j f_j g_{i-j} on the full line.
inline std::vector<double> convolve(std::span<const double> f, std::span<const double> g, double h)
{
    std::vector<double> out(f.size() + g.size() - 1, 0.0);
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) out[i + j] += h * f[i] * g[j];
    return out;
}

// (beta * gamma)_k = dt sum_{j <= k} beta_{k-j} gamma_j on [0, T].
inline std::vector<double> causal_convolve(std::span<const double> beta, std::span<const double> gamma, double dt)
{
    std::vector<double> out(gamma.size(), 0.0);
    for (std::size_t k = 0; k < gamma.size(); ++k)
        for (std::size_t j = 0; j <= k && k - j < beta.size(); ++j) out[k] += dt * beta[k - j] * gamma[j];
    return out;
}

} // namespace young

} // namespace mburgers
