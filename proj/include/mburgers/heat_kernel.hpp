#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fields.hpp"
#include "quadrature.hpp"
#include "shock.hpp"

namespace mburgers {

namespace detail {

template <class D>
double value_of(const D& d, double y)
{
    if constexpr (requires { d.value(y); })
        return d.value(y);
    else
        return d(y);
}

inline void require_positive_time(double t, const char* who)
{
    if (!(t > 0.0)) throw std::domain_error(std::string(who) + ": time must be positive");
}

} // namespace detail

inline double gauss_kernel(double t, double x, int deriv = 0)
{
    detail::require_positive_time(t, "gauss_kernel");
    const double g = std::exp(-x * x / (4.0 * t)) / std::sqrt(4.0 * std::numbers::pi * t);
    if (deriv == 0) return g;
    if (deriv == 1) return -x / (2.0 * t) * g;
    throw std::invalid_argument("gauss_kernel: deriv must be 0 or 1");
}

struct KernelNorms {
    double g_l1, g_l2, g_linf;
    double dg_l1, dg_l2, dg_linf;
};

inline KernelNorms kernel_norm_table(double t)
{
    detail::require_positive_time(t, "kernel_norm_table");
    using std::numbers::pi, std::numbers::e;
    return {1.0,
            std::pow(8.0 * pi * t, -0.25),
            1.0 / std::sqrt(4.0 * pi * t),
            1.0 / std::sqrt(pi * t),
            0.5 * std::pow(8.0 * pi, -0.25) * std::pow(t, -0.75),
            0.5 / (std::sqrt(2.0 * pi * e) * t)};
}

/// Half-line heat flow with zero Dirichlet data, by odd reflection.
template <class V0>
double dirichlet_halfline(const V0& v0, double t, double x, const QuadratureSpec& q)
{
    detail::require_positive_time(t, "dirichlet_halfline");
    if (x < 0.0) throw std::domain_error("dirichlet_halfline: x must be nonnegative");
    auto f = [&](double y) { return detail::value_of(v0, y); };
    const double direct = quad::gaussian_window(f, x, t, q.y_max, q.n_space);
    const double image = quad::gaussian_window(f, -x, t, q.y_max, q.n_space);
    return (direct - image) / std::sqrt(4.0 * std::numbers::pi * t);
}

/// Adds the Duhamel term for the source f(tau, y).
template <class V0, class F>
double dirichlet_halfline_inhomog(const V0& v0, F&& f, double t, double x, const QuadratureSpec& q)
{
    const double homog = dirichlet_halfline(v0, t, x, q);
    auto slice = [&](double s) {
        const double tau = t - s;
        auto fy = [&](double y) { return f(tau, y); };
        const double direct = quad::gaussian_window(fy, x, s, q.y_max, q.n_space);
        const double image = quad::gaussian_window(fy, -x, s, q.y_max, q.n_space);
        return (direct - image) / std::sqrt(4.0 * std::numbers::pi * s);
    };
    return homog + quad::weakly_singular(slice, t, q);
}

/// Solution of u_t = u_x + u_xx on the half-line with u(t,0) = 0, and its x-derivatives.
template <HalfLineData U0>
double odd_exact_solution(const U0& u0, double t, double x, int deriv, const QuadratureSpec& q)
{
    detail::require_positive_time(t, "odd_exact_solution");
    if (x < 0.0) throw std::domain_error("odd_exact_solution: x must be nonnegative");
    const double pref = 1.0 / std::sqrt(4.0 * std::numbers::pi * t);
    const double decay = std::exp(-x);
    const int n = q.n_space;
    // direct kernel centred at y = x + t, reflected one at y = t - x (times e^{-x})
    auto direct = [&](auto&& f) { return quad::gaussian_window(f, x + t, t, q.y_max, n); };
    auto reflected = [&](auto&& f) { return decay * quad::gaussian_window(f, t - x, t, q.y_max, n); };
    auto v = [&](double y) { return u0.value(y); };
    auto v1 = [&](double y) { return u0.d1(y); };
    auto v2 = [&](double y) { return u0.d2(y); };

    switch (deriv) {
    case 0:
        return pref * (direct(v) - reflected(v));
    case 1:
        return pref * (direct(v1) + reflected(v1) + reflected(v));
    case 2:
        return pref * (direct(v2) - reflected(v2) - 2.0 * reflected(v1) - reflected(v));
    default:
        throw std::invalid_argument("odd_exact_solution: deriv must be 0, 1 or 2");
    }
}

/// J(t,y) = int_0^t beta(tau) y (4 pi)^{-1/2} (t-tau)^{-3/2} exp(-(y+t-tau)^2 / 4(t-tau)) dtau.
/// Tends to sign(y) beta(t) as y -> 0; evaluated with s = y^2 / 4u^2.
template <class B>
double boundary_layer_term(const B& beta, double t, double y, const QuadratureSpec& q)
{
    if (y == 0.0 || !(t > 0.0)) return 0.0;
    const double ay = std::abs(y);
    const double u_lo = ay / (2.0 * std::sqrt(t));
    constexpr double u_hi = 7.0;
    if (u_lo >= u_hi) return 0.0;
    auto f = [&](double u) {
        const double s = y * y / (4.0 * u * u);
        return beta(t - s) * std::exp(-u * u - 0.5 * y - s / 4.0);
    };
    const double val = 2.0 / std::sqrt(std::numbers::pi) * quad::panels(f, u_lo, u_hi, q.n_time);
    return y > 0.0 ? val : -val;
}

/// nu(t,y) = 2 int_0^t gamma(tau) G(t-tau, y+t-tau) dtau, or its y-derivative.
template <class Gamma>
double nu_solution(const Gamma& gamma, double t, double y, int deriv, const QuadratureSpec& q)
{
    detail::require_positive_time(t, "nu_solution");
    auto kernel = [&](double s) {
        const double z = y + s;
        return 2.0 * gamma(t - s) * std::exp(-z * z / (4.0 * s)) / std::sqrt(4.0 * std::numbers::pi * s);
    };
    const double nu = quad::weakly_singular(kernel, t, q);
    if (deriv == 0) return nu;
    if (deriv == 1) return -0.5 * nu - boundary_layer_term(gamma, t, y, q);
    throw std::invalid_argument("nu_solution: deriv must be 0 or 1");
}

/// nu_y(t,0^side) + nu(t,0)/2 + side*gamma(t), with the one-sided trace taken at |y| = 1e-6.
template <class Gamma>
double nu_boundary_residual(const Gamma& gamma, double t, Side side, const QuadratureSpec& q)
{
    if (side == Side::interface) throw std::invalid_argument("nu_boundary_residual: choose a side");
    constexpr double eps = 1e-6;
    const double sgn = side == Side::plus ? 1.0 : -1.0;
    const double trace = nu_solution(gamma, t, sgn * eps, 1, q);
    return trace + 0.5 * nu_solution(gamma, t, 0.0, 0, q) + sgn * gamma(t);
}

} // namespace mburgers
