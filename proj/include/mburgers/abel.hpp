#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "fields.hpp"
#include "quadrature.hpp"

namespace mburgers {

enum class InnerIntegral { closed_form, quadrature };

// (4 pi s)^{-1/2} int_0^inf exp(-eta/2 - eta^2/(4s)) d eta
inline double m_inner(double s, InnerIntegral mode, const QuadratureSpec& q)
{
    if (mode == InnerIntegral::closed_form) return 0.5 * quad::erfcx(0.5 * std::sqrt(s));
    auto f = [](double eta) { return std::exp(-0.5 * eta); };
    return quad::gaussian_window(f, 0.0, s, q.y_max, q.n_space) / std::sqrt(4.0 * std::numbers::pi * s);
}

template <class Gamma>
double m_operator(const Gamma& gamma, double t, const QuadratureSpec& q,
                  InnerIntegral mode = InnerIntegral::closed_form)
{
    if (!(t > 0.0)) throw std::domain_error("m_operator: time must be positive");
    auto kernel = [&](double s) {
        return gamma(t - s) * (1.0 / std::sqrt(std::numbers::pi * s) - m_inner(s, mode, q));
    };
    return quad::weakly_singular(kernel, t, q);
}

enum class AbelKind { from_f, from_g, local };

struct AbelProblem {
    AbelKind kind;
    std::optional<AnalyticField> f;
    std::function<double(double, double)> g;
    std::function<double(double)> h;
    QuadratureSpec quad;

    static AbelProblem with_f(AnalyticField f, QuadratureSpec q = {})
    {
        return {AbelKind::from_f, std::move(f), {}, {}, q};
    }
    static AbelProblem with_g(std::function<double(double, double)> g, QuadratureSpec q = {})
    {
        return {AbelKind::from_g, std::nullopt, std::move(g), {}, q};
    }
    static AbelProblem with_h(std::function<double(double)> h, QuadratureSpec q = {})
    {
        return {AbelKind::local, std::nullopt, {}, std::move(h), q};
    }

    void validate() const
    {
        const int present = int(f.has_value()) + int(bool(g)) + int(bool(h));
        const bool match = (kind == AbelKind::from_f && f) || (kind == AbelKind::from_g && g) ||
                           (kind == AbelKind::local && h);
        if (present != 1 || !match) throw std::invalid_argument("AbelProblem: exactly one datum matching the kind");
        if (kind == AbelKind::from_f && std::abs(f->value(0.0)) > 1e-10)
            throw std::domain_error("AbelProblem: f(0) must vanish");
        quad.validate();
    }
};

enum class FromFForm { derivative, weighted };

inline double solve_abel_from_f(const AbelProblem& p, double t, FromFForm form = FromFForm::derivative)
{
    p.validate();
    if (p.kind != AbelKind::from_f) throw std::invalid_argument("solve_abel_from_f: wrong problem kind");
    if (!(t > 0.0)) throw std::domain_error("solve_abel_from_f: time must be positive");
    const auto& f = *p.f;
    const double pref = 1.0 / std::sqrt(4.0 * std::numbers::pi * t);
    if (form == FromFForm::derivative) {
        auto integrand = [&](double eta) { return f.d1(eta) + 0.5 * f.value(eta); };
        return pref * quad::gaussian_window(integrand, 0.0, t, p.quad.y_max, p.quad.n_space);
    }
    auto integrand = [&](double eta) { return f.value(eta) * (eta + t) / (2.0 * t); };
    return pref * quad::gaussian_window(integrand, 0.0, t, p.quad.y_max, p.quad.n_space);
}

inline double solve_abel_from_g(const AbelProblem& p, double t)
{
    p.validate();
    if (p.kind != AbelKind::from_g) throw std::invalid_argument("solve_abel_from_g: wrong problem kind");
    if (!(t > 0.0)) throw std::domain_error("solve_abel_from_g: time must be positive");
    const auto& q = p.quad;
    auto slice = [&](double s) {
        const double tau = t - s;
        auto integrand = [&](double eta) { return p.g(tau, eta) * (eta + s) / (2.0 * s); };
        return quad::gaussian_window(integrand, 0.0, s, q.y_max, q.n_space) / std::sqrt(4.0 * std::numbers::pi * s);
    };
    return quad::weakly_singular(slice, t, q);
}

inline double solve_abel_local(const AbelProblem& p, double t)
{
    p.validate();
    if (p.kind != AbelKind::local) throw std::invalid_argument("solve_abel_local: wrong problem kind");
    if (t < 0.0) throw std::domain_error("solve_abel_local: time must be nonnegative");
    auto kernel = [&](double s) { return p.h(t - s) / std::sqrt(4.0 * std::numbers::pi * s); };
    return 0.5 * p.h(t) + 0.5 * quad::weakly_singular(kernel, t, p.quad);
}

inline double solve_abel(const AbelProblem& p, double t)
{
    switch (p.kind) {
    case AbelKind::from_f: return solve_abel_from_f(p, t);
    case AbelKind::from_g: return solve_abel_from_g(p, t);
    case AbelKind::local: return solve_abel_local(p, t);
    }
    throw std::logic_error("solve_abel: bad kind");
}

/// Right-hand side of the Abel equation M(gamma) = rhs for each kind of datum.
inline double abel_rhs(const AbelProblem& p, double t)
{
    const auto& q = p.quad;
    const double pi = std::numbers::pi;
    switch (p.kind) {
    case AbelKind::from_f: {
        auto f = [&](double eta) { return p.f->value(eta); };
        return quad::gaussian_window(f, 0.0, t, q.y_max, q.n_space) / std::sqrt(4.0 * pi * t);
    }
    case AbelKind::from_g: {
        auto slice = [&](double s) {
            auto g = [&](double eta) { return p.g(t - s, eta); };
            return quad::gaussian_window(g, 0.0, s, q.y_max, q.n_space) / std::sqrt(4.0 * pi * s);
        };
        return quad::weakly_singular(slice, t, q);
    }
    case AbelKind::local: {
        auto kernel = [&](double s) { return p.h(t - s) / std::sqrt(4.0 * pi * s); };
        return quad::weakly_singular(kernel, t, q);
    }
    }
    throw std::logic_error("abel_rhs: bad kind");
}

/// M(candidate)(t) - rhs(t) for an arbitrary candidate gamma.
template <class Gamma>
double abel_residual_of(const AbelProblem& p, const Gamma& candidate, double t)
{
    return m_operator(candidate, t, p.quad) - abel_rhs(p, t);
}

inline double abel_residual(const AbelProblem& p, double t)
{
    p.validate();
    auto gamma = [&](double tau) { return solve_abel(p, tau); };
    return abel_residual_of(p, gamma, t);
}

/// int_0^t |gamma(tau)| (t - tau)^{-s} dtau, via r = (t - tau)^{1-s} / (1 - s).
template <class Gamma>
double singular_convolution(const Gamma& gamma, double s, double t, int panels = 200)
{
    if (!(s >= 0.0 && s < 1.0)) throw std::domain_error("singular_convolution: exponent must lie in [0, 1)");
    const double a = 1.0 - s;
    auto f = [&](double r) { return std::abs(gamma(t - std::pow(a * r, 1.0 / a))); };
    return quad::panels(f, 0.0, std::pow(t, a) / a, panels);
}

inline double convolution_bound_constant(double s, double horizon = 1.0)
{
    const double a = 1.0 - s;
    return std::max(std::pow(horizon, a) / a, 1.0 + 1.0 / a);
}

} // namespace mburgers
