#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

namespace mburgers {

struct QuadratureSpec {
    double y_max = 40.0;
    int n_space = 16;
    int n_time = 16;
    double sing_split = 0.5;

    void validate() const
    {
        if (!(y_max > 0.0) || n_space < 16 || n_time < 16 || !(sing_split > 0.0 && sing_split < 1.0))
            throw std::invalid_argument("QuadratureSpec: need y_max > 0, n_space >= 16, n_time >= 16, 0 < sing_split < 1");
    }
};

namespace quad {

using Rule = boost::math::quadrature::gauss<double, 10>;

// Composite Gauss-Legendre with `panels` equal panels on [a, b].
template <class F>
double panels(F&& f, double a, double b, int n)
{
    if (!(b > a)) return 0.0;
    const double w = (b - a) / n;
    double sum = 0.0;
    for (int p = 0; p < n; ++p) {
        const double lo = a + p * w;
        sum += Rule::integrate(f, lo, lo + w);
    }
    return sum;
}

// Half-width beyond which exp(-z^2/(4s)) < 1e-16.
inline double gaussian_reach(double s)
{
    return 2.0 * std::sqrt(s) * 6.07;
}

// Integral over eta in [0, y_max] of f(eta) exp(-(eta - center)^2 / (4 s)).
// Only the window where the Gaussian is above 1e-16 is integrated.
template <class F>
double gaussian_window(F&& f, double center, double s, double y_max, int n)
{
    const double reach = gaussian_reach(s);
    const double lo = std::max(0.0, center - reach);
    const double hi = std::min(y_max, center + reach);
    if (!(hi > lo)) return 0.0;
    auto g = [&](double eta) {
        const double z = eta - center;
        return f(eta) * std::exp(-z * z / (4.0 * s));
    };
    return panels(g, lo, hi, n);
}

// Integral over s in [0, t] of k(s), where k may carry an s^{-1/2} singularity at s = 0.
// The part s < sing_split*t uses s = r^2 which removes the singularity.
template <class K>
double weakly_singular(K&& k, double t, const QuadratureSpec& q)
{
    if (!(t > 0.0)) return 0.0;
    const double split = q.sing_split * t;
    const int n = std::max(4, q.n_time / 2);
    auto near = [&](double r) { return 2.0 * r * k(r * r); };
    return panels(near, 0.0, std::sqrt(split), n) + panels(k, split, t, n);
}

// exp(x^2) erfc(x), stable for large x.
inline double erfcx(double x)
{
    if (x < 25.0) return std::exp(x * x) * std::erfc(x);
    const double ix2 = 1.0 / (x * x);
    return (1.0 - 0.5 * ix2 + 0.75 * ix2 * ix2 - 1.875 * ix2 * ix2 * ix2) / (x * std::sqrt(std::numbers::pi));
}

} // namespace quad
} // namespace mburgers
