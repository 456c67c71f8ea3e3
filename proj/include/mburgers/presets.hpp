#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fields.hpp"

namespace mburgers {

/// Initial data for the even/odd split variables v+ and v- on y >= 0.
struct InitialCondition {
    std::string name;
    AnalyticField v_plus;
    AnalyticField v_minus;

    InitialCondition scaled(double a) const
    {
        return {name + "*" + std::to_string(a), v_plus.scaled(a), v_minus.scaled(a)};
    }
};

namespace presets {

inline AnalyticField gaussian_plus()
{
    // 0.1 (y - y^2/2) e^{-y^2}
    return {[](double y) { return 0.1 * (y - 0.5 * y * y) * std::exp(-y * y); },
            [](double y) {
                const double p = y - 0.5 * y * y, dp = 1.0 - y;
                return 0.1 * (dp - 2.0 * y * p) * std::exp(-y * y);
            },
            [](double y) {
                const double p = y - 0.5 * y * y, dp = 1.0 - y, ddp = -1.0;
                return 0.1 * (ddp - 4.0 * y * dp + (4.0 * y * y - 2.0) * p) * std::exp(-y * y);
            }};
}

inline AnalyticField gaussian_minus()
{
    // y^2/2 e^{-y^2}
    return {[](double y) { return 0.5 * y * y * std::exp(-y * y); },
            [](double y) { return (y - y * y * y) * std::exp(-y * y); },
            [](double y) { return (1.0 - 5.0 * y * y + 2.0 * std::pow(y, 4)) * std::exp(-y * y); }};
}

inline AnalyticField exponential_plus()
{
    // 0.1 (y + y^2/2) e^{-y}
    return {[](double y) { return 0.1 * (y + 0.5 * y * y) * std::exp(-y); },
            [](double y) { return 0.1 * (1.0 - 0.5 * y * y) * std::exp(-y); },
            [](double y) { return 0.1 * (-1.0 - y + 0.5 * y * y) * std::exp(-y); }};
}

inline AnalyticField exponential_minus()
{
    // y^2/2 e^{-y}
    return {[](double y) { return 0.5 * y * y * std::exp(-y); },
            [](double y) { return (y - 0.5 * y * y) * std::exp(-y); },
            [](double y) { return (1.0 - 2.0 * y + 0.5 * y * y) * std::exp(-y); }};
}

inline AnalyticField y_exp()
{
    // y e^{-y}
    return {[](double y) { return y * std::exp(-y); }, [](double y) { return (1.0 - y) * std::exp(-y); },
            [](double y) { return (y - 2.0) * std::exp(-y); }};
}

inline const std::vector<std::string>& names()
{
    static const std::vector<std::string> n{"IC1", "IC2", "odd"};
    return n;
}

} // namespace presets

inline InitialCondition initial_condition(const std::string& name)
{
    if (name == "IC1") return {name, presets::gaussian_plus(), presets::gaussian_minus()};
    if (name == "IC2") return {name, presets::exponential_plus(), presets::exponential_minus()};
    if (name == "odd") return {name, presets::gaussian_plus(), zero_field()};
    throw std::invalid_argument("unknown preset '" + name + "' (expected IC1, IC2 or odd)");
}

/// Half-line traces u+(y) = u(y), u-(y) = u(-y) of the perturbation, from v+ and v-.
inline AnalyticField trace_from_split(const InitialCondition& ic, int side)
{
    const double s = side > 0 ? 1.0 : -1.0;
    return {[p = ic.v_plus, m = ic.v_minus, s](double y) { return 0.5 * (m.value(y) + s * p.value(y)); },
            [p = ic.v_plus, m = ic.v_minus, s](double y) { return 0.5 * (m.d1(y) + s * p.d1(y)); },
            [p = ic.v_plus, m = ic.v_minus, s](double y) { return 0.5 * (m.d2(y) + s * p.d2(y)); }};
}

} // namespace mburgers
