#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

namespace mburgers {

enum class Side { minus = -1, interface = 0, plus = 1 };

inline double shock_speed(double w_plus, double w_minus)
{
    if (!(w_minus < 0.0 && 0.0 < w_plus))
        throw std::domain_error("shock_speed: need w_minus < 0 < w_plus");
    return (w_plus + w_minus) / (w_minus - w_plus);
}

/// Traveling viscous shock connecting w_minus < 0 to w_plus > 0.
class ShockProfile {
public:
    ShockProfile(double w_plus, double w_minus) : w_plus_(w_plus), w_minus_(w_minus), c_(shock_speed(w_plus, w_minus))
    {
        if (!(std::abs(c_) < 1.0)) throw std::domain_error("ShockProfile: |c| must be below 1");
    }

    double w_plus() const { return w_plus_; }
    double w_minus() const { return w_minus_; }
    double speed() const { return c_; }

    // Evaluate W_c or a derivative. deriv = 2 at x = 0 needs an explicit side.
    double eval(double x, int deriv, std::optional<Side> side = std::nullopt) const
    {
        if (deriv < 0 || deriv > 2) throw std::invalid_argument("ShockProfile::eval: deriv must be 0, 1 or 2");
        bool right = x > 0.0;
        if (x == 0.0) {
            if (deriv == 2) {
                if (!side || *side == Side::interface)
                    throw std::domain_error("ShockProfile::eval: second derivative at the interface needs a side");
                right = *side == Side::plus;
            } else {
                right = !side || *side != Side::minus;
            }
        }
        if (right) {
            const double k = 1.0 + c_;
            const double e = std::exp(-k * x);
            if (deriv == 0) return w_plus_ * (1.0 - e);
            if (deriv == 1) return w_plus_ * k * e;
            return -w_plus_ * k * k * e;
        }
        const double k = 1.0 - c_;
        const double e = std::exp(k * x);
        if (deriv == 0) return w_minus_ * (1.0 - e);
        if (deriv == 1) return -w_minus_ * k * e;
        return -w_minus_ * k * k * e;
    }

    // [W''](x0) + 2 W'(x0). Vanishes for a consistent speed.
    double interface_jump_residual(double x0 = 0.0) const
    {
        const double jump = eval(x0, 2, Side::plus) - eval(x0, 2, Side::minus);
        return jump + 2.0 * eval(x0, 1, Side::plus);
    }

    // Test hook: a profile with an arbitrary speed that bypasses the invariant.
    static ShockProfile with_speed_unchecked(double w_plus, double w_minus, double c)
    {
        ShockProfile p(w_plus, w_minus);
        p.c_ = c;
        return p;
    }

private:
    double w_plus_;
    double w_minus_;
    double c_;
};

/// Standing profile W_0(x) = sign(x)(1 - e^{-|x|}).
inline double standing_shock(double x)
{
    return std::copysign(1.0 - std::exp(-std::abs(x)), x);
}

struct NormalizedPoint {
    double t;
    double y;
    Side branch;
};

inline NormalizedPoint map_to_normalized(double t, double x, const ShockProfile& p)
{
    const double c = p.speed();
    const double z = x - c * t;
    if (z == 0.0) return {t, 0.0, Side::interface};
    const double k = z > 0.0 ? 1.0 + c : 1.0 - c;
    return {k * k * t, k * z, z > 0.0 ? Side::plus : Side::minus};
}

struct PhysicalPoint {
    double t;
    double x;
};

inline PhysicalPoint map_from_normalized(const NormalizedPoint& n, const ShockProfile& p)
{
    const double c = p.speed();
    if (n.branch == Side::interface) {
        // The interface point keeps its time coordinate.
        return {n.t, c * n.t};
    }
    const double k = n.branch == Side::plus ? 1.0 + c : 1.0 - c;
    const double t = n.t / (k * k);
    return {t, n.y / k + c * t};
}

} // namespace mburgers
