#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "diagnostics.hpp"
#include "fields.hpp"
#include "heat_kernel.hpp"
#include "quadrature.hpp"

namespace mburgers {

struct PicardConfig {
    double T = 0.5;
    int levels = 64;
    double tol = 2e-4;
    int max_iter = 60;
    double y_step = 0.05;
    double y_extent = 16.0;
    int sigma_panels = 4; // panels in sqrt(t - tau) for the double integrals
    int z_panels = 8;     // panels in the scaled space variable
    bool nested = false;  // gamma outer, u inner
    bool require_small_data = false;
    bool root_start = true; // interpolate in sqrt(t) on [0, dt]
    QuadratureSpec quad;

    double dt() const { return T / levels; }
    std::size_t y_count() const { return static_cast<std::size_t>(std::lround(y_extent / y_step)) + 1; }

    void validate() const
    {
        quad.validate();
        if (!(T > 0.0)) throw std::invalid_argument("PicardConfig: T must be positive");
        if (!(tol > 0.0)) throw std::invalid_argument("PicardConfig: tol must be positive");
        if (max_iter < 1) throw std::invalid_argument("PicardConfig: max_iter must be at least 1");
        if (levels < 2) throw std::invalid_argument("PicardConfig: need at least two time levels");
        if (!(y_step > 0.0) || !(y_extent > 4.0 * y_step))
            throw std::invalid_argument("PicardConfig: need y_step > 0 and y_extent > 4 y_step");
        if (sigma_panels < 1 || z_panels < 1) throw std::invalid_argument("PicardConfig: panel counts must be positive");
    }
};

/// u+ and u- on every time level plus gamma on the same time grid.
struct PicardState {
    std::vector<PerturbationField> u_plus;
    std::vector<PerturbationField> u_minus;
    GammaSignal gamma;

    double time_of(std::size_t k) const { return gamma.step() * static_cast<double>(k); }

    void validate() const
    {
        if (u_plus.size() != gamma.size() || u_minus.size() != gamma.size())
            throw std::invalid_argument("PicardState: field and gamma time grids differ");
        for (std::size_t k = 0; k < u_plus.size(); ++k) {
            const auto& p = u_plus[k];
            const auto& m = u_minus[k];
            if (p.size() != m.size() || p.step() != m.step() || p.size() != u_plus.front().size())
                throw std::invalid_argument("PicardState: inconsistent space grids");
            if (!p.has_d1() || !p.has_d2() || !m.has_d1() || !m.has_d2())
                throw std::invalid_argument("PicardState: iterates need d1 and d2 samples");
            if (p.values()[0] != 0.0 || m.values()[0] != 0.0)
                throw std::invalid_argument("PicardState: iterates must vanish at y = 0");
        }
    }
};

struct FieldLevels {
    std::vector<PerturbationField> plus;
    std::vector<PerturbationField> minus;
};

struct PicardResidualRow {
    double t;
    double gamma;
    double continuity;   // u+_y + u-_y at 0+
    double interface;    // u+_yy - u-_yy + 2 u+_y at 0+
    double dynamical_plus;
    double dynamical_minus;
    double gamma_equation; // unreduced form of the gamma equation
};

struct PicardReport {
    int iterations = 0;
    bool converged = false;
    std::vector<double> changes;
    double continuity_residual = 0.0;
    double interface_residual = 0.0;
    double dynamical_residual = 0.0;
    double gamma_equation_residual = 0.0;
    double data_norm = 0.0;
    bool data_small = true;
    std::string message;
};

struct PicardResult {
    PicardState state;
    PicardReport report;
    std::vector<PicardResidualRow> residuals;
};

namespace detail {

struct Jet {
    double v = 0.0, d1 = 0.0, d2 = 0.0;
};

inline Jet operator+(Jet a, Jet b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
inline Jet operator-(Jet a, Jet b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }

// Calls fn(x, w) for every node of composite 10-point Gauss-Legendre on [a, b].
template <class Fn>
void for_each_gauss_node(double a, double b, int panels, Fn&& fn)
{
    if (!(b > a)) return;
    const auto& x = quad::Rule::abscissa();
    const auto& w = quad::Rule::weights();
    const double width = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * width, half = 0.5 * width;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] == 0.0) {
                fn(mid, half * w[i]);
            } else {
                fn(mid - half * x[i], half * w[i]);
                fn(mid + half * x[i], half * w[i]);
            }
        }
    }
}

// Weight of level k+1 at fractional level pos; on the first interval it is linear in sqrt(t).
inline double level_weight(double pos, std::size_t k, bool root_start)
{
    const double w = pos - static_cast<double>(k);
    return k == 0 && root_start ? std::sqrt(w) : w;
}

// Piecewise linear between stored levels (in t or in sqrt(t)) and in y between nodes.
class History {
public:
    History(const std::vector<PerturbationField>& levels, double dt, bool root_start)
        : levels_(levels), dt_(dt), root_start_(root_start)
    {
    }

    struct Slice {
        std::span<const double> va, d1a, d2a, vb, d1b, d2b;
        double h, w;

        Jet at(double eta) const
        {
            if (eta < 0.0) return {};
            const double pos = eta / h;
            const auto n = static_cast<std::size_t>(pos);
            if (n + 1 >= va.size()) return {};
            const double r = pos - static_cast<double>(n);
            auto mix = [&](std::span<const double> a, std::span<const double> b) {
                const double fa = a[n] + r * (a[n + 1] - a[n]);
                const double fb = b[n] + r * (b[n + 1] - b[n]);
                return fa + w * (fb - fa);
            };
            return {mix(va, vb), mix(d1a, d1b), mix(d2a, d2b)};
        }
    };

    Slice at_time(double tau) const
    {
        const double last = static_cast<double>(levels_.size() - 1);
        const double pos = std::clamp(tau / dt_, 0.0, last);
        auto k = static_cast<std::size_t>(pos);
        if (k + 1 >= levels_.size()) k = levels_.size() - 2;
        const auto& a = levels_[k];
        const auto& b = levels_[k + 1];
        const double w = level_weight(pos, k, root_start_);
        return {a.values(), a.d1_values(), a.d2_values(), b.values(), b.d1_values(), b.d2_values(), a.step(), w};
    }

    double slope_at_origin(double tau) const { return at_time(tau).at(0.0).d1; }

private:
    const std::vector<PerturbationField>& levels_;
    double dt_;
    bool root_start_;
};

// gamma as a function of time; optionally linear in sqrt(t) on the first interval.
class GammaView {
public:
    GammaView(const GammaSignal& g, bool root_start) : g_(g), root_start_(root_start) {}

    double operator()(double t) const
    {
        if (!root_start_ || g_.size() < 2 || !(t < g_.step())) return g_(t);
        const auto v = g_.values();
        return v[0] + (v[1] - v[0]) * level_weight(std::max(0.0, t / g_.step()), 0, true);
    }

private:
    const GammaSignal& g_;
    bool root_start_;
};

template <class Fn>
void parallel_for(std::size_t count, Fn&& fn)
{
    const std::size_t workers = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) fn(i);
        });
}

inline void require_finite(Jet j, double t, double y, const char* who)
{
    if (std::isfinite(j.v) && std::isfinite(j.d1) && std::isfinite(j.d2)) return;
    std::ostringstream os;
    os << who << ": non-finite quadrature result at t=" << t << ", y=" << y;
    throw std::runtime_error(os.str());
}

inline double sup_change(const std::vector<PerturbationField>& a, const std::vector<PerturbationField>& b)
{
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        for (auto part : {0, 1, 2}) {
            const auto x = part == 0 ? a[k].values() : part == 1 ? a[k].d1_values() : a[k].d2_values();
            const auto y = part == 0 ? b[k].values() : part == 1 ? b[k].d1_values() : b[k].d2_values();
            for (std::size_t n = 0; n < x.size(); ++n) m = std::max(m, std::abs(x[n] - y[n]));
        }
    return m;
}

inline double sup_change(std::span<const double> a, std::span<const double> b)
{
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

} // namespace detail

/// Evaluates the two fixed-point maps on the (t_k, y_j) grid.
/// Everything that depends only on the data is computed once here.
class PicardWorkspace {
public:
    template <HalfLineData U0>
    PicardWorkspace(const U0& u0_plus, const U0& u0_minus, const PicardConfig& cfg)
        : cfg_(cfg), ny_(cfg.y_count()), nt_(static_cast<std::size_t>(cfg.levels) + 1)
    {
        cfg_.validate();
        const double gap = u0_plus.d1(0.0) + u0_minus.d1(0.0);
        if (std::abs(gap) > 1e-10) {
            std::ostringstream os;
            os << "picard: initial data violate u0+'(0) + u0-'(0) = 0 (got " << gap << ")";
            throw std::invalid_argument(os.str());
        }
        const double h = cfg_.y_step, dt = cfg_.dt();
        const auto& q = cfg_.quad;
        base_plus_.resize(nt_ * ny_);
        base_minus_.resize(nt_ * ny_);
        for (std::size_t j = 0; j < ny_; ++j) {
            const double y = j * h;
            base_plus_[j] = {j == 0 ? 0.0 : u0_plus.value(y), u0_plus.d1(y), u0_plus.d2(y)};
            base_minus_[j] = {j == 0 ? 0.0 : u0_minus.value(y), u0_minus.d1(y), u0_minus.d2(y)};
        }
        detail::parallel_for((nt_ - 1) * ny_, [&](std::size_t idx) {
            const std::size_t k = 1 + idx / ny_, j = idx % ny_;
            const double t = k * dt, y = j * h;
            for (int d = 0; d < 3; ++d) {
                const double p = odd_exact_solution(u0_plus, t, y, d, q);
                const double m = odd_exact_solution(u0_minus, t, y, d, q);
                (d == 0 ? base_plus_[k * ny_ + j].v : d == 1 ? base_plus_[k * ny_ + j].d1 : base_plus_[k * ny_ + j].d2) = p;
                (d == 0 ? base_minus_[k * ny_ + j].v : d == 1 ? base_minus_[k * ny_ + j].d1 : base_minus_[k * ny_ + j].d2) = m;
            }
        });

        // F = u0+' + u0-' + (u0+ + u0-)/2 enters the data part of the gamma map.
        auto F = [&](double eta) {
            return u0_plus.d1(eta) + u0_minus.d1(eta) + 0.5 * (u0_plus.value(eta) + u0_minus.value(eta));
        };
        gamma_data_.assign(nt_, 0.0);
        data_term_.assign(nt_, 0.0);
        gamma_data_[0] = -0.5 * (u0_plus.d2(0.0) + u0_minus.d2(0.0));
        data_term_[0] = 0.0;
        for (std::size_t k = 1; k < nt_; ++k) {
            const double t = k * dt;
            const double pref = 1.0 / std::sqrt(4.0 * std::numbers::pi * t);
            auto weighted = [&](double eta) { return F(eta) * (eta + t) / (2.0 * t); };
            gamma_data_[k] = -pref * quad::gaussian_window(weighted, t, t, q.y_max, q.n_space);
            data_term_[k] = pref * quad::gaussian_window(F, t, t, q.y_max, q.n_space);
        }
    }

    const PicardConfig& config() const { return cfg_; }
    std::size_t time_levels() const { return nt_; }
    std::size_t space_nodes() const { return ny_; }

    /// (u+, u-) = (data part, data part), gamma = 0.
    PicardState initial_state() const
    {
        return {levels_from(base_plus_), levels_from(base_minus_),
                GammaSignal(cfg_.dt(), std::vector<double>(nt_, 0.0))};
    }

    FieldLevels field_map(const PicardState& s) const
    {
        check_grid(s);
        const double h = cfg_.y_step, dt = cfg_.dt();
        const auto& q = cfg_.quad;
        const detail::GammaView gamma(s.gamma, cfg_.root_start);
        const detail::History hp(s.u_plus, dt, cfg_.root_start), hm(s.u_minus, dt, cfg_.root_start);
        std::vector<detail::Jet> out_p(nt_ * ny_), out_m(nt_ * ny_);
        for (std::size_t j = 0; j < ny_; ++j) {
            out_p[j] = base_plus_[j];
            out_m[j] = base_minus_[j];
        }
        const double two_over_rootpi = 2.0 / std::sqrt(std::numbers::pi);

        detail::parallel_for((nt_ - 1) * ny_, [&](std::size_t idx) {
            const std::size_t k = 1 + idx / ny_, j = idx % ny_;
            const double t = k * dt, y = j * h;
            const double ey = std::exp(-y);

            // source driven by gamma e^{-y}
            auto e_part = [&](double s) {
                return gamma(t - s) * 0.5 * ey * std::erfc((s - y) / (2.0 * std::sqrt(s)));
            };
            auto b_part = [&](double s) { return gamma(t - s) * 0.5 * std::erfc((s + y) / (2.0 * std::sqrt(s))); };
            const double E = quad::weakly_singular(e_part, t, q);
            const double B = quad::weakly_singular(b_part, t, q);
            const double nu = nu_solution(gamma, t, y, 0, q);
            const double J = j == 0 ? gamma(t) : boundary_layer_term(gamma, t, y, q);
            const detail::Jet source{E - B, -E + nu, E - nu - J};

            // gamma u_y coupling, as P and Q windows in sigma = sqrt(t - tau)
            detail::Jet Pp, Pm, Qp, Qm;
            detail::for_each_gauss_node(0.0, std::sqrt(t), cfg_.sigma_panels, [&](double sigma, double ws) {
                const double tau = t - sigma * sigma;
                const double g = gamma(tau);
                if (g == 0.0) return;
                const auto sp = hp.at_time(tau), sm = hm.at_time(tau);
                detail::Jet ip, im;
                const double p_lo = std::max(-6.0, -(y + sigma * sigma) / (2.0 * sigma));
                detail::for_each_gauss_node(p_lo, 6.0, cfg_.z_panels, [&](double z, double wz) {
                    const double eta = y + sigma * sigma + 2.0 * sigma * z;
                    const double c = wz * z * std::exp(-z * z);
                    const auto a = sp.at(eta), b = sm.at(eta);
                    ip = ip + detail::Jet{c * a.v, c * a.d1, c * a.d2};
                    im = im + detail::Jet{c * b.v, c * b.d1, c * b.d2};
                });
                const double ps = -ws * g * two_over_rootpi;
                Pp = Pp + detail::Jet{ps * ip.v, ps * ip.d1, ps * ip.d2};
                Pm = Pm + detail::Jet{ps * im.v, ps * im.d1, ps * im.d2};

                const double q_lo = (y - sigma * sigma) / (2.0 * sigma);
                if (q_lo >= 6.0) return;
                detail::Jet jp, jm;
                detail::for_each_gauss_node(q_lo, 6.0, cfg_.z_panels, [&](double z, double wz) {
                    const double eta = sigma * sigma - y + 2.0 * sigma * z;
                    const double c = wz * z * std::exp(-z * z);
                    const auto a = sp.at(eta), b = sm.at(eta);
                    jp = jp + detail::Jet{c * a.v, c * a.d1, c * a.d2};
                    jm = jm + detail::Jet{c * b.v, c * b.d1, c * b.d2};
                });
                const double qs = ws * g * two_over_rootpi * ey;
                Qp = Qp + detail::Jet{qs * jp.v, qs * jp.d1, qs * jp.d2};
                Qm = Qm + detail::Jet{qs * jm.v, qs * jm.d1, qs * jm.d2};
            });

            auto coupling = [&](const detail::Jet& P, const detail::Jet& Q, const detail::History& hist) {
                auto beta = [&](double tau) { return gamma(tau) * hist.slope_at_origin(tau); };
                const double Jb = j == 0 ? beta(t) : boundary_layer_term(beta, t, y, q);
                return detail::Jet{-P.v - Q.v, -P.d1 + Q.d1 + Q.v, -P.d2 - Q.d2 - 2.0 * Q.d1 - Q.v - Jb};
            };
            const auto cp = coupling(Pp, Qp, hp), cm = coupling(Pm, Qm, hm);
            const std::size_t at = k * ny_ + j;
            out_p[at] = base_plus_[at] + source + cp;
            out_m[at] = base_minus_[at] + source - cm;
            if (j == 0) out_p[at].v = out_m[at].v = 0.0;
            detail::require_finite(out_p[at], t, y, "picard field map");
            detail::require_finite(out_m[at], t, y, "picard field map");
        });
        return {levels_from(out_p), levels_from(out_m)};
    }

    GammaSignal gamma_map(const PicardState& s) const
    {
        check_grid(s);
        const double dt = cfg_.dt();
        const auto& q = cfg_.quad;
        const detail::GammaView gamma(s.gamma, cfg_.root_start);
        const detail::History hp(s.u_plus, dt, cfg_.root_start), hm(s.u_minus, dt, cfg_.root_start);
        auto gap = [&](double tau) { return hp.slope_at_origin(tau) - hm.slope_at_origin(tau); };
        std::vector<double> out(nt_);
        out[0] = gamma_data_[0] - 0.5 * s.gamma.values()[0] * gap(0.0);
        detail::parallel_for(nt_ - 1, [&](std::size_t i) {
            const std::size_t k = i + 1;
            const double t = k * dt;
            auto trace_kernel = [&](double s) {
                return gamma(t - s) * std::exp(-0.25 * s) / std::sqrt(4.0 * std::numbers::pi * s) * gap(t - s);
            };
            const double g2 = -0.5 * gamma(t) * gap(t) - 0.5 * quad::weakly_singular(trace_kernel, t, q);
            const double g3 = -2.0 / std::sqrt(std::numbers::pi) * interior(s, t, [](double sigma, double z) {
                                  return sigma + z;
                              }, [](const detail::Jet& p, const detail::Jet& m) {
                                  return p.d2 - m.d2 + 0.5 * (p.d1 - m.d1);
                              });
            out[k] = gamma_data_[k] + g2 + g3;
            if (!std::isfinite(out[k])) {
                std::ostringstream os;
                os << "picard gamma map: non-finite value at t=" << t;
                throw std::runtime_error(os.str());
            }
        });
        return GammaSignal(dt, std::move(out));
    }

    std::vector<PicardResidualRow> residual_series(const PicardState& s) const
    {
        check_grid(s);
        const double dt = cfg_.dt();
        const auto& q = cfg_.quad;
        const detail::GammaView gamma(s.gamma, cfg_.root_start);
        std::vector<PicardResidualRow> rows(nt_);
        detail::parallel_for(nt_, [&](std::size_t k) {
            const double t = k * dt, g = s.gamma.values()[k];
            const double p1 = s.u_plus[k].d1_values()[0], p2 = s.u_plus[k].d2_values()[0];
            const double m1 = s.u_minus[k].d1_values()[0], m2 = s.u_minus[k].d2_values()[0];
            double eq = 0.0;
            if (k > 0) {
                auto m_kernel = [&](double u) {
                    return gamma(t - u) * (std::exp(-0.25 * u) / std::sqrt(std::numbers::pi * u) -
                                           0.5 * std::erfc(0.5 * std::sqrt(u)));
                };
                eq = data_term_[k] + quad::weakly_singular(m_kernel, t, q) +
                     2.0 / std::sqrt(std::numbers::pi) *
                         interior(s, t, [](double, double z) { return z; },
                                  [](const detail::Jet& p, const detail::Jet& m) {
                                      return p.d1 - m.d1 + 0.5 * (p.v - m.v);
                                  });
            }
            rows[k] = {t,
                       g,
                       p1 + m1,
                       p2 - m2 + 2.0 * p1,
                       p1 + p2 + g * (1.0 + p1),
                       m1 + m2 + g * (1.0 - m1),
                       eq};
        });
        return rows;
    }

private:
    // int_0^sqrt(t) gamma(t - sigma^2) int_{-sigma/2}^6 G(u+,u-)(t - sigma^2, sigma^2 + 2 sigma z) w(sigma, z) e^{-z^2} dz dsigma
    template <class Weight, class Combine>
    double interior(const PicardState& s, double t, Weight&& weight, Combine&& combine) const
    {
        const detail::History hp(s.u_plus, cfg_.dt(), cfg_.root_start), hm(s.u_minus, cfg_.dt(), cfg_.root_start);
        double total = 0.0;
        detail::for_each_gauss_node(0.0, std::sqrt(t), cfg_.sigma_panels, [&](double sigma, double ws) {
            const double tau = t - sigma * sigma;
            const double g = detail::GammaView(s.gamma, cfg_.root_start)(tau);
            if (g == 0.0) return;
            const auto sp = hp.at_time(tau), sm = hm.at_time(tau);
            double inner = 0.0;
            detail::for_each_gauss_node(-0.5 * sigma, 6.0, cfg_.z_panels, [&](double z, double wz) {
                const double eta = sigma * sigma + 2.0 * sigma * z;
                inner += wz * combine(sp.at(eta), sm.at(eta)) * weight(sigma, z) * std::exp(-z * z);
            });
            total += ws * g * inner;
        });
        return total;
    }

    void check_grid(const PicardState& s) const
    {
        if (s.gamma.size() != nt_ || s.u_plus.size() != nt_ || s.u_minus.size() != nt_ ||
            s.u_plus.front().size() != ny_ || std::abs(s.gamma.step() - cfg_.dt()) > 1e-15 * cfg_.T)
            throw std::invalid_argument("picard: state grid does not match the configuration");
    }

    std::vector<PerturbationField> levels_from(const std::vector<detail::Jet>& jets) const
    {
        std::vector<PerturbationField> out;
        out.reserve(nt_);
        for (std::size_t k = 0; k < nt_; ++k) {
            std::vector<double> v(ny_), d1(ny_), d2(ny_);
            for (std::size_t j = 0; j < ny_; ++j) {
                const auto& x = jets[k * ny_ + j];
                v[j] = x.v;
                d1[j] = x.d1;
                d2[j] = x.d2;
            }
            out.emplace_back(cfg_.y_step, std::move(v), std::move(d1), std::move(d2));
        }
        return out;
    }

    PicardConfig cfg_;
    std::size_t ny_, nt_;
    std::vector<detail::Jet> base_plus_, base_minus_; // data part of u+- at [k * ny + j]
    std::vector<double> gamma_data_;                  // data part of the gamma map
    std::vector<double> data_term_;                   // data part of the unreduced gamma equation
};

template <HalfLineData U0>
FieldLevels apply_field_map(const PicardState& state, const U0& u0_plus, const U0& u0_minus, const PicardConfig& cfg)
{
    return PicardWorkspace(u0_plus, u0_minus, cfg).field_map(state);
}

template <HalfLineData U0>
GammaSignal apply_gamma_map(const PicardState& state, const U0& u0_plus, const U0& u0_minus, const PicardConfig& cfg)
{
    return PicardWorkspace(u0_plus, u0_minus, cfg).gamma_map(state);
}

/// Sum of the H2 and W2,inf norms of both data halves, sampled on the Picard grid.
template <HalfLineData U0>
double picard_data_norm(const U0& u0_plus, const U0& u0_minus, const PicardConfig& cfg)
{
    double total = 0.0;
    for (const U0* u : {&u0_plus, &u0_minus}) {
        const auto r = discrete_norms(PerturbationField::sample(cfg.y_step, cfg.y_count(), *u));
        total += *r.h2 + *r.w2inf;
    }
    return total;
}

/// Largest e^{alpha y}|u(t,y)| over the grid divided by its value at t = 0.
inline double weighted_sup_ratio(const PicardState& s, double alpha)
{
    auto sup_at = [&](std::size_t k) {
        double m = 0.0;
        for (const auto* f : {&s.u_plus[k], &s.u_minus[k]})
            for (std::size_t n = 0; n < f->size(); ++n)
                m = std::max(m, std::exp(alpha * f->node(n)) * std::abs(f->values()[n]));
        return m;
    };
    const double initial = sup_at(0);
    if (!(initial > 0.0)) return 0.0;
    double m = 0.0;
    for (std::size_t k = 0; k < s.u_plus.size(); ++k) m = std::max(m, sup_at(k));
    return m / initial;
}

template <HalfLineData U0>
PicardResult picard_solve(const U0& u0_plus, const U0& u0_minus, const PicardConfig& cfg)
{
    const PicardWorkspace ws(u0_plus, u0_minus, cfg);
    PicardReport report;
    report.data_norm = picard_data_norm(u0_plus, u0_minus, cfg);
    report.data_small = report.data_norm < 0.5;
    if (cfg.require_small_data && !report.data_small) {
        std::ostringstream os;
        os << "picard: data norm " << report.data_norm << " is not below 0.5";
        throw std::invalid_argument(os.str());
    }

    PicardState state = ws.initial_state();
    auto field_sweep = [&] {
        auto next = ws.field_map(state);
        const double du = std::max(detail::sup_change(next.plus, state.u_plus), detail::sup_change(next.minus, state.u_minus));
        state.u_plus = std::move(next.plus);
        state.u_minus = std::move(next.minus);
        return du;
    };
    auto gamma_sweep = [&] {
        auto next = ws.gamma_map(state);
        const double dg = detail::sup_change(next.values(), state.gamma.values());
        state.gamma = std::move(next);
        return dg;
    };

    for (int it = 1; it <= cfg.max_iter; ++it) {
        double change;
        if (cfg.nested) {
            const double dg = gamma_sweep();
            double du = field_sweep();
            const double first = du;
            for (int inner = 1; inner < cfg.max_iter && du >= cfg.tol; ++inner) du = field_sweep();
            change = std::max({dg, first, du});
        } else {
            const double dg = gamma_sweep();
            change = std::max(dg, field_sweep());
        }
        report.changes.push_back(change);
        report.iterations = it;
        if (change < cfg.tol) {
            report.converged = true;
            break;
        }
    }
    if (!report.converged) {
        std::ostringstream os;
        os << "picard: no convergence in " << cfg.max_iter << " iterations (last change " << report.changes.back() << ")";
        report.message = os.str();
    }

    auto rows = ws.residual_series(state);
    for (const auto& r : rows) {
        report.continuity_residual = std::max(report.continuity_residual, std::abs(r.continuity));
        report.interface_residual = std::max(report.interface_residual, std::abs(r.interface));
        report.dynamical_residual =
            std::max({report.dynamical_residual, std::abs(r.dynamical_plus), std::abs(r.dynamical_minus)});
        report.gamma_equation_residual = std::max(report.gamma_equation_residual, std::abs(r.gamma_equation));
    }
    return {std::move(state), std::move(report), std::move(rows)};
}

} // namespace mburgers
