#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "presets.hpp"
#include "shock.hpp"

namespace mburgers {

class SolverFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// How gamma couples the two half-steps of Crank-Nicolson.
//   lagged: gamma_k on both sides
//   predictor_corrector: lagged predictor, then one re-solve with the averaged gamma
//   implicit: gamma_{k+1} consistent with the new level, found by a scalar secant iteration
enum class Coupling { lagged, predictor_corrector, implicit };

struct FdConfig {
    double L = 30.0;
    int N = 2999;
    double tau = 0.002;
    double T = 4.0;
    InitialCondition ic = initial_condition("IC1");
    Coupling coupling = Coupling::implicit;

    double h() const { return L / (N + 1); }

    static FdConfig with_step(double L, double h, double tau, double T, InitialCondition ic)
    {
        FdConfig c;
        c.L = L;
        c.N = static_cast<int>(std::lround(L / h)) - 1;
        c.tau = tau;
        c.T = T;
        c.ic = std::move(ic);
        return c;
    }

    long steps() const { return std::lround(T / tau); }

    void validate() const
    {
        if (!(L > 0.0)) throw std::invalid_argument("FdConfig: L must be positive");
        if (N < 8) throw std::invalid_argument("FdConfig: need at least 8 interior nodes");
        if (!(tau > 0.0)) throw std::invalid_argument("FdConfig: tau must be positive");
        if (!(T >= tau)) throw std::invalid_argument("FdConfig: T must be at least tau");
        if (!(h() < 2.0)) throw std::invalid_argument("FdConfig: grid step must be below 2");
    }
};

struct SolverState {
    std::vector<double> v_plus;
    std::vector<double> v_minus;
    double gamma_k = 0.0;
    double xi = 0.0;
    long k = 0;
};

inline double gamma_discrete(double v_plus_1, double v_minus_1, double h)
{
    const double den = h * v_plus_1 + h * h * (2.0 - h);
    if (!(std::abs(den) > 1e-14))
        throw SolverFailure("interface speed undefined: 1 + u_y(t,0) has collapsed (denominator " +
                            std::to_string(den) + ")");
    return -(2.0 - h) * v_minus_1 / den;
}

inline double gamma_of(const SolverState& s, double h)
{
    return gamma_discrete(s.v_plus.front(), s.v_minus.front(), h);
}

/// v+(y) = u(y) - u(-y), v-(y) = u(y) + u(-y) at y_n = n h, n = 1..N.
inline std::pair<std::vector<double>, std::vector<double>> split_initial(const std::function<double(double)>& u0,
                                                                         double h, int N)
{
    if (std::abs(u0(0.0)) > 1e-10) throw std::domain_error("split_initial: u0(0) must vanish");
    std::vector<double> vp(N), vm(N);
    for (int n = 0; n < N; ++n) {
        const double y = (n + 1) * h;
        vp[n] = u0(y) - u0(-y);
        vm[n] = u0(y) + u0(-y);
    }
    return {std::move(vp), std::move(vm)};
}

/// Boundary and interface compatibility of initial data at y = 0.
inline void check_initial_compat(const InitialCondition& ic, double tol = 1e-8)
{
    const auto& p = ic.v_plus;
    const auto& m = ic.v_minus;
    auto fail = [&](const std::string& what) {
        throw std::domain_error("initial data '" + ic.name + "' violates " + what + " at y = 0");
    };
    if (std::abs(p.value(0.0)) > tol || std::abs(m.value(0.0)) > tol) fail("v(0) = 0");
    if (std::abs(m.d1(0.0)) > tol) fail("v-_y(0) = 0");
    if (std::abs(p.d1(0.0) + p.d2(0.0)) > tol) fail("v+_y(0) + v+_yy(0) = 0");
}

/// L(tau) = [[A, B], [B, A]] with Toeplitz tridiagonal A, B; L(-tau) is obtained with -tau.
/// Rows use the Dirichlet nodes v(y_0) = v(y_{N+1}) = 0; the virtual nodes at y_{-1} enter
/// only through gamma_discrete.
struct CnOperator {
    int N;
    double a_lo, a_d, a_up;
    double b_lo, b_up;

    std::vector<double> apply(const std::vector<double>& vp, const std::vector<double>& vm, bool minus_block) const
    {
        const auto& self = minus_block ? vm : vp;
        const auto& other = minus_block ? vp : vm;
        std::vector<double> out(N);
        for (int j = 0; j < N; ++j) {
            double r = a_d * self[j];
            if (j > 0) r += a_lo * self[j - 1] + b_lo * other[j - 1];
            if (j + 1 < N) r += a_up * self[j + 1] + b_up * other[j + 1];
            out[j] = r;
        }
        return out;
    }

    std::vector<std::vector<double>> to_dense() const
    {
        std::vector<std::vector<double>> m(2 * N, std::vector<double>(2 * N, 0.0));
        for (int blk_r = 0; blk_r < 2; ++blk_r)
            for (int blk_c = 0; blk_c < 2; ++blk_c) {
                const bool diag = blk_r == blk_c;
                for (int j = 0; j < N; ++j) {
                    const int r = blk_r * N + j, c = blk_c * N + j;
                    if (diag) m[r][c] = a_d;
                    if (j > 0) m[r][c - 1] = diag ? a_lo : b_lo;
                    if (j + 1 < N) m[r][c + 1] = diag ? a_up : b_up;
                }
            }
        return m;
    }
};

inline CnOperator cn_operator(double gamma_k, double h, double tau, int N)
{
    const double h2 = h * h;
    return {N,
            0.5 * tau * (-0.5 / h + 1.0 / h2),
            1.0 - tau / h2,
            0.5 * tau * (0.5 / h + 1.0 / h2),
            -tau / (4.0 * h) * gamma_k,
            tau / (4.0 * h) * gamma_k};
}

struct CnSystem {
    CnOperator left;  // L(-tau)
    CnOperator right; // L(tau)
};

inline CnSystem assemble_system(double gamma_k, double h, double tau, int N)
{
    return {cn_operator(gamma_k, h, -tau, N), cn_operator(gamma_k, h, tau, N)};
}

namespace detail {

// Thomas algorithm for a constant-coefficient tridiagonal system; rhs is overwritten.
inline void solve_toeplitz_tridiagonal(double lo, double d, double up, std::vector<double>& rhs)
{
    const std::size_t n = rhs.size();
    std::vector<double> c(n);
    double denom = d;
    if (denom == 0.0) throw SolverFailure("singular Crank-Nicolson matrix");
    c[0] = up / denom;
    rhs[0] /= denom;
    for (std::size_t i = 1; i < n; ++i) {
        denom = d - lo * c[i - 1];
        if (denom == 0.0) throw SolverFailure("singular Crank-Nicolson matrix");
        c[i] = up / denom;
        rhs[i] = (rhs[i] - lo * rhs[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
}

} // namespace detail

/// Solves op * [vp; vm] = [rp; rm]. The blocks [[a, b], [b, a]] diagonalize on v+ + v- and v+ - v-.
inline void solve_block(const CnOperator& op, std::vector<double>& rp, std::vector<double>& rm)
{
    const std::size_t n = rp.size();
    std::vector<double> sum(n), diff(n);
    for (std::size_t j = 0; j < n; ++j) {
        sum[j] = rp[j] + rm[j];
        diff[j] = rp[j] - rm[j];
    }
    detail::solve_toeplitz_tridiagonal(op.a_lo + op.b_lo, op.a_d, op.a_up + op.b_up, sum);
    detail::solve_toeplitz_tridiagonal(op.a_lo - op.b_lo, op.a_d, op.a_up - op.b_up, diff);
    for (std::size_t j = 0; j < n; ++j) {
        rp[j] = 0.5 * (sum[j] + diff[j]);
        rm[j] = 0.5 * (sum[j] - diff[j]);
    }
}

inline SolverState initial_state(const FdConfig& cfg)
{
    cfg.validate();
    check_initial_compat(cfg.ic);
    const double h = cfg.h();
    SolverState s;
    s.v_plus.resize(cfg.N);
    s.v_minus.resize(cfg.N);
    for (int n = 0; n < cfg.N; ++n) {
        const double y = (n + 1) * h;
        s.v_plus[n] = cfg.ic.v_plus.value(y);
        s.v_minus[n] = cfg.ic.v_minus.value(y);
    }
    s.gamma_k = gamma_of(s, h);
    return s;
}

namespace detail {

inline SolverState advance(const SolverState& s, double gamma, double h, double tau)
{
    const int N = static_cast<int>(s.v_plus.size());
    const auto sys = assemble_system(gamma, h, tau, N);
    auto rp = sys.right.apply(s.v_plus, s.v_minus, false);
    auto rm = sys.right.apply(s.v_plus, s.v_minus, true);
    for (int n = 0; n < N; ++n) rm[n] += 2.0 * tau * gamma * std::exp(-(n + 1) * h);
    solve_block(sys.left, rp, rm);
    SolverState next;
    next.v_plus = std::move(rp);
    next.v_minus = std::move(rm);
    return next;
}

// Finds g with g = gamma_discrete(advance(s, g)).
inline SolverState advance_implicit(const SolverState& s, double guess, double h, double tau)
{
    auto defect = [&](double g, SolverState& out) {
        out = advance(s, g, h, tau);
        return g - gamma_of(out, h);
    };
    auto converged = [](double f, double g) { return std::abs(f) <= 1e-14 * (1.0 + std::abs(g)); };
    SolverState a, b;
    double g0 = guess;
    double f0 = defect(g0, a);
    if (converged(f0, g0)) return a;
    double g1 = guess + 1e-6 + 1e-3 * std::abs(guess);
    double f1 = defect(g1, b);
    for (int it = 0; it < 30; ++it) {
        if (converged(f1, g1)) return b;
        if (f1 == f0) break;
        const double g2 = g1 - f1 * (g1 - g0) / (f1 - f0);
        g0 = g1;
        f0 = f1;
        std::swap(a, b);
        g1 = g2;
        f1 = defect(g1, b);
    }
    if (std::abs(f1) <= 1e-10 * (1.0 + std::abs(g1))) return b;
    throw SolverFailure("implicit interface coupling did not converge at step " + std::to_string(s.k + 1));
}

} // namespace detail

inline SolverState cn_step(const SolverState& s, const FdConfig& cfg)
{
    const double h = cfg.h(), tau = cfg.tau;
    const double gamma_k = gamma_of(s, h);
    SolverState next;
    switch (cfg.coupling) {
    case Coupling::lagged:
        next = detail::advance(s, gamma_k, h, tau);
        break;
    case Coupling::predictor_corrector:
        next = detail::advance(s, gamma_k, h, tau);
        next = detail::advance(s, 0.5 * (gamma_k + gamma_of(next, h)), h, tau);
        break;
    case Coupling::implicit:
        next = detail::advance_implicit(s, gamma_k, h, tau);
        break;
    }
    next.gamma_k = gamma_of(next, h);
    next.xi = s.xi + 0.5 * tau * (gamma_k + next.gamma_k);
    next.k = s.k + 1;
    return next;
}

struct LevelNorms {
    double energy;   // ||u+||_{H1}^2 + ||u-||_{H1}^2
    double sup_norm; // max |u| over both half-lines
};

/// Discrete energy: trapezoid for values, cell differences for the slope, Dirichlet ends included.
inline LevelNorms level_norms(const SolverState& s, double h)
{
    auto squared_h1 = [h](const std::vector<double>& v) {
        double mass = 0.0, slope = 0.0, prev = 0.0;
        for (double x : v) {
            mass += x * x;
            slope += (x - prev) * (x - prev);
            prev = x;
        }
        slope += prev * prev;
        return h * mass + slope / h;
    };
    double sup = 0.0;
    for (std::size_t n = 0; n < s.v_plus.size(); ++n) {
        sup = std::max(sup, std::abs(s.v_minus[n] + s.v_plus[n]));
        sup = std::max(sup, std::abs(s.v_minus[n] - s.v_plus[n]));
    }
    return {0.5 * (squared_h1(s.v_plus) + squared_h1(s.v_minus)), 0.5 * sup};
}

struct Trajectory {
    FdConfig config;
    std::vector<SolverState> snapshots;
    std::vector<double> gamma_series; // gamma_k, k = 0..K
    std::vector<double> xi_series;
    std::vector<LevelNorms> norm_series;
    bool complete = true;
    std::string failure;

    double time_of(long k) const { return k * config.tau; }
    double final_time() const { return time_of(static_cast<long>(gamma_series.size()) - 1); }
};

struct SimulateOptions {
    long stride = 50;
    std::vector<double> record_times;
};

inline Trajectory simulate(const FdConfig& cfg, const SimulateOptions& opt = {})
{
    Trajectory tr;
    tr.config = cfg;
    const double h = cfg.h();
    SolverState s = initial_state(cfg);
    const long K = cfg.steps();

    std::vector<long> marks;
    for (double t : opt.record_times) marks.push_back(std::lround(t / cfg.tau));
    auto wanted = [&](long k) {
        return k == 0 || k == K || (opt.stride > 0 && k % opt.stride == 0) ||
               std::find(marks.begin(), marks.end(), k) != marks.end();
    };
    auto record = [&] {
        tr.gamma_series.push_back(s.gamma_k);
        tr.xi_series.push_back(s.xi);
        tr.norm_series.push_back(level_norms(s, h));
        if (wanted(s.k)) tr.snapshots.push_back(s);
    };

    record();
    try {
        for (long k = 0; k < K; ++k) {
            s = cn_step(s, cfg);
            for (double v : s.v_plus)
                if (!std::isfinite(v)) throw SolverFailure("non-finite solution at step " + std::to_string(s.k));
            record();
        }
    } catch (const SolverFailure& e) {
        tr.complete = false;
        tr.failure = e.what();
        if (tr.snapshots.empty() || tr.snapshots.back().k != s.k) tr.snapshots.push_back(s);
    }
    return tr;
}

struct PhysicalProfile {
    double t;
    double xi;
    std::vector<double> y; // frame coordinate x - xi, on [-L, L]
    std::vector<double> x;
    std::vector<double> u;
    std::vector<double> w;
};

/// u on [-L, L] from u(y) = (v+ + v-)/2, u(-y) = (v- - v+)/2, and w = W_0(y) + u.
inline PhysicalProfile reconstruct(const SolverState& s, const FdConfig& cfg)
{
    const double h = cfg.h();
    const int N = cfg.N;
    PhysicalProfile p;
    p.t = s.k * cfg.tau;
    p.xi = s.xi;
    auto push = [&](double y, double u) {
        p.y.push_back(y);
        p.x.push_back(y + s.xi);
        p.u.push_back(u);
        p.w.push_back(standing_shock(y) + u);
    };
    push(-cfg.L, 0.0);
    for (int n = N - 1; n >= 0; --n) push(-(n + 1) * h, 0.5 * (s.v_minus[n] - s.v_plus[n]));
    push(0.0, 0.0);
    for (int n = 0; n < N; ++n) push((n + 1) * h, 0.5 * (s.v_minus[n] + s.v_plus[n]));
    push(cfg.L, 0.0);
    return p;
}

} // namespace mburgers
