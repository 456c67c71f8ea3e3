#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <Eigen/Dense>

#include <mburgers/diagnostics.hpp>
#include <mburgers/fd_solver.hpp>

using namespace mburgers;
using Catch::Matchers::WithinAbs;

namespace {

// [[A, B], [B, A]] for the scheme v_t = v_yy + v_y + (gamma / 2) w_y, built entry by entry.
Eigen::MatrixXd dense_operator(double gamma, double h, double tau, int N)
{
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * N, 2 * N);
    const double diff = tau / (h * h), adv = tau / (2.0 * h), cpl = gamma * tau / (4.0 * h);
    for (int blk = 0; blk < 2; ++blk)
        for (int j = 0; j < N; ++j) {
            const int r = blk * N + j, o = (1 - blk) * N + j;
            m(r, r) = 1.0 - diff;
            if (j > 0) {
                m(r, r - 1) = 0.5 * (diff - adv);
                m(r, o - 1) = -cpl;
            }
            if (j + 1 < N) {
                m(r, r + 1) = 0.5 * (diff + adv);
                m(r, o + 1) = cpl;
            }
        }
    return m;
}

// One step with the coupling gamma held fixed, by a dense LU solve.
Eigen::VectorXd dense_step(const SolverState& s, double gamma, double h, double tau)
{
    const int N = static_cast<int>(s.v_plus.size());
    Eigen::VectorXd v(2 * N);
    for (int n = 0; n < N; ++n) {
        v(n) = s.v_plus[n];
        v(N + n) = s.v_minus[n];
    }
    Eigen::VectorXd rhs = dense_operator(gamma, h, tau, N) * v;
    for (int n = 0; n < N; ++n) rhs(N + n) += 2.0 * tau * gamma * std::exp(-(n + 1) * h);
    return dense_operator(gamma, h, -tau, N).partialPivLu().solve(rhs);
}

double max_diff(const SolverState& s, const Eigen::VectorXd& ref)
{
    const auto N = s.v_plus.size();
    double m = 0.0;
    for (std::size_t n = 0; n < N; ++n)
        m = std::max({m, std::abs(s.v_plus[n] - ref(n)), std::abs(s.v_minus[n] - ref(N + n))});
    return m;
}

} // namespace

TEST_CASE("initial data presets", "[fd]")
{
    const auto ic1 = initial_condition("IC1");
    for (double y : {0.0, 0.3, 1.0, 2.5}) {
        CHECK_THAT(ic1.v_plus.value(y), WithinAbs(0.1 * (y - 0.5 * y * y) * std::exp(-y * y), 1e-15));
        CHECK_THAT(ic1.v_minus.value(y), WithinAbs(0.5 * y * y * std::exp(-y * y), 1e-15));
    }
    CHECK_NOTHROW(check_initial_compat(ic1));
    CHECK_NOTHROW(check_initial_compat(initial_condition("IC2")));
    CHECK_NOTHROW(check_initial_compat(initial_condition("odd")));
    CHECK_THROWS_WITH(initial_condition("IC3"), Catch::Matchers::ContainsSubstring("unknown preset"));

    auto bad = ic1;
    bad.v_minus = presets::y_exp();
    CHECK_THROWS_AS(check_initial_compat(bad), std::domain_error);
}

TEST_CASE("even/odd split", "[fd]")
{
    auto odd = [](double y) { return y * std::exp(-y * y); };
    const auto [vp, vm] = split_initial(odd, 0.1, 50);
    for (double v : vm) CHECK(v == 0.0);

    auto u0 = [](double y) { return y * std::exp(-(y - 0.3) * (y - 0.3)); };
    const auto [p, m] = split_initial(u0, 0.1, 50);
    for (int n = 0; n < 50; ++n) {
        const double y = (n + 1) * 0.1;
        CHECK_THAT(0.5 * (p[n] + m[n]), WithinAbs(u0(y), 1e-15));
        CHECK_THAT(0.5 * (m[n] - p[n]), WithinAbs(u0(-y), 1e-15));
    }
    CHECK_THROWS_AS(split_initial([](double y) { return 1.0 + y; }, 0.1, 5), std::domain_error);
}

TEST_CASE("discrete interface speed", "[fd]")
{
    CHECK(gamma_discrete(0.3, 0.0, 0.1) == 0.0);
    CHECK_THAT(gamma_discrete(0.0, 0.01, 0.1), WithinAbs(-1.0, 1e-14));
    CHECK_THAT(gamma_discrete(0.019, 0.01, 0.1), WithinAbs(-0.019 / (0.0019 + 0.019), 1e-14));
    CHECK_THROWS_AS(gamma_discrete(-0.19, 0.01, 0.1), SolverFailure);
}

TEST_CASE("Crank-Nicolson blocks", "[fd]")
{
    const auto op = cn_operator(0.0, 0.1, 0.01, 5);
    CHECK(op.b_lo == 0.0);
    CHECK(op.b_up == 0.0);
    CHECK_THAT(op.a_lo + op.a_d + op.a_up, WithinAbs(1.0, 1e-15));

    const auto sys = assemble_system(0.2, 0.5, 0.1, 3);
    for (const auto& [op_, tau] : {std::pair{sys.right, 0.1}, std::pair{sys.left, -0.1}}) {
        const auto dense = op_.to_dense();
        const auto ref = dense_operator(0.2, 0.5, tau, 3);
        for (int r = 0; r < 6; ++r)
            for (int c = 0; c < 6; ++c) CHECK_THAT(dense[r][c], WithinAbs(ref(r, c), 1e-15));
    }

    SECTION("block solve inverts the operator")
    {
        const auto left = cn_operator(0.37, 0.05, -0.01, 40);
        std::vector<double> xp(40), xm(40);
        for (int j = 0; j < 40; ++j) {
            xp[j] = std::sin(0.3 * j);
            xm[j] = std::cos(0.2 * j);
        }
        auto rp = left.apply(xp, xm, false), rm = left.apply(xp, xm, true);
        solve_block(left, rp, rm);
        for (int j = 0; j < 40; ++j) {
            CHECK_THAT(rp[j], WithinAbs(xp[j], 1e-13));
            CHECK_THAT(rm[j], WithinAbs(xm[j], 1e-13));
        }
    }
}

TEST_CASE("single steps", "[fd]")
{
    SECTION("zero state stays zero")
    {
        auto cfg = FdConfig::with_step(5.0, 0.05, 0.01, 1.0, initial_condition("IC1"));
        SolverState s{std::vector<double>(cfg.N, 0.0), std::vector<double>(cfg.N, 0.0), 0.0, 0.25, 0};
        const auto next = cn_step(s, cfg);
        for (int n = 0; n < cfg.N; ++n) CHECK((next.v_plus[n] == 0.0 && next.v_minus[n] == 0.0));
        CHECK(next.gamma_k == 0.0);
        CHECK(next.xi == 0.25);
    }

    SECTION("IC1 step against a dense solve")
    {
        for (auto coupling : {Coupling::lagged, Coupling::predictor_corrector, Coupling::implicit}) {
            auto cfg = FdConfig::with_step(3.0, 0.01, 0.001, 0.001, initial_condition("IC1"));
            cfg.coupling = coupling;
            const auto s = initial_state(cfg);
            const auto next = cn_step(s, cfg);
            double used = s.gamma_k;
            if (coupling == Coupling::implicit) used = next.gamma_k;
            if (coupling == Coupling::predictor_corrector) {
                auto lag = cfg;
                lag.coupling = Coupling::lagged;
                used = 0.5 * (s.gamma_k + cn_step(s, lag).gamma_k);
            }
            CHECK(max_diff(next, dense_step(s, used, cfg.h(), cfg.tau)) <= 1e-12);
            CHECK_THAT(next.xi, WithinAbs(0.5 * cfg.tau * (s.gamma_k + next.gamma_k), 1e-16));
        }
    }
}

TEST_CASE("odd data keep the interface fixed", "[fd]")
{
    const auto cfg = FdConfig::with_step(30.0, 0.02, 0.005, 3.0, initial_condition("odd"));
    const auto tr = simulate(cfg, {0, {}});
    REQUIRE(tr.complete);
    for (double g : tr.gamma_series) CHECK(std::abs(g) <= 1e-13);
    for (double x : tr.xi_series) CHECK(std::abs(x) <= 1e-13);
    const auto K = static_cast<std::size_t>(std::lround(1.0 / cfg.tau));
    for (std::size_t k = K + 1; k < tr.norm_series.size(); ++k)
        CHECK(tr.norm_series[k].sup_norm <= tr.norm_series[k - 1].sup_norm);
    for (const auto& s : tr.snapshots)
        for (double v : s.v_minus) CHECK(std::abs(v) <= 1e-13);
}

TEST_CASE("profile reconstruction", "[fd]")
{
    const auto cfg = FdConfig::with_step(4.0, 0.1, 0.01, 0.1, initial_condition("IC2"));
    auto s = initial_state(cfg);
    s.xi = -0.2;
    const auto p = reconstruct(s, cfg);
    REQUIRE(p.x.size() == static_cast<std::size_t>(2 * cfg.N + 3));
    for (std::size_t i = 0; i < p.x.size(); ++i) {
        const double y = p.y[i];
        const double u = y > 0 ? 0.5 * (cfg.ic.v_plus.value(y) + cfg.ic.v_minus.value(y))
                               : 0.5 * (cfg.ic.v_minus.value(-y) - cfg.ic.v_plus.value(-y));
        if (std::abs(y) < cfg.L - 1e-12) CHECK_THAT(p.u[i], WithinAbs(u, 1e-14));
        CHECK_THAT(p.x[i], WithinAbs(y - 0.2, 1e-14));
        CHECK_THAT(p.w[i], WithinAbs(standing_shock(y) + p.u[i], 1e-15));
    }
}

TEST_CASE("configuration checks", "[fd]")
{
    auto cfg = FdConfig::with_step(30.0, 0.01, 0.002, 4.0, initial_condition("IC1"));
    CHECK(cfg.N == 2999);
    CHECK(cfg.steps() == 2000);
    CHECK_NOTHROW(cfg.validate());
    cfg.tau = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = FdConfig::with_step(1.0, 0.5, 0.01, 1.0, initial_condition("IC1"));
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("coupling variants agree where the explicit ones are stable", "[fd]")
{
    // lagged gamma needs tau below about h^2
    double xi[3];
    int i = 0;
    for (auto coupling : {Coupling::lagged, Coupling::predictor_corrector, Coupling::implicit}) {
        auto cfg = FdConfig::with_step(20.0, 0.02, 1e-4, 0.5, initial_condition("IC1"));
        cfg.coupling = coupling;
        const auto tr = simulate(cfg, {0, {}});
        REQUIRE(tr.complete);
        xi[i++] = tr.xi_series.back();
    }
    CHECK_THAT(xi[0], WithinAbs(xi[2], 1e-3));
    CHECK_THAT(xi[1], WithinAbs(xi[2], 1e-3));

    auto coarse = FdConfig::with_step(20.0, 0.02, 0.002, 0.5, initial_condition("IC1"));
    const auto tr = simulate(coarse, {0, {}});
    REQUIRE(tr.complete);
    CHECK_THAT(tr.xi_series.back(), WithinAbs(xi[2], 2e-3));
}

TEST_CASE("far boundary and interface speed summability", "[fd]")
{
    const auto near = simulate(FdConfig::with_step(30.0, 0.02, 0.002, 2.0, initial_condition("IC1")), {0, {}});
    const auto far = simulate(FdConfig::with_step(60.0, 0.02, 0.002, 2.0, initial_condition("IC1")), {0, {}});
    REQUIRE(near.complete);
    REQUIRE(far.complete);
    CHECK_THAT(near.xi_series.back(), WithinAbs(far.xi_series.back(), 1e-4));

    for (const char* ic : {"IC1", "IC2"}) {
        const auto cfg = FdConfig::with_step(30.0, 0.02, 0.002, 12.0, initial_condition(ic));
        const auto tr = simulate(cfg, {0, {}});
        REQUIRE(tr.complete);
        // sum of |gamma| tau over consecutive windows of length 3
        const long window = std::lround(3.0 / cfg.tau);
        std::vector<double> mass;
        for (long k0 = 0; k0 + window <= static_cast<long>(tr.gamma_series.size()) - 1; k0 += window) {
            double m = 0.0;
            for (long k = k0; k < k0 + window; ++k) m += std::abs(tr.gamma_series[k]) * cfg.tau;
            mass.push_back(m);
        }
        INFO(ic);
        REQUIRE(mass.size() == 4);
        for (std::size_t i = 1; i < mass.size(); ++i) CHECK(mass[i] < 0.6 * mass[i - 1]);
    }
}
