#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <mburgers/diagnostics.hpp>
#include <mburgers/presets.hpp>

using namespace mburgers;
using Catch::Matchers::WithinAbs;

TEST_CASE("discrete norms", "[diagnostics]")
{
    const auto zero = discrete_norms(PerturbationField::sample(0.1, 50, zero_field()), 0.25);
    CHECK(zero.l2 == 0.0);
    CHECK(zero.linf == 0.0);
    CHECK(*zero.h2 == 0.0);
    CHECK(*zero.w2inf == 0.0);
    CHECK(*zero.alpha_weighted_w2inf == 0.0);

    const auto decay = discrete_norms(PerturbationField::sample(1e-3, 40001, [](double y) { return std::exp(-y); }));
    CHECK_THAT(decay.l2, WithinAbs(std::sqrt(0.5), 1e-4));
    CHECK(!decay.h1);

    auto shock_slope = PerturbationField::sample(0.01, 2001, [](double y) { return std::exp(-y); });
    const auto r = discrete_norms(shock_slope);
    CHECK(r.linf == 1.0);

    SECTION("sampled derivatives give nested norms")
    {
        const auto f = discrete_norms(PerturbationField::sample(1e-3, 30001, presets::y_exp()), 0.25);
        // |y e^{-y}|_2^2 = 1/4, |(1 - y) e^{-y}|_2^2 = 1/4, |(y - 2) e^{-y}|_2^2 = 5/4
        CHECK_THAT(f.l2, WithinAbs(0.5, 1e-6));
        CHECK_THAT(*f.h1, WithinAbs(std::sqrt(0.5), 1e-6));
        CHECK_THAT(*f.h2, WithinAbs(std::sqrt(1.75), 1e-6));
        CHECK_THAT(f.d1_l2(), WithinAbs(0.5, 1e-6));
        CHECK_THAT(f.d2_l2(), WithinAbs(std::sqrt(1.25), 1e-6));
        CHECK_THAT(*f.w2inf, WithinAbs(2.0, 1e-12));
        CHECK(*f.alpha_weighted_w2inf <= *f.w2inf);
    }
}

TEST_CASE("energy monotonicity report", "[diagnostics]")
{
    std::vector<LevelNorms> series;
    for (int k = 0; k < 20; ++k) series.push_back({1.0 / (1.0 + k), 0.0});
    CHECK(energy_monotonicity_report(series, 0.0).empty());
    series[7].energy += 0.5;
    const auto v = energy_monotonicity_report(series, 1e-10);
    REQUIRE(v.size() == 1);
    CHECK(v[0].step == 7);

    SECTION("solver runs")
    {
        const auto odd = simulate(FdConfig::with_step(30.0, 0.02, 0.005, 2.0, initial_condition("odd")), {0, {}});
        CHECK(energy_monotonicity_report(odd, 1e-10).empty());
        const auto cfg = FdConfig::with_step(30.0, 0.02, 0.005, 2.0, initial_condition("IC1"));
        const auto ic1 = simulate(cfg, {0, {}});
        CHECK(energy_monotonicity_report(ic1, 10.0 * cfg.tau * cfg.tau).empty());
    }
}

TEST_CASE("decay bounds", "[diagnostics]")
{
    const NormReport none{};
    auto zero = [](double, double, int) { return 0.0; };
    const std::vector<double> times{1.0, 4.0}, xs{0.0, 1.0};
    for (const auto& c : decay_bound_check(zero, none, times, xs)) CHECK(c.pass());

    const auto u0 = discrete_norms(PerturbationField::sample(1e-3, 40001, presets::y_exp()));
    for (int order = 0; order < 3; ++order)
        CHECK_THAT(decay_bound_rhs(16.0, order, u0) / decay_bound_rhs(1.0, order, u0), WithinAbs(0.5, 1e-12));
    CHECK_THAT(decay_bound_rhs(1.0, 0, u0), WithinAbs(2.0 * std::pow(8.0 * std::numbers::pi, -0.25) * 0.5, 1e-7));

    const std::vector<double> early{0.5};
    CHECK_THROWS_AS(decay_bound_check(zero, u0, early, xs), std::domain_error);
}

TEST_CASE("interface residuals", "[diagnostics]")
{
    SECTION("one-sided stencils are exact for cubics")
    {
        auto f = [](double y) { return 0.7 * y - 0.4 * y * y + 0.2 * y * y * y; };
        const auto d = one_sided_derivatives(f(0.1), f(0.2), f(0.3), 0.1);
        CHECK_THAT(d.d1, WithinAbs(0.7, 1e-12));
        CHECK_THAT(d.d2, WithinAbs(-0.8, 1e-10));
    }

    SECTION("odd sector")
    {
        const auto tr = simulate(FdConfig::with_step(30.0, 0.01, 0.002, 1.0, initial_condition("odd")), {100, {}});
        for (const auto& r : interface_residuals(tr)) {
            CHECK(std::abs(r.r1) <= 0.05);
            CHECK(std::abs(r.r2) <= 0.05);
        }
    }

    SECTION("IC1 residuals are small and shrink under refinement")
    {
        double worst[2] = {0.0, 0.0};
        int i = 0;
        for (double h : {0.02, 0.01}) {
            const auto tr =
                simulate(FdConfig::with_step(30.0, h, 0.002, 1.0, initial_condition("IC1")), {0, {0.25, 0.5, 1.0}});
            for (const auto& r : interface_residuals(tr)) {
                if (r.t == 0.0) continue;
                worst[i] = std::max({worst[i], std::abs(r.r1), std::abs(r.r2)});
            }
            ++i;
        }
        CHECK(worst[1] <= 0.05);
        CHECK(std::log2(worst[0] / worst[1]) >= 0.9);
    }
}

TEST_CASE("interface limit extrapolation", "[diagnostics]")
{
    const double dt = 0.01;
    std::vector<double> g(801), xi(801);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double t = k * dt;
        g[k] = std::exp(-t);
        xi[k] = 0.3 + 1.0 - std::exp(-t);
    }
    const auto fit = fit_xi_infinity(xi, g, dt);
    CHECK_THAT(fit.xi_extrapolated, WithinAbs(1.3, 1e-3));
    REQUIRE(fit.rate);
    CHECK_THAT(*fit.rate, WithinAbs(1.0, 1e-6));

    std::fill(g.begin(), g.end(), 0.0);
    const auto flat = fit_xi_infinity(xi, g, dt);
    CHECK(flat.xi_extrapolated == xi.back());
    CHECK(flat.xi_at_T == xi.back());
    CHECK(!flat.rate);
}

TEST_CASE("positivity detector", "[diagnostics]")
{
    auto zero_ic = initial_condition("IC1");
    zero_ic.v_plus = zero_field();
    zero_ic.v_minus = zero_field();
    const auto shock = simulate(FdConfig::with_step(10.0, 0.05, 0.01, 0.5, zero_ic), {10, {}});
    CHECK(positivity_check(shock).empty());

    const auto scaled = simulate(FdConfig::with_step(30.0, 0.01, 0.002, 1.0, initial_condition("IC1").scaled(50.0)), {1, {}});
    const auto v = positivity_check(scaled);
    CHECK(!v.empty());
    for (const auto& p : v) CHECK(std::isfinite(p.w));
}

TEST_CASE("Young inequality helpers", "[diagnostics]")
{
    const std::vector<double> a{1.0, 2.0}, b{3.0, -1.0};
    const auto c = young::convolve(a, b, 0.5);
    REQUIRE(c.size() == 3);
    CHECK(c[0] == 1.5);
    CHECK(c[1] == 2.5);
    CHECK(c[2] == -1.0);
    const auto d = young::causal_convolve(a, b, 0.5);
    CHECK(d[0] == 1.5);
    CHECK(d[1] == 2.5);
    CHECK(young::l1(b, 0.5) == 2.0);
}
