#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include <mburgers/abel.hpp>
#include <mburgers/presets.hpp>

#include "../support/oracles.hpp"

using namespace mburgers;
using Catch::Matchers::WithinAbs;

namespace {

const QuadratureSpec quad_default;
const auto zero = [](double) { return 0.0; };
const auto one = [](double) { return 1.0; };

}

TEST_CASE("Abel operator", "[abel]")
{
    CHECK(m_operator(zero, 1.0, quad_default) == 0.0);

    const double frozen = 0.768619311614148; // 2D adaptive reference with s = r^2
    CHECK_THAT(oracle::abel_operator(one, 1.0), WithinAbs(frozen, 1e-12));
    CHECK_THAT(m_operator(one, 1.0, quad_default), WithinAbs(frozen, 1e-6));
    CHECK_THAT(m_operator(one, 1.0, quad_default, InnerIntegral::quadrature), WithinAbs(frozen, 1e-6));

    auto g1 = [](double t) { return std::exp(-t); };
    auto g2 = [](double t) { return std::sin(2.0 * t); };
    const double a = 0.7, b = -1.3;
    auto mix = [&](double t) { return a * g1(t) + b * g2(t); };
    for (double t : {0.3, 1.0, 3.0})
        CHECK_THAT(m_operator(mix, t, quad_default),
                   WithinAbs(a * m_operator(g1, t, quad_default) + b * m_operator(g2, t, quad_default), 1e-10));

    CHECK_THROWS_AS(m_operator(one, 0.0, quad_default), std::domain_error);
}

TEST_CASE("inner integral closed form", "[abel]")
{
    for (double s : {1e-4, 0.1, 1.0, 10.0, 400.0})
        CHECK_THAT(m_inner(s, InnerIntegral::closed_form, quad_default),
                   WithinAbs(m_inner(s, InnerIntegral::quadrature, quad_default), 1e-10));
}

TEST_CASE("inversion with data f", "[abel]")
{
    const auto p = AbelProblem::with_f(presets::y_exp());
    const auto z = AbelProblem::with_f(zero_field());
    CHECK(solve_abel_from_f(z, 1.0) == 0.0);

    // The two forms are related by an integration by parts.
    const double frozen = 0.145488784381929;
    for (auto form : {FromFForm::derivative, FromFForm::weighted})
        CHECK_THAT(solve_abel_from_f(p, 1.0, form), WithinAbs(frozen, 1e-10));
    for (double t : {0.1, 2.0, 9.0})
        CHECK_THAT(solve_abel_from_f(p, t, FromFForm::derivative), WithinAbs(solve_abel_from_f(p, t, FromFForm::weighted), 1e-8));

    for (double t : {0.25, 1.0, 4.0}) {
        auto gamma = [&](double tau) { return solve_abel(p, tau); };
        CHECK(std::abs(oracle::abel_operator(gamma, t) - abel_rhs(p, t)) <= 1e-5);
        CHECK(std::abs(abel_residual(p, t)) <= 1e-5);
    }

    auto bad = presets::y_exp();
    bad.f = [](double y) { return 1.0 + y; };
    CHECK_THROWS_AS(solve_abel(AbelProblem::with_f(bad), 1.0), std::domain_error);
}

TEST_CASE("inversion with data g", "[abel]")
{
    const auto z = AbelProblem::with_g([](double, double) { return 0.0; });
    CHECK(solve_abel_from_g(z, 1.0) == 0.0);

    // g = h e^{-eta/2} / 2 with h = 1 shifts the local solution by h/2.
    const auto half = AbelProblem::with_g([](double, double eta) { return 0.5 * std::exp(-0.5 * eta); });
    const auto local = AbelProblem::with_h(one);
    for (double t : {0.5, 1.0, 2.0}) {
        CHECK_THAT(solve_abel_from_g(half, t), WithinAbs(solve_abel_local(local, t) - 0.5, 1e-5));
        CHECK_THAT(solve_abel_from_g(half, t), WithinAbs(std::sqrt(t / std::numbers::pi) / 2.0, 1e-8));
    }

    const auto p = AbelProblem::with_g([](double tau, double eta) { return std::exp(-tau - eta); });
    CHECK(std::abs(abel_residual(p, 1.0)) <= 1e-5);
    auto gamma = [&](double tau) { return solve_abel(p, tau); };
    CHECK(std::abs(oracle::abel_operator(gamma, 1.0) - abel_rhs(p, 1.0)) <= 1e-5);
}

TEST_CASE("local inversion", "[abel]")
{
    CHECK(solve_abel_local(AbelProblem::with_h(zero), 1.0) == 0.0);
    CHECK_THAT(solve_abel_local(AbelProblem::with_h(one), std::numbers::pi), WithinAbs(1.0, 1e-8));

    const auto p = AbelProblem::with_h([](double t) { return std::exp(-t); });
    CHECK(std::abs(abel_residual(p, 1.0)) <= 1e-5);
    auto gamma = [&](double tau) { return solve_abel(p, tau); };
    CHECK(std::abs(oracle::abel_operator(gamma, 1.0) - abel_rhs(p, 1.0)) <= 1e-5);
}

TEST_CASE("problem validation", "[abel]")
{
    AbelProblem p = AbelProblem::with_h(one);
    p.g = [](double, double) { return 0.0; };
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    CHECK_THROWS_AS(solve_abel_from_f(AbelProblem::with_h(one), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(solve_abel_local(AbelProblem::with_h(one), -1.0), std::domain_error);
}

TEST_CASE("weakly singular convolution", "[abel]")
{
    auto g = [](double t) { return std::exp(-t) * (1.0 + 0.5 * std::cos(3.0 * t)); };
    for (double s : {0.0, 0.25, 0.5, 0.75})
        CHECK_THAT(singular_convolution(g, s, 2.5), WithinAbs(oracle::weakly_singular_convolution(g, s, 2.5), 1e-9));
    CHECK_THROWS_AS(singular_convolution(g, 1.0, 1.0), std::domain_error);
    CHECK(convolution_bound_constant(0.5) == 3.0);
}
