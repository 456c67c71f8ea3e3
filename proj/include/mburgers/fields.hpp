#pragma once

#include <cmath>
#include <concepts>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace mburgers {

// Anything that can report a value and two derivatives on the half-line.
template <class D>
concept HalfLineData = requires(const D& d, double y) {
    { d.value(y) } -> std::convertible_to<double>;
    { d.d1(y) } -> std::convertible_to<double>;
    { d.d2(y) } -> std::convertible_to<double>;
};

namespace detail {

inline double lerp_samples(std::span<const double> s, double step, double y)
{
    if (y < 0.0) return s.front();
    const double pos = y / step;
    const auto n = static_cast<std::size_t>(pos);
    if (n + 1 >= s.size()) return (n + 1 == s.size() && pos == static_cast<double>(n)) ? s.back() : 0.0;
    const double w = pos - static_cast<double>(n);
    return (1.0 - w) * s[n] + w * s[n + 1];
}

} // namespace detail

/// Samples of a half-line function u(y_n), y_n = n*h, with optional derivative samples.
/// Evaluation between nodes is piecewise linear; beyond the last node the field is zero.
class PerturbationField {
public:
    PerturbationField(double step, std::vector<double> values,
                      std::optional<std::vector<double>> d1 = std::nullopt,
                      std::optional<std::vector<double>> d2 = std::nullopt)
        : step_(step), values_(std::move(values)), d1_(std::move(d1)), d2_(std::move(d2))
    {
        if (!(step_ > 0.0)) throw std::invalid_argument("PerturbationField: grid step must be positive");
        if (values_.size() < 2) throw std::invalid_argument("PerturbationField: need at least two samples");
        if ((d1_ && d1_->size() != values_.size()) || (d2_ && d2_->size() != values_.size()))
            throw std::invalid_argument("PerturbationField: derivative samples must match value samples");
    }

    template <class F0>
        requires(!HalfLineData<std::remove_cvref_t<F0>>)
    static PerturbationField sample(double step, std::size_t count, F0&& f)
    {
        std::vector<double> v(count);
        for (std::size_t n = 0; n < count; ++n) v[n] = f(n * step);
        return PerturbationField(step, std::move(v));
    }

    template <HalfLineData D>
    static PerturbationField sample(double step, std::size_t count, const D& d)
    {
        std::vector<double> v(count), v1(count), v2(count);
        for (std::size_t n = 0; n < count; ++n) {
            const double y = n * step;
            v[n] = d.value(y);
            v1[n] = d.d1(y);
            v2[n] = d.d2(y);
        }
        return PerturbationField(step, std::move(v), std::move(v1), std::move(v2));
    }

    double step() const { return step_; }
    std::size_t size() const { return values_.size(); }
    double length() const { return step_ * static_cast<double>(values_.size() - 1); }
    double node(std::size_t n) const { return step_ * static_cast<double>(n); }

    std::span<const double> values() const { return values_; }
    bool has_d1() const { return d1_.has_value(); }
    bool has_d2() const { return d2_.has_value(); }
    std::span<const double> d1_values() const { return require(d1_, "first"); }
    std::span<const double> d2_values() const { return require(d2_, "second"); }

    double value(double y) const { return detail::lerp_samples(values_, step_, y); }
    double d1(double y) const { return detail::lerp_samples(require(d1_, "first"), step_, y); }
    double d2(double y) const { return detail::lerp_samples(require(d2_, "second"), step_, y); }

private:
    static std::span<const double> require(const std::optional<std::vector<double>>& d, const char* which)
    {
        if (!d) throw std::logic_error(std::string("PerturbationField: ") + which + " derivative samples are missing");
        return *d;
    }

    double step_;
    std::vector<double> values_;
    std::optional<std::vector<double>> d1_;
    std::optional<std::vector<double>> d2_;
};

/// Closed-form half-line data given as three callables.
struct AnalyticField {
    std::function<double(double)> f;
    std::function<double(double)> df;
    std::function<double(double)> d2f;

    double value(double y) const { return f(y); }
    double d1(double y) const { return df(y); }
    double d2(double y) const { return d2f(y); }

    AnalyticField scaled(double a) const
    {
        return {[g = f, a](double y) { return a * g(y); }, [g = df, a](double y) { return a * g(y); },
                [g = d2f, a](double y) { return a * g(y); }};
    }
};

inline AnalyticField as_analytic(const PerturbationField& field)
{
    auto shared = std::make_shared<const PerturbationField>(field);
    return {[shared](double y) { return shared->value(y); },
            [shared](double y) { return shared->d1(y); },
            [shared](double y) { return shared->d2(y); }};
}

inline AnalyticField zero_field()
{
    auto z = [](double) { return 0.0; };
    return {z, z, z};
}

/// gamma(t_k) on a uniform time grid, linear in between, held constant past the end.
class GammaSignal {
public:
    GammaSignal(double time_step, std::vector<double> values) : step_(time_step), values_(std::move(values))
    {
        if (!(step_ > 0.0)) throw std::invalid_argument("GammaSignal: time step must be positive");
        if (values_.empty()) throw std::invalid_argument("GammaSignal: need at least one sample");
        for (double v : values_)
            if (!std::isfinite(v)) throw std::invalid_argument("GammaSignal: non-finite sample");
    }

    template <class F>
    static GammaSignal sample(double time_step, std::size_t count, F&& f)
    {
        std::vector<double> v(count);
        for (std::size_t k = 0; k < count; ++k) v[k] = f(k * time_step);
        return GammaSignal(time_step, std::move(v));
    }

    double step() const { return step_; }
    std::size_t size() const { return values_.size(); }
    double end_time() const { return step_ * static_cast<double>(values_.size() - 1); }
    std::span<const double> values() const { return values_; }
    std::vector<double>& mutable_values() { return values_; }

    double operator()(double t) const
    {
        if (t <= 0.0) return values_.front();
        const double pos = t / step_;
        const auto k = static_cast<std::size_t>(pos);
        if (k + 1 >= values_.size()) return values_.back();
        const double w = pos - static_cast<double>(k);
        return (1.0 - w) * values_[k] + w * values_[k + 1];
    }

private:
    double step_;
    std::vector<double> values_;
};

} // namespace mburgers
