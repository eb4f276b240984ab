// schedule.hpp - time-dependent scalar parameters with two derivatives.
//
// A ScalarSchedule wraps an expression tree over t. Closed-form schedules get
// exact symbolic derivatives; sampled data enters the tree as a SampledCurve
// leaf that supplies its own derivatives, so algebra over mixed schedules is
// uniform.

#pragma once

#include "cosc/expr.hpp"

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cosc {

class DomainError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

struct TimeDomain {
    double start{0.0};
    double end{0.0};

    bool contains(double t) const noexcept;
};

/// Interpolated data with derivatives up to order 3.
class SampledCurve {
public:
    virtual ~SampledCurve() = default;
    virtual double derivative(double t, int order) const = 0;
    virtual TimeDomain domain() const = 0;
    /// Node times and values, for serialization.
    virtual std::vector<std::pair<double, double>> samples() const = 0;
};

/// Cubic B-spline through uniformly spaced samples.
class SplineCurve final : public SampledCurve {
public:
    SplineCurve(double t_start, double step, std::vector<double> values);

    double derivative(double t, int order) const override;
    TimeDomain domain() const override;
    std::vector<std::pair<double, double>> samples() const override;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

/// Piecewise quintic Hermite interpolant through (value, first, second
/// derivative) triples at increasing nodes. Used for ODE output, where the
/// right-hand side provides the second derivative exactly.
class JetCurve final : public SampledCurve {
public:
    JetCurve(std::vector<double> t, std::vector<double> y, std::vector<double> dy,
             std::vector<double> d2y);

    double derivative(double t, int order) const override;
    TimeDomain domain() const override;
    std::vector<std::pair<double, double>> samples() const override;

private:
    std::vector<double> t_, y_, dy_, d2y_;
};

class ScalarSchedule {
public:
    ScalarSchedule() = default;
    ScalarSchedule(Expr e, TimeDomain domain);

    static ScalarSchedule constant(double v, TimeDomain domain);
    static ScalarSchedule parse(std::string_view text, TimeDomain domain);
    /// Uniform samples; throws std::invalid_argument if spacing is not uniform.
    static ScalarSchedule from_samples(std::span<const std::pair<double, double>> samples);

    double value(double t) const;
    double d1(double t) const;
    double d2(double t) const;

    const Expr& expression() const noexcept { return e_; }
    const TimeDomain& domain() const noexcept { return domain_; }
    bool closed_form() const;
    /// Constant as a tree (not merely numerically flat).
    bool is_constant(double* v = nullptr) const;
    /// Expression text; only for closed-form schedules.
    std::string text() const;

private:
    Expr e_, d1_, d2_;
    TimeDomain domain_;

    void check(double t) const;
};

// Arithmetic builds trees; the result lives on the intersection of domains.
ScalarSchedule operator+(const ScalarSchedule& a, const ScalarSchedule& b);
ScalarSchedule operator-(const ScalarSchedule& a, const ScalarSchedule& b);
ScalarSchedule operator*(const ScalarSchedule& a, const ScalarSchedule& b);
ScalarSchedule operator/(const ScalarSchedule& a, const ScalarSchedule& b);
ScalarSchedule operator*(double a, const ScalarSchedule& b);
ScalarSchedule pow(const ScalarSchedule& a, double exponent);
ScalarSchedule sqrt(const ScalarSchedule& a);
/// Symbolic derivative as a new schedule.
ScalarSchedule derivative(const ScalarSchedule& a);

}  // namespace cosc
