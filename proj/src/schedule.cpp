#include "cosc/schedule.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cosc {

namespace {

// Slack for time arguments that sit on a domain edge up to rounding.
double edge_slack(const TimeDomain& d) {
    return 1e-12 * std::max({1.0, std::abs(d.start), std::abs(d.end)});
}

}  // namespace

bool TimeDomain::contains(double t) const noexcept {
    const double slack = edge_slack(*this);
    return t >= start - slack && t <= end + slack;
}

// ------------------------------------------------------------- SplineCurve

struct SplineCurve::Impl {
    double t0, step;
    std::vector<double> values;
    boost::math::interpolators::cardinal_cubic_b_spline<double> spline;

    Impl(double t0_, double step_, std::vector<double> v)
        : t0(t0_), step(step_), values(std::move(v)), spline(values.begin(), values.end(), t0_, step_) {}
};

SplineCurve::SplineCurve(double t_start, double step, std::vector<double> values) {
    if (values.size() < 5) throw std::invalid_argument("spline needs at least 5 samples");
    if (!(step > 0.0)) throw std::invalid_argument("spline step must be positive");
    impl_ = std::make_shared<const Impl>(t_start, step, std::move(values));
}

double SplineCurve::derivative(double t, int order) const {
    const auto& s = impl_->spline;
    switch (order) {
    case 0: return s(t);
    case 1: return s.prime(t);
    case 2: return s.double_prime(t);
    case 3: {
        // piecewise constant; a half-step difference stays inside one knot span
        const double h = 0.25 * impl_->step;
        const TimeDomain d = domain();
        const double lo = std::max(d.start, t - h), hi = std::min(d.end, t + h);
        return (s.double_prime(hi) - s.double_prime(lo)) / (hi - lo);
    }
    default: throw std::invalid_argument("spline derivatives above order 3 are not available");
    }
}

TimeDomain SplineCurve::domain() const {
    return {impl_->t0, impl_->t0 + impl_->step * static_cast<double>(impl_->values.size() - 1)};
}

std::vector<std::pair<double, double>> SplineCurve::samples() const {
    std::vector<std::pair<double, double>> out;
    out.reserve(impl_->values.size());
    for (std::size_t i = 0; i < impl_->values.size(); ++i) {
        out.emplace_back(impl_->t0 + impl_->step * static_cast<double>(i), impl_->values[i]);
    }
    return out;
}

// ---------------------------------------------------------------- JetCurve

JetCurve::JetCurve(std::vector<double> t, std::vector<double> y, std::vector<double> dy,
                   std::vector<double> d2y)
    : t_(std::move(t)), y_(std::move(y)), dy_(std::move(dy)), d2y_(std::move(d2y)) {
    if (t_.size() < 2) throw std::invalid_argument("jet curve needs at least two nodes");
    if (y_.size() != t_.size() || dy_.size() != t_.size() || d2y_.size() != t_.size()) {
        throw std::invalid_argument("jet curve arrays differ in length");
    }
    if (!std::is_sorted(t_.begin(), t_.end()) ||
        std::adjacent_find(t_.begin(), t_.end()) != t_.end()) {
        throw std::invalid_argument("jet curve nodes must be strictly increasing");
    }
}

double JetCurve::derivative(double t, int order) const {
    if (order < 0 || order > 3) throw std::invalid_argument("jet curve derivatives above order 3 are not available");
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    std::size_t i = it == t_.begin() ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
    i = std::min(i, t_.size() - 2);

    const double h = t_[i + 1] - t_[i];
    const double s = (t - t_[i]) / h;
    const double c0 = y_[i], c1 = h * dy_[i], c2 = 0.5 * h * h * d2y_[i];
    const double a = y_[i + 1] - (c0 + c1 + c2);
    const double b = h * dy_[i + 1] - (c1 + 2.0 * c2);
    const double c = h * h * d2y_[i + 1] - 2.0 * c2;
    const double c3 = 10.0 * a - 4.0 * b + 0.5 * c;
    const double c4 = -15.0 * a + 7.0 * b - c;
    const double c5 = 6.0 * a - 3.0 * b + 0.5 * c;

    switch (order) {
    case 0: return c0 + s * (c1 + s * (c2 + s * (c3 + s * (c4 + s * c5))));
    case 1: return (c1 + s * (2 * c2 + s * (3 * c3 + s * (4 * c4 + s * 5 * c5)))) / h;
    case 2: return (2 * c2 + s * (6 * c3 + s * (12 * c4 + s * 20 * c5))) / (h * h);
    default: return (6 * c3 + s * (24 * c4 + s * 60 * c5)) / (h * h * h);
    }
}

TimeDomain JetCurve::domain() const { return {t_.front(), t_.back()}; }

std::vector<std::pair<double, double>> JetCurve::samples() const {
    std::vector<std::pair<double, double>> out;
    out.reserve(t_.size());
    for (std::size_t i = 0; i < t_.size(); ++i) out.emplace_back(t_[i], y_[i]);
    return out;
}

// ----------------------------------------------------------- ScalarSchedule

ScalarSchedule::ScalarSchedule(Expr e, TimeDomain domain) : e_(std::move(e)), domain_(domain) {
    if (!e_) throw std::invalid_argument("schedule without expression");
    if (!(domain_.end >= domain_.start)) throw std::invalid_argument("schedule domain is reversed");
    d1_ = expr::derivative(e_);
    d2_ = expr::derivative(d1_);
}

ScalarSchedule ScalarSchedule::constant(double v, TimeDomain domain) {
    return ScalarSchedule(expr::constant(v), domain);
}

ScalarSchedule ScalarSchedule::parse(std::string_view text, TimeDomain domain) {
    return ScalarSchedule(expr::parse(text), domain);
}

ScalarSchedule ScalarSchedule::from_samples(std::span<const std::pair<double, double>> samples) {
    if (samples.size() < 5) throw std::invalid_argument("sampled schedule needs at least 5 samples");
    const double t0 = samples.front().first;
    const double step = (samples.back().first - t0) / static_cast<double>(samples.size() - 1);
    if (!(step > 0.0)) throw std::invalid_argument("sample times must increase");
    std::vector<double> values;
    values.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double expected = t0 + step * static_cast<double>(i);
        if (std::abs(samples[i].first - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
            throw std::invalid_argument("sample times must be uniformly spaced");
        }
        values.push_back(samples[i].second);
    }
    auto curve = std::make_shared<SplineCurve>(t0, step, std::move(values));
    const TimeDomain d = curve->domain();
    return ScalarSchedule(expr::sampled(std::move(curve)), d);
}

void ScalarSchedule::check(double t) const {
    if (!domain_.contains(t)) {
        std::ostringstream os;
        os << "time " << t << " outside schedule domain [" << domain_.start << ", " << domain_.end << "]";
        throw DomainError(os.str());
    }
}

double ScalarSchedule::value(double t) const {
    check(t);
    return expr::eval(e_, t);
}

double ScalarSchedule::d1(double t) const {
    check(t);
    return expr::eval(d1_, t);
}

double ScalarSchedule::d2(double t) const {
    check(t);
    return expr::eval(d2_, t);
}

bool ScalarSchedule::closed_form() const { return !expr::contains_sampled(e_); }

bool ScalarSchedule::is_constant(double* v) const { return expr::is_const(e_, v); }

std::string ScalarSchedule::text() const { return expr::to_string(e_); }

namespace {

TimeDomain intersect(const TimeDomain& a, const TimeDomain& b) {
    TimeDomain d{std::max(a.start, b.start), std::min(a.end, b.end)};
    if (d.end < d.start) throw std::invalid_argument("schedule domains do not overlap");
    return d;
}

}  // namespace

ScalarSchedule operator+(const ScalarSchedule& a, const ScalarSchedule& b) {
    return {expr::add(a.expression(), b.expression()), intersect(a.domain(), b.domain())};
}

ScalarSchedule operator-(const ScalarSchedule& a, const ScalarSchedule& b) {
    return {expr::sub(a.expression(), b.expression()), intersect(a.domain(), b.domain())};
}

ScalarSchedule operator*(const ScalarSchedule& a, const ScalarSchedule& b) {
    return {expr::mul(a.expression(), b.expression()), intersect(a.domain(), b.domain())};
}

ScalarSchedule operator/(const ScalarSchedule& a, const ScalarSchedule& b) {
    return {expr::div(a.expression(), b.expression()), intersect(a.domain(), b.domain())};
}

ScalarSchedule operator*(double a, const ScalarSchedule& b) {
    return {expr::mul(expr::constant(a), b.expression()), b.domain()};
}

ScalarSchedule pow(const ScalarSchedule& a, double exponent) {
    return {expr::pow(a.expression(), exponent), a.domain()};
}

ScalarSchedule sqrt(const ScalarSchedule& a) { return {expr::sqrt(a.expression()), a.domain()}; }

ScalarSchedule derivative(const ScalarSchedule& a) {
    return {expr::derivative(a.expression()), a.domain()};
}

}  // namespace cosc
