#include "cosc/invariant.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace cosc {

InvariantCoefficients coefficients_at(double t, const Scenario& s) {
    s.check_time(t);
    const auto& c = s.constants;
    InvariantCoefficients k;
    k.t = t;
    for (int j = 0; j < 2; ++j) {
        const double r = s.rho[j].value(t), rd = s.rho[j].d1(t);
        const double m = s.m[j].value(t), b = s.b[j].value(t);
        k.alpha[j] = c.alpha0[j] * r * r;
        k.beta[j] = c.alpha0[j] * m * (b * r * r - r * rd);
        k.gamma[j] = c.alpha0[j] * (c.big_omega[j] * c.big_omega[j] / (4.0 * r * r) +
                                    m * m * (b * b * r * r - 2.0 * b * r * rd + rd * rd));
    }
    k.delta = k.alpha[0] * s.m[0].value(t) * s.d.value(t);
    return k;
}

CoefficientFn coefficient_source(const Scenario& s) {
    return [&s](double t) { return coefficients_at(t, s); };
}

CoefficientFn scaled_delta_source(const Scenario& s, double scale) {
    return [&s, scale](double t) {
        InvariantCoefficients k = coefficients_at(t, s);
        k.delta *= scale;
        return k;
    };
}

double CoefficientOdeResiduals::max() const {
    return std::max({alpha[0], alpha[1], beta[0], beta[1], gamma[0], gamma[1], delta});
}

namespace {

struct CoefficientRates {
    Pair alpha{}, beta{}, gamma{};
    double delta{0.0};
};

CoefficientRates central_difference(const CoefficientFn& coeffs, double t, double h) {
    const InvariantCoefficients hi = coeffs(t + h), lo = coeffs(t - h);
    CoefficientRates r;
    for (int j = 0; j < 2; ++j) {
        r.alpha[j] = (hi.alpha[j] - lo.alpha[j]) / (2 * h);
        r.beta[j] = (hi.beta[j] - lo.beta[j]) / (2 * h);
        r.gamma[j] = (hi.gamma[j] - lo.gamma[j]) / (2 * h);
    }
    r.delta = (hi.delta - lo.delta) / (2 * h);
    return r;
}

double scaled(double lhs, std::initializer_list<double> rhs_terms) {
    double rhs = 0.0, scale = std::abs(lhs);
    for (double term : rhs_terms) {
        rhs += term;
        scale = std::max(scale, std::abs(term));
    }
    return scale == 0.0 ? 0.0 : std::abs(lhs - rhs) / scale;
}

}  // namespace

CoefficientOdeResiduals coefficient_ode_residuals(double t, const Scenario& s, const CoefficientFn& coeffs,
                                                  double h, bool richardson) {
    if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
    s.check_time(t - h);
    s.check_time(t + h);

    CoefficientRates rate = central_difference(coeffs, t, h);
    if (richardson) {
        const CoefficientRates half = central_difference(coeffs, t, 0.5 * h);
        for (int j = 0; j < 2; ++j) {
            rate.alpha[j] = (4 * half.alpha[j] - rate.alpha[j]) / 3;
            rate.beta[j] = (4 * half.beta[j] - rate.beta[j]) / 3;
            rate.gamma[j] = (4 * half.gamma[j] - rate.gamma[j]) / 3;
        }
        rate.delta = (4 * half.delta - rate.delta) / 3;
    }

    const InvariantCoefficients k = coeffs(t);
    CoefficientOdeResiduals r;
    for (int j = 0; j < 2; ++j) {
        const double m = s.m[j].value(t), b = s.b[j].value(t), w2 = s.omega_sq[j].value(t);
        r.alpha[j] = scaled(rate.alpha[j], {2 * b * k.alpha[j], -2 * k.beta[j] / m});
        r.beta[j] = scaled(rate.beta[j], {m * k.alpha[j] * w2, -k.gamma[j] / m});
        r.gamma[j] = scaled(rate.gamma[j], {-2 * b * k.gamma[j], 2 * m * k.beta[j] * w2});
    }
    const double b_sum = s.b[0].value(t) + s.b[1].value(t);
    r.delta = scaled(rate.delta, {-k.delta * b_sum, s.d.value(t) * (k.beta[0] + k.beta[1])});
    return r;
}

CoefficientOdeResiduals coefficient_ode_residuals(double t, const Scenario& s, double h, bool richardson) {
    return coefficient_ode_residuals(t, s, coefficient_source(s), h, richardson);
}

double conserved_coupling(double t, const Scenario& s) {
    const InvariantCoefficients k = coefficients_at(t, s);
    return k.delta * std::sqrt(k.alpha[0] * k.alpha[1]);
}

// ---------------------------------------------------------------- classical

PhaseState classical_rhs(const PhaseState& z, const Scenario& s) {
    const double t = z.t;
    s.check_time(t);
    const double d = s.d.value(t);
    PhaseState dz;
    dz.t = t;
    for (int j = 0; j < 2; ++j) {
        const double m = s.m[j].value(t), b = s.b[j].value(t), w2 = s.omega_sq[j].value(t);
        dz.x[j] = z.p[j] / m + b * z.x[j];
        dz.p[j] = -b * z.p[j] - m * w2 * z.x[j] - d * z.x[1 - j];
    }
    return dz;
}

Trajectory integrate_classical(const PhaseState& initial, std::span<const double> grid, const Scenario& s,
                               const OdeOptions& opts) {
    if (grid.empty() || std::abs(grid.front() - initial.t) > 1e-12 * std::max(1.0, std::abs(initial.t))) {
        throw std::invalid_argument("trajectory grid must start at the initial time");
    }
    using State = std::array<double, 4>;
    auto rhs = [&s](const State& y, double t) {
        const PhaseState dz = classical_rhs(PhaseState{{y[0], y[1]}, {y[2], y[3]}, t}, s);
        return State{dz.x[0], dz.x[1], dz.p[0], dz.p[1]};
    };
    const auto states = integrate_on_grid<4>(rhs, State{initial.x[0], initial.x[1], initial.p[0], initial.p[1]},
                                             grid, opts);
    Trajectory traj;
    traj.reserve(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        traj.push_back({{states[i][0], states[i][1]}, {states[i][2], states[i][3]}, grid[i]});
    }
    return traj;
}

double classical_invariant(const PhaseState& z, const InvariantCoefficients& c) {
    double i = 0.0;
    for (int j = 0; j < 2; ++j) {
        i += 0.5 * (c.alpha[j] * z.p[j] * z.p[j] + 2.0 * c.beta[j] * z.x[j] * z.p[j] + c.gamma[j] * z.x[j] * z.x[j]);
    }
    return i + c.delta * z.x[0] * z.x[1];
}

DriftReport invariant_along_trajectory(const Trajectory& traj, const CoefficientFn& coeffs) {
    DriftReport r;
    if (traj.empty()) return r;
    r.values.reserve(traj.size());
    for (const PhaseState& z : traj) r.values.push_back(classical_invariant(z, coeffs(z.t)));
    r.initial = r.values.front();
    for (double v : r.values) r.max_abs_drift = std::max(r.max_abs_drift, std::abs(v - r.initial));
    r.relative = r.initial != 0.0;
    r.max_drift = r.relative ? r.max_abs_drift / std::abs(r.initial) : r.max_abs_drift;
    return r;
}

DriftReport invariant_along_trajectory(const Trajectory& traj, const Scenario& s) {
    return invariant_along_trajectory(traj, coefficient_source(s));
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const DriftReport& drift, const Scenario& s,
                          double h) {
    char buf[64];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    os << "t,x1,x2,p1,p2,I,residual\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const PhaseState& z = traj[i];
        os << num(z.t) << ',' << num(z.x[0]) << ',' << num(z.x[1]) << ',' << num(z.p[0]) << ',' << num(z.p[1])
           << ',' << (i < drift.values.size() ? num(drift.values[i]) : std::string()) << ',';
        if (s.domain.contains(z.t - h) && s.domain.contains(z.t + h)) {
            os << num(coefficient_ode_residuals(z.t, s, h).max());
        }
        os << '\n';
    }
}

}  // namespace cosc
