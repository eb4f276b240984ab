// invariant.hpp - coefficients of the quadratic invariant
//
//   I = 1/2 sum_j [ alpha_j p_j^2 + beta_j (x_j p_j + p_j x_j) + gamma_j x_j^2 ] + delta x_1 x_2
//
// and its checks: the coefficient ODEs implied by dI/dt = 0, the conserved
// coupling delta sqrt(alpha_1 alpha_2), and constancy along classical orbits.

#pragma once

#include "cosc/model.hpp"

#include <functional>
#include <iosfwd>
#include <vector>

namespace cosc {

struct InvariantCoefficients {
    Pair alpha{};  // 1/mass
    Pair beta{};   // 1/time
    Pair gamma{};  // mass/time^2
    double delta{0.0};
    double t{0.0};
};

/// Coefficients as a function of time. The default source is
/// coefficients_at; tests and diagnostics substitute corrupted ones.
using CoefficientFn = std::function<InvariantCoefficients(double)>;

InvariantCoefficients coefficients_at(double t, const Scenario& s);
CoefficientFn coefficient_source(const Scenario& s);
/// Same as coefficient_source with delta multiplied by `scale`.
CoefficientFn scaled_delta_source(const Scenario& s, double scale);

/// Residuals of alpha' = 2b alpha - 2 beta/m, beta' = m alpha w^2 - gamma/m,
/// gamma' = -2b gamma + 2 m beta w^2 and delta' = -delta(b1+b2) + d(beta1+beta2),
/// each divided by the largest term of its equation. Derivatives are central
/// differences with step h (Richardson-extrapolated on request).
struct CoefficientOdeResiduals {
    Pair alpha{};
    Pair beta{};
    Pair gamma{};
    double delta{0.0};

    double max() const;
};

CoefficientOdeResiduals coefficient_ode_residuals(double t, const Scenario& s, double h = 1e-4,
                                                  bool richardson = false);
CoefficientOdeResiduals coefficient_ode_residuals(double t, const Scenario& s, const CoefficientFn& coeffs,
                                                  double h = 1e-4, bool richardson = false);

/// delta sqrt(alpha_1 alpha_2); constant in time for a valid scenario.
double conserved_coupling(double t, const Scenario& s);

// ---------------------------------------------------------------- classical

struct PhaseState {
    Pair x{};
    Pair p{};
    double t{0.0};
};

using Trajectory = std::vector<PhaseState>;

/// Hamilton's equations of the coupled Hamiltonian; the returned state holds
/// (x', p') and the same t.
PhaseState classical_rhs(const PhaseState& z, const Scenario& s);

Trajectory integrate_classical(const PhaseState& initial, std::span<const double> grid, const Scenario& s,
                               const OdeOptions& opts = {});

/// Classical value of the invariant (2 beta x p for the symmetrized term).
double classical_invariant(const PhaseState& z, const InvariantCoefficients& c);

struct DriftReport {
    double initial{0.0};
    double max_abs_drift{0.0};
    /// max |I(t) - I(0)| / |I(0)|, or the absolute drift when I(0) == 0.
    double max_drift{0.0};
    bool relative{true};
    std::vector<double> values;
};

DriftReport invariant_along_trajectory(const Trajectory& traj, const Scenario& s);
DriftReport invariant_along_trajectory(const Trajectory& traj, const CoefficientFn& coeffs);

/// CSV with columns t,x1,x2,p1,p2,I,residual where residual is the largest
/// scaled coefficient-ODE residual at that time (empty when t +- h leaves the domain).
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const DriftReport& drift, const Scenario& s,
                          double h = 1e-4);

}  // namespace cosc
