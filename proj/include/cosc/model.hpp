// model.hpp - parameter schedules, the Ermakov auxiliary equation and
// scenario construction for two coupled time-dependent oscillators
//
//   H = 1/2 sum_j [ p_j^2/m_j + b_j (x_j p_j + p_j x_j) + m_j w_j^2 x_j^2 ] + d x_1 x_2
//
// A Scenario bundles the schedules with Ermakov solutions rho_j chosen so the
// quadratic invariant exists: alpha_1 m_1 = alpha_2 m_2 and d' = -G d.

#pragma once

#include "cosc/ode.hpp"
#include "cosc/schedule.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace cosc {

using Pair = std::array<double, 2>;
template <class T>
using PairOf = std::array<T, 2>;

/// Physical constants of the construction. alpha0 is in 1/(mass length^2)
/// so that rho carries length; big_omega in mass length^2 / time.
struct Constants {
    double hbar{1.0};
    double big_m{1.0};
    Pair alpha0{1.0, 1.0};
    Pair big_omega{2.0, 2.0};

    /// Throws std::invalid_argument unless every entry is positive.
    void validate() const;
};

/// A schedule violates a physical requirement (e.g. nonpositive rho or mass).
class ConstraintError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ErmakovError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ErmakovOptions {
    OdeOptions ode{};
    double rho_min{1e-8};
    /// Residual bound relative to the largest term of the equation.
    double residual_tol{1e-6};
};

struct ErmakovSolution {
    std::vector<double> t;
    std::vector<double> rho;
    std::vector<double> rho_dot;
    std::vector<double> rho_ddot;

    /// Quintic Hermite interpolant through (rho, rho_dot, rho_ddot).
    ScalarSchedule as_schedule() const;
};

enum class ScenarioMode { InverseConstructed, ForwardUncoupled };

struct Scenario {
    Constants constants;
    PairOf<ScalarSchedule> m;
    PairOf<ScalarSchedule> b;
    PairOf<ScalarSchedule> omega_sq;
    ScalarSchedule d;
    PairOf<ScalarSchedule> rho;
    TimeDomain domain;
    ScenarioMode mode{ScenarioMode::InverseConstructed};
    double d0{0.0};
    /// Non-fatal findings from construction, e.g. negative w_j^2.
    std::vector<std::string> warnings;

    /// Throws DomainError for t outside the domain.
    void check_time(double t) const;
};

enum class GVariant {
    FirstMass,   // F = alpha_1 m_1
    SecondMass,  // F = alpha_2 m_2
    Symmetric    // average of the two
};

// ------------------------------------------------------------ frequencies

/// w_j^2 - b_j^2 - b_j' - b_j m_j'/m_j for oscillator j (0 or 1).
double modified_frequency_sq(int j, double t, const Scenario& s);
double modified_frequency_sq(double t, const ScalarSchedule& m, const ScalarSchedule& b,
                             const ScalarSchedule& omega_sq);

// ----------------------------------------------------------------- Ermakov

/// Constant solution (Omega^2 / (4 m^2 w~^2))^(1/4).
double equilibrium_rho(double m, double omega_tilde, double big_omega);

/// rho'' + (m'/m) rho' + w~^2 rho = Omega^2 / (4 m^2 rho^3), integrated over `grid`.
ErmakovSolution solve_ermakov(const ScalarSchedule& m, const ScalarSchedule& b, const ScalarSchedule& omega_sq,
                              double big_omega, double rho0, double rho_dot0, std::span<const double> grid,
                              const ErmakovOptions& opts = {});

/// Largest scaled Ermakov residual of `rho` on the grid.
double ermakov_residual(const ScalarSchedule& rho, const ScalarSchedule& m, const ScalarSchedule& b,
                        const ScalarSchedule& omega_sq, double big_omega, std::span<const double> grid);

/// Frequency schedule w^2 for which `rho` solves the Ermakov equation.
ScalarSchedule inverse_ermakov_omega_sq(const ScalarSchedule& rho, const ScalarSchedule& m,
                                        const ScalarSchedule& b, double big_omega);
ScalarSchedule inverse_ermakov_omega_sq(const ErmakovSolution& rho, const ScalarSchedule& m,
                                        const ScalarSchedule& b, double big_omega);

// --------------------------------------------------------------- coupling

double g_function(double t, const Scenario& s, GVariant variant);

/// d(t) = d0 K / (m_1 rho_1^3 rho_2), K fixed so that d(t_start) = d0.
ScalarSchedule coupling_schedule(double d0, const ScalarSchedule& m1, const ScalarSchedule& rho1,
                                 const ScalarSchedule& rho2);

// --------------------------------------------------------------- scenarios

/// Prescribe masses, b_j and rho_1; derive rho_2, w_j^2 and d(t).
Scenario build_inverse_scenario(const Constants& c, const PairOf<ScalarSchedule>& m,
                                const PairOf<ScalarSchedule>& b, const ScalarSchedule& rho1, double d0);

/// Uncoupled system with prescribed frequencies; rho_j integrated on `grid`.
Scenario build_forward_scenario(const Constants& c, const PairOf<ScalarSchedule>& m,
                                const PairOf<ScalarSchedule>& b, const PairOf<ScalarSchedule>& omega_sq,
                                const Pair& rho0, const Pair& rho_dot0, std::span<const double> grid,
                                const ErmakovOptions& opts = {});

struct ValidationReport {
    double mass_balance_max_residual{0.0};  // |a1 m1 - a2 m2| / (a1 m1)
    double coupling_ode_max_residual{0.0};  // |d' + G d| / max(|d'|, |G d|)
    double ermakov_max_residual{0.0};       // scaled by the largest term
    double g_variant_max_spread{0.0};       // spread of the three G forms

    /// The mass balance is vacuous when d is identically zero.
    bool within(double tol, bool coupled = true) const;
};

ValidationReport validate_scenario(const Scenario& s, std::span<const double> grid);

/// True when d is the literal constant zero.
bool is_uncoupled(const Scenario& s);

/// Default constraint tolerance: 1e-8 for closed-form scenarios, 1e-6 when
/// any schedule comes from sampled or integrated data.
double default_constraint_tol(const Scenario& s);

}  // namespace cosc
