#include "cosc/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cosc {

namespace {

constexpr std::size_t kProbePoints = 2001;

std::vector<double> probe_grid(const TimeDomain& d) {
    if (d.end == d.start) return {d.start};
    return linspace(d.start, d.end, kProbePoints);
}

TimeDomain intersect(const TimeDomain& a, const TimeDomain& b) {
    TimeDomain d{std::max(a.start, b.start), std::min(a.end, b.end)};
    if (d.end < d.start) throw std::invalid_argument("schedule domains do not overlap");
    return d;
}

void require_positive(const ScalarSchedule& s, const char* what) {
    for (double t : probe_grid(s.domain())) {
        const double v = s.value(t);
        if (!(v > 0.0)) {
            std::ostringstream os;
            os << "nonpositive " << what << " (" << v << " at t = " << t << ")";
            throw ConstraintError(os.str());
        }
    }
}

double max_abs(std::initializer_list<double> xs) {
    double m = 0.0;
    for (double x : xs) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

void Constants::validate() const {
    if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
    if (!(big_m > 0.0)) throw std::invalid_argument("M must be positive");
    for (int j = 0; j < 2; ++j) {
        if (!(alpha0[j] > 0.0)) throw std::invalid_argument("alpha0 must be positive");
        if (!(big_omega[j] > 0.0)) throw std::invalid_argument("Omega must be positive");
    }
}

void Scenario::check_time(double t) const {
    if (!domain.contains(t)) {
        std::ostringstream os;
        os << "time " << t << " outside scenario domain [" << domain.start << ", " << domain.end << "]";
        throw DomainError(os.str());
    }
}

ScalarSchedule ErmakovSolution::as_schedule() const {
    auto curve = std::make_shared<JetCurve>(t, rho, rho_dot, rho_ddot);
    const TimeDomain d = curve->domain();
    return ScalarSchedule(expr::sampled(std::move(curve)), d);
}

// ------------------------------------------------------------ frequencies

double modified_frequency_sq(double t, const ScalarSchedule& m, const ScalarSchedule& b,
                             const ScalarSchedule& omega_sq) {
    const double bv = b.value(t);
    return omega_sq.value(t) - bv * bv - b.d1(t) - bv * m.d1(t) / m.value(t);
}

double modified_frequency_sq(int j, double t, const Scenario& s) {
    s.check_time(t);
    return modified_frequency_sq(t, s.m[j], s.b[j], s.omega_sq[j]);
}

// ----------------------------------------------------------------- Ermakov

double equilibrium_rho(double m, double omega_tilde, double big_omega) {
    if (!(m > 0.0) || !(omega_tilde > 0.0) || !(big_omega > 0.0)) {
        throw std::invalid_argument("equilibrium rho needs positive mass, frequency and Omega");
    }
    return std::pow(big_omega * big_omega / (4.0 * m * m * omega_tilde * omega_tilde), 0.25);
}

ErmakovSolution solve_ermakov(const ScalarSchedule& m, const ScalarSchedule& b, const ScalarSchedule& omega_sq,
                              double big_omega, double rho0, double rho_dot0, std::span<const double> grid,
                              const ErmakovOptions& opts) {
    if (!(rho0 > 0.0)) throw ErmakovError("nonpositive rho at the initial time");
    if (grid.size() < 2) throw std::invalid_argument("Ermakov grid needs at least two points");

    const double om2 = big_omega * big_omega;
    auto accel = [&](double rho, double rho_dot, double t) {
        const double mv = m.value(t);
        const double wt2 = modified_frequency_sq(t, m, b, omega_sq);
        return om2 / (4.0 * mv * mv * rho * rho * rho) - (m.d1(t) / mv) * rho_dot - wt2 * rho;
    };
    auto rhs = [&](const std::array<double, 2>& y, double t) {
        return std::array<double, 2>{y[1], accel(y[0], y[1], t)};
    };
    auto inspect = [&](const std::array<double, 2>& y, double t) {
        if (!(y[0] > opts.rho_min)) {
            std::ostringstream os;
            os << "nonpositive rho: rho fell to " << y[0] << " at t = " << t << " (floor " << opts.rho_min << ")";
            throw ErmakovError(os.str());
        }
    };

    std::vector<std::array<double, 2>> states;
    try {
        states = integrate_on_grid<2>(rhs, {rho0, rho_dot0}, grid, opts.ode, inspect);
    } catch (const OdeError& e) {
        throw ErmakovError(std::string("Ermakov integration failed (rho may have crossed zero): ") + e.what());
    }

    ErmakovSolution sol;
    sol.t.assign(grid.begin(), grid.end());
    for (std::size_t i = 0; i < states.size(); ++i) {
        sol.rho.push_back(states[i][0]);
        sol.rho_dot.push_back(states[i][1]);
        sol.rho_ddot.push_back(accel(states[i][0], states[i][1], sol.t[i]));
    }

    // the interpolant between nodes must still satisfy the equation
    std::vector<double> mid;
    for (std::size_t i = 0; i + 1 < sol.t.size(); ++i) mid.push_back(0.5 * (sol.t[i] + sol.t[i + 1]));
    const double res = ermakov_residual(sol.as_schedule(), m, b, omega_sq, big_omega, mid);
    if (res > opts.residual_tol) {
        std::ostringstream os;
        os << "Ermakov residual " << res << " between grid nodes exceeds " << opts.residual_tol
           << "; use a finer grid";
        throw ErmakovError(os.str());
    }
    return sol;
}

double ermakov_residual(const ScalarSchedule& rho, const ScalarSchedule& m, const ScalarSchedule& b,
                        const ScalarSchedule& omega_sq, double big_omega, std::span<const double> grid) {
    double worst = 0.0;
    for (double t : grid) {
        const double r = rho.value(t), rd = rho.d1(t), rdd = rho.d2(t);
        const double mv = m.value(t);
        const double t1 = rdd;
        const double t2 = (m.d1(t) / mv) * rd;
        const double t3 = modified_frequency_sq(t, m, b, omega_sq) * r;
        const double t4 = big_omega * big_omega / (4.0 * mv * mv * r * r * r);
        const double scale = max_abs({t1, t2, t3, t4});
        if (scale == 0.0) continue;
        worst = std::max(worst, std::abs(t1 + t2 + t3 - t4) / scale);
    }
    return worst;
}

ScalarSchedule inverse_ermakov_omega_sq(const ScalarSchedule& rho, const ScalarSchedule& m,
                                        const ScalarSchedule& b, double big_omega) {
    require_positive(rho, "rho");
    const TimeDomain dom = intersect(intersect(rho.domain(), m.domain()), b.domain());
    const ScalarSchedule rho_dot = derivative(rho);
    const ScalarSchedule rho_ddot = derivative(rho_dot);
    const ScalarSchedule m_dot = derivative(m);
    const ScalarSchedule mass_rate = m_dot / m;

    const ScalarSchedule omega_tilde_sq =
        ScalarSchedule::constant(big_omega * big_omega / 4.0, dom) / (pow(m, 2.0) * pow(rho, 4.0)) -
        rho_ddot / rho - mass_rate * (rho_dot / rho);
    return omega_tilde_sq + pow(b, 2.0) + derivative(b) + b * mass_rate;
}

ScalarSchedule inverse_ermakov_omega_sq(const ErmakovSolution& rho, const ScalarSchedule& m,
                                        const ScalarSchedule& b, double big_omega) {
    for (double r : rho.rho) {
        if (!(r > 0.0)) throw ConstraintError("nonpositive rho");
    }
    return inverse_ermakov_omega_sq(rho.as_schedule(), m, b, big_omega);
}

// --------------------------------------------------------------- coupling

double g_function(double t, const Scenario& s, GVariant variant) {
    s.check_time(t);
    const double mr1 = s.m[0].d1(t) / s.m[0].value(t);
    const double mr2 = s.m[1].d1(t) / s.m[1].value(t);
    const double rr1 = s.rho[0].d1(t) / s.rho[0].value(t);
    const double rr2 = s.rho[1].d1(t) / s.rho[1].value(t);
    switch (variant) {
    case GVariant::FirstMass: return mr1 + 3.0 * rr1 + rr2;
    case GVariant::SecondMass: return mr2 + rr1 + 3.0 * rr2;
    case GVariant::Symmetric: return 0.5 * (mr1 + mr2) + 2.0 * (rr1 + rr2);
    }
    throw std::invalid_argument("unknown G variant");
}

ScalarSchedule coupling_schedule(double d0, const ScalarSchedule& m1, const ScalarSchedule& rho1,
                                 const ScalarSchedule& rho2) {
    const TimeDomain dom = intersect(intersect(m1.domain(), rho1.domain()), rho2.domain());
    if (d0 == 0.0) return ScalarSchedule::constant(0.0, dom);
    const ScalarSchedule weight = m1 * pow(rho1, 3.0) * rho2;
    const double k = weight.value(dom.start);
    return ScalarSchedule::constant(d0 * k, dom) / weight;
}

// --------------------------------------------------------------- scenarios

Scenario build_inverse_scenario(const Constants& c, const PairOf<ScalarSchedule>& m,
                                const PairOf<ScalarSchedule>& b, const ScalarSchedule& rho1, double d0) {
    c.validate();
    require_positive(m[0], "mass m1");
    require_positive(m[1], "mass m2");
    require_positive(rho1, "rho");

    Scenario s;
    s.constants = c;
    s.m = m;
    s.b = b;
    s.mode = ScenarioMode::InverseConstructed;
    s.d0 = d0;
    s.domain = intersect(intersect(intersect(m[0].domain(), m[1].domain()), intersect(b[0].domain(), b[1].domain())),
                         rho1.domain());

    s.rho[0] = rho1;
    const ScalarSchedule mass_ratio =
        ScalarSchedule::constant(c.alpha0[0] / c.alpha0[1], s.domain) * m[0] / m[1];
    s.rho[1] = rho1 * sqrt(mass_ratio);

    for (int j = 0; j < 2; ++j) {
        s.omega_sq[j] = inverse_ermakov_omega_sq(s.rho[j], m[j], b[j], c.big_omega[j]);
        for (double t : probe_grid(s.domain)) {
            const double w2 = s.omega_sq[j].value(t);
            if (w2 < 0.0) {
                std::ostringstream os;
                os << "omega_" << (j + 1) << "^2 is negative (" << w2 << " at t = " << t
                   << "); inverted-oscillator regime";
                s.warnings.push_back(os.str());
                break;
            }
        }
    }
    s.d = coupling_schedule(d0, m[0], s.rho[0], s.rho[1]);
    return s;
}

Scenario build_forward_scenario(const Constants& c, const PairOf<ScalarSchedule>& m,
                                const PairOf<ScalarSchedule>& b, const PairOf<ScalarSchedule>& omega_sq,
                                const Pair& rho0, const Pair& rho_dot0, std::span<const double> grid,
                                const ErmakovOptions& opts) {
    c.validate();
    if (grid.size() < 2) throw std::invalid_argument("forward scenario needs a time grid");
    Scenario s;
    s.constants = c;
    s.m = m;
    s.b = b;
    s.omega_sq = omega_sq;
    s.mode = ScenarioMode::ForwardUncoupled;
    s.d0 = 0.0;
    s.domain = {grid.front(), grid.back()};
    for (int j = 0; j < 2; ++j) {
        const ErmakovSolution sol =
            solve_ermakov(m[j], b[j], omega_sq[j], c.big_omega[j], rho0[j], rho_dot0[j], grid, opts);
        s.rho[j] = sol.as_schedule();
    }
    s.d = ScalarSchedule::constant(0.0, s.domain);
    return s;
}

bool ValidationReport::within(double tol, bool coupled) const {
    if (!(coupling_ode_max_residual <= tol && ermakov_max_residual <= tol)) return false;
    if (coupled && !(mass_balance_max_residual <= tol && g_variant_max_spread <= tol)) return false;
    return true;
}

ValidationReport validate_scenario(const Scenario& s, std::span<const double> grid) {
    ValidationReport r;
    const auto& c = s.constants;
    for (double t : grid) {
        const double a1m1 = c.alpha0[0] * std::pow(s.rho[0].value(t), 2) * s.m[0].value(t);
        const double a2m2 = c.alpha0[1] * std::pow(s.rho[1].value(t), 2) * s.m[1].value(t);
        r.mass_balance_max_residual = std::max(r.mass_balance_max_residual, std::abs(a1m1 - a2m2) / a1m1);

        const double g1 = g_function(t, s, GVariant::FirstMass);
        const double dd = s.d.d1(t), gd = g1 * s.d.value(t);
        const double ode_scale = std::max(std::abs(dd), std::abs(gd));
        if (ode_scale > 0.0) r.coupling_ode_max_residual = std::max(r.coupling_ode_max_residual, std::abs(dd + gd) / ode_scale);

        const double g2 = g_function(t, s, GVariant::SecondMass);
        const double g3 = g_function(t, s, GVariant::Symmetric);
        const double g_scale = max_abs({s.m[0].d1(t) / s.m[0].value(t), s.m[1].d1(t) / s.m[1].value(t),
                                        3.0 * s.rho[0].d1(t) / s.rho[0].value(t),
                                        3.0 * s.rho[1].d1(t) / s.rho[1].value(t)});
        if (g_scale > 0.0) {
            const double spread = std::max({g1, g2, g3}) - std::min({g1, g2, g3});
            r.g_variant_max_spread = std::max(r.g_variant_max_spread, spread / g_scale);
        }
    }
    for (int j = 0; j < 2; ++j) {
        r.ermakov_max_residual =
            std::max(r.ermakov_max_residual,
                     ermakov_residual(s.rho[j], s.m[j], s.b[j], s.omega_sq[j], c.big_omega[j], grid));
    }
    return r;
}

bool is_uncoupled(const Scenario& s) {
    double v;
    return s.d.is_constant(&v) && v == 0.0;
}

double default_constraint_tol(const Scenario& s) {
    bool closed = s.d.closed_form();
    for (int j = 0; j < 2; ++j) {
        closed = closed && s.m[j].closed_form() && s.b[j].closed_form() && s.omega_sq[j].closed_form() &&
                 s.rho[j].closed_form();
    }
    return closed ? 1e-8 : 1e-6;
}

}  // namespace cosc
