#include "cosc/invariant.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace cosc;
using cosc::testing::asymmetric_scenario;
using cosc::testing::constant_scenario;
using cosc::testing::modulated_scenario;

TEST_CASE("coefficients of the constant scenario") {
    const InvariantCoefficients k = coefficients_at(0.0, constant_scenario());
    CHECK(k.alpha == Pair{1, 1});
    CHECK(k.beta == Pair{0, 0});
    CHECK(k.gamma == Pair{1, 1});
    CHECK(k.delta == doctest::Approx(0.2).epsilon(1e-15));
    CHECK_THROWS_AS(coefficients_at(-1.0, constant_scenario()), DomainError);
}

TEST_CASE("beta vanishes when b = 0 and rho' = 0") {
    const Scenario s = modulated_scenario();
    const double t = M_PI / 2;  // rho' = 0 here
    CHECK(s.rho[0].d1(t) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    const InvariantCoefficients k = coefficients_at(t, s);
    CHECK(std::abs(k.beta[0]) < 1e-15);
    CHECK(std::abs(k.beta[1]) < 1e-15);
}

TEST_CASE("alpha gamma - beta^2 equals alpha0^2 Omega^2 / 4") {
    std::mt19937 rng(11);
    for (const Scenario& s : {constant_scenario(), modulated_scenario(), asymmetric_scenario()}) {
        std::uniform_real_distribution<double> u(s.domain.start, s.domain.end);
        for (int i = 0; i < 100; ++i) {
            const InvariantCoefficients k = coefficients_at(u(rng), s);
            for (int j = 0; j < 2; ++j) {
                const double expected = std::pow(s.constants.alpha0[j] * s.constants.big_omega[j], 2) / 4;
                CHECK(k.alpha[j] > 0);
                CHECK(std::abs(k.alpha[j] * k.gamma[j] - k.beta[j] * k.beta[j] - expected) <= 1e-10 * expected);
            }
        }
    }
}

TEST_CASE("coefficient ODE residuals") {
    SUBCASE("constant scenario") {
        const Scenario s = constant_scenario();
        for (double t : {0.5, 3.0, 12.0}) CHECK(coefficient_ode_residuals(t, s).max() < 1e-8);
    }
    SUBCASE("time-dependent scenarios") {
        for (const Scenario& s : {modulated_scenario(), asymmetric_scenario()}) {
            for (double t : {0.5, 2.0, 4.4, 7.9}) CHECK(coefficient_ode_residuals(t, s).max() < 1e-6);
        }
    }
    SUBCASE("second order in h") {
        const Scenario s = asymmetric_scenario();
        for (double t : {1.0, 3.3}) {
            const double r1 = coefficient_ode_residuals(t, s, 0.04).max();
            const double r2 = coefficient_ode_residuals(t, s, 0.02).max();
            CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.05));
            // Richardson removes the leading term
            CHECK(coefficient_ode_residuals(t, s, 0.04, true).max() < 0.05 * r2);
        }
    }
    SUBCASE("constant d with nonzero G is flagged") {
        Scenario s = modulated_scenario();
        s.d = ScalarSchedule::constant(0.2, s.domain);
        const double t = 0.3;
        const CoefficientOdeResiduals r = coefficient_ode_residuals(t, s);
        // lhs = delta' = 2 rho rho' d, rhs = -2 d rho rho'; scaled mismatch is 2
        CHECK(r.delta == doctest::Approx(2.0).epsilon(1e-6));
        CHECK(r.alpha[0] < 1e-6);
    }
    SUBCASE("step leaving the domain") {
        CHECK_THROWS_AS(coefficient_ode_residuals(0.0, constant_scenario()), DomainError);
    }
}

TEST_CASE("conserved coupling") {
    const Scenario s1 = constant_scenario();
    for (double t : {0.0, 7.0, 20.0}) CHECK(conserved_coupling(t, s1) == doctest::Approx(0.2).epsilon(1e-15));

    const Scenario s2 = modulated_scenario();
    const double c0 = conserved_coupling(0.0, s2);
    for (double t : linspace(0.0, 20.0, 401)) CHECK(std::abs(conserved_coupling(t, s2) - c0) <= 1e-9 * c0);
    CHECK(std::abs(conserved_coupling(5.0, s2) - conserved_coupling(1.0, s2)) <= 1e-9 * c0);

    const Scenario as = asymmetric_scenario();
    const double a0 = conserved_coupling(0.0, as);
    for (double t : linspace(0.0, 10.0, 201)) CHECK(std::abs(conserved_coupling(t, as) - a0) <= 1e-9 * a0);

    CHECK(conserved_coupling(3.0, modulated_scenario(0.0)) == 0.0);
}

TEST_CASE("classical right-hand side") {
    const Scenario s = constant_scenario();
    PhaseState z{{1, 0}, {0, 0}, 0.0};
    const PhaseState dz = classical_rhs(z, s);
    CHECK(dz.x == Pair{0, 0});
    CHECK(dz.p[0] == -1.0);
    CHECK(dz.p[1] == doctest::Approx(-0.2).epsilon(1e-15));

    const PhaseState origin = classical_rhs(PhaseState{{0, 0}, {0, 0}, 3.0}, s);
    CHECK(origin.x == Pair{0, 0});
    CHECK(origin.p == Pair{0, 0});
}

TEST_CASE("eliminating p reproduces the second-order equations of motion") {
    const Scenario s = asymmetric_scenario();
    const auto grid = linspace(0.0, 10.0, 2001);
    OdeOptions tight;
    tight.abs_tol = tight.rel_tol = 1e-12;
    const Trajectory traj = integrate_classical(PhaseState{{0.7, -0.4}, {0.1, 0.3}, 0.0}, grid, s, tight);

    const double h = grid[1] - grid[0];
    for (std::size_t i = 1; i + 1 < traj.size(); i += 97) {
        const PhaseState& z = traj[i];
        const double t = z.t;
        const PhaseState dz = classical_rhs(z, s);
        for (int j = 0; j < 2; ++j) {
            const double m = s.m[j].value(t), md = s.m[j].d1(t), b = s.b[j].value(t);
            // x'' from differentiating x' = p/m + b x
            const double xdd = dz.p[j] / m - z.p[j] * md / (m * m) + s.b[j].d1(t) * z.x[j] + b * dz.x[j];
            const double wt2 = modified_frequency_sq(j, t, s);
            const double terms[] = {xdd, md / m * dz.x[j], wt2 * z.x[j], s.d.value(t) / m * z.x[1 - j]};
            double sum = 0, scale = 0;
            for (double v : terms) {
                sum += v;
                scale = std::max(scale, std::abs(v));
            }
            CHECK(std::abs(sum) <= 1e-8 * scale);

            // oracle: central second difference of the integrated x_j
            const double xdd_fd = (traj[i + 1].x[j] - 2 * z.x[j] + traj[i - 1].x[j]) / (h * h);
            CHECK(xdd_fd == doctest::Approx(xdd).epsilon(1e-4).scale(scale));
        }
    }
}

TEST_CASE("classical trajectories of the constant scenario") {
    const auto grid = linspace(0.0, 20.0, 401);
    SUBCASE("uncoupled") {
        const Trajectory tr = integrate_classical(PhaseState{{1, 0}, {0, 0}, 0.0}, grid, constant_scenario(0.0));
        for (const auto& z : tr) CHECK(std::abs(z.x[0] - std::cos(z.t)) < 1e-8);
    }
    const Scenario s = constant_scenario();
    SUBCASE("symmetric normal mode") {
        const Trajectory tr = integrate_classical(PhaseState{{1, 1}, {0, 0}, 0.0}, grid, s);
        for (const auto& z : tr) {
            CHECK(std::abs(z.x[0] - std::cos(std::sqrt(1.2) * z.t)) < 1e-6);
            CHECK(std::abs(z.x[1] - z.x[0]) < 1e-6);
        }
    }
    SUBCASE("antisymmetric normal mode") {
        const Trajectory tr = integrate_classical(PhaseState{{1, -1}, {0, 0}, 0.0}, grid, s);
        for (const auto& z : tr) CHECK(std::abs(z.x[0] - std::cos(std::sqrt(0.8) * z.t)) < 1e-6);
    }
    SUBCASE("start time must match") {
        CHECK_THROWS_AS(integrate_classical(PhaseState{{1, 0}, {0, 0}, 1.0}, grid, s), std::invalid_argument);
    }
}

TEST_CASE("invariant is conserved along classical trajectories") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 3; ++trial) {
        const PhaseState z0{{u(rng), u(rng)}, {u(rng), u(rng)}, 0.0};
        const DriftReport r1 =
            invariant_along_trajectory(integrate_classical(z0, linspace(0, 20, 401), constant_scenario()),
                                       constant_scenario());
        CHECK(r1.relative);
        CHECK(r1.max_drift < 1e-8);

        const Scenario s2 = modulated_scenario();
        const DriftReport r2 = invariant_along_trajectory(integrate_classical(z0, linspace(0, 10, 201), s2), s2);
        CHECK(r2.max_drift < 1e-6);

        const Scenario as = asymmetric_scenario();
        const DriftReport r3 = invariant_along_trajectory(integrate_classical(z0, linspace(0, 10, 201), as), as);
        CHECK(r3.max_drift < 1e-6);
    }
}

TEST_CASE("tighter integration reduces the drift") {
    const Scenario s = modulated_scenario();
    const PhaseState z0{{0.5, -0.3}, {0.2, 0.9}, 0.0};
    const auto grid = linspace(0, 10, 11);
    double prev = 1.0;
    for (double tol : {1e-5, 1e-7, 1e-9, 1e-11}) {
        OdeOptions o;
        o.abs_tol = o.rel_tol = tol;
        const double drift = invariant_along_trajectory(integrate_classical(z0, grid, s, o), s).max_drift;
        CAPTURE(tol);
        CHECK(drift < prev);
        prev = drift;
    }
}

TEST_CASE("zero state reports absolute drift") {
    const Scenario s = modulated_scenario();
    const DriftReport r =
        invariant_along_trajectory(integrate_classical(PhaseState{}, linspace(0, 10, 11), s), s);
    CHECK_FALSE(r.relative);
    CHECK(r.initial == 0.0);
    CHECK(r.max_drift == 0.0);
}

TEST_CASE("corrupted delta breaks classical conservation") {
    const Scenario s = constant_scenario();
    const Trajectory tr = integrate_classical(PhaseState{{1, 0}, {0, 0}, 0.0}, linspace(0, 10, 101), s);
    CHECK(invariant_along_trajectory(tr, scaled_delta_source(s, 1.5)).max_drift > 1e-2);
}

TEST_CASE("trajectory CSV export") {
    const Scenario s = constant_scenario();
    const Trajectory tr = integrate_classical(PhaseState{{1, 0}, {0, 0}, 0.0}, linspace(0, 1, 3), s);
    const DriftReport r = invariant_along_trajectory(tr, s);
    std::ostringstream os;
    write_trajectory_csv(os, tr, r, s);
    const std::string out = os.str();
    CHECK(out.rfind("t,x1,x2,p1,p2,I,residual\n", 0) == 0);
    CHECK(std::count(out.begin(), out.end(), '\n') == 4);
    // end points have no centred residual
    CHECK(out.find("0,1,0,0,0,0.5,\n") != std::string::npos);
}
