// ode.hpp - adaptive Dormand-Prince 5(4) integration sampled on a grid.

#pragma once

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cosc {

class OdeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OdeOptions {
    double abs_tol{1e-10};
    double rel_tol{1e-10};
    double initial_step{1e-3};
    /// Upper bound on internal steps between two consecutive grid points.
    std::size_t max_steps_per_interval{200000};
};

/// Integrates y' = rhs(y, t) from grid.front() and returns the state at every
/// grid time. `inspect(state, t)` runs on every returned sample and may throw
/// to abort.
template <std::size_t N, class Rhs, class Inspect>
std::vector<std::array<double, N>> integrate_on_grid(Rhs&& rhs, std::array<double, N> y0,
                                                     std::span<const double> grid,
                                                     const OdeOptions& opts, Inspect&& inspect) {
    namespace odeint = boost::numeric::odeint;
    using State = std::array<double, N>;

    if (grid.empty()) throw std::invalid_argument("empty integration grid");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("integration grid must increase");
    }

    std::vector<State> out;
    out.reserve(grid.size());
    auto system = [&rhs](const State& y, State& dydt, double t) { dydt = rhs(y, t); };
    auto observer = [&](const State& y, double t) {
        inspect(y, t);
        out.push_back(y);
    };

    if (grid.size() == 1) {
        observer(y0, grid.front());
        return out;
    }

    // controlled stepping lands exactly on every grid time
    auto stepper = odeint::make_controlled(opts.abs_tol, opts.rel_tol, odeint::runge_kutta_dopri5<State>());
    try {
        odeint::integrate_times(stepper, system, y0, grid.begin(), grid.end(), opts.initial_step, observer,
                                odeint::max_step_checker(static_cast<int>(opts.max_steps_per_interval)));
    } catch (const odeint::step_adjustment_error& e) {
        throw OdeError(std::string("integrator tolerance not met: ") + e.what());
    } catch (const odeint::no_progress_error& e) {
        throw OdeError(std::string("integrator made no progress: ") + e.what());
    }
    return out;
}

template <std::size_t N, class Rhs>
std::vector<std::array<double, N>> integrate_on_grid(Rhs&& rhs, std::array<double, N> y0,
                                                     std::span<const double> grid,
                                                     const OdeOptions& opts = {}) {
    return integrate_on_grid<N>(std::forward<Rhs>(rhs), y0, grid, opts, [](const auto&, double) {});
}

/// n equally spaced points covering [a, b] inclusive.
std::vector<double> linspace(double a, double b, std::size_t n);

}  // namespace cosc
