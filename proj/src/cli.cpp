#include "cosc/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace cosc::cli {

using io::Json;

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> time_grid(const RunConfig& cfg, const Scenario& s) {
    const double a = cfg.t0.value_or(s.domain.start), b = cfg.t1.value_or(s.domain.end);
    if (!(b > a)) throw io::InputError("time window must satisfy t0 < t1");
    if (cfg.grid < 2) throw io::InputError("--grid needs at least two points");
    s.check_time(a);
    s.check_time(b);
    return linspace(a, b, static_cast<std::size_t>(cfg.grid));
}

double eval_time(const RunConfig& cfg, const Scenario& s) {
    const double t = cfg.time.value_or(cfg.t0.value_or(s.domain.start));
    s.check_time(t);
    return t;
}

bool closed_form(const Scenario& s) { return default_constraint_tol(s) < 1e-7; }

struct Check {
    std::string name;
    double value;
    double tolerance;
};

void add_checks(CommandResult& r, const std::vector<Check>& checks) {
    Json table = Json::object();
    Json failed = Json::array();
    for (const Check& c : checks) {
        const bool pass = c.value <= c.tolerance;
        table[c.name] = Json{{"value", c.value}, {"tolerance", c.tolerance}, {"passed", pass}};
        if (!pass) failed.push_back(c.name);
    }
    r.report["checks"] = table;
    r.report["failed"] = failed;
    r.report["ok"] = failed.empty();
    if (!failed.empty()) {
        r.exit_code = kCheckFailed;
        std::string names;
        for (const Json& f : failed) names += (names.empty() ? "" : ", ") + f.get<std::string>();
        r.message = r.report["command"].get<std::string>() + ": check failed: " + names;
    } else {
        r.message = r.report["command"].get<std::string>() + ": ok";
    }
}

// basis for checks that do not need a positive-definite invariant
FockBasisSpec check_basis(const Scenario& s, int cutoff, double t) {
    const DecoupledSpectrumData d = decouple(coefficients_at(t, s), s.constants);
    FockBasisSpec b;
    b.cutoff = cutoff;
    b.hbar = s.constants.hbar;
    b.mass_ref = s.constants.big_m;
    b.omega_ref = d.positive_definite ? std::max(d.omega_bar[0], d.omega_bar[1]) : std::max(d.omega0[0], d.omega0[1]);
    b.validate();
    return b;
}

// ------------------------------------------------------------------ commands

CommandResult cmd_scenario(const RunConfig& cfg, const Scenario& s) {
    const std::vector<double> grid = time_grid(cfg, s);
    const ValidationReport v = validate_scenario(s, grid);
    const double tol = cfg.tol.value_or(default_constraint_tol(s));

    CommandResult r;
    r.report = Json{{"command", "scenario"},
                    {"grid", Json{{"t0", grid.front()}, {"t1", grid.back()}, {"points", cfg.grid}}},
                    {"validation", io::to_json(v)},
                    {"scenario", io::scenario_to_json(s, grid)}};
    const bool coupled = !is_uncoupled(s);
    std::vector<Check> checks{{"coupling_ode_max_residual", v.coupling_ode_max_residual, tol},
                              {"ermakov_max_residual", v.ermakov_max_residual, tol}};
    if (coupled) {
        checks.push_back({"mass_balance_max_residual", v.mass_balance_max_residual, tol});
        checks.push_back({"g_variant_max_spread", v.g_variant_max_spread, tol});
    }
    add_checks(r, checks);

    std::ostringstream csv;
    csv << "t,m1,m2,b1,b2,omega1_sq,omega2_sq,rho1,rho2,d\n";
    for (double t : grid) {
        csv << fmt(t);
        for (const ScalarSchedule* x : {&s.m[0], &s.m[1], &s.b[0], &s.b[1], &s.omega_sq[0], &s.omega_sq[1],
                                        &s.rho[0], &s.rho[1], &s.d}) {
            csv << ',' << fmt(x->value(t));
        }
        csv << '\n';
    }
    r.csv = csv.str();
    return r;
}

CommandResult cmd_verify(const RunConfig& cfg, const Scenario& s) {
    const std::vector<double> grid = time_grid(cfg, s);
    const CoefficientFn coeffs =
        cfg.delta_scale == 1.0 ? coefficient_source(s) : scaled_delta_source(s, cfg.delta_scale);
    const int cutoff = cfg.cutoff > 0 ? cfg.cutoff : 20;
    const double h = 1e-4, dt = 1e-4;

    double ode = 0.0;
    for (double t : grid) {
        if (!s.domain.contains(t - h) || !s.domain.contains(t + h)) continue;
        ode = std::max(ode, coefficient_ode_residuals(t, s, coeffs, h).max());
    }

    double lvn = 0.0;
    const std::vector<double> lvn_times = linspace(grid.front(), grid.back(), 7);
    for (std::size_t i = 1; i + 1 < lvn_times.size(); ++i) {
        const double t = lvn_times[i];
        lvn = std::max(lvn, lvn_matrix_residual(t, s, check_basis(s, cutoff, t), dt, coeffs));
    }

    auto kappa = [&coeffs](double t) {
        const InvariantCoefficients k = coeffs(t);
        return k.delta * std::sqrt(k.alpha[0] * k.alpha[1]);
    };
    const double kappa0 = kappa(grid.front());
    double coupling = 0.0;
    for (double t : grid) coupling = std::max(coupling, std::abs(kappa(t) - kappa0));
    if (kappa0 != 0.0) coupling /= std::abs(kappa0);

    OdeOptions opts;
    const PhaseState z0{{1.0, 0.5}, {0.0, 0.3}, grid.front()};
    const Trajectory traj = integrate_classical(z0, grid, s, opts);
    const DriftReport drift = invariant_along_trajectory(traj, coeffs);

    const bool cf = closed_form(s);
    const double tol_ode = cfg.tol.value_or(1e-6), tol_lvn = cfg.tol.value_or(1e-5);
    const double tol_coupling = cfg.tol.value_or(cf ? 1e-9 : 1e-6), tol_drift = cfg.tol.value_or(1e-6);

    CommandResult r;
    r.report = Json{{"command", "verify"},
                    {"grid", Json{{"t0", grid.front()}, {"t1", grid.back()}, {"points", cfg.grid}}},
                    {"cutoff", cutoff},
                    {"delta_scale", cfg.delta_scale},
                    {"initial_state", Json{{"x", Json::array({z0.x[0], z0.x[1]})}, {"p", Json::array({z0.p[0], z0.p[1]})}}}};
    add_checks(r, {{"coefficient_ode", ode, tol_ode},
                   {"lvn", lvn, tol_lvn},
                   {"coupling_drift", coupling, tol_coupling},
                   {"classical_drift", drift.max_drift, tol_drift}});

    std::ostringstream csv;
    write_trajectory_csv(csv, traj, drift, s);
    r.csv = csv.str();
    return r;
}

CommandResult cmd_diagonalize(const RunConfig& cfg, const Scenario& s) {
    const std::vector<double> grid = time_grid(cfg, s);
    Json rows = Json::array();
    std::ostringstream csv;
    csv << "t,phi,omega_bar1_sq,omega_bar2_sq,delta_bar,coupling,symplectic_defect\n";

    double max_defect = 0.0, max_delta_bar = 0.0;
    DecoupledSpectrumData first;
    Pair wmin{1e300, 1e300}, wmax{-1e300, -1e300};
    double phi_min = 1e300, phi_max = -1e300;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        const InvariantCoefficients k = coefficients_at(t, s);
        const DecoupledSpectrumData d = decouple(k, s.constants);
        if (!d.positive_definite) throw NotPositiveDefiniteError();
        if (i == 0) first = d;
        const double defect = decoupling_map(k, s.constants, d.phi).symplectic_defect();
        const double scale = s.constants.big_m * std::max(std::abs(d.omega0_sq[0]), std::abs(d.omega0_sq[1]));
        max_defect = std::max(max_defect, defect);
        max_delta_bar = std::max(max_delta_bar, std::abs(d.delta_bar) / scale);
        for (int j = 0; j < 2; ++j) {
            wmin[j] = std::min(wmin[j], d.omega_bar[j]);
            wmax[j] = std::max(wmax[j], d.omega_bar[j]);
        }
        phi_min = std::min(phi_min, d.phi);
        phi_max = std::max(phi_max, d.phi);
        rows.push_back(Json{{"t", t},
                            {"phi", d.phi},
                            {"omega_bar_sq", Json::array({d.omega_bar_sq[0], d.omega_bar_sq[1]})},
                            {"delta_bar", d.delta_bar},
                            {"coupling", d.coupling},
                            {"symplectic_defect", defect}});
        csv << fmt(t) << ',' << fmt(d.phi) << ',' << fmt(d.omega_bar_sq[0]) << ',' << fmt(d.omega_bar_sq[1]) << ','
            << fmt(d.delta_bar) << ',' << fmt(d.coupling) << ',' << fmt(defect) << '\n';
    }
    const double omega_spread = std::max((wmax[0] - wmin[0]) / wmax[0], (wmax[1] - wmin[1]) / wmax[1]);
    const double phi_spread = (phi_max - phi_min) / std::max(1.0, std::abs(phi_max));

    const double tol_const = cfg.tol.value_or(closed_form(s) ? 1e-9 : 1e-6);
    const double tol_delta = cfg.tol.value_or(1e-12);
    CommandResult r;
    Json dec = io::to_json(first);
    dec["t"] = grid.front();
    r.report = Json{{"command", "diagonalize"}, {"decoupled", dec}, {"times", rows}};
    add_checks(r, {{"symplectic_defect", max_defect, 1e-12},
                   {"scaled_delta_bar", max_delta_bar, tol_delta},
                   {"omega_bar_relative_spread", omega_spread, tol_const},
                   {"phi_relative_spread", phi_spread, tol_const}});
    r.csv = csv.str();
    return r;
}

CommandResult cmd_spectrum(const RunConfig& cfg, const Scenario& s) {
    const double t = eval_time(cfg, s);
    const int cutoff = cfg.cutoff > 0 ? cfg.cutoff : 30;
    const FockBasisSpec basis = default_basis(s, cutoff, t);
    const SpectrumReport rep = spectrum_check(t, s, basis, cfg.k);

    CommandResult r;
    r.report = io::to_json(rep);
    r.report["command"] = "spectrum";
    r.report["t"] = t;
    r.report["k"] = cfg.k;
    r.report["basis"] = io::to_json(basis);
    add_checks(r, {{"max_deviation", rep.max_deviation, cfg.tol.value_or(1e-6)}});

    std::ostringstream csv;
    csv << "n1,n2,lambda_theory,lambda_matrix,deviation\n";
    for (const SpectrumEntry& e : rep.entries) {
        csv << e.n1 << ',' << e.n2 << ',' << fmt(e.lambda_theory) << ',' << fmt(e.lambda_matrix) << ','
            << fmt(e.deviation) << '\n';
    }
    r.csv = csv.str();
    return r;
}

CommandResult cmd_eigen(const RunConfig& cfg, const Scenario& s) {
    const double t = eval_time(cfg, s);
    if (cfg.nmax < 0) throw io::InputError("--nmax must be non-negative");
    const EigenfunctionEvaluator ev(t, s);
    const std::vector<FockLabel> labels = labels_up_to(cfg.nmax);
    const GridSpec quad = default_grid(ev, 8.0, cfg.points);
    const Eigen::MatrixXcd g = gram_matrix(labels, ev, quad);
    const double defect = (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();

    const Pair ell = ev.characteristic_length();
    const GridSpec fd = uniform_grid({8.0 * ell[0], 8.0 * ell[1]}, cfg.h);
    Json residuals = Json::array(), label_list = Json::array();
    double worst = 0.0;
    for (const FockLabel& l : labels) {
        const double res = eigen_residual(l, ev, fd);
        worst = std::max(worst, res);
        residuals.push_back(Json{{"n1", l.n1}, {"n2", l.n2}, {"lambda", ev.eigenvalue(l)}, {"residual", res}});
        label_list.push_back(Json::array({l.n1, l.n2}));
    }
    Json re = Json::array(), im = Json::array();
    for (Eigen::Index a = 0; a < g.rows(); ++a) {
        Json rr = Json::array(), ii = Json::array();
        for (Eigen::Index b = 0; b < g.cols(); ++b) {
            rr.push_back(g(a, b).real());
            ii.push_back(g(a, b).imag());
        }
        re.push_back(rr);
        im.push_back(ii);
    }

    CommandResult r;
    r.report = Json{{"command", "eigen"},
                    {"t", t},
                    {"labels", label_list},
                    {"decoupled", io::to_json(ev.decoupled())},
                    {"quadrature", Json{{"rule", "gauss-legendre"},
                                        {"points", cfg.points},
                                        {"half_width", Json::array({quad.half_width[0], quad.half_width[1]})}}},
                    {"gram", Json{{"real", re}, {"imag", im}}},
                    {"fd_spacing", cfg.h},
                    {"residuals", residuals}};
    add_checks(r, {{"gram_identity_defect", defect, cfg.tol.value_or(1e-6)}, {"max_eigen_residual", worst, 1e-2}});

    // CSV: ground-state grid dump over the quadrature extent
    GridSpec dump;
    dump.rule = QuadratureRule::Trapezoid;
    dump.half_width = quad.half_width;
    dump.points = {101, 101};
    std::ostringstream csv;
    write_eigenfunction_csv(csv, labels.front(), ev, dump);
    r.csv = csv.str();
    return r;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p);
    if (!f) throw io::InputError("cannot write " + p.string());
    f << text;
}

}  // namespace

CommandResult execute(const RunConfig& cfg, const Scenario& s) {
    if (cfg.command == "scenario") return cmd_scenario(cfg, s);
    if (cfg.command == "verify") return cmd_verify(cfg, s);
    if (cfg.command == "diagonalize") return cmd_diagonalize(cfg, s);
    if (cfg.command == "spectrum") return cmd_spectrum(cfg, s);
    if (cfg.command == "eigen") return cmd_eigen(cfg, s);
    throw io::InputError("unknown command \"" + cfg.command + "\"");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Invariant toolkit for two coupled time-dependent oscillators", "cosc"};
    app.add_option("command", cfg.command, "scenario | verify | diagonalize | spectrum | eigen")
        ->required()
        ->check(CLI::IsMember({"scenario", "verify", "diagonalize", "spectrum", "eigen"}));
    app.add_option("--scenario", cfg.scenario_path, "scenario JSON file")->required();
    app.add_option("--t0", cfg.t0, "start of the time window (default: domain start)");
    app.add_option("--t1", cfg.t1, "end of the time window (default: domain end)");
    app.add_option("--grid", cfg.grid, "time grid points")->capture_default_str();
    app.add_option("--cutoff", cfg.cutoff, "Fock cutoff per mode (verify 20, spectrum 30)");
    app.add_option("--tol", cfg.tol, "override every check tolerance")->check(CLI::PositiveNumber);
    app.add_option("--out", cfg.out_dir, "output directory (default: stdout)");
    app.add_option("--format", cfg.format, "json | csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    app.add_option("--time", cfg.time, "evaluation time for spectrum and eigen (default: t0)");
    app.add_option("--k", cfg.k, "number of eigenvalues for spectrum")->capture_default_str();
    app.add_option("--nmax", cfg.nmax, "eigen: labels with n1 + n2 <= nmax")->capture_default_str();
    app.add_option("--delta-scale", cfg.delta_scale, "verify: multiply delta (detection test)")->capture_default_str();
    app.add_flag("--dump-matrix", cfg.dump_matrix, "spectrum: write the invariant matrix (needs --out)");
    app.add_option("--points", cfg.points, "eigen: quadrature points per axis")->capture_default_str();
    app.add_option("--fd-step", cfg.h, "eigen: finite-difference spacing")->capture_default_str();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }

    try {
        if (cfg.dump_matrix && cfg.out_dir.empty()) throw io::InputError("--dump-matrix needs --out");
        const Scenario s = io::load_scenario(cfg.scenario_path);
        for (const std::string& w : s.warnings) err << "warning: " << w << '\n';
        CommandResult r = execute(cfg, s);

        if (cfg.out_dir.empty()) {
            out << (cfg.format == "csv" ? r.csv : io::dump(r.report));
        } else {
            const std::filesystem::path dir(cfg.out_dir);
            std::filesystem::create_directories(dir);
            write_file(dir / (cfg.command + ".json"), io::dump(r.report));
            if (cfg.format == "csv") write_file(dir / (cfg.command + ".csv"), r.csv);
            if (cfg.dump_matrix) {
                const double t = eval_time(cfg, s);
                const int cutoff = cfg.cutoff > 0 ? cfg.cutoff : 30;
                std::ostringstream m;
                write_matrix_text(m, invariant_matrix(t, s, default_basis(s, cutoff, t)).matrix);
                write_file(dir / "invariant_matrix.txt", m.str());
            }
            out << r.message << '\n';
        }
        if (r.exit_code != kSuccess) err << r.message << '\n';
        return r.exit_code;
    } catch (const ConstraintError& e) {
        err << "error: " << e.what() << '\n';
        return kCheckFailed;
    } catch (const io::InputError& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const ParseError& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const io::Json::exception& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::invalid_argument& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        // domain violations, Ermakov failures, non-positive-definite invariants
        err << "error: " << e.what() << '\n';
        return kCheckFailed;
    }
}

}  // namespace cosc::cli
