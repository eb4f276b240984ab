#include "cosc/fock.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace cosc {

void FockBasisSpec::validate() const {
    if (cutoff < 4) throw std::invalid_argument("Fock cutoff must be at least 4");
    if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
    if (!(mass_ref > 0.0) || !(omega_ref > 0.0)) {
        throw std::invalid_argument("basis reference mass and frequency must be positive");
    }
}

FockBasisSpec default_basis(const Scenario& s, int cutoff, double t) {
    const DecoupledSpectrumData d = decouple(coefficients_at(t, s), s.constants);
    if (!d.positive_definite) throw NotPositiveDefiniteError();
    FockBasisSpec spec;
    spec.cutoff = cutoff;
    spec.hbar = s.constants.hbar;
    spec.mass_ref = s.constants.big_m;
    spec.omega_ref = std::max(d.omega_bar[0], d.omega_bar[1]);
    spec.validate();
    return spec;
}

FockOperator::FockOperator(MatrixC m, const FockBasisSpec& b) : matrix(std::move(m)), basis(b) {
    const double norm = matrix.norm();
    hermitian = (matrix - matrix.adjoint()).norm() <= 1e-12 * std::max(norm, std::numeric_limits<double>::min());
}

namespace {

// Single-mode matrices of dimension n.
MatrixC annihilation(int n) {
    MatrixC a = MatrixC::Zero(n, n);
    for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    return a;
}

struct SingleMode {
    MatrixC x, p;           // linear
    MatrixC xx, pp, xp;     // x^2, p^2, (xp + px)/2, exact elements
};

SingleMode single_mode(const FockBasisSpec& spec) {
    const int n = spec.cutoff;
    const double lx = std::sqrt(spec.hbar / (2.0 * spec.mass_ref * spec.omega_ref));
    const double lp = std::sqrt(spec.mass_ref * spec.omega_ref * spec.hbar / 2.0);
    const Complex i(0.0, 1.0);

    // two extra levels make every product exact on the first n levels
    const int big = n + 2;
    const MatrixC a = annihilation(big);
    const MatrixC x = lx * (a + a.adjoint());
    const MatrixC p = i * lp * (a.adjoint() - a);

    SingleMode m;
    m.x = x.topLeftCorner(n, n);
    m.p = p.topLeftCorner(n, n);
    m.xx = (x * x).topLeftCorner(n, n);
    m.pp = (p * p).topLeftCorner(n, n);
    m.xp = (0.5 * (x * p + p * x)).topLeftCorner(n, n);
    return m;
}

MatrixC kron(const MatrixC& a, const MatrixC& b) {
    const Eigen::Index ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
    MatrixC out = MatrixC::Zero(ra * rb, ca * cb);
    for (Eigen::Index i = 0; i < ra; ++i) {
        for (Eigen::Index j = 0; j < ca; ++j) {
            if (a(i, j) == Complex(0.0)) continue;
            out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
        }
    }
    return out;
}

// Embeds single-mode operator `op` on mode j of the two-mode space.
MatrixC on_mode(int j, const MatrixC& op) {
    const MatrixC id = MatrixC::Identity(op.rows(), op.cols());
    return j == 0 ? kron(op, id) : kron(id, op);
}

}  // namespace

ModeOperators mode_operators(const FockBasisSpec& spec) {
    spec.validate();
    const SingleMode sm = single_mode(spec);
    const MatrixC a = annihilation(spec.cutoff);
    ModeOperators ops;
    for (int j = 0; j < 2; ++j) {
        ops.a[j] = on_mode(j, a);
        ops.adag[j] = on_mode(j, a.adjoint());
        ops.x[j] = on_mode(j, sm.x);
        ops.p[j] = on_mode(j, sm.p);
    }
    return ops;
}

std::vector<int> inner_indices(const FockBasisSpec& spec, int margin) {
    const int top = spec.cutoff - 1 - margin;
    std::vector<int> idx;
    for (int n1 = 0; n1 <= top; ++n1) {
        for (int n2 = 0; n2 <= top; ++n2) idx.push_back(spec.index(n1, n2));
    }
    return idx;
}

MatrixC restrict_to(const MatrixC& m, const std::vector<int>& idx) {
    const auto n = static_cast<Eigen::Index>(idx.size());
    MatrixC out(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) out(r, c) = m(idx[r], idx[c]);
    }
    return out;
}

FockOperator quadratic_operator(const QuadraticForm& form, const FockBasisSpec& spec) {
    spec.validate();
    const SingleMode sm = single_mode(spec);
    const MatrixC id = MatrixC::Identity(spec.cutoff, spec.cutoff);
    const int dim = spec.dimension();
    MatrixC out = MatrixC::Zero(dim, dim);

    // same-mode terms: 1/2 (S_xx x^2 + S_pp p^2) + S_xp sym(xp)
    for (int j = 0; j < 2; ++j) {
        const int x = kX1 + j, p = kP1 + j;
        const MatrixC local = 0.5 * form(x, x) * sm.xx + 0.5 * form(p, p) * sm.pp + form(x, p) * sm.xp;
        out += j == 0 ? kron(local, id) : kron(id, local);
    }
    // cross-mode factors commute: S_ab z_a z_b for a on mode 1, b on mode 2
    const MatrixC* first[2] = {&sm.x, &sm.p};
    const int first_idx[2] = {kX1, kP1};
    const int second_idx[2] = {kX2, kP2};
    for (int u = 0; u < 2; ++u) {
        for (int v = 0; v < 2; ++v) {
            const double c = form(first_idx[u], second_idx[v]);
            if (c != 0.0) out += c * kron(*first[u], *first[v]);
        }
    }
    return FockOperator(std::move(out), spec);
}

QuadraticForm hamiltonian_form(double t, const Scenario& s) {
    s.check_time(t);
    Mat4 h = Mat4::Zero();
    for (int j = 0; j < 2; ++j) {
        const double m = s.m[j].value(t);
        h(kX1 + j, kX1 + j) = m * s.omega_sq[j].value(t);
        h(kP1 + j, kP1 + j) = 1.0 / m;
        h(kX1 + j, kP1 + j) = h(kP1 + j, kX1 + j) = s.b[j].value(t);
    }
    h(kX1, kX2) = h(kX2, kX1) = s.d.value(t);
    return QuadraticForm(h);
}

FockOperator hamiltonian_matrix(double t, const Scenario& s, const FockBasisSpec& spec) {
    return quadratic_operator(hamiltonian_form(t, s), spec);
}

FockOperator invariant_matrix(const InvariantCoefficients& k, const FockBasisSpec& spec) {
    return quadratic_operator(to_quadratic_form(k), spec);
}

FockOperator invariant_matrix(double t, const Scenario& s, const FockBasisSpec& spec) {
    return invariant_matrix(coefficients_at(t, s), spec);
}

double lvn_matrix_residual(double t, const Scenario& s, const FockBasisSpec& spec, double dt,
                           const CoefficientFn& coeffs) {
    spec.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    s.check_time(t - dt);
    s.check_time(t + dt);

    FockBasisSpec padded = spec;
    padded.cutoff = spec.cutoff + 1;
    const MatrixC i0 = invariant_matrix(coeffs(t), padded).matrix;
    const MatrixC ip = invariant_matrix(coeffs(t + dt), padded).matrix;
    const MatrixC im = invariant_matrix(coeffs(t - dt), padded).matrix;
    const MatrixC h = hamiltonian_matrix(t, s, padded).matrix;

    const Complex i_hbar(0.0, spec.hbar);
    const MatrixC r = (ip - im) / (2.0 * dt) + (i0 * h - h * i0) / i_hbar;

    // n_j <= N - 2 in the padded basis of cutoff N + 1
    const std::vector<int> idx = inner_indices(padded, 2);
    const double norm = restrict_to(i0, idx).norm();
    const double res = restrict_to(r, idx).norm();
    return norm == 0.0 ? res : res / norm;
}

double lvn_matrix_residual(double t, const Scenario& s, const FockBasisSpec& spec, double dt) {
    return lvn_matrix_residual(t, s, spec, dt, coefficient_source(s));
}

LadderOperators ladder_matrices(double t, const Scenario& s, const FockBasisSpec& spec) {
    const InvariantCoefficients k = coefficients_at(t, s);
    LadderOperators out;
    out.decoupled = decouple(k, s.constants);
    if (!out.decoupled.positive_definite) throw NotPositiveDefiniteError();

    const ModeOperators ops = mode_operators(spec);
    const double cs = std::cos(out.decoupled.phi), sn = std::sin(out.decoupled.phi);
    PairOf<MatrixC> shifted;  // p_j + (beta_j / alpha_j) x_j
    for (int j = 0; j < 2; ++j) shifted[j] = ops.p[j] + (k.beta[j] / k.alpha[j]) * ops.x[j];

    const double r1 = std::sqrt(k.alpha[0]), r2 = std::sqrt(k.alpha[1]);
    // rows of the rotation: mode 1 uses (c, s), mode 2 uses (-s, c)
    const Pair u1{cs, sn}, u2{-sn, cs};
    const Pair* rows[2] = {&u1, &u2};
    const Complex i(0.0, 1.0);
    for (int j = 0; j < 2; ++j) {
        const Pair& u = *rows[j];
        const double w = out.decoupled.omega_bar[j];
        const MatrixC big_x = (u[0] / r1) * ops.x[0] + (u[1] / r2) * ops.x[1];
        const MatrixC big_p = (r1 * u[0]) * shifted[0] + (r2 * u[1]) * shifted[1];
        out.a[j] = (w * big_x + i * big_p) / std::sqrt(2.0 * spec.hbar * w);
        out.adag[j] = out.a[j].adjoint();
    }
    return out;
}

MatrixC ladder_reconstruction(const LadderOperators& l, double hbar) {
    const Eigen::Index n = l.a[0].rows();
    MatrixC out = MatrixC::Zero(n, n);
    for (int j = 0; j < 2; ++j) {
        const double w = l.decoupled.omega_bar[j];
        out += hbar * w * (l.adag[j] * l.a[j] + 0.5 * MatrixC::Identity(n, n));
    }
    return out;
}

std::vector<double> lowest_eigenvalues(const MatrixC& m, int k) {
    Eigen::SelfAdjointEigenSolver<MatrixC> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian eigensolver failed");
    const Eigen::VectorXd& ev = solver.eigenvalues();  // ascending
    const int n = std::min<int>(k, static_cast<int>(ev.size()));
    return std::vector<double>(ev.data(), ev.data() + n);
}

SpectrumReport spectrum_check(double t, const Scenario& s, const FockBasisSpec& spec, int k) {
    spec.validate();
    if (k < 1) throw std::invalid_argument("spectrum size must be positive");
    if (k > spec.dimension() / 4) throw std::invalid_argument("too many eigenvalues requested for the cutoff");

    SpectrumReport report;
    report.decoupled = decouple(coefficients_at(t, s), s.constants);
    if (!report.decoupled.positive_definite) throw NotPositiveDefiniteError();
    const Pair& w = report.decoupled.omega_bar;
    const double hbar = spec.hbar;

    // candidate labels: every lattice point at or below the 2k-th smallest
    struct Label {
        int n1, n2;
        double lambda;
    };
    std::vector<Label> lattice;
    for (int n1 = 0; n1 < 2 * k; ++n1) {
        for (int n2 = 0; n2 < 2 * k; ++n2) {
            lattice.push_back({n1, n2, hbar * w[0] * (n1 + 0.5) + hbar * w[1] * (n2 + 0.5)});
        }
    }
    std::sort(lattice.begin(), lattice.end(), [](const Label& a, const Label& b) { return a.lambda < b.lambda; });
    lattice.resize(2 * k);

    const std::vector<double> ev = lowest_eigenvalues(invariant_matrix(t, s, spec).matrix, k);
    std::vector<bool> used(lattice.size(), false);
    for (double lam : ev) {
        std::size_t best = lattice.size();
        for (std::size_t c = 0; c < lattice.size(); ++c) {
            if (used[c]) continue;
            if (best == lattice.size() ||
                std::abs(lattice[c].lambda - lam) < std::abs(lattice[best].lambda - lam)) {
                best = c;
            }
        }
        used[best] = true;
        SpectrumEntry e{lattice[best].n1, lattice[best].n2, lattice[best].lambda, lam,
                        std::abs(lam - lattice[best].lambda)};
        report.max_deviation = std::max(report.max_deviation, e.deviation);
        report.entries.push_back(e);
    }
    return report;
}

SpectrumComparison transformed_spectrum_comparison(double t, const Scenario& s, const FockBasisSpec& spec, int k) {
    const InvariantCoefficients coeffs = coefficients_at(t, s);
    const DecoupledSpectrumData d = decouple(coeffs, s.constants);
    if (!d.positive_definite) throw NotPositiveDefiniteError();
    const QuadraticForm decoupled =
        transform(to_quadratic_form(coeffs), decoupling_map(coeffs, s.constants, d.phi));

    SpectrumComparison out;
    out.invariant_path = lowest_eigenvalues(invariant_matrix(coeffs, spec).matrix, k);
    out.transformed_path = lowest_eigenvalues(quadratic_operator(decoupled, spec).matrix, k);
    for (std::size_t i = 0; i < out.invariant_path.size(); ++i) {
        out.max_difference = std::max(out.max_difference, std::abs(out.invariant_path[i] - out.transformed_path[i]));
    }
    return out;
}

void write_matrix_text(std::ostream& os, const MatrixC& m) {
    char buf[64];
    os << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g %.17g", m(r, c).real(), m(r, c).imag());
            os << (c ? " " : "") << buf;
        }
        os << '\n';
    }
}

}  // namespace cosc
