// fock.hpp - truncated two-mode Fock-space matrices for the Hamiltonian, the
// invariant and the ladder operators of the decoupled modes.
//
// Basis |n1, n2>, 0 <= n_j < N, flattened as n1 * N + n2, built on ladder
// operators of a reference oscillator (mass M_ref, frequency w_ref):
//   x = sqrt(hbar / (2 M_ref w_ref)) (a + a^dag),  p = i sqrt(M_ref w_ref hbar / 2) (a^dag - a).
//
// Truncation policy: quadratic operators are assembled from exact matrix
// elements, so they equal the infinite operator restricted to the basis.
// Products of two operators are exact only away from the cutoff: on
// n_j <= N - 2 for linear factors, n_j <= N - 3 for quadratic ones. Identities
// are asserted on such inner blocks only.

#pragma once

#include "cosc/transforms.hpp"

#include <Eigen/Dense>

#include <complex>
#include <iosfwd>
#include <vector>

namespace cosc {

using Complex = std::complex<double>;
using MatrixC = Eigen::MatrixXcd;

struct FockBasisSpec {
    int cutoff{20};
    double hbar{1.0};
    double mass_ref{1.0};
    double omega_ref{1.0};

    int dimension() const { return cutoff * cutoff; }
    int index(int n1, int n2) const { return n1 * cutoff + n2; }
    void validate() const;
};

/// Basis with reference (M, max omega_bar_j) of the scenario at time t.
FockBasisSpec default_basis(const Scenario& s, int cutoff, double t);

struct FockOperator {
    MatrixC matrix;
    FockBasisSpec basis;
    bool hermitian{false};

    FockOperator() = default;
    FockOperator(MatrixC m, const FockBasisSpec& b);
};

/// Ladder, position and momentum operators of both modes, each the
/// single-mode truncated matrix tensored with the identity.
struct ModeOperators {
    PairOf<MatrixC> a, adag, x, p;
};

ModeOperators mode_operators(const FockBasisSpec& spec);

/// Flat indices of states with every n_j <= N - 1 - margin.
std::vector<int> inner_indices(const FockBasisSpec& spec, int margin);
MatrixC restrict_to(const MatrixC& m, const std::vector<int>& idx);

/// 1/2 sum_ab S_ab sym(z_a z_b) with z = (x1, x2, p1, p2), exact matrix elements.
FockOperator quadratic_operator(const QuadraticForm& form, const FockBasisSpec& spec);

QuadraticForm hamiltonian_form(double t, const Scenario& s);

FockOperator hamiltonian_matrix(double t, const Scenario& s, const FockBasisSpec& spec);
FockOperator invariant_matrix(double t, const Scenario& s, const FockBasisSpec& spec);
FockOperator invariant_matrix(const InvariantCoefficients& k, const FockBasisSpec& spec);

/// || dI/dt + [I, H] / (i hbar) ||_F / || I ||_F on n_j <= N - 2, with dI/dt by
/// central differences. Operators are assembled with one extra level so every
/// product is exact on that block.
double lvn_matrix_residual(double t, const Scenario& s, const FockBasisSpec& spec, double dt);
double lvn_matrix_residual(double t, const Scenario& s, const FockBasisSpec& spec, double dt,
                           const CoefficientFn& coeffs);

class NotPositiveDefiniteError : public std::domain_error {
public:
    NotPositiveDefiniteError() : std::domain_error("invariant not positive definite") {}
};

/// Annihilation/creation operators of the original system built from the
/// decoupled-mode formulas (rotated, rescaled x_j and the shifted momenta
/// p_j + (beta_j / alpha_j) x_j).
struct LadderOperators {
    PairOf<MatrixC> a, adag;
    DecoupledSpectrumData decoupled;
};

LadderOperators ladder_matrices(double t, const Scenario& s, const FockBasisSpec& spec);

/// sum_j hbar w_bar_j (a_j^dag a_j + 1/2).
MatrixC ladder_reconstruction(const LadderOperators& l, double hbar);

struct SpectrumEntry {
    int n1{0}, n2{0};
    double lambda_theory{0.0};
    double lambda_matrix{0.0};
    double deviation{0.0};
};

struct SpectrumReport {
    std::vector<SpectrumEntry> entries;
    double max_deviation{0.0};
    DecoupledSpectrumData decoupled;
};

/// Lowest k hermitian eigenvalues, ascending.
std::vector<double> lowest_eigenvalues(const MatrixC& m, int k);

/// Lowest k eigenvalues of the invariant matrix against the lattice
/// hbar w_bar_1 (n1 + 1/2) + hbar w_bar_2 (n2 + 1/2), matched greedily.
SpectrumReport spectrum_check(double t, const Scenario& s, const FockBasisSpec& spec, int k);

/// Lowest k eigenvalues of the operator built from the fully decoupled form
/// (transform path) next to those of the invariant matrix itself.
struct SpectrumComparison {
    std::vector<double> invariant_path;
    std::vector<double> transformed_path;
    double max_difference{0.0};
};

SpectrumComparison transformed_spectrum_comparison(double t, const Scenario& s, const FockBasisSpec& spec, int k);

/// Text dump: first line "rows cols", then one row per line of "re im" pairs.
void write_matrix_text(std::ostream& os, const MatrixC& m);

}  // namespace cosc
