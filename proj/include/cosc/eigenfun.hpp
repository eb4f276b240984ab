// eigenfun.hpp - position-space eigenfunctions of the decoupled and of the
// original invariant, with quadrature and finite-difference checks.
//
// Original eigenfunctions, evaluated as written:
//   u(x) = prod_j (w_j / (pi hbar alpha_j))^(1/4) (2^n_j n_j!)^(-1/2) H_n_j(sqrt(w_j / hbar) X_j)
//          exp[-(w_j X_j^2 + i (beta_j / alpha_j) x_j^2) / (2 hbar)]
//   X_1 =  cos(phi) x_1 / sqrt(alpha_1) + sin(phi) x_2 / sqrt(alpha_2)
//   X_2 = -sin(phi) x_1 / sqrt(alpha_1) + cos(phi) x_2 / sqrt(alpha_2)
// with w_j the decoupled frequencies omega_bar_j.

#pragma once

#include "cosc/transforms.hpp"

#include <Eigen/Dense>

#include <complex>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace cosc {

struct FockLabel {
    int n1{0};
    int n2{0};

    bool operator==(const FockLabel&) const = default;
};

/// All labels with n1 + n2 <= total, ordered by total then n1 descending.
std::vector<FockLabel> labels_up_to(int total);

/// Hermite function H_n(xi) exp(-xi^2/2) / sqrt(2^n n!) by the normalized
/// three-term recurrence; no pi^(-1/4) factor.
double hermite_function(int n, double xi);

class NonNormalizableError : public std::domain_error {
public:
    NonNormalizableError() : std::domain_error("non-normalizable: omega_bar^2 must be positive") {}
};

Pair rotated_coordinates(const Pair& x, const InvariantCoefficients& k, double phi);

/// Decoupled eigenfunction with mass M and frequencies omega_bar.
double sho_eigenfunction(const FockLabel& label, const Pair& x, const Pair& omega_bar, const Constants& c);

/// Coefficients and decoupled data frozen at time t, for repeated evaluation.
class EigenfunctionEvaluator {
public:
    EigenfunctionEvaluator(double t, const Scenario& s);

    std::complex<double> operator()(const FockLabel& label, const Pair& x) const;
    double eigenvalue(const FockLabel& label) const;

    const InvariantCoefficients& coefficients() const noexcept { return k_; }
    const DecoupledSpectrumData& decoupled() const noexcept { return d_; }
    double hbar() const noexcept { return hbar_; }
    /// sqrt(hbar alpha_j / min_k omega_bar_k): Gaussian width along x_j.
    Pair characteristic_length() const;

private:
    InvariantCoefficients k_;
    DecoupledSpectrumData d_;
    double hbar_;
};

std::complex<double> eigenfunction(const FockLabel& label, const Pair& x, double t, const Scenario& s);

// ----------------------------------------------------------------- grids

enum class QuadratureRule { GaussLegendre, Trapezoid };

struct GridSpec {
    Pair half_width{8.0, 8.0};  // L_j, grid covers [-L_j, L_j]
    std::array<int, 2> points{200, 200};
    QuadratureRule rule{QuadratureRule::GaussLegendre};

    void validate() const;
    double spacing(int axis) const;  // uniform rules only
};

/// L_j = lengths * characteristic length, `points` per axis.
GridSpec default_grid(const EigenfunctionEvaluator& ev, double lengths = 8.0, int points = 200,
                      QuadratureRule rule = QuadratureRule::GaussLegendre);

/// Uniform trapezoid grid with spacing exactly h; each L_j is rounded up to a
/// multiple of h.
GridSpec uniform_grid(const Pair& half_width, double h);

struct AxisRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule with n nodes on [a, b].
AxisRule gauss_legendre(int n, double a, double b);
AxisRule trapezoid(int n, double a, double b);
AxisRule axis_rule(const GridSpec& g, int axis);

class GridTooCoarseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// G_ab = int conj(u_a) u_b dx1 dx2 on the grid. When `convergence_tol` is
/// positive the matrix is recomputed with 3/4 of the points per axis and the
/// call throws GridTooCoarseError if the two differ by more than that.
Eigen::MatrixXcd gram_matrix(const std::vector<FockLabel>& labels, const EigenfunctionEvaluator& ev,
                             const GridSpec& grid, double convergence_tol = 0.0);
Eigen::MatrixXcd gram_matrix(const std::vector<FockLabel>& labels, double t, const Scenario& s,
                             const GridSpec& grid, double convergence_tol = 0.0);

/// Second moments <x_a x_b> of |u|^2 on the grid (row/column order x1, x2).
Eigen::Matrix2d position_covariance(const FockLabel& label, const EigenfunctionEvaluator& ev, const GridSpec& grid);

/// || (I - lambda) u || / || u || over interior points of a uniform grid, with
/// I applied as a second-order finite-difference operator. `lambda_shift` is
/// added to the eigenvalue (nonzero only for detection tests).
double eigen_residual(const FockLabel& label, const EigenfunctionEvaluator& ev, const GridSpec& grid,
                      double lambda_shift = 0.0);
double eigen_residual(const FockLabel& label, double t, const Scenario& s, const GridSpec& grid);

/// CSV with columns x1,x2,re,im,abs2 over the grid nodes.
void write_eigenfunction_csv(std::ostream& os, const FockLabel& label, const EigenfunctionEvaluator& ev,
                             const GridSpec& grid);

}  // namespace cosc
