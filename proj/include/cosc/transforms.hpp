// transforms.hpp - the invariant as a phase-space quadratic form and the
// unitary decoupling chain as symplectic maps.
//
// Phase vector z = (x1, x2, p1, p2), I = 1/2 z^T S z. A SymplecticMap T is a
// change of canonical coordinates z' = T z; conjugating a quadratic operator
// by the matching unitary sends S to T^-T S T^-1. The chain is
//   dilation:  x_j' = x_j / sqrt(M alpha_j),  p_j' = sqrt(M alpha_j) p_j
//   shear:     p_j' = p_j + M beta_j x_j
//   rotation:  (x1, x2) and (p1, p2) rotated by phi
// after which the form is two independent oscillators of mass M and
// frequencies omega_bar_j.

#pragma once

#include "cosc/invariant.hpp"

#include <Eigen/Dense>

namespace cosc {

using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;

enum PhaseIndex : int { kX1 = 0, kX2 = 1, kP1 = 2, kP2 = 3 };

class QuadraticForm {
public:
    QuadraticForm() : s_(Mat4::Zero()) {}
    /// Symmetrizes the input.
    explicit QuadraticForm(const Mat4& s) : s_(0.5 * (s + s.transpose())) {}

    const Mat4& matrix() const noexcept { return s_; }
    double operator()(int i, int j) const { return s_(i, j); }
    double value(const Vec4& z) const { return 0.5 * z.dot(s_ * z); }

private:
    Mat4 s_;
};

class NonSymplecticError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class SymplecticMap {
public:
    SymplecticMap() : t_(Mat4::Identity()) {}
    explicit SymplecticMap(const Mat4& t) : t_(t) {}

    const Mat4& matrix() const noexcept { return t_; }
    /// max |T^T J T - J|
    double symplectic_defect() const;
    bool is_symplectic(double tol = 1e-12) const { return symplectic_defect() <= tol; }
    /// Exact inverse -J T^T J of a symplectic matrix.
    SymplecticMap inverse() const;
    /// Apply `first`, then this map.
    SymplecticMap after(const SymplecticMap& first) const { return SymplecticMap(t_ * first.t_); }

private:
    Mat4 t_;
};

const Mat4& symplectic_unit();

QuadraticForm to_quadratic_form(const InvariantCoefficients& k);

SymplecticMap dilation_map(const InvariantCoefficients& k, const Constants& c);
SymplecticMap shear_map(const InvariantCoefficients& k, const Constants& c);
SymplecticMap rotation_map(double phi);

/// Form expressed in the new coordinates z' = T z. Rejects maps whose
/// symplectic defect exceeds `tol`.
QuadraticForm transform(const QuadraticForm& form, const SymplecticMap& map, double tol = 1e-12);

struct RotationAngle {
    double phi{0.0};
    /// Uncoupled and degenerate: every angle decouples; phi = 0 is returned.
    bool degenerate{false};
};

/// phi = 1/2 atan2(coupling, (w01^2 - w02^2) / 2), in (-pi/2, pi/2].
RotationAngle rotation_angle(const Pair& omega0_sq, double coupling);

struct DecoupledSpectrumData {
    Pair omega0{};        // sqrt(alpha_j gamma_j - beta_j^2)
    Pair omega0_sq{};
    double coupling{0.0};  // delta sqrt(alpha_1 alpha_2)
    double phi{0.0};
    Pair omega_bar_sq{};
    Pair omega_bar{};      // NaN where omega_bar_sq <= 0
    double delta_bar{0.0};
    bool degenerate{false};
    bool positive_definite{true};
};

DecoupledSpectrumData decouple(const InvariantCoefficients& k, const Constants& c);

/// Full chain rotation(phi) o shear o dilation.
SymplecticMap decoupling_map(const InvariantCoefficients& k, const Constants& c, double phi);

}  // namespace cosc
