#include "cosc/transforms.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace cosc {

const Mat4& symplectic_unit() {
    static const Mat4 j = [] {
        Mat4 m = Mat4::Zero();
        m.topRightCorner<2, 2>() = Eigen::Matrix2d::Identity();
        m.bottomLeftCorner<2, 2>() = -Eigen::Matrix2d::Identity();
        return m;
    }();
    return j;
}

double SymplecticMap::symplectic_defect() const {
    const Mat4& j = symplectic_unit();
    return (t_.transpose() * j * t_ - j).cwiseAbs().maxCoeff();
}

SymplecticMap SymplecticMap::inverse() const {
    const Mat4& j = symplectic_unit();
    return SymplecticMap(-j * t_.transpose() * j);
}

QuadraticForm to_quadratic_form(const InvariantCoefficients& k) {
    Mat4 s = Mat4::Zero();
    for (int j = 0; j < 2; ++j) {
        const int x = kX1 + j, p = kP1 + j;
        s(x, x) = k.gamma[j];
        s(p, p) = k.alpha[j];
        s(x, p) = s(p, x) = k.beta[j];
    }
    s(kX1, kX2) = s(kX2, kX1) = k.delta;
    return QuadraticForm(s);
}

SymplecticMap dilation_map(const InvariantCoefficients& k, const Constants& c) {
    Mat4 t = Mat4::Zero();
    for (int j = 0; j < 2; ++j) {
        const double ma = c.big_m * k.alpha[j];
        if (!(ma > 0.0)) throw std::invalid_argument("dilation needs M alpha_j > 0");
        const double scale = std::sqrt(ma);
        t(kX1 + j, kX1 + j) = 1.0 / scale;
        t(kP1 + j, kP1 + j) = scale;
    }
    return SymplecticMap(t);
}

SymplecticMap shear_map(const InvariantCoefficients& k, const Constants& c) {
    Mat4 t = Mat4::Identity();
    for (int j = 0; j < 2; ++j) t(kP1 + j, kX1 + j) = c.big_m * k.beta[j];
    return SymplecticMap(t);
}

SymplecticMap rotation_map(double phi) {
    const double cs = std::cos(phi), sn = std::sin(phi);
    Eigen::Matrix2d r;
    r << cs, sn, -sn, cs;
    Mat4 t = Mat4::Zero();
    t.topLeftCorner<2, 2>() = r;
    t.bottomRightCorner<2, 2>() = r;
    return SymplecticMap(t);
}

QuadraticForm transform(const QuadraticForm& form, const SymplecticMap& map, double tol) {
    const double defect = map.symplectic_defect();
    if (!(defect <= tol)) {
        std::ostringstream os;
        os << "map is not symplectic (defect " << defect << ")";
        throw NonSymplecticError(os.str());
    }
    const Mat4 inv = map.inverse().matrix();
    return QuadraticForm(inv.transpose() * form.matrix() * inv);
}

RotationAngle rotation_angle(const Pair& omega0_sq, double coupling) {
    const double half_split = 0.5 * (omega0_sq[0] - omega0_sq[1]);
    if (coupling == 0.0 && half_split == 0.0) return {0.0, true};
    double phi = 0.5 * std::atan2(coupling, half_split);
    // atan2 lies in [-pi, pi]; fold -pi/2 onto pi/2
    if (phi <= -0.5 * M_PI) phi += M_PI;
    return {phi, false};
}

DecoupledSpectrumData decouple(const InvariantCoefficients& k, const Constants& c) {
    DecoupledSpectrumData out;
    for (int j = 0; j < 2; ++j) {
        if (!(k.alpha[j] > 0.0)) throw std::invalid_argument("decoupling needs alpha_j > 0");
        out.omega0_sq[j] = k.alpha[j] * k.gamma[j] - k.beta[j] * k.beta[j];
        out.omega0[j] = std::sqrt(out.omega0_sq[j]);
    }
    out.coupling = k.delta * std::sqrt(k.alpha[0] * k.alpha[1]);

    const RotationAngle angle = rotation_angle(out.omega0_sq, out.coupling);
    out.phi = angle.phi;
    out.degenerate = angle.degenerate;

    const double cs = std::cos(out.phi), sn = std::sin(out.phi), s2 = std::sin(2 * out.phi);
    out.omega_bar_sq[0] = out.omega0_sq[0] * cs * cs + out.omega0_sq[1] * sn * sn + out.coupling * s2;
    out.omega_bar_sq[1] = out.omega0_sq[0] * sn * sn + out.omega0_sq[1] * cs * cs - out.coupling * s2;
    out.delta_bar = c.big_m * (out.coupling * std::cos(2 * out.phi) -
                               0.5 * (out.omega0_sq[0] - out.omega0_sq[1]) * s2);
    for (int j = 0; j < 2; ++j) {
        out.positive_definite = out.positive_definite && out.omega_bar_sq[j] > 0.0;
        out.omega_bar[j] = out.omega_bar_sq[j] > 0.0 ? std::sqrt(out.omega_bar_sq[j])
                                                     : std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

SymplecticMap decoupling_map(const InvariantCoefficients& k, const Constants& c, double phi) {
    return rotation_map(phi).after(shear_map(k, c)).after(dilation_map(k, c));
}

}  // namespace cosc
