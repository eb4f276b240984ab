#include "cosc/eigenfun.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace cosc {

std::vector<FockLabel> labels_up_to(int total) {
    std::vector<FockLabel> out;
    for (int n = 0; n <= total; ++n) {
        for (int n1 = n; n1 >= 0; --n1) out.push_back({n1, n - n1});
    }
    return out;
}

double hermite_function(int n, double xi) {
    if (n < 0) throw std::invalid_argument("Hermite index must be non-negative");
    // h_k = H_k(xi) exp(-xi^2/2) / sqrt(2^k k!), carried with the Gaussian so
    // no intermediate overflows
    double prev = 0.0, cur = std::exp(-0.5 * xi * xi);
    for (int k = 0; k < n; ++k) {
        const double next = std::sqrt(2.0 / (k + 1)) * xi * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

Pair rotated_coordinates(const Pair& x, const InvariantCoefficients& k, double phi) {
    if (!(k.alpha[0] > 0.0) || !(k.alpha[1] > 0.0)) throw std::invalid_argument("alpha_j must be positive");
    const double cs = std::cos(phi), sn = std::sin(phi);
    const double y1 = x[0] / std::sqrt(k.alpha[0]), y2 = x[1] / std::sqrt(k.alpha[1]);
    return {cs * y1 + sn * y2, -sn * y1 + cs * y2};
}

double sho_eigenfunction(const FockLabel& label, const Pair& x, const Pair& omega_bar, const Constants& c) {
    const int n[2] = {label.n1, label.n2};
    double u = 1.0;
    for (int j = 0; j < 2; ++j) {
        if (!(omega_bar[j] > 0.0)) throw NonNormalizableError();
        const double mw = c.big_m * omega_bar[j] / c.hbar;
        u *= std::pow(mw / M_PI, 0.25) * hermite_function(n[j], std::sqrt(mw) * x[j]);
    }
    return u;
}

EigenfunctionEvaluator::EigenfunctionEvaluator(double t, const Scenario& s)
    : k_(coefficients_at(t, s)), hbar_(s.constants.hbar) {
    if (!(k_.alpha[0] > 0.0) || !(k_.alpha[1] > 0.0)) throw std::invalid_argument("alpha_j must be positive");
    d_ = decouple(k_, s.constants);
    if (!d_.positive_definite) throw NonNormalizableError();
}

std::complex<double> EigenfunctionEvaluator::operator()(const FockLabel& label, const Pair& x) const {
    const Pair big_x = rotated_coordinates(x, k_, d_.phi);
    const int n[2] = {label.n1, label.n2};
    double magnitude = 1.0, phase = 0.0;
    for (int j = 0; j < 2; ++j) {
        const double w = d_.omega_bar[j];
        magnitude *= std::pow(w / (M_PI * hbar_ * k_.alpha[j]), 0.25) *
                     hermite_function(n[j], std::sqrt(w / hbar_) * big_x[j]);
        phase -= k_.beta[j] / k_.alpha[j] * x[j] * x[j] / (2.0 * hbar_);
    }
    return std::polar(1.0, phase) * magnitude;
}

double EigenfunctionEvaluator::eigenvalue(const FockLabel& label) const {
    return hbar_ * (d_.omega_bar[0] * (label.n1 + 0.5) + d_.omega_bar[1] * (label.n2 + 0.5));
}

Pair EigenfunctionEvaluator::characteristic_length() const {
    const double w = std::min(d_.omega_bar[0], d_.omega_bar[1]);
    return {std::sqrt(hbar_ * k_.alpha[0] / w), std::sqrt(hbar_ * k_.alpha[1] / w)};
}

std::complex<double> eigenfunction(const FockLabel& label, const Pair& x, double t, const Scenario& s) {
    return EigenfunctionEvaluator(t, s)(label, x);
}

// ----------------------------------------------------------------- grids

void GridSpec::validate() const {
    for (int j = 0; j < 2; ++j) {
        if (!(half_width[j] > 0.0)) throw std::invalid_argument("grid half width must be positive");
        if (points[j] < 64) throw std::invalid_argument("grid needs at least 64 points per axis");
    }
}

double GridSpec::spacing(int axis) const { return 2.0 * half_width[axis] / (points[axis] - 1); }

GridSpec default_grid(const EigenfunctionEvaluator& ev, double lengths, int points, QuadratureRule rule) {
    const Pair ell = ev.characteristic_length();
    GridSpec g;
    g.half_width = {lengths * ell[0], lengths * ell[1]};
    g.points = {points, points};
    g.rule = rule;
    return g;
}

GridSpec uniform_grid(const Pair& half_width, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("grid spacing must be positive");
    GridSpec g;
    g.rule = QuadratureRule::Trapezoid;
    for (int j = 0; j < 2; ++j) {
        const int half = static_cast<int>(std::ceil(half_width[j] / h - 1e-9));
        g.half_width[j] = half * h;
        g.points[j] = 2 * half + 1;
    }
    return g;
}

AxisRule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw std::invalid_argument("Gauss-Legendre needs at least one node");
    // boost returns the non-negative zeros in ascending order
    const std::vector<double> zeros = boost::math::legendre_p_zeros<double>(n);
    std::vector<double> x, w;
    for (double z : zeros) {
        const double dp = boost::math::legendre_p_prime(n, z);
        const double wt = 2.0 / ((1.0 - z * z) * dp * dp);
        if (z == 0.0) {
            x.push_back(0.0);
            w.push_back(wt);
        } else {
            x.push_back(z);
            w.push_back(wt);
            x.push_back(-z);
            w.push_back(wt);
        }
    }
    AxisRule r;
    std::vector<std::size_t> order(x.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&x](std::size_t p, std::size_t q) { return x[p] < x[q]; });
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t i : order) {
        r.nodes.push_back(mid + half * x[i]);
        r.weights.push_back(half * w[i]);
    }
    return r;
}

AxisRule trapezoid(int n, double a, double b) {
    if (n < 2) throw std::invalid_argument("trapezoid rule needs at least two nodes");
    AxisRule r;
    const double h = (b - a) / (n - 1);
    for (int i = 0; i < n; ++i) {
        r.nodes.push_back(a + i * h);
        r.weights.push_back((i == 0 || i == n - 1) ? 0.5 * h : h);
    }
    return r;
}

AxisRule axis_rule(const GridSpec& g, int axis) {
    const double l = g.half_width[axis];
    return g.rule == QuadratureRule::GaussLegendre ? gauss_legendre(g.points[axis], -l, l)
                                                   : trapezoid(g.points[axis], -l, l);
}

namespace {

void check_coverage(const EigenfunctionEvaluator& ev, const GridSpec& grid) {
    const Pair ell = ev.characteristic_length();
    for (int j = 0; j < 2; ++j) {
        if (grid.half_width[j] < 6.0 * ell[j] * (1.0 - 1e-12)) {
            std::ostringstream os;
            os << "grid must cover 6 characteristic lengths (" << 6.0 * ell[j] << ") on axis " << j + 1;
            throw std::invalid_argument(os.str());
        }
    }
}

Eigen::MatrixXcd gram_on(const std::vector<FockLabel>& labels, const EigenfunctionEvaluator& ev,
                         const GridSpec& grid) {
    const AxisRule r1 = axis_rule(grid, 0), r2 = axis_rule(grid, 1);
    const auto n = static_cast<Eigen::Index>(labels.size());
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(n, n);
    Eigen::VectorXcd u(n);
    for (std::size_t i = 0; i < r1.nodes.size(); ++i) {
        for (std::size_t k = 0; k < r2.nodes.size(); ++k) {
            const Pair x{r1.nodes[i], r2.nodes[k]};
            for (Eigen::Index a = 0; a < n; ++a) u[a] = ev(labels[a], x);
            g.noalias() += (r1.weights[i] * r2.weights[k]) * (u.conjugate() * u.transpose());
        }
    }
    return g;
}

}  // namespace

Eigen::MatrixXcd gram_matrix(const std::vector<FockLabel>& labels, const EigenfunctionEvaluator& ev,
                             const GridSpec& grid, double convergence_tol) {
    grid.validate();
    check_coverage(ev, grid);
    const Eigen::MatrixXcd g = gram_on(labels, ev, grid);
    if (convergence_tol > 0.0) {
        GridSpec coarse = grid;
        for (int j = 0; j < 2; ++j) coarse.points[j] = (3 * grid.points[j]) / 4;
        const double diff = (g - gram_on(labels, ev, coarse)).cwiseAbs().maxCoeff();
        if (diff > convergence_tol) {
            std::ostringstream os;
            os << "grid too coarse: overlaps change by " << diff << " between resolutions";
            throw GridTooCoarseError(os.str());
        }
    }
    return g;
}

Eigen::MatrixXcd gram_matrix(const std::vector<FockLabel>& labels, double t, const Scenario& s,
                             const GridSpec& grid, double convergence_tol) {
    return gram_matrix(labels, EigenfunctionEvaluator(t, s), grid, convergence_tol);
}

Eigen::Matrix2d position_covariance(const FockLabel& label, const EigenfunctionEvaluator& ev, const GridSpec& grid) {
    grid.validate();
    const AxisRule r1 = axis_rule(grid, 0), r2 = axis_rule(grid, 1);
    Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
    for (std::size_t i = 0; i < r1.nodes.size(); ++i) {
        for (std::size_t k = 0; k < r2.nodes.size(); ++k) {
            const Eigen::Vector2d x(r1.nodes[i], r2.nodes[k]);
            const double p = std::norm(ev(label, {x[0], x[1]}));
            m += (r1.weights[i] * r2.weights[k] * p) * (x * x.transpose());
        }
    }
    return m;
}

double eigen_residual(const FockLabel& label, const EigenfunctionEvaluator& ev, const GridSpec& grid,
                      double lambda_shift) {
    if (grid.rule != QuadratureRule::Trapezoid) throw std::invalid_argument("eigen residual needs a uniform grid");
    grid.validate();
    const AxisRule r1 = axis_rule(grid, 0), r2 = axis_rule(grid, 1);
    const int n1 = grid.points[0], n2 = grid.points[1];
    const double h1 = grid.spacing(0), h2 = grid.spacing(1);

    std::vector<std::complex<double>> u(static_cast<std::size_t>(n1) * n2);
    auto at = [n2](int i, int k) { return static_cast<std::size_t>(i) * n2 + k; };
    for (int i = 0; i < n1; ++i) {
        for (int k = 0; k < n2; ++k) u[at(i, k)] = ev(label, {r1.nodes[i], r2.nodes[k]});
    }

    const InvariantCoefficients& c = ev.coefficients();
    const double hbar = ev.hbar();
    const double lambda = ev.eigenvalue(label) + lambda_shift;
    const std::complex<double> minus_i_hbar(0.0, -hbar);
    double res = 0.0, norm = 0.0;
    for (int i = 1; i < n1 - 1; ++i) {
        for (int k = 1; k < n2 - 1; ++k) {
            const double x1 = r1.nodes[i], x2 = r2.nodes[k];
            const std::complex<double> v = u[at(i, k)];
            const std::complex<double> d1 = (u[at(i + 1, k)] - u[at(i - 1, k)]) / (2.0 * h1);
            const std::complex<double> d2 = (u[at(i, k + 1)] - u[at(i, k - 1)]) / (2.0 * h2);
            const std::complex<double> dd1 = (u[at(i + 1, k)] - 2.0 * v + u[at(i - 1, k)]) / (h1 * h1);
            const std::complex<double> dd2 = (u[at(i, k + 1)] - 2.0 * v + u[at(i, k - 1)]) / (h2 * h2);
            // 1/2 [alpha p^2 + beta (xp + px) + gamma x^2] with p = -i hbar d/dx
            std::complex<double> iu = c.delta * x1 * x2 * v;
            iu += 0.5 * (-hbar * hbar * c.alpha[0] * dd1 + c.beta[0] * minus_i_hbar * (2.0 * x1 * d1 + v) +
                         c.gamma[0] * x1 * x1 * v);
            iu += 0.5 * (-hbar * hbar * c.alpha[1] * dd2 + c.beta[1] * minus_i_hbar * (2.0 * x2 * d2 + v) +
                         c.gamma[1] * x2 * x2 * v);
            res += std::norm(iu - lambda * v);
            norm += std::norm(v);
        }
    }
    return norm == 0.0 ? 0.0 : std::sqrt(res / norm);
}

double eigen_residual(const FockLabel& label, double t, const Scenario& s, const GridSpec& grid) {
    return eigen_residual(label, EigenfunctionEvaluator(t, s), grid);
}

void write_eigenfunction_csv(std::ostream& os, const FockLabel& label, const EigenfunctionEvaluator& ev,
                             const GridSpec& grid) {
    const AxisRule r1 = axis_rule(grid, 0), r2 = axis_rule(grid, 1);
    char buf[160];
    os << "x1,x2,re,im,abs2\n";
    for (double x1 : r1.nodes) {
        for (double x2 : r2.nodes) {
            const std::complex<double> u = ev(label, {x1, x2});
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", x1, x2, u.real(), u.imag(),
                          std::norm(u));
            os << buf;
        }
    }
}

}  // namespace cosc
