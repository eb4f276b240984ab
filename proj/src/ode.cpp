#include "cosc/ode.hpp"

namespace cosc {

std::vector<double> linspace(double a, double b, std::size_t n) {
    if (n == 0) return {};
    if (n == 1) return {a};
    std::vector<double> v(n);
    const double h = (b - a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) v[i] = a + h * static_cast<double>(i);
    v.back() = b;
    return v;
}

}  // namespace cosc
