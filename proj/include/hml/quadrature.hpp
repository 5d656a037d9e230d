#pragma once

#include <functional>
#include <vector>

namespace hml {

// Gauss-Legendre rule on [-1, 1]; nodes/weights computed once per order and cached.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    static const GaussLegendre& order(int n);

    template <typename F>
    double integrate(F&& f, double a, double b) const {
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            acc += weights[i] * f(mid + half * nodes[i]);
        return acc * half;
    }
};

// Composite Gauss-Legendre over `panels` equal panels.
template <typename F>
double composite_gl(F&& f, double a, double b, int panels, int order = 16) {
    const GaussLegendre& gl = GaussLegendre::order(order);
    double acc = 0.0;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p)
        acc += gl.integrate(f, a + p * h, a + (p + 1) * h);
    return acc;
}

// Panel-doubling refinement until |I_2n - I_n| < tol_rel*|I_2n| + tol_abs.
// Throws QuadratureNonConvergence past the refinement cap.
double adaptive_gl(const std::function<double(double)>& f, double a, double b,
                   double tol_rel, double tol_abs = 0.0, int max_doublings = 16);

} // namespace hml
