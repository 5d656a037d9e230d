#include "hml/quadrature.hpp"

#include "hml/errors.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace hml {

namespace {

// Newton on P_n with the asymptotic Chebyshev-like initial guess.
GaussLegendre build_rule(int n) {
    GaussLegendre rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[n - 1 - i] = x;
        rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return rule;
}

} // namespace

const GaussLegendre& GaussLegendre::order(int n) {
    static std::map<int, GaussLegendre> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
    return it->second;
}

double adaptive_gl(const std::function<double(double)>& f, double a, double b,
                   double tol_rel, double tol_abs, int max_doublings) {
    int panels = 1;
    double prev = composite_gl(f, a, b, panels);
    for (int d = 0; d < max_doublings; ++d) {
        panels *= 2;
        double cur = composite_gl(f, a, b, panels);
        if (std::abs(cur - prev) <= tol_rel * std::abs(cur) + tol_abs) return cur;
        prev = cur;
    }
    throw QuadratureNonConvergence("quadrature did not converge after panel-doubling cap");
}

} // namespace hml
