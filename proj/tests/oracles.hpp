#pragma once

// Test-side oracles, kept independent of the library implementations they
// cross-check: plain bisection root finding, sign-scan root counting for the
// quintic existence condition, the closed-form c3 = 0 profile, and a
// reversed-endpoint period quadrature.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

namespace oracles {

// all roots of f inside [lo, hi] found by dense sign-scan + bisection
inline std::vector<double> bisect_roots(const std::function<double(double)>& f, double lo, double hi,
                                        int scan = 20000) {
    std::vector<double> roots;
    double prev_x = lo, prev_f = f(lo);
    for (int i = 1; i <= scan; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / scan;
        const double fx = f(x);
        if (prev_f == 0.0) roots.push_back(prev_x);
        if (prev_f * fx < 0.0) {
            double a = prev_x, b = x, fa = prev_f;
            for (int it = 0; it < 200; ++it) {
                const double m = 0.5 * (a + b);
                const double fm = f(m);
                if (fm == 0.0) { a = b = m; break; }
                if ((fm > 0.0) == (fa > 0.0)) { a = m; fa = fm; }
                else b = m;
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_x = x;
        prev_f = fx;
    }
    return roots;
}

// roots of the monic cubic x^3 + a2 x^2 + a1 x + a0, descending
inline std::vector<double> cubic_roots_oracle(double a2, double a1, double a0) {
    auto f = [&](double x) { return ((x + a2) * x + a1) * x + a0; };
    const double bound = 2.0 + std::abs(a2) + std::abs(a1) + std::abs(a0);
    auto roots = bisect_roots(f, -bound, bound);
    std::sort(roots.begin(), roots.end(), std::greater<>());
    return roots;
}

// number of strictly negative simple roots of 256 c3^2 t^5 + 4 C t^2 + t
inline int negative_quintic_roots(double frak_c, double c3) {
    auto f = [&](double t) {
        return 256.0 * c3 * c3 * std::pow(t, 5) + 4.0 * frak_c * t * t + t;
    };
    // negative roots up to the scale where the quintic term dominates
    const double lo = -std::max(2.0, 2.0 * std::sqrt(frak_c / std::max(1e-12, 16.0 * std::abs(c3))));
    auto roots = bisect_roots(f, lo, -1e-12, 400000);
    return static_cast<int>(roots.size());
}

// gamma_j^2 radicands straight from the formulas (signed; no cubic involved)
struct RadicandTriple {
    double r1, r2, r3;
};
inline RadicandTriple radicands(double a1, double a2, double a3, double frak_c) {
    return {(frak_c + a2 * a3) / (frak_c * (a1 - a2) * (a1 - a3)),
            (frak_c + a1 * a3) / (frak_c * (a2 - a1) * (a2 - a3)),
            (frak_c + a1 * a2) / (frak_c * (a3 - a1) * (a3 - a2))};
}

// c3 = 0 closed form through u(0) = (1/2)ln(frakC) - delta moving downhill
struct SechOracle {
    double frak_c, w0;
    double u(double z) const {
        const double r = std::sqrt(frak_c);
        return std::log(r / std::cosh(r * z + w0));
    }
    double du(double z) const {
        const double r = std::sqrt(frak_c);
        return -r * std::tanh(r * z + w0);
    }
    static SechOracle through(double frak_c, double delta) {
        return {frak_c, std::acosh(std::exp(delta))};
    }
};

// period integral with the substitution anchored at the s_max endpoint
inline double period_reversed(double s_min, double s_max, double frak_c, double c3, int n = 4000) {
    const double qb = s_min + s_max - frak_c;
    const double qc = c3 * c3 / (s_min * s_max);
    const double d = s_max - s_min;
    double acc = 0.0;
    // midpoint rule on a fine grid is enough at 1e-13 only with many nodes;
    // use composite Simpson instead
    const double h = 0.5 * M_PI / n;
    auto g = [&](double phi) {
        const double sn = std::sin(phi);
        const double s = s_max - d * sn * sn;
        return 2.0 * std::sqrt(s) / std::sqrt((s + qb) * s + qc);
    };
    for (int i = 0; i < n; ++i) {
        const double x0 = i * h, x1 = x0 + h;
        acc += (h / 6.0) * (g(x0) + 4.0 * g(0.5 * (x0 + x1)) + g(x1));
    }
    return acc;
}

} // namespace oracles
