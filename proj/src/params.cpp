#include "hml/params.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace hml {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double eval_cubic(double a, double frak_b, double c1_frak_c, double x) {
    return ((x + a) * x - frak_b) * x + c1_frak_c;
}

double eval_cubic_deriv(double a, double frak_b, double x) {
    return (3.0 * x + 2.0 * a) * x - frak_b;
}

// Divisors of |v|, capped; nullopt when |v| is too composite to enumerate cheaply.
std::optional<std::vector<int128>> divisors(int128 v, std::size_t cap = 4096) {
    if (v < 0) v = -v;
    if (v == 0) return std::vector<int128>{};
    std::vector<int128> small, large;
    for (int128 d = 1; d * d <= v; ++d) {
        if (v % d == 0) {
            small.push_back(d);
            if (d != v / d) large.push_back(v / d);
            if (small.size() + large.size() > cap) return std::nullopt;
        }
        if (d > 3000000) return std::nullopt; // trial bound; exact flags are best-effort beyond it
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

struct IntCubic {
    // A x^3 + B x^2 + C x + D, A > 0
    int128 A, B, C, D;
};

IntCubic to_integer_cubic(const Rational& a, const Rational& frak_b, const Rational& c1c) {
    using detail::checked_mul;
    int128 l = Rational(1).den();
    auto lcm = [](int128 x, int128 y) { return detail::checked_mul(x / detail::gcd128(x, y), y); };
    l = lcm(lcm(a.den(), frak_b.den()), c1c.den());
    IntCubic c;
    c.A = l;
    c.B = checked_mul(a.num(), l / a.den());
    c.C = -checked_mul(frak_b.num(), l / frak_b.den());
    c.D = checked_mul(c1c.num(), l / c1c.den());
    return c;
}

bool is_exact_root(const IntCubic& c, const Rational& r) {
    using detail::checked_mul;
    // A p^3 + B p^2 q + C p q^2 + D q^3 == 0
    int128 p = r.num(), q = r.den();
    int128 v = checked_mul(checked_mul(c.A, p), checked_mul(p, p));
    v = detail::checked_add(v, checked_mul(checked_mul(c.B, p), checked_mul(p, q)));
    v = detail::checked_add(v, checked_mul(checked_mul(c.C, p), checked_mul(q, q)));
    v = detail::checked_add(v, checked_mul(checked_mul(c.D, q), checked_mul(q, q)));
    return v == 0;
}

} // namespace

ModuliParams ModuliParams::from_doubles(double a, double b, double c1, double c2, double c3) {
    if (c1 == 0.0 || c2 == 0.0)
        throw InvalidModuliError("c1 and c2 must be nonzero (alpha = c1 would be a cubic root and beta degenerates)");
    if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(c1) && std::isfinite(c2) && std::isfinite(c3)))
        throw InvalidModuliError("moduli must be finite");
    ModuliParams p;
    p.a = a;
    p.b = b;
    p.c1 = c1;
    p.c2 = c2;
    p.c3 = c3;
    return p;
}

ModuliParams ModuliParams::from_rationals(const Rational& a, const Rational& b, const Rational& c1,
                                          const Rational& c2, const Rational& c3) {
    ModuliParams p = from_doubles(a.to_double(), b.to_double(), c1.to_double(), c2.to_double(), c3.to_double());
    p.exact = std::array<Rational, 5>{a, b, c1, c2, c3};
    return p;
}

DerivedConstants derive_constants(const ModuliParams& p) {
    DerivedConstants d;
    d.frak_c = p.a * p.c1 + p.b * p.c2 + 2.0 * p.c1 * p.c1 + 2.0 * p.c2 * p.c2;
    d.frak_b = 2.0 * p.c1 * p.a + 3.0 * p.c1 * p.c1 + p.c2 * p.b + 3.0 * p.c2 * p.c2;
    if (p.exact) {
        const auto& e = *p.exact;
        const Rational two(2), three(3);
        d.frak_c_exact = e[0] * e[2] + e[1] * e[3] + two * e[2] * e[2] + two * e[3] * e[3];
        d.frak_b_exact = two * e[2] * e[0] + three * e[2] * e[2] + e[3] * e[1] + three * e[3] * e[3];
        d.frak_c = d.frak_c_exact->to_double();
        d.frak_b = d.frak_b_exact->to_double();
    }
    return d;
}

SpectralData solve_spectral_cubic(const ModuliParams& p, const DerivedConstants& d) {
    if (!(d.frak_c > 0.0))
        throw NonPositiveCError("frakC = " + fmt(d.frak_c) + " <= 0: no periodic profile, cubic stage refused");

    const double a = p.a;
    const double B = d.frak_b;
    const double c1C = p.c1 * d.frak_c;

    std::vector<double> roots;
    std::vector<std::optional<Rational>> flags;

    // exact rational-root stage
    if (p.exact && d.frak_b_exact && d.frak_c_exact) {
        Rational ra = (*p.exact)[0];
        Rational rc1C = (*p.exact)[2] * (*d.frak_c_exact);
        IntCubic ic = to_integer_cubic(ra, *d.frak_b_exact, rc1C);
        if (ic.D == 0) {
            // alpha = 0 is an exact root
            roots.push_back(0.0);
            flags.emplace_back(Rational(0));
        }
        auto dp = divisors(ic.D);
        auto dq = divisors(ic.A);
        if (dp && dq) {
            for (int128 q : *dq) {
                for (int128 pnum : *dp) {
                    for (int sgn : {1, -1}) {
                        if (roots.size() >= 3) break;
                        Rational cand(sgn * pnum, q);
                        bool dup = false;
                        for (const auto& f : flags)
                            if (f && *f == cand) dup = true;
                        if (dup) continue;
                        try {
                            if (is_exact_root(ic, cand)) {
                                roots.push_back(cand.to_double());
                                flags.emplace_back(cand);
                            }
                        } catch (const RationalOverflowError&) {
                            // candidate too large to test exactly; numeric stage covers it
                        }
                    }
                }
            }
        }
    }

    // Two exact roots with the third missed can only happen if an overflow
    // skipped a candidate; drop one flag and let the quadratic recover both.
    if (roots.size() == 2) {
        roots.pop_back();
        flags.pop_back();
    }

    // numeric stage for the remaining roots
    if (roots.size() < 3) {
        double rem_a = a, rem_b = -B, rem_c = c1C; // monic x^3 + rem_a x^2 + rem_b x + rem_c
        // deflate exact roots
        for (double r : roots) {
            // synthetic division by (x - r)
            double q1 = rem_a + r;
            double q0 = rem_b + r * q1;
            rem_a = q1;
            rem_b = q0;
            rem_c = 0.0; // unused below once degree drops
        }
        if (roots.empty()) {
            // depressed cubic t^3 + pt + q, x = t - a/3
            const double sh = a / 3.0;
            const double pp = rem_b - a * a / 3.0;
            const double qq = 2.0 * a * a * a / 27.0 - a * rem_b / 3.0 + rem_c;
            const double disc = -4.0 * pp * pp * pp - 27.0 * qq * qq;
            const double scale = std::max({1.0, std::abs(pp), std::abs(qq)});
            if (disc < -1e-12 * scale * scale * scale)
                throw ComplexRootsError("spectral cubic has a complex-conjugate pair (discriminant " + fmt(disc) + ")");
            if (!(pp < 0.0))
                throw MultipleRootError("spectral cubic is degenerate (p = " + fmt(pp) + " >= 0 with disc ~ 0)");
            const double m = 2.0 * std::sqrt(-pp / 3.0);
            double arg = 3.0 * qq / (pp * m);
            arg = std::clamp(arg, -1.0, 1.0);
            const double phi = std::acos(arg) / 3.0;
            for (int k = 0; k < 3; ++k)
                roots.push_back(m * std::cos(phi - 2.0 * M_PI * k / 3.0) - sh);
            flags.assign(3, std::nullopt);
        } else if (roots.size() == 1) {
            // quadratic x^2 + rem_a x + rem_b; try exact splitting first
            bool exact_done = false;
            if (flags[0] && p.exact && d.frak_b_exact && d.frak_c_exact) {
                Rational ra = (*p.exact)[0];
                Rational r0 = *flags[0];
                Rational qa = ra + r0;                // x^2 + qa x + qb from synthetic division
                Rational qb = r0 * qa - *d.frak_b_exact;
                Rational disc = qa * qa - Rational(4) * qb;
                if (disc.sign() < 0)
                    throw ComplexRootsError("spectral cubic has a complex-conjugate pair (exact discriminant " +
                                            disc.to_string() + " < 0)");
                if (auto sq = disc.sqrt_exact()) {
                    Rational r1 = (-qa + *sq) / Rational(2);
                    Rational r2 = (-qa - *sq) / Rational(2);
                    roots.push_back(r1.to_double());
                    flags.emplace_back(r1);
                    roots.push_back(r2.to_double());
                    flags.emplace_back(r2);
                    exact_done = true;
                }
            }
            if (!exact_done) {
                const double qa = rem_a, qb = rem_b;
                const double disc = qa * qa - 4.0 * qb;
                if (disc < 0.0)
                    throw ComplexRootsError("spectral cubic has a complex-conjugate pair (quadratic discriminant " +
                                            fmt(disc) + ")");
                const double sq = std::sqrt(disc);
                // stable quadratic roots
                const double r1 = (qa >= 0.0) ? (-qa - sq) / 2.0 : (-qa + sq) / 2.0;
                const double r2 = (r1 != 0.0) ? qb / r1 : -qa - r1;
                roots.push_back(r1);
                flags.emplace_back(std::nullopt);
                roots.push_back(r2);
                flags.emplace_back(std::nullopt);
            }
        }
        // roots.size() in {2} cannot happen: exact stage stops at duplicates
    }

    if (roots.size() != 3)
        throw MultipleRootError("spectral cubic root extraction produced " + std::to_string(roots.size()) + " roots");

    // Newton polish on the original cubic for the non-exact roots
    for (std::size_t i = 0; i < 3; ++i) {
        if (flags[i]) continue;
        double x = roots[i];
        for (int it = 0; it < 8; ++it) {
            double f = eval_cubic(a, B, c1C, x);
            double df = eval_cubic_deriv(a, B, x);
            if (df == 0.0) break;
            double nx = x - f / df;
            if (nx == x) break;
            x = nx;
        }
        roots[i] = x;
    }

    // sort descending, carrying flags
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return roots[i] > roots[j]; });

    SpectralData s;
    for (int k = 0; k < 3; ++k) {
        s.alphas[k] = roots[idx[k]];
        s.alpha_exact[k] = flags[idx[k]];
    }

    const double amax = std::max({std::abs(s.alphas[0]), std::abs(s.alphas[1]), std::abs(s.alphas[2])});
    const double gap_tol = root_gap_tolerance(amax);
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j)
            if (std::abs(s.alphas[i] - s.alphas[j]) <= gap_tol)
                throw MultipleRootError("spectral cubic roots " + fmt(s.alphas[i]) + " and " + fmt(s.alphas[j]) +
                                        " are not distinct at tolerance " + fmt(gap_tol));
        if (std::abs(s.alphas[i] - p.c1) <= gap_tol)
            throw DegenerateRootError("spectral cubic root " + fmt(s.alphas[i]) + " coincides with c1 = " + fmt(p.c1));
        const double res = std::abs(eval_cubic(a, B, c1C, s.alphas[i]));
        const double res_tol = 1e-12 * std::max(1.0, std::abs(s.alphas[i] * s.alphas[i] * s.alphas[i]));
        if (res > 64.0 * res_tol)
            throw MultipleRootError("cubic residual " + fmt(res) + " at root " + fmt(s.alphas[i]) +
                                    " exceeds tolerance; coefficients likely ill-conditioned");
    }
    return s;
}

void compute_betas(SpectralData& s, const ModuliParams& p) {
    const double amax = std::max({std::abs(s.alphas[0]), std::abs(s.alphas[1]), std::abs(s.alphas[2])});
    const double tol = root_gap_tolerance(amax);
    for (int j = 0; j < 3; ++j) {
        if (std::abs(s.alphas[j] - p.c1) <= tol)
            throw DegenerateRootError("beta_" + std::to_string(j + 1) + " degenerate: alpha = " + fmt(s.alphas[j]) +
                                      " within tolerance of c1 = " + fmt(p.c1));
        s.betas[j] = p.c2 * s.alphas[j] / (s.alphas[j] - p.c1);
        s.beta_exact[j] = std::nullopt;
        if (s.alpha_exact[j] && p.exact) {
            const Rational& al = *s.alpha_exact[j];
            const Rational& c1 = (*p.exact)[2];
            const Rational& c2 = (*p.exact)[3];
            if (al != c1) {
                Rational be = c2 * al / (al - c1);
                s.beta_exact[j] = be;
                s.betas[j] = be.to_double();
            }
        }
    }
}

void compute_gammas(SpectralData& s, const DerivedConstants& d) {
    if (!(d.frak_c > 0.0)) throw NonPositiveCError("gamma_4 needs frakC > 0, got " + fmt(d.frak_c));
    const double C = d.frak_c;
    const auto& al = s.alphas;
    for (int j = 0; j < 3; ++j) {
        const int k = (j + 1) % 3, l = (j + 2) % 3;
        const double radicand = (C + al[k] * al[l]) / (C * (al[j] - al[k]) * (al[j] - al[l]));
        if (radicand < 0.0)
            throw NegativeRadicandError("gamma_" + std::to_string(j + 1) + " radicand " + fmt(radicand) +
                                        " < 0: no real immersion of this form at the parameter point");
        s.gammas[j] = std::sqrt(radicand);
    }
    s.gammas[3] = std::sqrt(1.0 / C);
    const double res = gamma_identity_residual(s, d);
    if (res > 1e-12)
        throw IdentityViolationError("gamma sum-identity residual " + fmt(res) +
                                     " exceeds 1e-12; parameter point violates the frame normalization");
}

SpectralData build_spectral_data(const ModuliParams& p, const DerivedConstants& d) {
    SpectralData s = solve_spectral_cubic(p, d);
    compute_betas(s, p);
    compute_gammas(s, d);
    return s;
}

double gamma_identity_residual(const SpectralData& s, const DerivedConstants& d) {
    double s0 = 0, sa = 0, sa2 = 0, sb = 0, sb2 = 0, sab = 0;
    for (int j = 0; j < 3; ++j) {
        const double g2 = s.gammas[j] * s.gammas[j];
        s0 += g2;
        sa += g2 * s.alphas[j];
        sa2 += g2 * s.alphas[j] * s.alphas[j];
        sb += g2 * s.betas[j];
        sb2 += g2 * s.betas[j] * s.betas[j];
        sab += g2 * s.alphas[j] * s.betas[j];
    }
    const double g42 = s.gammas[3] * s.gammas[3];
    (void)d;
    double r = std::abs(s0 - g42);
    r = std::max(r, std::abs(sa));
    r = std::max(r, std::abs(sa2 - 1.0));
    r = std::max(r, std::abs(sb));
    r = std::max(r, std::abs(sb2 - 1.0));
    r = std::max(r, std::abs(sab));
    return r;
}

std::array<double, 3> vieta_residuals(const SpectralData& s, const ModuliParams& p, const DerivedConstants& d) {
    const auto& al = s.alphas;
    const double e1 = al[0] + al[1] + al[2];
    const double e2 = al[0] * al[1] + al[0] * al[2] + al[1] * al[2];
    const double e3 = al[0] * al[1] * al[2];
    const double amax = std::max({std::abs(al[0]), std::abs(al[1]), std::abs(al[2]), 1.0});
    return {std::abs(e1 + p.a) / amax,
            std::abs(e2 + d.frak_b) / (amax * amax),
            std::abs(e3 + p.c1 * d.frak_c) / (amax * amax * amax)};
}

} // namespace hml
