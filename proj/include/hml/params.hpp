#pragma once

// Parameter algebra for the five real moduli (a, b, c1, c2, c3):
// derived constants
//     frakC = a*c1 + b*c2 + 2*c1^2 + 2*c2^2
//     frakB = 2*c1*a + 3*c1^2 + c2*b + 3*c2^2
// the spectral cubic  alpha^3 + a*alpha^2 - frakB*alpha + c1*frakC = 0,
// slopes beta_j = c2*alpha_j/(alpha_j - c1), and amplitudes
//     gamma_j^2 = (frakC + alpha_k*alpha_l) / (frakC * prod_{m != j}(alpha_j - alpha_m)),
//     gamma_4   = sqrt(1/frakC).
// The six sum identities
//     sum gamma_j^2 = gamma_4^2,  sum gamma_j^2 alpha_j = 0,  sum gamma_j^2 alpha_j^2 = 1,
//     sum gamma_j^2 beta_j  = 0,  sum gamma_j^2 beta_j^2 = 1, sum gamma_j^2 alpha_j beta_j = 0
// hold whenever the cubic has three distinct real roots (they follow from
// Vieta with root product -c1*frakC); they are re-verified before any
// SpectralData is returned.

#include "hml/errors.hpp"
#include "hml/rational.hpp"

#include <array>
#include <optional>

namespace hml {

struct ModuliParams {
    double a = 0, b = 0, c1 = 0, c2 = 0, c3 = 0;
    // exact values when the point was given as rationals (search grids, serialized candidates)
    std::optional<std::array<Rational, 5>> exact;

    // c1 = 0 or c2 = 0 is rejected: alpha = c1 is then a root of the cubic
    // (residual at alpha = c1 is exactly -c1*c2^2) and beta degenerates.
    static ModuliParams from_doubles(double a, double b, double c1, double c2, double c3);
    static ModuliParams from_rationals(const Rational& a, const Rational& b, const Rational& c1,
                                       const Rational& c2, const Rational& c3);
};

struct DerivedConstants {
    double frak_c = 0;
    double frak_b = 0;
    std::optional<Rational> frak_c_exact;
    std::optional<Rational> frak_b_exact;

    // periodic profiles need frakC > 0; callers that do reject non-positive
    // frakC throw NonPositiveCError at their own boundary
    bool admits_periodic_profile() const { return frak_c > 0; }
};

struct SpectralData {
    std::array<double, 3> alphas{};                      // sorted descending
    std::array<double, 3> betas{};
    std::array<double, 4> gammas{};                      // nonnegative, gammas[3] = sqrt(1/frakC)
    std::array<std::optional<Rational>, 3> alpha_exact;  // set per root certified rational
    std::array<std::optional<Rational>, 3> beta_exact;

    bool all_roots_rational() const {
        return alpha_exact[0] && alpha_exact[1] && alpha_exact[2];
    }
};

DerivedConstants derive_constants(const ModuliParams& p);

// Roots of alpha^3 + a*alpha^2 - frakB*alpha + c1*frakC, sorted descending.
// Exact rational roots are tried first (divisor enumeration on the integer
// form of the cubic) and flagged; remaining roots come from Cardano's trig
// form with a Newton polish. Throws ComplexRootsError / MultipleRootError /
// DegenerateRootError per the root pattern.
SpectralData solve_spectral_cubic(const ModuliParams& p, const DerivedConstants& d);

// beta_j = c2*alpha_j/(alpha_j - c1); exact when alpha_j, c1, c2 are rational.
void compute_betas(SpectralData& s, const ModuliParams& p);

// gamma_1..gamma_4 with all six identities checked to 1e-12.
void compute_gammas(SpectralData& s, const DerivedConstants& d);

// Full params pipeline: derive + solve + betas + gammas (requires frakC > 0).
SpectralData build_spectral_data(const ModuliParams& p, const DerivedConstants& d);

// max of the six identity residuals |sum gamma^2 ... - target|
double gamma_identity_residual(const SpectralData& s, const DerivedConstants& d);

// relative residuals of the three Vieta relations (sum, pair sum, product -c1*frakC)
std::array<double, 3> vieta_residuals(const SpectralData& s, const ModuliParams& p,
                                      const DerivedConstants& d);

// relative distinctness gap used for MultipleRootError, per the root scale
inline double root_gap_tolerance(double max_abs_alpha) { return 1e-9 * (1.0 + max_abs_alpha); }

} // namespace hml
