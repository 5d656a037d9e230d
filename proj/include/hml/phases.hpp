#pragma once

// z-dependent scalar factors of the immersion:
//   P(z) = e^{u} e^{i phase_P(z)},          phase_P' = c3 e^{-3u}
//   Q(z) = H(z) e^{i phase_G(z)},  H = sqrt(frakC - e^{2u}),
//                                           phase_G' = c3 e^{-u}/(e^{2u} - frakC)
// Per-period windings:
//   Theta_P  = c3 int_0^tau e^{-3u} dz
//   Theta_G  = c3 int_0^tau e^{-u}/(e^{2u} - frakC) dz
//   Theta_rel = Theta_P - Theta_G = -c3 frakC int_0^tau e^{-3u}/(e^{2u} - frakC) dz
// The torus closes in z over n*tau iff n*Theta_rel is a multiple of 2*pi
// (a common phase is gauged away by the Hopf projection, so only the
// relative winding matters).

#include "hml/profile.hpp"

#include <cstdint>
#include <optional>

namespace hml {

struct PhaseData {
    ProfileSolution profile;
    double theta_p = 0;
    double theta_g = 0;
    double theta_rel = 0;            // = theta_p - theta_g
    double theta_rel_direct = 0;     // same quantity from its own quadrature

    // cumulative phases at the profile sample nodes
    std::vector<double> cum_p;
    std::vector<double> cum_g;

    // phase_X(z) = k*Theta_X + int over the remainder, k = floor(z/tau)
    double phase_p(double z) const;
    double phase_g(double z) const;
};

// H(z) = sqrt(frakC - e^{2u(z)}); requires c3 != 0 (else the radicand hits 0
// at the top of the sech bump)
double amplitude_H(const ProfileSolution& profile, double z);

// Windings and cumulative phase tables over one stored period.
PhaseData windings(const ProfileSolution& profile);

struct WindingFraction {
    std::int64_t n; // z-period multiplier, n >= 1
    std::int64_t m; // whole windings: n*Theta_rel ~ 2*pi*m
};

// Smallest continued-fraction convergent m/n of Theta_rel/(2*pi) with
// n <= max_denominator and |n*(Theta_rel/2pi) - m| < eps_close.
// The bound is absolute (not scaled by n): it is the phase-closure error
// that the behavioral certification measures.
std::optional<WindingFraction> rationalize_winding(double theta_rel, std::int64_t max_denominator,
                                                   double eps_close = 1e-9);

} // namespace hml
