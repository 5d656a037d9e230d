#pragma once

// The conformal-factor profile u(z): bounded solutions of the energy law
//     u'^2 + e^{2u} + c3^2 e^{-6u} - frakC = 0
// oscillate between turning points where u' = 0. In s = e^{2u} the turning
// points are the two positive simple roots of s^4 - frakC s^3 + c3^2 = 0
// bracketing the well minimum s = 3 frakC / 4, and the period is
//     tau = int_{s_min}^{s_max} ds / (s sqrt(frakC - s - c3^2 s^-3)).
// The quartic factors as (s - s_min)(s - s_max)(s^2 + beta s + gamma) with
// the last factor positive on [s_min, s_max]; substituting
// s = s_min + (s_max - s_min) sin^2(phi) removes both endpoint singularities
// analytically:  tau = int_0^{pi/2} 2 sqrt(s) / sqrt(s^2 + beta s + gamma) dphi.
//
// solve_profile integrates u'' = 3 c3^2 e^{-6u} - e^{2u} with an embedded
// Dormand-Prince 5(4) pair, rescales u' onto the energy level after each
// step, samples one period on a uniform grid anchored at the u-minimum
// (z = 0), and evaluates anywhere by periodicity + quintic Hermite
// interpolation (u'' at the nodes comes from the ODE, so the interpolant
// is C^2).

#include "hml/errors.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace hml {

struct TurningPoints {
    double s_min = 0;
    double s_max = 0;
};

struct ProfileSample {
    double z, u, du;
};

// true iff c3 != 0 and c3^2 < 27 frakC^4 / 256 (strict): the quartic then has
// two distinct positive roots around the well. Requires frakC > 0.
bool oscillation_exists(double frak_c, double c3);

// The two positive simple quartic roots adjacent to s = 3 frakC/4, Newton
// refined to 1e-14 relative. MultipleRootError when the gap < 1e-9 * frakC.
TurningPoints find_turning_points(double frak_c, double c3);

// Period by adaptive Gauss-Legendre on the desingularized integrand,
// refined until successive panel doublings differ by < tol (relative).
double compute_period(const TurningPoints& t, double frak_c, double c3, double tol = 1e-13);

class ProfileSolution {
public:
    ProfileSolution() = default;

    // Reassemble from serialized parts (no re-integration); the interpolant
    // is rebuilt deterministically from the samples, so a JSON round-trip
    // reproduces evaluations exactly.
    static ProfileSolution from_parts(double frak_c, double c3, const TurningPoints& turning, double tau,
                                      std::vector<ProfileSample> samples);

    double frak_c() const { return frak_c_; }
    double c3() const { return c3_; }
    double tau() const { return tau_; }
    const TurningPoints& turning() const { return turning_; }
    const std::vector<ProfileSample>& samples() const { return samples_; }

    double u(double z) const;
    double du(double z) const;
    // u'' from the ODE at the interpolated u(z)
    double ddu(double z) const;

    // |u'^2 + e^{2u} + c3^2 e^{-6u} - frakC| at z
    double energy_residual_at(double z) const;

    friend ProfileSolution solve_profile(double frak_c, double c3, int n_samples, double rtol);

private:
    void build_interpolation();
    double reduce(double z, std::size_t& interval) const;

    double frak_c_ = 0, c3_ = 0, tau_ = 0;
    TurningPoints turning_;
    std::vector<ProfileSample> samples_;
    // per-interval monomial coefficients of the quintic Hermite pieces
    std::vector<std::array<double, 6>> coef_;
    double h_ = 0;
};

// Integrate one period from the u-minimum and sample it densely.
// n_samples >= 64 grid intervals over [0, tau].
ProfileSolution solve_profile(double frak_c, double c3, int n_samples = 512, double rtol = 1e-12);

// max energy residual over a z grid
double energy_residual(const ProfileSolution& sol, const std::vector<double>& z_grid);

// max residual of the quintic form q'^2 = 256 c3^2 q^5 + 4 frakC q^2 + q
// under q = -e^{-2u}/4 over a z grid
double q_form_residual(const ProfileSolution& sol, const std::vector<double>& z_grid);

// Low-level integrator access (used by the c3 = 0 closed-form checks and the
// period cross-validation): integrates from (u0, du0) to z_end, returning
// n_out+1 equally spaced states. No periodicity assumed.
std::vector<ProfileSample> integrate_profile_ode(double frak_c, double c3, double u0, double du0,
                                                 double z_end, int n_out, bool project_energy,
                                                 double rtol = 1e-12);

// z > 0 at which u' returns to zero the second time starting from the
// u-minimum: an ODE-only period measurement, independent of the quadrature.
double ode_return_period(double frak_c, double c3, double rtol = 1e-12);

} // namespace hml
