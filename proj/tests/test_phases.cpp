#include "hml/phases.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>

using namespace hml;

namespace {

// mpmath 40-digit fixtures, frakC = 6, c3 = 1 (quadrature at two resolutions)
constexpr double kThetaP6 = 1.114578036465702753217;
constexpr double kThetaG6 = -3.343734109397108259652;
constexpr double kThetaRel6 = 4.458312145862811012869;
// frakC = 10, c3 = 1
constexpr double kThetaRel10 = 4.331974185960194023557;

PhaseData reference_phases() { return windings(solve_profile(6, 1, 1024)); }

} // namespace

TEST_SUITE("phases") {

TEST_CASE("amplitude H") {
    const ProfileSolution prof = solve_profile(6, 1, 512);
    CHECK(amplitude_H(prof, 0.0) == doctest::Approx(std::sqrt(6.0 - prof.turning().s_min)).epsilon(1e-12));

    // H^2 = u'^2 + c3^2 e^{-6u} on the energy level
    double worst = 0;
    for (int i = 0; i <= 200; ++i) {
        const double z = prof.tau() * i / 200.0;
        const double H = amplitude_H(prof, z);
        const double du = prof.du(z);
        worst = std::max(worst, std::abs(H * H - du * du - std::exp(-6.0 * prof.u(z))));
    }
    CHECK(worst < 1e-10);

    // tau-periodic and even about z = 0
    CHECK(amplitude_H(prof, 0.4) == doctest::Approx(amplitude_H(prof, 0.4 + prof.tau())).epsilon(1e-12));
    CHECK(amplitude_H(prof, 0.4) == doctest::Approx(amplitude_H(prof, -0.4)).epsilon(1e-12));
}

TEST_CASE("windings against fixtures, signs, and both routes") {
    const PhaseData pd = reference_phases();
    CHECK(pd.theta_p == doctest::Approx(kThetaP6).epsilon(1e-11));
    CHECK(pd.theta_g == doctest::Approx(kThetaG6).epsilon(1e-11));
    CHECK(pd.theta_rel == doctest::Approx(kThetaRel6).epsilon(1e-11));
    CHECK(pd.theta_g < 0);
    CHECK(pd.theta_p > 0);
    CHECK(std::abs(pd.theta_rel - pd.theta_rel_direct) < 1e-12);

    const PhaseData pd10 = windings(solve_profile(10, 1, 1024));
    CHECK(pd10.theta_rel == doctest::Approx(kThetaRel10).epsilon(1e-11));
}

TEST_CASE("phases vanish at zero and add over whole periods") {
    const PhaseData pd = reference_phases();
    CHECK(pd.phase_p(0.0) == 0.0);
    CHECK(pd.phase_g(0.0) == 0.0);
    const double tau = pd.profile.tau();
    CHECK(pd.phase_p(tau) == doctest::Approx(pd.theta_p).epsilon(1e-13));
    CHECK(pd.phase_p(2 * tau) == doctest::Approx(2 * pd.theta_p).epsilon(1e-13));
    CHECK(pd.phase_g(3 * tau) == doctest::Approx(3 * pd.theta_g).epsilon(1e-13));
    // additivity over whole-period shifts
    const double at = pd.phase_p(0.37);
    CHECK(pd.phase_p(0.37 + 2 * tau) - 2 * pd.theta_p == doctest::Approx(at).epsilon(1e-12));
}

TEST_CASE("negating c3 flips all three windings") {
    const PhaseData plus = windings(solve_profile(6, 1, 512));
    const PhaseData minus = windings(solve_profile(6, -1, 512));
    CHECK(minus.theta_p == doctest::Approx(-plus.theta_p).epsilon(1e-12));
    CHECK(minus.theta_g == doctest::Approx(-plus.theta_g).epsilon(1e-12));
    CHECK(minus.theta_rel == doctest::Approx(-plus.theta_rel).epsilon(1e-12));
}

TEST_CASE("P and Q satisfy their first-order laws under numerical differentiation") {
    const PhaseData pd = reference_phases();
    const ProfileSolution& prof = pd.profile;
    const double frak_c = prof.frak_c(), c3 = prof.c3();
    const double h = 1e-5;
    double worst_p = 0, worst_q = 0;
    for (int i = 1; i < 40; ++i) {
        const double z = prof.tau() * i / 40.0;
        auto P = [&](double zz) { return std::exp(prof.u(zz)) * std::polar(1.0, pd.phase_p(zz)); };
        auto Q = [&](double zz) { return amplitude_H(prof, zz) * std::polar(1.0, pd.phase_g(zz)); };
        const std::complex<double> dP = (P(z + h) - P(z - h)) / (2.0 * h);
        const std::complex<double> dQ = (Q(z + h) - Q(z - h)) / (2.0 * h);
        const std::complex<double> mu(prof.du(z), c3 * std::exp(-3.0 * prof.u(z)));
        worst_p = std::max(worst_p, std::abs(dP - mu * P(z)));
        // Q' = e^{5u} Q / (i c3 - u' e^{3u})
        const std::complex<double> denom(-prof.du(z) * std::exp(3.0 * prof.u(z)), c3);
        worst_q = std::max(worst_q, std::abs(dQ - std::exp(5.0 * prof.u(z)) * Q(z) / denom));
    }
    (void)frak_c;
    CHECK(worst_p < 1e-8);
    CHECK(worst_q < 1e-8);
}

TEST_CASE("winding rationalization") {
    const double two_pi = 2.0 * M_PI;
    {
        const auto wf = rationalize_winding(M_PI, 100);
        REQUIRE(wf.has_value());
        CHECK(wf->n == 2);
        CHECK(wf->m == 1);
    }
    {
        const auto wf = rationalize_winding(two_pi * (3.0 / 7.0) + 1e-12, 1000);
        REQUIRE(wf.has_value());
        CHECK(wf->n == 7);
        CHECK(wf->m == 3);
    }
    {
        // integer windings close with n = 1
        const auto wf = rationalize_winding(2.0 * two_pi, 10);
        REQUIRE(wf.has_value());
        CHECK(wf->n == 1);
        CHECK(wf->m == 2);
    }
    {
        // negative windings keep their sign in m
        const auto wf = rationalize_winding(-M_PI / 2.0, 100);
        REQUIRE(wf.has_value());
        CHECK(wf->n == 4);
        CHECK(wf->m == -1);
    }
    {
        // 1/sqrt(2): bounded partial quotients, every convergent misses the
        // absolute closeness bound within the budget
        CHECK(!rationalize_winding(two_pi / std::sqrt(2.0), 1000000, 1e-9));
    }
}

} // TEST_SUITE
