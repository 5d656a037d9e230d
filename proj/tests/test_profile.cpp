#include "hml/profile.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace hml;

namespace {

// mpmath 40-digit fixtures for frakC = 6, c3 = 1
constexpr double kSMin6 = 0.5689019904851705980;
constexpr double kSMax6 = 5.9953596120951366089;
constexpr double kTau6 = 1.718622815866053627594;
// and for frakC = 10, c3 = 1
constexpr double kTau10 = 1.550484924873902156799;

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / (n - 1);
    return v;
}

} // namespace

TEST_SUITE("profile") {

TEST_CASE("oscillation criterion") {
    CHECK(oscillation_exists(6, 1));
    CHECK(!oscillation_exists(6, 0));
    CHECK(!oscillation_exists(1, 1)); // 27/256 < 1
    CHECK_THROWS_AS(oscillation_exists(-1, 1), NonPositiveCError);
}

TEST_CASE("oscillation criterion matches the quintic root pattern") {
    std::uint64_t st = 4242;
    auto rnd = [&]() {
        st ^= st << 13;
        st ^= st >> 7;
        st ^= st << 17;
        return static_cast<double>(st >> 11) * 0x1.0p-53;
    };
    int agree = 0;
    for (int it = 0; it < 100; ++it) {
        const double frak_c = 0.5 + 8.0 * rnd();
        const double crit = std::sqrt(27.0 * std::pow(frak_c, 4) / 256.0);
        const double c3 = crit * (0.05 + 1.6 * rnd()); // straddles the threshold
        if (std::abs(c3 * c3 - 27.0 * std::pow(frak_c, 4) / 256.0) < 1e-9) continue;
        const bool predicted = oscillation_exists(frak_c, c3);
        const bool oracle = oracles::negative_quintic_roots(frak_c, c3) == 2;
        CHECK(predicted == oracle);
        ++agree;
    }
    CHECK(agree >= 95);
}

TEST_CASE("turning points at the reference profile") {
    const TurningPoints t = find_turning_points(6, 1);
    CHECK(t.s_min == doctest::Approx(kSMin6).epsilon(1e-13));
    CHECK(t.s_max == doctest::Approx(kSMax6).epsilon(1e-13));
    // quartic residuals, relative
    auto quartic = [](double s) { return s * s * s * s - 6 * s * s * s + 1.0; };
    CHECK(std::abs(quartic(t.s_min)) < 1e-12 * std::pow(t.s_min, 3) * 6 + 1e-12);
    CHECK(std::abs(quartic(t.s_max)) < 1e-12 * std::pow(t.s_max, 4));

    // bisection-oracle brackets from the spec example
    CHECK(quartic(0.565) > 0);
    CHECK(quartic(0.57) < 0);
    CHECK(quartic(5.9) < 0);
    CHECK(quartic(6.0) > 0);
}

TEST_CASE("turning points degenerate limits") {
    // c3 -> 0+: s_max -> frakC, s_min -> 0+
    const TurningPoints t = find_turning_points(6, 1e-5);
    CHECK(t.s_max == doctest::Approx(6.0).epsilon(1e-9));
    CHECK(t.s_min < 1e-3);
    CHECK_THROWS_AS(find_turning_points(6, 0), NoOscillationError);
    // just above the critical c3 there is no oscillation
    const double crit = std::sqrt(27.0 * std::pow(6.0, 4) / 256.0);
    CHECK_THROWS_AS(find_turning_points(6, std::nextafter(crit, 7.0)), NoOscillationError);
    // at the closest subcritical double the gap is ~6.4e-9*frakC, just above
    // the 1e-9*frakC MultipleRootError threshold, and both roots resolve
    const TurningPoints tc = find_turning_points(6, std::nextafter(crit, 0.0));
    CHECK(tc.s_max - tc.s_min > 1e-9 * 6.0);
    CHECK(tc.s_max - tc.s_min < 1e-6);
}

TEST_CASE("period against fixtures and the reversed substitution") {
    const TurningPoints t = find_turning_points(6, 1);
    const double tau = compute_period(t, 6, 1);
    CHECK(tau == doctest::Approx(kTau6).epsilon(5e-13));
    const double tau_rev = oracles::period_reversed(t.s_min, t.s_max, 6, 1);
    CHECK(std::abs(tau - tau_rev) < 1e-13 * tau);

    const TurningPoints t10 = find_turning_points(10, 1);
    CHECK(compute_period(t10, 10, 1) == doctest::Approx(kTau10).epsilon(5e-13));
}

TEST_CASE("period: quadrature agrees with the ODE return time") {
    const double tau = compute_period(find_turning_points(6, 1), 6, 1);
    const double tau_ode = ode_return_period(6, 1);
    CHECK(std::abs(tau - tau_ode) < 1e-8 * tau);
}

TEST_CASE("solved profile satisfies its invariants") {
    const ProfileSolution sol = solve_profile(6, 1, 512);
    CHECK(sol.tau() == doctest::Approx(kTau6).epsilon(5e-13));

    const auto grid = linspace(0.0, 10.0 * sol.tau(), 1024);
    CHECK(energy_residual(sol, grid) < 1e-10);
    CHECK(q_form_residual(sol, grid) < 1e-8);

    // periodic extension and reflection symmetry
    double worst_per = 0, worst_ref = 0;
    for (double z : linspace(0.0, sol.tau(), 257)) {
        worst_per = std::max(worst_per, std::abs(sol.u(z + sol.tau()) - sol.u(z)));
        worst_ref = std::max(worst_ref, std::abs(sol.u(sol.tau() - z) - sol.u(z)));
    }
    CHECK(worst_per < 1e-10);
    CHECK(worst_ref < 1e-9);

    // anchored at the u-minimum
    CHECK(sol.u(0.0) == doctest::Approx(0.5 * std::log(kSMin6)).epsilon(1e-12));
    CHECK(sol.du(0.0) == 0.0);
    CHECK(sol.u(0.5 * sol.tau()) == doctest::Approx(0.5 * std::log(kSMax6)).epsilon(1e-12));

    // second-order residual |u'' + e^{2u} - 3 c3^2 e^{-6u}| under numerical
    // differentiation of the samples
    double worst_ode = 0;
    const double h = 1e-4;
    for (double z : linspace(0.1, sol.tau() - 0.1, 101)) {
        const double ddu = (sol.u(z + h) - 2.0 * sol.u(z) + sol.u(z - h)) / (h * h);
        worst_ode = std::max(worst_ode, std::abs(ddu + std::exp(2 * sol.u(z)) - 3.0 * std::exp(-6 * sol.u(z))));
    }
    CHECK(worst_ode < 1e-8);
}

TEST_CASE("corrupted sample is visible in the energy residual") {
    const ProfileSolution sol = solve_profile(6, 1, 512);
    auto samples = sol.samples();
    const std::size_t k = samples.size() / 3;
    const double du = samples[k].du;
    samples[k].du += 1e-3;
    const ProfileSolution bad =
        ProfileSolution::from_parts(sol.frak_c(), sol.c3(), sol.turning(), sol.tau(), std::move(samples));
    CHECK(bad.energy_residual_at(bad.samples()[k].z) >= 0.9 * std::abs(2e-3 * du));
    CHECK(bad.energy_residual_at(bad.samples()[k].z) > 1e-6);
}

TEST_CASE("c3 = 0 integrator tracks the closed form") {
    const double frak_c = 6.0;
    const double delta = 0.3;
    const auto oracle = oracles::SechOracle::through(frak_c, delta);
    const double u0 = 0.5 * std::log(frak_c) - delta;
    CHECK(oracle.u(0.0) == doctest::Approx(u0).epsilon(1e-14));

    const double z_end = 5.0 / std::sqrt(frak_c);
    const auto pts = integrate_profile_ode(frak_c, 0.0, u0, oracle.du(0.0), z_end, 256, /*project=*/false);
    double worst = 0;
    for (const auto& s : pts) worst = std::max(worst, std::abs(s.u - oracle.u(s.z)));
    CHECK(worst < 1e-8);
}

TEST_CASE("serialized parts reproduce evaluations exactly") {
    const ProfileSolution sol = solve_profile(6, 1, 256);
    const ProfileSolution copy =
        ProfileSolution::from_parts(sol.frak_c(), sol.c3(), sol.turning(), sol.tau(), sol.samples());
    for (double z : linspace(-3.0, 9.0, 400)) {
        CHECK(copy.u(z) == sol.u(z));
        CHECK(copy.du(z) == sol.du(z));
    }
}

} // TEST_SUITE
