#include "hml/phases.hpp"

#include "hml/quadrature.hpp"

#include <cmath>
#include <limits>

namespace hml {

namespace {

double integrand_p(const ProfileSolution& prof, double z) { return prof.c3() * std::exp(-3.0 * prof.u(z)); }

double integrand_g(const ProfileSolution& prof, double z) {
    const double uu = prof.u(z);
    return prof.c3() * std::exp(-uu) / (std::exp(2.0 * uu) - prof.frak_c());
}

double integrand_rel(const ProfileSolution& prof, double z) {
    const double uu = prof.u(z);
    return -prof.c3() * prof.frak_c() * std::exp(-3.0 * uu) / (std::exp(2.0 * uu) - prof.frak_c());
}

// integral over [z0, z1] (within one sample interval) of f(prof, .);
// the phase_G integrand peaks sharply where e^{2u} approaches frakC, so the
// panel subdivides until two Gauss orders agree
template <typename F>
double panel(const ProfileSolution& prof, F&& f, double z0, double z1, int depth) {
    const GaussLegendre& lo = GaussLegendre::order(8);
    const GaussLegendre& hi = GaussLegendre::order(16);
    auto g = [&](double z) { return f(prof, z); };
    const double i_lo = lo.integrate(g, z0, z1);
    const double i_hi = hi.integrate(g, z0, z1);
    if (std::abs(i_hi - i_lo) <= 1e-15 * std::max(1.0, std::abs(i_hi)) || depth >= 14) return i_hi;
    const double mid = 0.5 * (z0 + z1);
    return panel(prof, f, z0, mid, depth + 1) + panel(prof, f, mid, z1, depth + 1);
}

template <typename F>
double sub_integral(const ProfileSolution& prof, F&& f, double z0, double z1) {
    return panel(prof, f, z0, z1, 0);
}

template <typename F>
std::vector<double> cumulative(const ProfileSolution& prof, F&& f) {
    const auto& smp = prof.samples();
    std::vector<double> cum(smp.size(), 0.0);
    for (std::size_t k = 1; k < smp.size(); ++k)
        cum[k] = cum[k - 1] + sub_integral(prof, f, smp[k - 1].z, smp[k].z);
    return cum;
}

// phase at arbitrary z from a cumulative node table
double eval_phase(const ProfileSolution& prof, const std::vector<double>& cum, double theta, double z,
                  double (*f)(const ProfileSolution&, double)) {
    const double tau = prof.tau();
    const double k = std::floor(z / tau);
    double r = z - k * tau;
    if (r < 0.0) r = 0.0;
    if (r > tau) r = tau;
    const auto& smp = prof.samples();
    const double h = tau / static_cast<double>(smp.size() - 1);
    auto idx = static_cast<std::size_t>(r / h);
    if (idx >= smp.size() - 1) idx = smp.size() - 2;
    const double base = cum[idx] + sub_integral(prof, f, smp[idx].z, r);
    return k * theta + base;
}

} // namespace

double PhaseData::phase_p(double z) const { return eval_phase(profile, cum_p, theta_p, z, &integrand_p); }
double PhaseData::phase_g(double z) const { return eval_phase(profile, cum_g, theta_g, z, &integrand_g); }

double amplitude_H(const ProfileSolution& profile, double z) {
    if (profile.c3() == 0.0)
        throw NegativeRadicandError("amplitude H is not defined on c3 = 0 profiles (radicand reaches 0)");
    const double radicand = profile.frak_c() - std::exp(2.0 * profile.u(z));
    if (radicand < 0.0)
        throw NegativeRadicandError("amplitude radicand frakC - e^{2u} < 0 at z; profile violates its energy level");
    return std::sqrt(radicand);
}

PhaseData windings(const ProfileSolution& profile) {
    if (profile.c3() == 0.0) throw NoOscillationError("windings need a periodic (c3 != 0) profile");
    PhaseData pd;
    pd.profile = profile;
    pd.cum_p = cumulative(pd.profile, &integrand_p);
    pd.cum_g = cumulative(pd.profile, &integrand_g);
    pd.theta_p = pd.cum_p.back();
    pd.theta_g = pd.cum_g.back();
    pd.theta_rel = pd.theta_p - pd.theta_g;
    pd.theta_rel_direct = cumulative(pd.profile, &integrand_rel).back();
    if (std::abs(pd.theta_rel - pd.theta_rel_direct) > 1e-12 * std::max(1.0, std::abs(pd.theta_rel)))
        throw QuadratureNonConvergence("relative winding disagrees between its two quadrature routes");
    return pd;
}

std::optional<WindingFraction> rationalize_winding(double theta_rel, std::int64_t max_denominator, double eps_close) {
    if (max_denominator < 1) throw ConfigError("max_denominator must be >= 1");
    const double x = theta_rel / (2.0 * M_PI);

    // continued-fraction convergents p_k/q_k of x; |q x - p| decreases in k,
    // so the first qualifying convergent has the smallest qualifying q
    double frac = x;
    std::int64_t p_prev = 1, q_prev = 0;
    std::int64_t p = static_cast<std::int64_t>(std::floor(frac));
    std::int64_t q = 1;
    frac -= std::floor(frac);
    for (int iter = 0; iter < 64; ++iter) {
        if (q > max_denominator) break;
        if (std::abs(static_cast<double>(q) * x - static_cast<double>(p)) < eps_close)
            return WindingFraction{q, p};
        if (frac < 1e-18) break;
        frac = 1.0 / frac;
        const double a_d = std::floor(frac);
        if (a_d > 9.2e18) break;
        const auto a = static_cast<std::int64_t>(a_d);
        frac -= a_d;
        // overflow-safe advance
        if (p > (std::numeric_limits<std::int64_t>::max() - p_prev) / std::max<std::int64_t>(a, 1)) break;
        const std::int64_t pn = a * p + p_prev;
        const std::int64_t qn = a * q + q_prev;
        p_prev = p;
        q_prev = q;
        p = pn;
        q = qn;
    }
    return std::nullopt;
}

} // namespace hml
