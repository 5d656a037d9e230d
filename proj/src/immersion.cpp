#include "hml/immersion.hpp"

#include <algorithm>
#include <cmath>

namespace hml {

namespace {

constexpr complexd I{0.0, 1.0};

struct ZFactors {
    double u, du, eu, H;
    complexd P, Q;          // with phases
    complexd dlogP, dlogQ;  // P'/P, Q'/Q
};

ZFactors z_factors(const ImmersionData& d, double z) {
    const auto& prof = d.profile();
    ZFactors f;
    f.u = prof.u(z);
    f.du = prof.du(z);
    f.eu = std::exp(f.u);
    const double C = d.derived.frak_c;
    const double c3 = d.moduli.c3;
    const double e2u = f.eu * f.eu;
    f.H = std::sqrt(std::max(C - e2u, 0.0));
    f.P = f.eu * std::polar(1.0, d.phases.phase_p(z));
    f.Q = f.H * std::polar(1.0, d.phases.phase_g(z));
    f.dlogP = complexd(f.du, c3 * std::exp(-3.0 * f.u));
    f.dlogQ = complexd(-f.du * e2u, -c3 * std::exp(-f.u)) / (C - e2u);
    return f;
}

} // namespace

Mat4c ConnectionMatrices::reinstate(const Mat4c& m, double theta) {
    Mat4c out = m;
    const complexd ep = std::polar(1.0, theta);
    for (int j = 1; j < 4; ++j) {
        out(0, j) *= ep;
        out(j, 0) *= std::conj(ep);
    }
    return out;
}

double ImmersionData::det_phase_sign() const {
    const auto& al = spectral.alphas;
    const auto& be = spectral.betas;
    // Delta = det[[1,1,1],[alpha],[beta]]
    const double delta = (al[1] * be[2] - al[2] * be[1]) - (al[0] * be[2] - al[2] * be[0]) +
                         (al[0] * be[1] - al[1] * be[0]);
    return (moduli.c3 * delta >= 0.0) ? 1.0 : -1.0;
}

ImmersionData ImmersionData::build(const ModuliParams& p, int n_samples) {
    ImmersionData d;
    d.moduli = p;
    d.derived = derive_constants(p);
    if (!d.derived.admits_periodic_profile())
        throw NonPositiveCError("frakC <= 0: the parameter point admits no periodic profile");
    d.spectral = build_spectral_data(p, d.derived);
    d.phases = windings(solve_profile(d.derived.frak_c, p.c3, n_samples));
    return d;
}

Vec4c eval_psi(const ImmersionData& d, double x, double y, double z) {
    const ZFactors f = z_factors(d, z);
    Vec4c psi;
    for (int j = 0; j < 3; ++j)
        psi(j) = d.spectral.gammas[j] * f.P *
                 std::polar(1.0, x * d.spectral.alphas[j] + y * d.spectral.betas[j]);
    psi(3) = d.spectral.gammas[3] * f.Q;
    return psi;
}

PsiJet eval_psi_jet(const ImmersionData& d, double x, double y, double z) {
    const ZFactors f = z_factors(d, z);
    PsiJet jet;
    for (int j = 0; j < 3; ++j) {
        const complexd comp =
            d.spectral.gammas[j] * f.P * std::polar(1.0, x * d.spectral.alphas[j] + y * d.spectral.betas[j]);
        jet.psi(j) = comp;
        jet.psi_x(j) = I * d.spectral.alphas[j] * comp;
        jet.psi_y(j) = I * d.spectral.betas[j] * comp;
        jet.psi_z(j) = f.dlogP * comp;
    }
    const complexd c4 = d.spectral.gammas[3] * f.Q;
    jet.psi(3) = c4;
    jet.psi_x(3) = 0.0;
    jet.psi_y(3) = 0.0;
    jet.psi_z(3) = f.dlogQ * c4;
    return jet;
}

FrameMatrices eval_frame(const ImmersionData& d, double x, double y, double z) {
    const PsiJet jet = eval_psi_jet(d, x, y, z);
    const double emu = std::exp(-d.profile().u(z));
    FrameMatrices fm;
    fm.phi.row(0) = jet.psi.transpose();
    fm.phi.row(1) = (emu * jet.psi_x).transpose();
    fm.phi.row(2) = (emu * jet.psi_y).transpose();
    fm.phi.row(3) = (emu * jet.psi_z).transpose();
    fm.psi_frame = fm.phi;
    fm.psi_frame.row(0) *= std::polar(1.0, d.theta(x, y));
    return fm;
}

ConnectionMatrices build_connection(const ImmersionData& d, double z) {
    const double u = d.profile().u(z);
    const double du = d.profile().du(z);
    const double c1 = d.moduli.c1, c2 = d.moduli.c2, c3 = d.moduli.c3;
    const double a = d.moduli.a, b = d.moduli.b;
    const double eu = std::exp(u);
    const double w3 = c3 * std::exp(-3.0 * u);

    ConnectionMatrices cm;
    cm.u0.setZero();
    cm.v0.setZero();
    cm.w0.setZero();

    cm.u0(0, 0) = I * a;
    cm.u0(0, 1) = eu;
    cm.u0(1, 0) = -eu;
    cm.u0(1, 1) = -I * (a + c1);
    cm.u0(1, 2) = I * c2;
    cm.u0(1, 3) = I * w3 - du;
    cm.u0(2, 1) = I * c2;
    cm.u0(2, 2) = I * c1;
    cm.u0(3, 1) = I * w3 + du;

    cm.v0(0, 0) = I * b;
    cm.v0(0, 2) = eu;
    cm.v0(1, 1) = I * c2;
    cm.v0(1, 2) = I * c1;
    cm.v0(2, 0) = -eu;
    cm.v0(2, 1) = I * c1;
    cm.v0(2, 2) = -I * (b + c2);
    cm.v0(2, 3) = I * w3 - du;
    cm.v0(3, 2) = I * w3 + du;

    cm.w0(0, 3) = eu;
    cm.w0(1, 1) = I * w3;
    cm.w0(2, 2) = I * w3;
    cm.w0(3, 0) = -eu;
    cm.w0(3, 3) = -2.0 * I * w3;
    return cm;
}

CP3Point hopf_project(const Vec4c& v) {
    const double norm = v.norm();
    if (norm < 1e-12) throw ZeroVectorError("cannot Hopf-project (near-)zero vector");
    Vec4c rep = v / norm;
    int pivot = -1;
    for (int j = 0; j < 4; ++j) {
        if (std::abs(rep(j)) > 1e-8) {
            pivot = j;
            break;
        }
    }
    if (pivot < 0) throw ZeroVectorError("no component above the gauge threshold");
    const complexd ph = rep(pivot) / std::abs(rep(pivot));
    rep *= std::conj(ph);
    return CP3Point{rep};
}

double fubini_study_distance(const CP3Point& p, const CP3Point& q) {
    const complexd ip = p.rep.dot(q.rep);
    const double c = std::abs(ip);
    // near-coincident points: the arccos form loses half the digits to the
    // 1 - |ip| cancellation; the orthogonal-residual norm is sin(dist) and
    // stays forward-stable
    if (c > M_SQRT1_2) {
        const double s = (q.rep - ip * p.rep).norm();
        return std::asin(std::clamp(s, 0.0, 1.0));
    }
    return std::acos(std::clamp(c, 0.0, 1.0));
}

std::optional<XyPeriods> xy_periods(const SpectralData& s) {
    if (!s.all_roots_rational()) return std::nullopt;
    for (int j = 0; j < 3; ++j)
        if (!s.beta_exact[j]) return std::nullopt;
    Rational gx = rational_gcd(rational_gcd(*s.alpha_exact[0], *s.alpha_exact[1]), *s.alpha_exact[2]);
    Rational gy = rational_gcd(rational_gcd(*s.beta_exact[0], *s.beta_exact[1]), *s.beta_exact[2]);
    if (gx.is_zero() || gy.is_zero()) return std::nullopt;
    XyPeriods per;
    per.g_x = gx;
    per.g_y = gy;
    per.t_x = 2.0 * M_PI / gx.to_double();
    per.t_y = 2.0 * M_PI / gy.to_double();
    return per;
}

} // namespace hml
