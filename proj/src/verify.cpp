#include "hml/verify.hpp"

#include "hml/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace hml {

namespace {

constexpr complexd I{0.0, 1.0};

double max_abs(const Mat4c& m) {
    double worst = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) worst = std::max(worst, std::abs(m(i, j)));
    return worst;
}

double max_abs(const Vec4c& v) {
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(v(i)));
    return worst;
}

// first derivative along one coordinate; order 4 optionally Richardson
// extrapolated (h and h/2) to keep checker truncation below the sharp
// z-variation of Q near the profile maximum
template <typename M, typename F>
M fd_first_impl(F&& f, double h, int order, bool richardson) {
    auto stencil4 = [&](double hh) -> M {
        return (-f(2.0 * hh) + 8.0 * f(hh) - 8.0 * f(-hh) + f(-2.0 * hh)) / (12.0 * hh);
    };
    if (order >= 4) {
        if (!richardson) return stencil4(h);
        const M d_h = stencil4(h);
        const M d_h2 = stencil4(0.5 * h);
        return (16.0 * d_h2 - d_h) / 15.0;
    }
    return (f(h) - f(-h)) / (2.0 * h);
}

template <typename F>
Vec4c fd_first(F&& f, double h, int order, bool richardson = false) {
    return fd_first_impl<Vec4c>(f, h, order, richardson);
}

template <typename F>
Mat4c fd_first_mat(F&& f, double h, int order, bool richardson = false) {
    return fd_first_impl<Mat4c>(f, h, order, richardson);
}

template <typename F>
Vec4c fd_second(F&& f, double h) {
    return (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
}

// mixed second derivative, 2nd order cross stencil
template <typename F>
Vec4c fd_mixed(F&& f, double h) {
    return (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h);
}

} // namespace

CheckRecord CheckRecord::make(std::string name, double residual, double tol, int n) {
    CheckRecord r;
    r.name = std::move(name);
    r.max_residual = residual;
    r.tolerance = tol;
    r.n_samples = n;
    r.verdict = (n <= 0) ? "vacuous" : (residual <= tol ? "pass" : "fail");
    return r;
}

void CertificationReport::finalize() {
    overall = !records.empty();
    for (const auto& r : records)
        if (!r.passed()) overall = false;
}

Json CertificationReport::to_json() const {
    Json j = Json::object();
    j.set("provenance", Json(provenance));
    j.set("seed", Json(static_cast<std::int64_t>(seed)));
    Json recs = Json::array();
    for (const auto& r : records) {
        Json jr = Json::object();
        jr.set("name", Json(r.name));
        jr.set("max_residual", Json(r.max_residual));
        jr.set("tolerance", Json(r.tolerance));
        jr.set("n_samples", Json(r.n_samples));
        jr.set("verdict", Json(r.verdict));
        recs.push(std::move(jr));
    }
    j.set("checks", std::move(recs));
    j.set("overall", Json(overall ? "pass" : "fail"));
    return j;
}

std::string CertificationReport::to_text() const {
    std::string out;
    char line[160];
    std::snprintf(line, sizeof(line), "certification report  (provenance %s, seed %llu)\n", provenance.c_str(),
                  static_cast<unsigned long long>(seed));
    out += line;
    std::snprintf(line, sizeof(line), "%-28s %13s %11s %8s %8s\n", "check", "max_residual", "tolerance", "samples",
                  "verdict");
    out += line;
    for (const auto& r : records) {
        std::snprintf(line, sizeof(line), "%-28s %13.4e %11.1e %8d %8s\n", r.name.c_str(), r.max_residual, r.tolerance,
                      r.n_samples, r.verdict.c_str());
        out += line;
    }
    out += "overall: ";
    out += overall ? "PASS" : "FAIL";
    out += "\n";
    return out;
}

std::vector<Point3> sample_points(const ImmersionData& d, int n, double box, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Point3> pts;
    pts.reserve(n);
    const double tau = d.profile().tau();
    for (int i = 0; i < n; ++i)
        pts.push_back({rng.uniform(-box, box), rng.uniform(-box, box), rng.uniform(0.0, tau)});
    return pts;
}

std::vector<CheckRecord> certify_pointwise(const ImmersionData& d, const std::vector<Point3>& pts,
                                           const VerifyConfig& cfg) {
    double r_norm = 0, r_horiz = 0, r_orth = 0, r_conf = 0, r_lagr = 0, r_unit = 0, r_det = 0, r_fd = 0;
    const complexd det_const = complexd(0.0, d.det_phase_sign());

    for (const auto& p : pts) {
        const PsiJet jet = eval_psi_jet(d, p.x, p.y, p.z);
        const double e2u = std::exp(2.0 * d.profile().u(p.z));

        r_norm = std::max(r_norm, std::abs(jet.psi.norm() - 1.0));
        r_horiz = std::max({r_horiz, std::abs(jet.psi_x.dot(jet.psi)), std::abs(jet.psi_y.dot(jet.psi)),
                            std::abs(jet.psi_z.dot(jet.psi))});
        const complexd xy = jet.psi_y.dot(jet.psi_x); // <psi_x, psi_y> in the row convention
        const complexd yz = jet.psi_z.dot(jet.psi_y);
        const complexd zx = jet.psi_x.dot(jet.psi_z);
        r_orth = std::max({r_orth, std::abs(xy), std::abs(yz), std::abs(zx)});
        r_lagr = std::max({r_lagr, std::abs(xy.imag()), std::abs(yz.imag()), std::abs(zx.imag())});
        r_conf = std::max({r_conf, std::abs(jet.psi_x.squaredNorm() - e2u) / e2u,
                           std::abs(jet.psi_y.squaredNorm() - e2u) / e2u,
                           std::abs(jet.psi_z.squaredNorm() - e2u) / e2u});

        const FrameMatrices fm = eval_frame(d, p.x, p.y, p.z);
        const Mat4c gram_defect = fm.phi * fm.phi.adjoint() - Mat4c::Identity();
        r_unit = std::max(r_unit, max_abs(gram_defect));
        const complexd det = fm.phi.determinant();
        r_det = std::max(r_det, std::abs(det * std::polar(1.0, d.theta(p.x, p.y)) - det_const));

        // analytic vs Richardson-extrapolated central differences
        auto psi_at = [&](double dx, double dy, double dz) { return eval_psi(d, p.x + dx, p.y + dy, p.z + dz); };
        auto richardson = [&](auto&& g) {
            const Vec4c d_h = fd_first(g, cfg.h, 2);
            const Vec4c d_h2 = fd_first(g, cfg.h / 2.0, 2);
            return ((4.0 * d_h2 - d_h) / 3.0).eval();
        };
        const Vec4c fx = richardson([&](double t) { return psi_at(t, 0, 0); });
        const Vec4c fy = richardson([&](double t) { return psi_at(0, t, 0); });
        const Vec4c fz = richardson([&](double t) { return psi_at(0, 0, t); });
        r_fd = std::max({r_fd, max_abs((fx - jet.psi_x).eval()), max_abs((fy - jet.psi_y).eval()),
                         max_abs((fz - jet.psi_z).eval())});
    }

    const int n = static_cast<int>(pts.size());
    std::vector<CheckRecord> recs;
    recs.push_back(CheckRecord::make("psi_norm", r_norm, cfg.tol_pointwise, n));
    recs.push_back(CheckRecord::make("horizontality", r_horiz, cfg.tol_pointwise, n));
    recs.push_back(CheckRecord::make("tangent_orthogonality", r_orth, cfg.tol_pointwise, n));
    recs.push_back(CheckRecord::make("conformal_factor", r_conf, cfg.tol_pointwise, n));
    recs.push_back(CheckRecord::make("lagrangian_form", r_lagr, cfg.tol_pointwise, n));
    recs.push_back(CheckRecord::make("frame_unitarity", r_unit, cfg.tol_pointwise, n));
    recs.push_back(CheckRecord::make("frame_det_constant", r_det, cfg.tol_det_const, n));
    recs.push_back(CheckRecord::make("fd_derivative_match", r_fd, cfg.tol_fd_match, n));
    return recs;
}

CheckRecord check_det_phi_printed_form(const ImmersionData& d, const std::vector<Point3>& pts, double tol) {
    double worst = 0.0;
    for (const auto& p : pts) {
        const FrameMatrices fm = eval_frame(d, p.x, p.y, p.z);
        const complexd det = fm.phi.determinant();
        worst = std::max(worst, std::abs(det - std::polar(1.0, d.theta(p.x, p.y))));
    }
    return CheckRecord::make("det_phi_equals_exp_i_theta", worst, tol, static_cast<int>(pts.size()));
}

CheckRecord certify_harmonic_angle_fields(const ScalarField& theta, const ScalarField& u,
                                          const std::vector<Point3>& pts, const VerifyConfig& cfg) {
    const double h = cfg.h_harmonic;
    double worst = 0.0;
    for (const auto& p : pts) {
        auto th = [&](double dx, double dy, double dz) { return theta(p.x + dx, p.y + dy, p.z + dz); };
        auto uu = [&](double dx, double dy, double dz) { return u(p.x + dx, p.y + dy, p.z + dz); };
        const double th_xx = (th(h, 0, 0) - 2.0 * th(0, 0, 0) + th(-h, 0, 0)) / (h * h);
        const double th_yy = (th(0, h, 0) - 2.0 * th(0, 0, 0) + th(0, -h, 0)) / (h * h);
        const double th_zz = (th(0, 0, h) - 2.0 * th(0, 0, 0) + th(0, 0, -h)) / (h * h);
        const double th_x = (th(h, 0, 0) - th(-h, 0, 0)) / (2.0 * h);
        const double th_y = (th(0, h, 0) - th(0, -h, 0)) / (2.0 * h);
        const double th_z = (th(0, 0, h) - th(0, 0, -h)) / (2.0 * h);
        const double u_x = (uu(h, 0, 0) - uu(-h, 0, 0)) / (2.0 * h);
        const double u_y = (uu(0, h, 0) - uu(0, -h, 0)) / (2.0 * h);
        const double u_z = (uu(0, 0, h) - uu(0, 0, -h)) / (2.0 * h);
        const double lap =
            -std::exp(-uu(0, 0, 0)) * (th_xx + th_yy + th_zz + 0.5 * (u_x * th_x + u_y * th_y + u_z * th_z));
        worst = std::max(worst, std::abs(lap));
    }
    return CheckRecord::make("harmonic_angle", worst, cfg.tol_harmonic, static_cast<int>(pts.size()));
}

CheckRecord certify_harmonic_angle(const ImmersionData& d, const std::vector<Point3>& pts, const VerifyConfig& cfg) {
    const double a = d.moduli.a, b = d.moduli.b;
    const ProfileSolution& prof = d.profile();
    return certify_harmonic_angle_fields([a, b](double x, double y, double) { return a * x + b * y; },
                                         [&prof](double, double, double z) { return prof.u(z); }, pts, cfg);
}

CheckRecord certify_zero_curvature_with(const ImmersionData& d, const ConnectionProvider& conn,
                                        const std::vector<Point3>& pts, const VerifyConfig& cfg) {
    const double a = d.moduli.a, b = d.moduli.b;
    const double h = cfg.h;
    double worst = 0.0;

    // d/dx and d/dy act only through the e^{+-i theta} factors of row/col 1
    auto theta_deriv = [](const Mat4c& m0, double theta, double slope) {
        Mat4c out = Mat4c::Zero();
        const complexd ep = std::polar(1.0, theta);
        for (int j = 1; j < 4; ++j) {
            out(0, j) = m0(0, j) * ep * I * slope;
            out(j, 0) = m0(j, 0) * std::conj(ep) * (-I * slope);
        }
        return out;
    };

    for (const auto& p : pts) {
        const double theta = d.theta(p.x, p.y);
        const ConnectionMatrices cm = conn(p.z);
        const Mat4c U = ConnectionMatrices::reinstate(cm.u0, theta);
        const Mat4c V = ConnectionMatrices::reinstate(cm.v0, theta);
        const Mat4c W = ConnectionMatrices::reinstate(cm.w0, theta);

        const Mat4c U_y = theta_deriv(cm.u0, theta, b);
        const Mat4c V_x = theta_deriv(cm.v0, theta, a);
        const Mat4c W_x = theta_deriv(cm.w0, theta, a);
        const Mat4c W_y = theta_deriv(cm.w0, theta, b);

        auto z_deriv = [&](auto member) {
            return fd_first_mat(
                [&](double dz) { return ConnectionMatrices::reinstate(conn(p.z + dz).*member, theta); }, h,
                cfg.fd_order, cfg.richardson);
        };
        const Mat4c U_z = z_deriv(&ConnectionMatrices::u0);
        const Mat4c V_z = z_deriv(&ConnectionMatrices::v0);
        const Mat4c W_z = z_deriv(&ConnectionMatrices::w0);

        const double r1 = max_abs((U_y - V_x + U * V - V * U).eval());
        const double r2 = max_abs((V_z - W_y + V * W - W * V).eval());
        const double r3 = max_abs((W_x - U_z + W * U - U * W).eval());
        worst = std::max({worst, r1, r2, r3});
    }
    return CheckRecord::make("zero_curvature", worst, cfg.tol_zero_curvature, static_cast<int>(pts.size()));
}

CheckRecord certify_zero_curvature(const ImmersionData& d, const std::vector<Point3>& pts, const VerifyConfig& cfg) {
    return certify_zero_curvature_with(d, [&](double z) { return build_connection(d, z); }, pts, cfg);
}

CheckRecord certify_frame_transport(const ImmersionData& d, const std::vector<Point3>& pts, const VerifyConfig& cfg) {
    const double h = cfg.h;
    double worst = 0.0;
    for (const auto& p : pts) {
        const double theta = d.theta(p.x, p.y);
        const ConnectionMatrices cm = build_connection(d, p.z);
        const Mat4c psi0 = eval_frame(d, p.x, p.y, p.z).psi_frame;

        auto frame_at = [&](double dx, double dy, double dz) {
            return eval_frame(d, p.x + dx, p.y + dy, p.z + dz).psi_frame;
        };
        const Mat4c fx = fd_first_mat([&](double t) { return frame_at(t, 0, 0); }, h, cfg.fd_order, cfg.richardson);
        const Mat4c fy = fd_first_mat([&](double t) { return frame_at(0, t, 0); }, h, cfg.fd_order, cfg.richardson);
        const Mat4c fz = fd_first_mat([&](double t) { return frame_at(0, 0, t); }, h, cfg.fd_order, cfg.richardson);

        worst = std::max(worst, max_abs((fx - cm.u(theta) * psi0).eval()));
        worst = std::max(worst, max_abs((fy - cm.v(theta) * psi0).eval()));
        worst = std::max(worst, max_abs((fz - cm.w(theta) * psi0).eval()));
    }
    return CheckRecord::make("frame_transport", worst, cfg.tol_frame_transport, static_cast<int>(pts.size()));
}

CheckRecord certify_reduced_system(const ImmersionData& d, const std::vector<Point3>& pts, const VerifyConfig& cfg) {
    const double h = cfg.h;
    const double a = d.moduli.a, b = d.moduli.b, c1 = d.moduli.c1, c2 = d.moduli.c2, c3 = d.moduli.c3;
    double worst = 0.0;
    for (const auto& p : pts) {
        auto psi_at = [&](double dx, double dy, double dz) { return eval_psi(d, p.x + dx, p.y + dy, p.z + dz); };
        const Vec4c psi = psi_at(0, 0, 0);
        const Vec4c psi_x = fd_first([&](double t) { return psi_at(t, 0, 0); }, h, cfg.fd_order, cfg.richardson);
        const Vec4c psi_y = fd_first([&](double t) { return psi_at(0, t, 0); }, h, cfg.fd_order, cfg.richardson);
        const Vec4c psi_z = fd_first([&](double t) { return psi_at(0, 0, t); }, h, cfg.fd_order, cfg.richardson);
        const Vec4c psi_xx = fd_second([&](double t) { return psi_at(t, 0, 0); }, h);
        const Vec4c psi_yy = fd_second([&](double t) { return psi_at(0, t, 0); }, h);
        const Vec4c psi_zz = fd_second([&](double t) { return psi_at(0, 0, t); }, h);
        const Vec4c psi_xy = fd_mixed([&](double s, double t) { return psi_at(s, t, 0); }, h);
        const Vec4c psi_xz = fd_mixed([&](double s, double t) { return psi_at(s, 0, t); }, h);
        const Vec4c psi_yz = fd_mixed([&](double s, double t) { return psi_at(0, s, t); }, h);

        const double u = d.profile().u(p.z);
        const double du = d.profile().du(p.z);
        const double e2u = std::exp(2.0 * u);
        const complexd mu(du, c3 * std::exp(-3.0 * u)); // u' + i c3 e^{-3u}

        const Vec4c r1 = psi_xz - mu * psi_x;
        const Vec4c r2 = psi_yz - mu * psi_y;
        const Vec4c r3 = psi_xy - I * (c2 * psi_x + c1 * psi_y);
        const Vec4c r4 = psi_xx + e2u * psi + I * (a + c1) * psi_x - I * c2 * psi_y + std::conj(mu) * psi_z;
        const Vec4c r5 = psi_yy + e2u * psi - I * c1 * psi_x + I * (c2 + b) * psi_y + std::conj(mu) * psi_z;
        const Vec4c r6 = psi_zz + e2u * psi + (2.0 * I * c3 * std::exp(-3.0 * u) - du) * psi_z;
        worst = std::max({worst, max_abs(r1), max_abs(r2), max_abs(r3), max_abs(r4), max_abs(r5), max_abs(r6)});
    }
    return CheckRecord::make("reduced_system", worst, cfg.tol_reduced, static_cast<int>(pts.size()));
}

PeriodicityResult certify_periodicity(const ImmersionData& d, std::int64_t n, const std::vector<Point3>& pts,
                                      const VerifyConfig& cfg) {
    PeriodicityResult res;
    const auto lattice = xy_periods(d.spectral);
    const double tau = d.profile().tau();

    double rx = 0, ry = 0, rz = 0;
    for (const auto& p : pts) {
        const CP3Point base = hopf_project(eval_psi(d, p.x, p.y, p.z));
        if (lattice) {
            rx = std::max(rx, fubini_study_distance(hopf_project(eval_psi(d, p.x + lattice->t_x, p.y, p.z)), base));
            ry = std::max(ry, fubini_study_distance(hopf_project(eval_psi(d, p.x, p.y + lattice->t_y, p.z)), base));
        }
        rz = std::max(
            rz, fubini_study_distance(hopf_project(eval_psi(d, p.x, p.y, p.z + static_cast<double>(n) * tau)), base));
    }
    const int np = static_cast<int>(pts.size());
    res.x = CheckRecord::make("periodicity_x", rx, cfg.tol_periodicity, lattice ? np : 0);
    res.y = CheckRecord::make("periodicity_y", ry, cfg.tol_periodicity, lattice ? np : 0);
    res.z = CheckRecord::make("periodicity_z", rz, cfg.tol_periodicity, np);
    return res;
}

CertificationReport run_certification(const ImmersionData& d, const VerifyConfig& cfg) {
    CertificationReport rep;
    rep.provenance = moduli_hash(d.moduli);
    rep.seed = cfg.seed;

    const std::vector<Point3> pts = sample_points(d, cfg.n_points, cfg.box, cfg.seed);
    // a smaller deterministic subset for the FD-heavy checks
    const int n_small = std::max(8, cfg.n_points / 10);
    std::vector<Point3> pts_small(pts.begin(), pts.begin() + std::min<std::size_t>(n_small, pts.size()));

    const ProfileSolution& prof = d.profile();
    const double tau = prof.tau();

    // profile-level residuals over [0, 10 tau]
    {
        std::vector<double> grid;
        grid.reserve(cfg.n_z_grid);
        for (int i = 0; i < cfg.n_z_grid; ++i)
            grid.push_back(10.0 * tau * static_cast<double>(i) / (cfg.n_z_grid - 1));
        rep.records.push_back(
            CheckRecord::make("profile_energy", energy_residual(prof, grid), cfg.tol_energy, cfg.n_z_grid));
        rep.records.push_back(
            CheckRecord::make("profile_q_form", q_form_residual(prof, grid), cfg.tol_q_form, cfg.n_z_grid));

        double sym = 0.0;
        for (int i = 0; i < cfg.n_z_grid; ++i) {
            const double z = tau * static_cast<double>(i) / (cfg.n_z_grid - 1);
            sym = std::max(sym, std::abs(prof.u(tau - z) - prof.u(z)));
        }
        rep.records.push_back(CheckRecord::make("profile_reflection", sym, cfg.tol_symmetry, cfg.n_z_grid));

        const double tau_ode = ode_return_period(d.derived.frak_c, d.moduli.c3);
        rep.records.push_back(CheckRecord::make("period_quadrature_vs_ode", std::abs(tau_ode - tau) / tau,
                                                cfg.tol_period, 1));
    }

    rep.records.push_back(CheckRecord::make("gamma_identities", gamma_identity_residual(d.spectral, d.derived),
                                            cfg.tol_gamma, 1));
    {
        const auto vr = vieta_residuals(d.spectral, d.moduli, d.derived);
        rep.records.push_back(
            CheckRecord::make("vieta_relations", std::max({vr[0], vr[1], vr[2]}), cfg.tol_vieta, 1));
    }
    rep.records.push_back(CheckRecord::make("winding_consistency",
                                            std::abs(d.phases.theta_rel - d.phases.theta_rel_direct),
                                            cfg.tol_winding, 1));

    for (auto& r : certify_pointwise(d, pts, cfg)) rep.records.push_back(std::move(r));
    rep.records.push_back(certify_harmonic_angle(d, pts_small, cfg));
    rep.records.push_back(certify_zero_curvature(d, pts_small, cfg));
    rep.records.push_back(certify_frame_transport(d, pts_small, cfg));
    rep.records.push_back(certify_reduced_system(d, pts_small, cfg));

    rep.finalize();
    return rep;
}

} // namespace hml
