#pragma once

// The immersion psi: R^3 -> S^7 in C^4,
//   psi = (g1 P e^{i(x a1 + y b1)}, g2 P e^{i(x a2 + y b2)}, g3 P e^{i(x a3 + y b3)}, g4 Q),
// its frames
//   Phi = (psi, e^-u psi_x, e^-u psi_y, e^-u psi_z)^t      (rows)
//   Psi = (e^{i theta} psi, e^-u psi_x, e^-u psi_y, e^-u psi_z)^t,  theta = a x + b y,
// the z-only connection matrices U, V, W with the e^{+-i theta} factors
// stored separately, the Hopf projection to CP^3 and the Fubini-Study
// distance, and the exact (x, y) period lattice for rational spectra.
//
// Phi is unitary with |det Phi| = 1 and det Phi * e^{i theta} equal to the
// z- and (x,y)-independent constant sigma*i, sigma = sign(c3 * Delta),
// Delta = det[[1,1,1],[alpha],[beta]]. Equivalently det Psi = sigma*i.

#include "hml/params.hpp"
#include "hml/phases.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <optional>

namespace hml {

using complexd = std::complex<double>;
using Vec4c = Eigen::Vector4cd;
using Mat4c = Eigen::Matrix4cd;

struct FrameMatrices {
    Mat4c phi;
    Mat4c psi_frame;
};

// z-profile connection matrices evaluated with theta factored out: entry
// (0,j) carries a suppressed e^{+i theta}, entry (j,0) a suppressed
// e^{-i theta}; with_theta() reinstates them.
struct ConnectionMatrices {
    Mat4c u0, v0, w0;

    static Mat4c reinstate(const Mat4c& m, double theta);
    Mat4c u(double theta) const { return reinstate(u0, theta); }
    Mat4c v(double theta) const { return reinstate(v0, theta); }
    Mat4c w(double theta) const { return reinstate(w0, theta); }
};

struct CP3Point {
    Vec4c rep; // unit, first component of modulus > 1e-8 gauged real positive
};

struct ImmersionData {
    ModuliParams moduli;
    DerivedConstants derived;
    SpectralData spectral;
    PhaseData phases; // owns the ProfileSolution

    const ProfileSolution& profile() const { return phases.profile; }
    double theta(double x, double y) const { return moduli.a * x + moduli.b * y; }

    // det Phi * e^{i theta} == sigma * i, sigma = sign(c3 * Delta)
    double det_phase_sign() const;

    static ImmersionData build(const ModuliParams& p, int n_samples = 512);
};

Vec4c eval_psi(const ImmersionData& d, double x, double y, double z);

struct PsiJet {
    Vec4c psi, psi_x, psi_y, psi_z;
};
// analytic first derivatives: psi_x, psi_y multiply components by i*alpha_j,
// i*beta_j; psi_z uses P'/P = u' + i c3 e^{-3u} and
// Q'/Q = -(u' e^{2u} + i c3 e^{-u})/(frakC - e^{2u})
PsiJet eval_psi_jet(const ImmersionData& d, double x, double y, double z);

FrameMatrices eval_frame(const ImmersionData& d, double x, double y, double z);

ConnectionMatrices build_connection(const ImmersionData& d, double z);

CP3Point hopf_project(const Vec4c& v);

// arccos(clamp(|<p, q>|, 0, 1)) in [0, pi/2]
double fubini_study_distance(const CP3Point& p, const CP3Point& q);

struct XyPeriods {
    double t_x, t_y;          // 2*pi / gcd_Q(spectrum)
    Rational g_x, g_y;        // the gcds themselves
};
// Smallest T with all alpha_j * T (resp. beta_j * T) in 2*pi*Z; requires all
// three roots certified rational.
std::optional<XyPeriods> xy_periods(const SpectralData& s);

} // namespace hml
