#include "hml/export.hpp"

#include "hml/json_io.hpp"

#include <cmath>

namespace hml {

namespace {

struct GridExtent {
    double t_x, t_y, t_z;
    bool periods_provisional;
};

GridExtent extent(const ImmersionData& d, const ExportOptions& opt) {
    GridExtent e{2.0 * M_PI, 2.0 * M_PI, static_cast<double>(opt.closing_n) * d.profile().tau(), true};
    if (const auto lattice = xy_periods(d.spectral)) {
        e.t_x = lattice->t_x;
        e.t_y = lattice->t_y;
        e.periods_provisional = !opt.closing_certified;
    }
    return e;
}

} // namespace

ExportFormat parse_format(const std::string& name) {
    if (name == "csv") return ExportFormat::Csv;
    if (name == "json") return ExportFormat::JsonBundle;
    if (name == "ply") return ExportFormat::Ply;
    throw ConfigError("unknown export format '" + name + "' (expected csv, json, or ply)");
}

std::string export_samples(const ImmersionData& d, ExportFormat format, const ExportOptions& opt) {
    if (opt.nx < 1 || opt.ny < 1 || opt.nz < 1) throw ConfigError("export grid dimensions must be >= 1");
    const GridExtent ext = extent(d, opt);

    if (format == ExportFormat::JsonBundle) {
        Json j = immersion_to_json(d);
        Json grid = Json::object();
        grid.set("nx", opt.nx);
        grid.set("ny", opt.ny);
        grid.set("nz", opt.nz);
        grid.set("t_x", ext.t_x);
        grid.set("t_y", ext.t_y);
        grid.set("t_z", ext.t_z);
        grid.set("closing_n", opt.closing_n);
        j.set("grid", std::move(grid));
        if (ext.periods_provisional) j.set("warning", Json("UnclosedTorusWarning: periods are provisional"));
        return j.dump(2) + "\n";
    }

    std::string out;
    if (format == ExportFormat::Csv) {
        out += "x,y,z,re_psi1,im_psi1,re_psi2,im_psi2,re_psi3,im_psi3,re_psi4,im_psi4,u,theta\n";
        if (ext.periods_provisional) out += "# UnclosedTorusWarning: periods are provisional\n";
    } else {
        out += "ply\nformat ascii 1.0\n";
        out += "comment projection: (2 Re(z1 conj(z4)), 2 Im(z1 conj(z4)), |z1|^2 - |z4|^2) of the gauged CP3 rep\n";
        if (ext.periods_provisional) out += "comment UnclosedTorusWarning: periods are provisional\n";
        out += "element vertex " + std::to_string(static_cast<long long>(opt.nx) * opt.ny * opt.nz) + "\n";
        out += "property float x\nproperty float y\nproperty float z\nend_header\n";
    }

    // z-major ordering: z outermost, then y, then x
    for (int kz = 0; kz < opt.nz; ++kz) {
        const double z = ext.t_z * static_cast<double>(kz) / opt.nz;
        for (int ky = 0; ky < opt.ny; ++ky) {
            const double y = ext.t_y * static_cast<double>(ky) / opt.ny;
            for (int kx = 0; kx < opt.nx; ++kx) {
                const double x = ext.t_x * static_cast<double>(kx) / opt.nx;
                const Vec4c psi = eval_psi(d, x, y, z);
                if (format == ExportFormat::Csv) {
                    out += format_double(x) + "," + format_double(y) + "," + format_double(z);
                    for (int j = 0; j < 4; ++j)
                        out += "," + format_double(psi(j).real()) + "," + format_double(psi(j).imag());
                    out += "," + format_double(d.profile().u(z)) + "," + format_double(d.theta(x, y)) + "\n";
                } else {
                    const CP3Point rep = hopf_project(psi);
                    const complexd w = rep.rep(0) * std::conj(rep.rep(3));
                    const double px = 2.0 * w.real();
                    const double py = 2.0 * w.imag();
                    const double pz = std::norm(rep.rep(0)) - std::norm(rep.rep(3));
                    out += format_double(px) + " " + format_double(py) + " " + format_double(pz) + "\n";
                }
            }
        }
    }
    return out;
}

} // namespace hml
