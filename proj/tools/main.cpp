// hml-tori: construction, certification, search, and export of conformally
// flat Hamiltonian-minimal Lagrangian tori in CP^3.
//
// Exit codes: 0 success, 1 certification failure, 2 invalid input.

#include "hml/export.hpp"
#include "hml/json_io.hpp"
#include "hml/search.hpp"
#include "hml/verify.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

struct ModuliOpts {
    std::string a, b, c1, c2, c3;
    std::string config;

    void attach(CLI::App* cmd) {
        cmd->add_option("--a", a, "modulus a (rational 'p/q', integer, or decimal)");
        cmd->add_option("--b", b, "modulus b");
        cmd->add_option("--c1", c1, "modulus c1 (nonzero)");
        cmd->add_option("--c2", c2, "modulus c2 (nonzero)");
        cmd->add_option("--c3", c3, "modulus c3");
        cmd->add_option("--config", config, "JSON config with a 'moduli' object");
    }

    hml::ModuliParams resolve() const {
        std::optional<hml::ModuliParams> base;
        if (!config.empty()) base = hml::moduli_from_json_text(hml::read_file(config));
        if (a.empty() && b.empty() && c1.empty() && c2.empty() && c3.empty()) {
            if (!base) throw hml::ConfigError("no moduli given: pass --a..--c3 or --config");
            return *base;
        }
        auto pick = [&](const std::string& flag, int idx) -> hml::Rational {
            if (!flag.empty()) return hml::parse_rational_text(flag);
            if (base && base->exact) return (*base->exact)[idx];
            throw hml::ConfigError("missing modulus (flag or config): index " + std::to_string(idx));
        };
        return hml::ModuliParams::from_rationals(pick(a, 0), pick(b, 1), pick(c1, 2), pick(c2, 3), pick(c3, 4));
    }
};

void emit(const std::string& out_path, const std::string& contents) {
    if (out_path.empty())
        std::cout << contents;
    else
        hml::write_file(out_path, contents);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"conformally flat H-minimal Lagrangian tori in CP^3"};
    app.require_subcommand(1);

    std::string out_path;
    std::string format = "csv";
    std::uint64_t seed = 12345;
    double tol_profile = 1e-12;
    double tol_verify = 1e-9;
    int n_samples = 512;
    app.add_option("--out", out_path, "output path (stdout if omitted)");
    app.add_option("--seed", seed, "seed for sample-point generation");
    app.add_option("--tol-profile", tol_profile, "profile integration tolerance");
    app.add_option("--tol-verify", tol_verify, "pointwise certification tolerance");
    app.add_option("--samples", n_samples, "profile samples per period");
    app.fallthrough();

    auto* cmd_derive = app.add_subcommand("derive", "derived constants, cubic roots, betas, gammas");
    ModuliOpts derive_opts;
    derive_opts.attach(cmd_derive);

    auto* cmd_profile = app.add_subcommand("profile", "solve the periodic profile ODE");
    ModuliOpts profile_opts;
    profile_opts.attach(cmd_profile);
    std::string frak_c_flag;
    cmd_profile->add_option("--frakC", frak_c_flag, "frakC directly (instead of moduli)");

    auto* cmd_search = app.add_subcommand("search", "scan rational moduli grids for closing tori");
    std::string search_config;
    int workers = 0;
    cmd_search->add_option("--config", search_config, "search config JSON")->required();
    cmd_search->add_option("--workers", workers, "worker threads (overrides config and HML_TORI_THREADS)");

    auto* cmd_sample = app.add_subcommand("sample", "evaluate psi on a regular grid and export");
    ModuliOpts sample_opts;
    sample_opts.attach(cmd_sample);
    int nx = 8, ny = 8, nz = 8;
    std::int64_t closing_n = 0;
    cmd_sample->add_option("--nx", nx, "grid points along x");
    cmd_sample->add_option("--ny", ny, "grid points along y");
    cmd_sample->add_option("--nz", nz, "grid points along z");
    cmd_sample->add_option("--closing-n", closing_n, "z extent multiplier n (0: detect from the winding)");
    cmd_sample->add_option("--format", format, "csv | json | ply");

    auto* cmd_verify = app.add_subcommand("verify", "run the certification suite");
    ModuliOpts verify_opts;
    verify_opts.attach(cmd_verify);
    int n_points = 1000;
    cmd_verify->add_option("--points", n_points, "number of random sample points");

    auto* cmd_export = app.add_subcommand("export", "write the full immersion JSON bundle");
    ModuliOpts export_opts;
    export_opts.attach(cmd_export);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmd_derive->parsed()) {
            const hml::ModuliParams p = derive_opts.resolve();
            const hml::DerivedConstants d = hml::derive_constants(p);
            hml::Json j = hml::Json::object();
            j.set("moduli", hml::moduli_to_json(p));
            j.set("frakC", d.frak_c);
            j.set("frakB", d.frak_b);
            if (!d.admits_periodic_profile()) {
                j.set("warning", "frakC <= 0: no periodic profile at this point");
            } else {
                const hml::SpectralData s = hml::build_spectral_data(p, d);
                j.set("spectral", hml::spectral_to_json(s));
            }
            emit(out_path, j.dump(2) + "\n");
            return 0;
        }

        if (cmd_profile->parsed()) {
            double frak_c, c3;
            if (!frak_c_flag.empty()) {
                frak_c = hml::parse_rational_text(frak_c_flag).to_double();
                if (profile_opts.c3.empty()) throw hml::ConfigError("--frakC also needs --c3");
                c3 = hml::parse_rational_text(profile_opts.c3).to_double();
            } else {
                const hml::ModuliParams p = profile_opts.resolve();
                frak_c = hml::derive_constants(p).frak_c;
                c3 = p.c3;
            }
            const hml::ProfileSolution sol = hml::solve_profile(frak_c, c3, n_samples, tol_profile);
            std::vector<double> grid;
            for (int i = 0; i < 256; ++i) grid.push_back(10.0 * sol.tau() * i / 255.0);
            hml::Json j = hml::profile_to_json(sol);
            j.set("energy_residual", hml::energy_residual(sol, grid));
            emit(out_path, j.dump(2) + "\n");
            return 0;
        }

        if (cmd_search->parsed()) {
            hml::SearchConfig cfg = hml::search_config_from_json_text(hml::read_file(search_config));
            if (workers > 0) cfg.workers = workers;
            cfg.seed = seed;
            const hml::SearchResult res = hml::search_tori(cfg);
            hml::Json j = hml::Json::object();
            hml::Json cands = hml::Json::array();
            for (const auto& c : res.candidates) cands.push(c.to_json());
            j.set("candidates", std::move(cands));
            j.set("stats", res.stats.to_json());
            const std::string& target = !cfg.out_path.empty() && out_path.empty() ? cfg.out_path : out_path;
            emit(target, j.dump(2) + "\n");
            return 0;
        }

        if (cmd_sample->parsed()) {
            const hml::ModuliParams p = sample_opts.resolve();
            const hml::ImmersionData d = hml::ImmersionData::build(p, n_samples);
            hml::ExportOptions opt;
            opt.nx = nx;
            opt.ny = ny;
            opt.nz = nz;
            if (closing_n > 0) {
                opt.closing_n = closing_n;
                opt.closing_certified = true;
            } else if (const auto wf = hml::rationalize_winding(d.phases.theta_rel, 1000000)) {
                opt.closing_n = wf->n;
                opt.closing_certified = true;
            }
            emit(out_path, hml::export_samples(d, hml::parse_format(format), opt));
            return 0;
        }

        if (cmd_verify->parsed()) {
            const hml::ModuliParams p = verify_opts.resolve();
            const hml::ImmersionData d = hml::ImmersionData::build(p, std::max(n_samples, 2048));
            hml::VerifyConfig cfg;
            cfg.n_points = n_points;
            cfg.seed = seed;
            cfg.tol_pointwise = tol_verify;
            hml::CertificationReport rep = hml::run_certification(d, cfg);
            std::cout << rep.to_text();
            if (!out_path.empty()) hml::write_file(out_path, rep.to_json().dump(2) + "\n");
            return rep.overall ? 0 : 1;
        }

        if (cmd_export->parsed()) {
            const hml::ModuliParams p = export_opts.resolve();
            const hml::ImmersionData d = hml::ImmersionData::build(p, n_samples);
            emit(out_path, hml::immersion_to_json(d).dump(2) + "\n");
            return 0;
        }
    } catch (const hml::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
