#include "hml/search.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <thread>

namespace hml {

namespace {

// exact oscillation test: c3 != 0 and 256 c3^2 < 27 frakC^4
bool oscillation_exists_exact(const Rational& frak_c, const Rational& c3) {
    if (c3.is_zero() || frak_c.sign() <= 0) return false;
    const Rational c4 = frak_c * frak_c * frak_c * frak_c;
    return Rational(256) * c3 * c3 < Rational(27) * c4;
}

// exact gamma radicand signs given exact distinct roots
bool gamma_radicands_positive(const std::array<Rational, 3>& r, const Rational& frak_c) {
    for (int j = 0; j < 3; ++j) {
        const int k = (j + 1) % 3, l = (j + 2) % 3;
        const Rational num = frak_c + r[k] * r[l];
        const Rational den = frak_c * (r[j] - r[k]) * (r[j] - r[l]);
        if (den.is_zero()) return false;
        if (num.sign() * den.sign() < 0) return false;
    }
    return true;
}

struct PointOutcome {
    RejectionStats stats;
    std::vector<TorusCandidate> candidates;
};

// c3-independent part of a parameter point with certified rational roots
struct RootedPoint {
    Rational a, b, c1, c2;
    Rational frak_c;
    std::array<Rational, 3> roots;
};

// try to validate (a, b, c1, c2) up to the rational-roots + radicand stages
std::optional<RootedPoint> root_stage(const Rational& a, const Rational& b, const Rational& c1, const Rational& c2,
                                      RejectionStats& st) {
    if (c1.is_zero() || c2.is_zero()) {
        ++st.invalid_moduli;
        return std::nullopt;
    }
    const Rational two(2);
    const Rational frak_c = a * c1 + b * c2 + two * c1 * c1 + two * c2 * c2;
    if (frak_c.sign() <= 0) {
        ++st.nonpositive_frak_c;
        return std::nullopt;
    }
    // cubic stage with a placeholder oscillatory c3 (the cubic ignores c3)
    ModuliParams p = ModuliParams::from_rationals(a, b, c1, c2, Rational(1));
    DerivedConstants d = derive_constants(p);
    SpectralData s;
    try {
        s = solve_spectral_cubic(p, d);
    } catch (const Error&) {
        ++st.irrational_roots;
        return std::nullopt;
    }
    if (!s.all_roots_rational()) {
        ++st.irrational_roots;
        return std::nullopt;
    }
    std::array<Rational, 3> roots{*s.alpha_exact[0], *s.alpha_exact[1], *s.alpha_exact[2]};
    for (const auto& r : roots)
        if (r == c1) {
            ++st.irrational_roots;
            return std::nullopt;
        }
    if (!gamma_radicands_positive(roots, frak_c)) {
        ++st.negative_radicand;
        return std::nullopt;
    }
    return RootedPoint{a, b, c1, c2, frak_c, roots};
}

double winding_ratio(const RootedPoint& rp, double c3, int n_samples) {
    const ProfileSolution prof = solve_profile(rp.frak_c.to_double(), c3, n_samples);
    const PhaseData pd = windings(prof);
    return pd.theta_rel / (2.0 * M_PI);
}

TorusCandidate finish_candidate(const RootedPoint& rp, const Rational& c3, const WindingFraction& wf,
                                const SearchConfig& cfg, RejectionStats& st) {
    TorusCandidate cand;
    cand.moduli = ModuliParams::from_rationals(rp.a, rp.b, rp.c1, rp.c2, c3);
    cand.roots = rp.roots;
    cand.closing_n = wf.n;
    cand.closing_m = wf.m;

    ImmersionData d = ImmersionData::build(cand.moduli, cfg.n_samples);
    cand.tau = d.profile().tau();
    cand.theta_rel = d.phases.theta_rel;

    VerifyConfig vc;
    vc.seed = cfg.seed;
    vc.tol_periodicity = cfg.fs_tol;
    const auto pts = sample_points(d, cfg.n_periodicity_points, 2.0, cfg.seed);
    const PeriodicityResult pr = certify_periodicity(d, wf.n, pts, vc);
    cand.fs_residual_x = pr.x.max_residual;
    cand.fs_residual_y = pr.y.max_residual;
    cand.fs_residual_z = pr.z.max_residual;
    cand.certified = pr.x.passed() && pr.y.passed() && pr.z.passed();
    if (!cand.certified) ++st.failed_certification;
    return cand;
}

// bisect c3 in [lo, hi] so that the winding ratio hits target (monotone
// segments only; callers pass brackets from adjacent grid evaluations)
std::optional<double> bisect_winding(const RootedPoint& rp, double lo, double hi, double xlo, double xhi,
                                     double target, int n_samples) {
    if ((xlo - target) * (xhi - target) > 0.0) return std::nullopt;
    double flo = xlo - target;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double fm = winding_ratio(rp, mid, n_samples) - target;
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

PointOutcome process_rooted_point(const RootedPoint& rp, const SearchConfig& cfg) {
    PointOutcome out;
    const auto c3_vals = cfg.c3.enumerate();

    struct GridEval {
        Rational c3;
        double x = 0;
        bool oscillates = false;
    };
    std::vector<GridEval> evals;
    evals.reserve(c3_vals.size());

    for (const auto& c3 : c3_vals) {
        ++out.stats.total_points;
        GridEval ge;
        ge.c3 = c3;
        if (!oscillation_exists_exact(rp.frak_c, c3)) {
            ++out.stats.no_oscillation;
            evals.push_back(ge);
            continue;
        }
        try {
            ge.x = winding_ratio(rp, c3.to_double(), cfg.n_samples);
            ge.oscillates = true;
        } catch (const Error&) {
            ++out.stats.errors;
            evals.push_back(ge);
            continue;
        }
        evals.push_back(ge);

        const auto wf = rationalize_winding(2.0 * M_PI * ge.x, cfg.max_denominator, cfg.eps_close);
        if (!wf) {
            ++out.stats.no_winding;
            continue;
        }
        try {
            out.candidates.push_back(finish_candidate(rp, c3, *wf, cfg, out.stats));
        } catch (const Error&) {
            ++out.stats.errors;
        }
    }

    if (!cfg.refine_c3) return out;

    // between adjacent oscillating grid values, target every winding fraction
    // m/n with n <= refine_max_n inside the swept ratio interval
    for (std::size_t i = 0; i + 1 < evals.size(); ++i) {
        if (!evals[i].oscillates || !evals[i + 1].oscillates) continue;
        const double x0 = evals[i].x, x1 = evals[i + 1].x;
        const double lo = std::min(x0, x1), hi = std::max(x0, x1);
        if (!(hi - lo < 0.5)) continue; // reject wild brackets; windings vary slowly in c3
        for (std::int64_t n = 1; n <= cfg.refine_max_n; ++n) {
            const std::int64_t m_lo = static_cast<std::int64_t>(std::ceil(lo * static_cast<double>(n)));
            const std::int64_t m_hi = static_cast<std::int64_t>(std::floor(hi * static_cast<double>(n)));
            for (std::int64_t m = m_lo; m <= m_hi; ++m) {
                if (std::gcd(m, n) != 1) continue;
                const double target = static_cast<double>(m) / static_cast<double>(n);
                try {
                    const auto c3_hit = bisect_winding(rp, evals[i].c3.to_double(), evals[i + 1].c3.to_double(), x0,
                                                       x1, target, cfg.n_samples);
                    if (!c3_hit) continue;
                    const Rational c3_exact = Rational::from_double_exact(*c3_hit);
                    const double x_hit = winding_ratio(rp, c3_exact.to_double(), cfg.n_samples);
                    const auto wf = rationalize_winding(2.0 * M_PI * x_hit, cfg.max_denominator, cfg.eps_close);
                    if (!wf) {
                        ++out.stats.no_winding;
                        continue;
                    }
                    ++out.stats.total_points;
                    out.candidates.push_back(finish_candidate(rp, c3_exact, *wf, cfg, out.stats));
                } catch (const Error&) {
                    ++out.stats.errors;
                }
            }
        }
    }
    return out;
}

} // namespace

std::vector<Rational> GridSpec::enumerate() const {
    if (denominator < 1) throw ConfigError("grid denominator must be >= 1");
    if (max < min) throw ConfigError("grid max < min");
    std::vector<Rational> vals;
    const Rational step(1, denominator);
    for (Rational v = min; v <= max; v = v + step) {
        vals.push_back(v);
        if (vals.size() > 2000000) throw ConfigError("grid too large to enumerate");
    }
    return vals;
}

void SearchConfig::validate() const {
    if (max_denominator < 1) throw ConfigError("max_denominator must be >= 1");
    a.enumerate();
    b.enumerate();
    c1.enumerate();
    c2.enumerate();
    c3.enumerate();
    if (n_samples < 64) throw ConfigError("n_samples must be >= 64");
}

RejectionStats& RejectionStats::operator+=(const RejectionStats& o) {
    total_points += o.total_points;
    invalid_moduli += o.invalid_moduli;
    nonpositive_frak_c += o.nonpositive_frak_c;
    no_oscillation += o.no_oscillation;
    irrational_roots += o.irrational_roots;
    negative_radicand += o.negative_radicand;
    no_winding += o.no_winding;
    failed_certification += o.failed_certification;
    errors += o.errors;
    return *this;
}

Json RejectionStats::to_json() const {
    Json j = Json::object();
    j.set("total_points", total_points);
    j.set("invalid_moduli", invalid_moduli);
    j.set("nonpositive_frakC", nonpositive_frak_c);
    j.set("no_oscillation", no_oscillation);
    j.set("irrational_roots", irrational_roots);
    j.set("negative_radicand", negative_radicand);
    j.set("no_winding", no_winding);
    j.set("failed_certification", failed_certification);
    j.set("errors", errors);
    return j;
}

Json TorusCandidate::to_json() const {
    Json j = Json::object();
    j.set("moduli", moduli_to_json(moduli));
    Json r = Json::array();
    for (const auto& root : roots) r.push(rational_to_json(root));
    j.set("roots", std::move(r));
    j.set("tau", tau);
    j.set("theta_rel", theta_rel);
    j.set("closing_n", closing_n);
    j.set("closing_m", closing_m);
    j.set("fs_residual_x", fs_residual_x);
    j.set("fs_residual_y", fs_residual_y);
    j.set("fs_residual_z", fs_residual_z);
    j.set("certified", certified);
    return j;
}

TorusCandidate TorusCandidate::from_json_text(const std::string& text) {
    const auto root = nlohmann::json::parse(text, nullptr, true, true);
    TorusCandidate c;
    c.moduli = moduli_from_json_text(text);
    if (root.contains("roots")) {
        int i = 0;
        for (const auto& r : root["roots"]) {
            if (i < 3)
                c.roots[i++] = Rational(int128(r.at("num").get<std::int64_t>()),
                                        int128(r.at("den").get<std::int64_t>()));
        }
    }
    c.tau = root.value("tau", 0.0);
    c.theta_rel = root.value("theta_rel", 0.0);
    c.closing_n = root.value("closing_n", std::int64_t(0));
    c.closing_m = root.value("closing_m", std::int64_t(0));
    c.certified = root.value("certified", false);
    return c;
}

int resolve_worker_count(int configured) {
    if (configured > 0) return configured;
    if (const char* env = std::getenv("HML_TORI_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

SearchResult search_tori(const SearchConfig& cfg) {
    cfg.validate();

    const auto as = cfg.a.enumerate();
    const auto bs = cfg.b.enumerate();
    const auto c1s = cfg.c1.enumerate();
    const auto c2s = cfg.c2.enumerate();

    // task list: (a, c1, c2) triples with their deduplicated b candidates
    struct Task {
        Rational a, c1, c2;
        std::vector<Rational> b_vals;
    };
    std::vector<Task> tasks;
    for (const auto& a : as) {
        for (const auto& c1 : c1s) {
            for (const auto& c2 : c2s) {
                Task t{a, c1, c2, {}};
                t.b_vals = bs;
                if (!c1.is_zero() && !c2.is_zero()) {
                    // alpha*-targeted b seeds; b-free parts of frakB and frakC
                    const Rational b0 = Rational(2) * c1 * a + Rational(3) * c1 * c1 + Rational(3) * c2 * c2;
                    const Rational c0 = a * c1 + Rational(2) * c1 * c1 + Rational(2) * c2 * c2;
                    for (std::int64_t q = 1; q <= cfg.alpha_star_den; ++q) {
                        for (std::int64_t p = -cfg.alpha_star_max * q; p <= cfg.alpha_star_max * q; ++p) {
                            if (p == 0 || std::gcd(std::abs(p), q) != 1) continue;
                            const Rational astar(p, q);
                            if (astar == c1) continue;
                            try {
                                const Rational num =
                                    astar * astar * astar + a * astar * astar - b0 * astar + c1 * c0;
                                const Rational r = num / (astar - c1);
                                const Rational b = r / c2;
                                if (b < cfg.b.min || b > cfg.b.max) continue;
                                if (std::find(t.b_vals.begin(), t.b_vals.end(), b) == t.b_vals.end())
                                    t.b_vals.push_back(b);
                            } catch (const RationalOverflowError&) {
                            }
                        }
                    }
                }
                tasks.push_back(std::move(t));
            }
        }
    }

    std::vector<PointOutcome> outcomes(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const Task& t = tasks[i];
            PointOutcome& out = outcomes[i];
            for (const auto& b : t.b_vals) {
                RejectionStats st;
                st.total_points = 0; // c3 axis counted inside process_rooted_point
                auto rp = root_stage(t.a, b, t.c1, t.c2, st);
                if (!rp) {
                    st.total_points += static_cast<std::int64_t>(cfg.c3.enumerate().size());
                    out.stats += st;
                    continue;
                }
                out.stats += st;
                PointOutcome po = process_rooted_point(*rp, cfg);
                out.stats += po.stats;
                for (auto& c : po.candidates) out.candidates.push_back(std::move(c));
            }
        }
    };

    const int n_workers = resolve_worker_count(cfg.workers);
    std::vector<std::thread> threads;
    threads.reserve(n_workers);
    for (int i = 0; i < n_workers; ++i) threads.emplace_back(worker);
    for (auto& th : threads) th.join();

    SearchResult res;
    for (auto& out : outcomes) {
        res.stats += out.stats;
        for (auto& c : out.candidates) res.candidates.push_back(std::move(c));
    }
    return res;
}

SearchConfig search_config_from_json_text(const std::string& text) {
    const auto root = nlohmann::json::parse(text, nullptr, true, true);
    const auto& j = root.contains("search") ? root["search"] : root;
    SearchConfig cfg;
    auto grid = [&](const char* name, GridSpec& g) {
        if (!j.contains(name)) throw ConfigError(std::string("search config missing grid '") + name + "'");
        const auto& gj = j[name];
        g.min = parse_rational_text(gj.at("min").is_string() ? gj.at("min").get<std::string>()
                                                             : gj.at("min").dump());
        g.max = parse_rational_text(gj.at("max").is_string() ? gj.at("max").get<std::string>()
                                                             : gj.at("max").dump());
        g.denominator = gj.value("den", std::int64_t(1));
    };
    grid("a", cfg.a);
    grid("b", cfg.b);
    grid("c1", cfg.c1);
    grid("c2", cfg.c2);
    grid("c3", cfg.c3);
    cfg.max_denominator = j.value("max_denominator", cfg.max_denominator);
    cfg.eps_close = j.value("eps_close", cfg.eps_close);
    cfg.alpha_star_den = j.value("alpha_star_den", cfg.alpha_star_den);
    cfg.alpha_star_max = j.value("alpha_star_max", cfg.alpha_star_max);
    cfg.refine_c3 = j.value("refine_c3", cfg.refine_c3);
    cfg.refine_max_n = j.value("refine_max_n", cfg.refine_max_n);
    cfg.n_samples = j.value("n_samples", cfg.n_samples);
    cfg.n_periodicity_points = j.value("n_periodicity_points", cfg.n_periodicity_points);
    cfg.fs_tol = j.value("fs_tol", cfg.fs_tol);
    cfg.workers = j.value("workers", cfg.workers);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.out_path = j.value("out", cfg.out_path);
    cfg.validate();
    return cfg;
}

TorusCandidate recertify_candidate(const ModuliParams& exact_moduli, const SearchConfig& cfg) {
    if (!exact_moduli.exact) throw ConfigError("recertification requires exact rational moduli");
    const auto& e = *exact_moduli.exact;
    RejectionStats st;
    auto rp = root_stage(e[0], e[1], e[2], e[3], st);
    if (!rp) throw ConfigError("candidate fails the rational-roots pipeline on recertification");
    if (!oscillation_exists_exact(rp->frak_c, e[4]))
        throw NoOscillationError("candidate c3 fails the exact oscillation bound");
    const double x = winding_ratio(*rp, e[4].to_double(), cfg.n_samples);
    const auto wf = rationalize_winding(2.0 * M_PI * x, cfg.max_denominator, cfg.eps_close);
    if (!wf) throw ConfigError("candidate winding no longer rationalizes within budget");
    return finish_candidate(*rp, e[4], *wf, cfg, st);
}

} // namespace hml
