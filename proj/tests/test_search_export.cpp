#include "hml/export.hpp"
#include "hml/search.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace hml;

namespace {

GridSpec fixed(const Rational& v) { return GridSpec{v, v, 1}; }

// narrow search box around the known closing torus: a=2, b=-16, c1=4, c2=3,
// winding ratio 3/4 between c3 = 8 and c3 = 9
SearchConfig torus_config() {
    SearchConfig cfg;
    cfg.a = fixed(Rational(2));
    cfg.b = GridSpec{Rational(-33, 2), Rational(-31, 2), 1}; // steps over -16; seeding must supply it
    cfg.c1 = fixed(Rational(4));
    cfg.c2 = fixed(Rational(3));
    cfg.c3 = GridSpec{Rational(8), Rational(10), 1};
    cfg.refine_max_n = 8;
    cfg.n_samples = 512;
    cfg.n_periodicity_points = 24;
    cfg.max_denominator = 1000;
    cfg.workers = 1;
    return cfg;
}

} // namespace

TEST_SUITE("search") {

TEST_CASE("reference point is rejected at the rational-roots stage") {
    SearchConfig cfg;
    cfg.a = fixed(Rational(1));
    cfg.b = fixed(Rational(1));
    cfg.c1 = fixed(Rational(1));
    cfg.c2 = fixed(Rational(1));
    cfg.c3 = fixed(Rational(1));
    cfg.refine_c3 = false;
    cfg.alpha_star_max = 0; // no seeding: probe exactly the grid point
    cfg.workers = 1;
    const SearchResult res = search_tori(cfg);
    CHECK(res.candidates.empty());
    CHECK(res.stats.irrational_roots == 1);
}

TEST_CASE("oscillation bound rejects oversized c3") {
    SearchConfig cfg;
    cfg.a = fixed(Rational(2));
    cfg.b = fixed(Rational(-16));
    cfg.c1 = fixed(Rational(4));
    cfg.c2 = fixed(Rational(3));
    cfg.c3 = fixed(Rational(33)); // above sqrt(27 * 10^4 / 256) ~ 32.48
    cfg.refine_c3 = false;
    cfg.alpha_star_max = 0;
    cfg.workers = 1;
    const SearchResult res = search_tori(cfg);
    CHECK(res.candidates.empty());
    CHECK(res.stats.no_oscillation == 1);
}

TEST_CASE("grid with nonpositive frakC reports empty with stats") {
    SearchConfig cfg;
    cfg.a = GridSpec{Rational(-12), Rational(-11), 1};
    cfg.b = fixed(Rational(-12));
    cfg.c1 = fixed(Rational(1));
    cfg.c2 = fixed(Rational(1));
    cfg.c3 = fixed(Rational(1));
    cfg.refine_c3 = false;
    cfg.alpha_star_max = 0;
    cfg.workers = 1;
    const SearchResult res = search_tori(cfg);
    CHECK(res.candidates.empty());
    CHECK(res.stats.nonpositive_frak_c == 2);
    CHECK(res.stats.total_points == 2);
}

TEST_CASE("targeted seeding plus c3 refinement finds the closing torus") {
    const SearchConfig cfg = torus_config();
    const SearchResult res = search_tori(cfg);
    REQUIRE(!res.candidates.empty());

    bool found = false;
    for (const auto& c : res.candidates) {
        if (!c.certified) continue;
        if (c.closing_n == 4 && c.closing_m == 3) {
            found = true;
            CHECK((*c.moduli.exact)[1] == Rational(-16)); // the seeded b
            CHECK(c.roots[0] == Rational(5));
            CHECK(c.roots[1] == Rational(1));
            CHECK(c.roots[2] == Rational(-8));
            CHECK(c.moduli.c3 == doctest::Approx(8.966444820400003).epsilon(1e-9));
            CHECK(c.tau == doctest::Approx(1.078749095290671400346).epsilon(1e-10));
            CHECK(c.fs_residual_x < 1e-6);
            CHECK(c.fs_residual_y < 1e-6);
            CHECK(c.fs_residual_z < 1e-6);
        }
    }
    CHECK(found);
}

TEST_CASE("search results are worker-count independent and deterministic") {
    SearchConfig cfg = torus_config();
    cfg.refine_max_n = 4;
    const SearchResult a = search_tori(cfg);
    cfg.workers = 4;
    const SearchResult b = search_tori(cfg);
    cfg.workers = 1;
    const SearchResult c = search_tori(cfg);

    auto dump = [](const SearchResult& r) {
        Json arr = Json::array();
        for (const auto& cand : r.candidates) arr.push(cand.to_json());
        return arr.dump() + r.stats.to_json().dump();
    };
    CHECK(dump(a) == dump(b));
    CHECK(dump(a) == dump(c));
}

TEST_CASE("emitted candidates recertify from their serialization alone") {
    SearchConfig cfg = torus_config();
    cfg.refine_max_n = 4;
    const SearchResult res = search_tori(cfg);
    REQUIRE(!res.candidates.empty());
    const TorusCandidate& cand = res.candidates.front();
    REQUIRE(cand.certified);

    const std::string wire = cand.to_json().dump(2);
    const TorusCandidate parsed = TorusCandidate::from_json_text(wire);
    const TorusCandidate again = recertify_candidate(parsed.moduli, cfg);
    CHECK(again.certified);
    CHECK(again.closing_n == cand.closing_n);
    CHECK(again.closing_m == cand.closing_m);
    CHECK(again.tau == doctest::Approx(cand.tau).epsilon(1e-14));
}

} // TEST_SUITE

TEST_SUITE("export") {

TEST_CASE("csv grid shape and determinism") {
    const ImmersionData d = ImmersionData::build(
        ModuliParams::from_rationals(Rational(2), Rational(-16), Rational(4), Rational(3), Rational(1)), 256);
    ExportOptions opt;
    opt.closing_certified = true; // suppress the provisional-period warning row
    const std::string csv = export_samples(d, ExportFormat::Csv, opt);
    std::istringstream in(csv);
    std::string line;
    int rows = 0;
    bool header = false;
    while (std::getline(in, line)) {
        if (rows == 0 && line.rfind("x,y,z,", 0) == 0) header = true;
        ++rows;
    }
    CHECK(header);
    CHECK(rows == 1 + 8 * 8 * 8);

    const std::string csv2 = export_samples(d, ExportFormat::Csv, opt);
    CHECK(csv == csv2);
}

TEST_CASE("ply header and vertex count") {
    const ImmersionData d = ImmersionData::build(
        ModuliParams::from_rationals(Rational(2), Rational(-16), Rational(4), Rational(3), Rational(1)), 256);
    ExportOptions opt;
    opt.nx = 4;
    opt.ny = 4;
    opt.nz = 2;
    const std::string ply = export_samples(d, ExportFormat::Ply, opt);
    CHECK(ply.rfind("ply\nformat ascii 1.0\n", 0) == 0);
    CHECK(ply.find("element vertex 32\n") != std::string::npos);
    CHECK(ply.find("projection:") != std::string::npos);

    std::istringstream in(ply);
    std::string line;
    int data_rows = 0;
    bool past_header = false;
    while (std::getline(in, line)) {
        if (past_header && !line.empty()) ++data_rows;
        if (line == "end_header") past_header = true;
    }
    CHECK(data_rows == 32);
}

TEST_CASE("json bundle round-trips evaluations exactly") {
    const ImmersionData d = ImmersionData::build(ModuliParams::from_doubles(1, 1, 1, 1, 1), 256);
    ExportOptions opt;
    const std::string bundle = export_samples(d, ExportFormat::JsonBundle, opt);
    CHECK(bundle.find("UnclosedTorusWarning") != std::string::npos); // irrational spectrum

    const ImmersionData back = immersion_from_json_text(bundle);
    double worst = 0;
    for (double x : {0.0, 0.7}) {
        for (double z : {0.1, 1.2}) {
            const Vec4c a = eval_psi(d, x, 0.3, z);
            const Vec4c b = eval_psi(back, x, 0.3, z);
            for (int j = 0; j < 4; ++j) worst = std::max(worst, std::abs(a(j) - b(j)));
        }
    }
    CHECK(worst < 1e-15);
}

} // TEST_SUITE
