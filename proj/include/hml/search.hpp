#pragma once

// Torus search over rational moduli grids. For each (a, c1, c2) the b axis is
// enumerated from the configured grid plus targeted seeds: a desired rational
// root alpha* forces
//     c2*b = [alpha*^3 + a alpha*^2 - B0 alpha* + c1 C0] / (alpha* - c1),
// with B0 = 2 c1 a + 3 c1^2 and C0 = a c1 + 2 c1^2 + 2 c2^2 the b-free parts
// of frakB and frakC (frakB = B0 + c2 b, frakC = C0 + c2 b). The cubic does
// not involve c3, so once a point has three rational roots the z-closure
// condition is one-dimensional in c3: grid values are tested directly and,
// optionally, refined by bisection toward a nearby low-denominator winding
// fraction (the refined c3 is emitted as its exact dyadic rational).
//
// Pipeline per point, cheapest rejection first:
//   frakC > 0 -> oscillation -> rational roots -> gamma radicands ->
//   winding rationalization -> behavioral periodicity certification.

#include "hml/immersion.hpp"
#include "hml/verify.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hml {

struct GridSpec {
    Rational min, max;
    std::int64_t denominator = 1; // enumerate min, min + 1/den, ..., <= max

    std::vector<Rational> enumerate() const;
};

struct SearchConfig {
    GridSpec a, b, c1, c2, c3;
    std::int64_t max_denominator = 1000000; // winding rationalization budget
    double eps_close = 1e-9;
    // alpha* seeding: rationals p/q, q <= alpha_star_den, |p/q| <= alpha_star_max
    std::int64_t alpha_star_den = 4;
    std::int64_t alpha_star_max = 8;
    bool refine_c3 = true;
    std::int64_t refine_max_n = 64; // target winding denominators for refinement
    int n_samples = 512;
    int n_periodicity_points = 64;
    double fs_tol = 1e-6;
    int workers = 0; // 0: HML_TORI_THREADS or hardware_concurrency
    std::uint64_t seed = 12345;
    std::string out_path;

    void validate() const;
};

struct TorusCandidate {
    ModuliParams moduli;                   // exact rationals
    std::array<Rational, 3> roots;         // exact cubic roots, descending
    double tau = 0;
    double theta_rel = 0;
    std::int64_t closing_n = 0, closing_m = 0;
    double fs_residual_x = 0, fs_residual_y = 0, fs_residual_z = 0;
    bool certified = false;

    Json to_json() const;
    static TorusCandidate from_json_text(const std::string& text);
};

struct RejectionStats {
    std::int64_t total_points = 0;
    std::int64_t invalid_moduli = 0;
    std::int64_t nonpositive_frak_c = 0;
    std::int64_t no_oscillation = 0;
    std::int64_t irrational_roots = 0;
    std::int64_t negative_radicand = 0;
    std::int64_t no_winding = 0;
    std::int64_t failed_certification = 0;
    std::int64_t errors = 0;

    RejectionStats& operator+=(const RejectionStats& o);
    Json to_json() const;
};

struct SearchResult {
    std::vector<TorusCandidate> candidates;
    RejectionStats stats;
};

SearchResult search_tori(const SearchConfig& cfg);

// Re-run the closure pipeline from a candidate's exact moduli alone; used by
// the soundness tests and the CLI to re-certify serialized candidates.
TorusCandidate recertify_candidate(const ModuliParams& exact_moduli, const SearchConfig& cfg);

int resolve_worker_count(int configured);

SearchConfig search_config_from_json_text(const std::string& text);

} // namespace hml
