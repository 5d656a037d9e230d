#pragma once

// Sampled exports of a built immersion: CSV rows of psi on a regular grid
// over [0,T_x) x [0,T_y) x [0,n*tau), a JSON bundle with full provenance, or
// an ASCII PLY point cloud of a fixed phase-invariant R^3 projection of the
// CP^3 representatives. When the spectrum is irrational the x/y extents fall
// back to 2*pi and the output carries an unclosed-torus warning.

#include "hml/immersion.hpp"

#include <cstdint>
#include <string>

namespace hml {

enum class ExportFormat { Csv, JsonBundle, Ply };

struct ExportOptions {
    int nx = 8, ny = 8, nz = 8;
    std::int64_t closing_n = 1; // z extent multiplier
    bool closing_certified = false;
};

ExportFormat parse_format(const std::string& name);

// returns the serialized contents (the CLI writes them to --out)
std::string export_samples(const ImmersionData& d, ExportFormat format, const ExportOptions& opt);

} // namespace hml
