#pragma once

#include <cstdint>
#include <string>

#include "chemotax/model.hpp"

namespace chemotax {

/// Binary field-snapshot format, little-endian throughout:
///   magic "CTX2" (4 bytes), format version u32,
///   nx u32, ny u32,
///   hx, hy, t, tau1, tau2, chi1, chi2, chi3 as f64,
///   then the four fields u, v, w, z, row-major f64,
///   payload length exactly 4*nx*ny*8 bytes.
struct Snapshot {
    std::uint32_t version = 1;
    std::uint32_t nx = 0;
    std::uint32_t ny = 0;
    double hx = 0.0;
    double hy = 0.0;
    double t = 0.0;
    double tau1 = 0.0;
    double tau2 = 0.0;
    double chi1 = 0.0;
    double chi2 = 0.0;
    double chi3 = 0.0;
    Field u, v, w, z;
};

Snapshot make_snapshot(const SimState& state, const DomainSpec& dom,
                       const ModelParams& params);

void write_snapshot(const std::string& path, const Snapshot& snap);
Snapshot read_snapshot(const std::string& path);

} // namespace chemotax
