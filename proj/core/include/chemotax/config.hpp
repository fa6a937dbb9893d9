#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "chemotax/constants.hpp"
#include "chemotax/model.hpp"
#include "chemotax/solver.hpp"

namespace chemotax {

/// Parse/validation failure with source position for diagnostics.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& msg, int line, int col)
        : std::runtime_error(msg + " (line " + std::to_string(line) + ", column " +
                             std::to_string(col) + ")"),
          line(line), col(col) {}
    int line;
    int col;
};

/// Initial-data recipe. Density fields (u, w) are mass-normalized; signal
/// fields (v, z) are level-based. builder is one of: constant, gaussian,
/// cosine, random, elliptic (signals only; quasi-steady solve from the
/// matching density).
struct InitialRecipe {
    std::string builder = "constant";
    double mass = 1.0;        ///< densities
    double value = -1.0;      ///< signals; negative means "match source mean"
    double center_x = 0.5;
    double center_y = 0.5;
    double width = 0.1;
    double floor_frac = 1e-8; ///< density floor = floor_frac * mass/area
    double amplitude = 0.1;
    int mode_x = 1;
    int mode_y = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

/// Complete description of one experiment, parsed from a sectioned flat
/// key-value file.
struct RunConfig {
    double lx = 1.0;
    double ly = 1.0;
    int nx = 64;
    int ny = 64;

    ModelParams model;
    InitialRecipe init_u;
    InitialRecipe init_w;
    InitialRecipe init_v;
    InitialRecipe init_z;
    bool symmetric_copy = false;

    SolverConfig solver;
    int diagnostics_every = 10;

    std::optional<double> k_user;
    std::optional<double> cgn_user;
    OptimizerConfig opt;
    int est_nx = 64; ///< constants are domain properties; estimated on a fixed
    int est_ny = 64; ///< auxiliary grid of the same rectangle

    std::string csv_path = "-";
    std::string snapshot_path;
    std::string aggregate_path = "sweep.csv";
    std::uint64_t base_seed = 1;

    DomainSpec domain() const { return DomainSpec(lx, ly, nx, ny); }
};

RunConfig parse_run_config_file(const std::string& path);
RunConfig parse_run_config_text(const std::string& text);

/// Materialized experiment: grid, validated parameters, initial state and the
/// derived quantities (with constants estimated unless user-supplied).
struct Experiment {
    DomainSpec dom;
    ModelParams params;
    SimState state0;
    DerivedParams dp;
};

Experiment build_experiment(const RunConfig& cfg);

} // namespace chemotax
