#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chemotax/config.hpp"
#include "chemotax/regimes.hpp"

namespace chemotax {

/// Shortest locale-independent decimal representation that round-trips.
std::string format_double(double v);

/// Fixed diagnostics column order; absent functionals are empty cells.
std::string csv_header();
std::string csv_row(const DiagnosticsRow& row);

/// Variant of build_experiment with externally supplied domain constants
/// (used by the sweep runner, which estimates them once per domain).
Experiment build_experiment_with_constants(const RunConfig& cfg, double k_est,
                                           ConstantProvenance k_prov, double cgn_est,
                                           ConstantProvenance cgn_prov);

struct SweepSpec {
    double m1_lo = 1.0, m1_hi = 1.0;
    int m1_n = 1;
    double m2_lo = 1.0, m2_hi = 1.0;
    int m2_n = 1;
};

/// Grammar: "m1=a:b:n,m2=c:d:n" (inclusive linspace endpoints).
SweepSpec parse_grid_spec(const std::string& text);

struct SweepPoint {
    double m1 = 0.0;
    double m2 = 0.0;
    bool predicted_b1 = false;
    bool predicted_b3 = false;
    bool predicted_b4 = false;
    std::string observed_status;
    std::optional<double> fitted_rate; ///< exponential rate of w1inf_dist_u
};

/// Deterministic per-point seed derived from (base seed, point index).
std::uint64_t point_seed(std::uint64_t base, std::size_t index);

/// Cartesian sweep; points run concurrently up to `jobs` threads, each point
/// owning its state; the aggregate is an index-ordered reduce, so output does
/// not depend on the thread count. Per-point failures are recorded and the
/// sweep continues.
std::vector<SweepPoint> run_sweep(const RunConfig& base, const SweepSpec& spec,
                                  int jobs);

std::string sweep_csv(const std::vector<SweepPoint>& points);

std::string to_string(RunStatus status);

} // namespace chemotax
