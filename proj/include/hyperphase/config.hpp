#pragma once

// Flat `key = value` run configuration with `#` comments.
//
//   plus  = 1.5708,1.5708          # center,halfwidth; arcs separated by ';'
//   minus = 4.7124,1.5708
//   eps   = 0.2,0.1,0.05
//   R     = 0.9
//   grid-h = auto

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperphase/geometry.hpp"

namespace hyperphase {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    BoundaryData data;
    std::vector<double> eps{0.05};
    std::vector<double> R{0.9};
    double grid_h = 0.0;  // 0: auto, eps (1 - R^2) / 6
    int grid = 256;       // points per side for sampled outputs
    std::string well = "quartic";
    int n = 2;
    IdealArc cap{0.5 * kPi, 0.5 * kPi};
    std::string out;
    std::string report;
    bool deterministic = true;
    double tol = 1e-6;

    bool operator==(const RunConfig& o) const;
};

/// Throws ConfigError on unknown keys, malformed values, missing data keys
/// and GeometryError on overlapping or out-of-range arcs.
RunConfig parse_config(const std::string& text);

/// Applies the assignments in `text` on top of `base`; data keys optional.
RunConfig merge_config(RunConfig base, const std::string& text);

std::string print_config(const RunConfig& cfg);

/// FNV-1a over the printed configuration.
std::uint64_t config_hash(const RunConfig& cfg);

/// Explicit spacing, or the layer bound for the first eps and the last R.
double resolved_spacing(const RunConfig& cfg, double eps, double R);

std::string format_double(double v);
std::vector<double> parse_number_list(const std::string& s, const std::string& key);
std::vector<IdealArc> parse_arc_list(const std::string& s, const std::string& key);

}  // namespace hyperphase
