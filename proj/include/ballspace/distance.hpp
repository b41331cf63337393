#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ballspace/holo_fn.hpp"
#include "ballspace/spaces.hpp"

namespace ballspace {

/* Level set of the weighted modulus: value kind uses |f|(1-|z|^2)^(q/p),
 * radial_derivative kind uses |Rf|(1-|z|^2)^(q/p+1). */
struct LevelSetSpec {
    HoloFn f;
    double eps = 0.1;
    enum class Kind { Value, RadialDerivative } kind = Kind::Value;
    SpaceParams params;
};

// Carleson tent norm of the indicator measure chi_Omega (1-|z|^2)^(ns) dlambda
NormEstimate level_set_carleson(const LevelSetSpec& spec, std::int64_t budget = 20000,
                                uint64_t seed = 12345, const GridOptions& grid = {});

enum class DistanceKind { D2, D3, D4, D5, D6, D7 };

DistanceKind parse_distance_kind(const std::string& name);
std::string distance_kind_name(DistanceKind which);

struct DistanceTrace {
    std::vector<double> eps;       // evaluated levels, ascending
    std::vector<double> estimate;  // estimator value per level (nonincreasing)
    double cap = 0.0;              // pass threshold in the f-scaled units
    double level_norm = 0.0;       // weighted sup norm used to scale the grid
    double lo = 0.0;               // transition interval
    double hi = 0.0;
    bool bracketed = true;
};

struct DistanceResult {
    double value = 0.0;
    DistanceTrace trace;
};

/* Smallest level eps whose estimator falls below a calibrated cap; eps_grid
 * entries are absolute levels (empty -> logarithmic grid over
 * [1e-4, 2] times the weighted sup norm), refined by one log bisection. */
DistanceResult distance_estimate(const HoloFn& f, const SpaceParams& params, DistanceKind which,
                                 std::vector<double> eps_grid = {}, std::int64_t budget = 20000,
                                 uint64_t seed = 12345, const GridOptions& grid = {});

}  // namespace ballspace
