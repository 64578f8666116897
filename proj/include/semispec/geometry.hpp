#pragma once

#include <vector>

#include "semispec/potential.hpp"

namespace semispec {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
};

struct TurningPoint {
    double x = 0.0;
    double slope = 0.0; // v'(x)
    bool rising = false;
};

// Wells and barriers of {v < lambda} / {v > lambda} on a truncation
// interval with v > lambda at both ends.
struct EnergyDecomposition {
    double lambda = 0.0;
    std::vector<Interval> wells;
    std::vector<Interval> barriers; // finite barriers between wells only
    Interval domain;
    int well_count() const { return static_cast<int>(wells.size()); }
};

struct TurningPointOptions {
    int scan_n = 512;
    double critical_slope = 1e-6;
    double root_tol = 1e-13; // scaled by max(1, |lambda|)
};

std::vector<TurningPoint> find_turning_points(const PotentialModel& model, double lambda,
                                              Interval domain, const TurningPointOptions& opt = {},
                                              std::vector<std::string>* warnings = nullptr);

EnergyDecomposition decompose(const std::vector<TurningPoint>& points, const PotentialModel& model,
                              double lambda, Interval domain);

// find_turning_points + decompose in one call.
EnergyDecomposition decompose_energy(const PotentialModel& model, double lambda, Interval domain,
                                     const TurningPointOptions& opt = {});

} // namespace semispec
