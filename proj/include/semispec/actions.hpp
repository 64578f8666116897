#pragma once

#include <vector>

#include "semispec/geometry.hpp"
#include "semispec/quadrature.hpp"

namespace semispec {

// Action integrals over wells/barriers at one energy.
struct ActionProfile {
    double lambda = 0.0;
    std::vector<double> phi;     // per well:    int sqrt(lambda - v)
    std::vector<double> phi_dot; // per well:    (1/2) int (lambda - v)^{-1/2}
    std::vector<double> omega;   // per barrier: int sqrt(v - lambda)
};

double action_phi(const PotentialModel& model, Interval well, double lambda,
                  const QuadratureOptions& opt = {});
double action_phi_dot(const PotentialModel& model, Interval well, double lambda,
                      const QuadratureOptions& opt = {});
double barrier_omega(const PotentialModel& model, Interval barrier, double lambda,
                     const QuadratureOptions& opt = {});

ActionProfile action_profile(const PotentialModel& model, const EnergyDecomposition& d,
                             const QuadratureOptions& opt = {});

// Partial action between a turning-point anchor and x, both inside the
// classically allowed region: int of sqrt(lambda - v) over [min, max].
// Always >= 0.
double partial_action(const PotentialModel& model, double lambda, double anchor, double x,
                      const QuadratureOptions& opt = {});

// Solve Phi_ell(lambda) = mu for lambda within `bracket`. The decomposition
// is re-derived at every iterate; a change of well count raises
// TopologyError.
double invert_phi(const PotentialModel& model, Interval domain, int well_index, double mu,
                  Interval bracket, const TurningPointOptions& tp_opt = {},
                  const QuadratureOptions& quad_opt = {});

} // namespace semispec
