#pragma once

#include <complex>

#include "semispec/langer.hpp"

namespace semispec {

// Reflection/transmission of the rightward-outgoing scattering problem
// across a single barrier, from a complex integration of the wave through
// the barrier and Wronskian decomposition in the WKB basis.
struct TunnelingReport {
    double hbar = 0.0;
    double omega = 0.0; // barrier integral at this energy
    std::complex<double> reflection;
    std::complex<double> transmission;
    double log_abs_transmission = 0.0;
    double flux_defect = 0.0;    // |R|^2 + |T|^2 - 1
    double wronskian_drift = 0.0; // relative drift of {f2, conj f2} along the run
};

TunnelingReport compute_rt(const PotentialModel& model, Interval domain, double lambda, double hbar,
                           double left_anchor, double right_anchor,
                           const QuadratureOptions& quad = {});

// Anchors default to the action midpoints of the two adjacent wells.
TunnelingReport compute_rt(const PotentialModel& model, Interval domain, double lambda, double hbar,
                           const QuadratureOptions& quad = {});

// The barrier Wronskians in scaled form, with their ratios against the
// leading asymptotic magnitudes.
struct WronskianSuite {
    double hbar = 0.0;
    double omega = 0.0;
    ScaledValue uu;        // {u+(b1), u-(b2)}
    ScaledValue ww;        // {w+(b1), w-(b2)}
    ScaledValue cross_uw;  // {u+(b1), w-(b2)}
    ScaledValue cross_wu;  // {u-(b2), w+(b1)}
    double uu_ratio = 0.0; // uu * (-2 hbar e^{+Omega/hbar})    -> 1 + O(hbar)
    double ww_ratio = 0.0; // ww * (hbar/2) e^{-Omega/hbar}     -> 1 + O(hbar)
    double uw_plus = 0.0;  // hbar {u+, w+}                     -> -1 + O(hbar)
    double uw_minus = 0.0; // hbar {u-, w-}                     -> +1 + O(hbar)
    double cross_log_bound = 0.0; // ln(hbar^{-1}) - 0.8 Omega/hbar
};

WronskianSuite wronskian_suite(const PotentialModel& model, Interval domain, double lambda,
                               double hbar, const QuadratureOptions& quad = {});

} // namespace semispec
