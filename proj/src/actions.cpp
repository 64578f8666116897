#include "semispec/actions.hpp"

#include <cmath>

namespace semispec {

namespace {

// sqrt(lambda - v) with round-off clamping at the turning points. A
// violation deeper than the clamp band means the interval is not a well
// at this energy.
double sqrt_gap(const PotentialModel& model, double lambda, double x) {
    const double p = lambda - model.value(x);
    if (p <= 0.0) {
        if (p < -1e-12 * std::max(1.0, std::fabs(lambda)))
            throw DecompositionError("integrand negative inside well");
        return 0.0;
    }
    return std::sqrt(p);
}

} // namespace

double action_phi(const PotentialModel& model, Interval well, double lambda,
                  const QuadratureOptions& opt) {
    return tanh_sinh([&](double x) { return sqrt_gap(model, lambda, x); }, well.lo, well.hi, opt);
}

double action_phi_dot(const PotentialModel& model, Interval well, double lambda,
                      const QuadratureOptions& opt) {
    auto f = [&](double x) {
        const double p = lambda - model.value(x);
        if (p <= 0.0) {
            if (p < -1e-12 * std::max(1.0, std::fabs(lambda)))
                throw DecompositionError("integrand negative inside well");
            return 0.0; // node collapsed onto a turning point; weight is negligible there
        }
        return 0.5 / std::sqrt(p);
    };
    return tanh_sinh(f, well.lo, well.hi, opt);
}

double barrier_omega(const PotentialModel& model, Interval barrier, double lambda,
                     const QuadratureOptions& opt) {
    auto f = [&](double x) {
        const double p = model.value(x) - lambda;
        if (p <= 0.0) {
            if (p < -1e-12 * std::max(1.0, std::fabs(lambda)))
                throw DecompositionError("integrand negative inside barrier");
            return 0.0;
        }
        return std::sqrt(p);
    };
    return tanh_sinh(f, barrier.lo, barrier.hi, opt);
}

ActionProfile action_profile(const PotentialModel& model, const EnergyDecomposition& d,
                             const QuadratureOptions& opt) {
    ActionProfile p;
    p.lambda = d.lambda;
    for (const auto& w : d.wells) {
        p.phi.push_back(action_phi(model, w, d.lambda, opt));
        p.phi_dot.push_back(action_phi_dot(model, w, d.lambda, opt));
    }
    for (const auto& b : d.barriers) p.omega.push_back(barrier_omega(model, b, d.lambda, opt));
    return p;
}

double partial_action(const PotentialModel& model, double lambda, double anchor, double x,
                      const QuadratureOptions& opt) {
    const double lo = std::min(anchor, x), hi = std::max(anchor, x);
    return tanh_sinh([&](double y) { return sqrt_gap(model, lambda, y); }, lo, hi, opt);
}

double invert_phi(const PotentialModel& model, Interval domain, int well_index, double mu,
                  Interval bracket, const TurningPointOptions& tp_opt,
                  const QuadratureOptions& quad_opt) {
    auto phi_at = [&](double lam, double* phidot) {
        EnergyDecomposition d = decompose_energy(model, lam, domain, tp_opt);
        if (well_index < 0 || well_index >= d.well_count())
            throw TopologyError("well count changed inside inversion bracket");
        const Interval w = d.wells[well_index];
        if (phidot) *phidot = action_phi_dot(model, w, lam, quad_opt);
        return action_phi(model, w, lam, quad_opt);
    };

    double lo = bracket.lo, hi = bracket.hi;
    double flo = phi_at(lo, nullptr) - mu;
    double fhi = phi_at(hi, nullptr) - mu;
    if (flo > 0.0 || fhi < 0.0) throw Error("invert_phi: target outside bracket image");

    const double tol = 1e-11 * std::max(1.0, std::fabs(mu));
    double lam = 0.5 * (lo + hi);
    for (int i = 0; i < 60; ++i) {
        double pd = 0.0;
        const double f = phi_at(lam, &pd) - mu;
        if (std::fabs(f) <= tol) return lam;
        if (f < 0.0)
            lo = lam;
        else
            hi = lam;
        double next = lam - f / pd;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        lam = next;
    }
    return lam;
}

} // namespace semispec
