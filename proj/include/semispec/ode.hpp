#pragma once

#include <array>
#include <functional>
#include <vector>

#include "semispec/errors.hpp"

namespace semispec {

// Adaptive Dormand-Prince 5(4) integrator for systems of dimension <= 4,
// with multiplicative renormalization so exponentially growing solutions
// never overflow. Stored samples live in the renormalized frame; the true
// value at a sample is y * e^{log_scale}.
struct OdeOptions {
    double rel_tol = 1e-10;
    double renorm_threshold = 1e100;
    double initial_step = 0.0; // 0: choose automatically
    int max_steps = 4000000;
};

struct OdeSample {
    double x;
    std::array<double, 4> y;
    std::array<double, 4> dy;
    double log_scale;
};

struct OdeResult {
    int dim = 0;
    std::vector<OdeSample> samples;                    // accepted steps, both endpoints included
    std::vector<std::pair<double, double>> renorms;    // (x, ln factor)
    double total_log_scale = 0.0;                      // sum of ln factors

    // ln |y|_inf at the final sample including accumulated scale.
    double final_log_magnitude() const;

    // Hermite interpolation of one component (and its derivative) at x;
    // returned pair is in the local sample frame, *log_scale is set.
    void eval(double x, int component, double* value, double* deriv, double* log_scale) const;
};

using OdeRhs = std::function<void(double x, const double* y, double* dy)>;

OdeResult integrate_ode(const OdeRhs& f, int dim, const double* y0, double x0, double x1,
                        const OdeOptions& opt = {});

} // namespace semispec
