#pragma once

#include <functional>

namespace semispec {

// Double-exponential (tanh-sinh) quadrature on a finite interval.
// Absorbs sqrt and inverse-sqrt endpoint singularities. Levels are
// halvings of the node spacing; refinement stops when two successive
// levels agree to rel_tol or level_cap is reached.
struct QuadratureOptions {
    double rel_tol = 1e-11;
    int level_cap = 12;
};

double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opt = {});

} // namespace semispec
