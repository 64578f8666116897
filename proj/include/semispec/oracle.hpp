#pragma once

#include <optional>
#include <string>
#include <vector>

#include "semispec/geometry.hpp"
#include "semispec/ode.hpp"

namespace semispec {

// Uniform interior grid for the 3-point finite-difference operator.
struct Grid {
    double a = 0.0, b = 0.0;
    int n = 0; // interior nodes
    double h() const { return (b - a) / (n + 1); }
    double node(int i) const { return a + (i + 1) * h(); }
    int nearest_node(double x) const;
};

// -hbar^2 psi'' + v psi on the grid: symmetric tridiagonal with
// d_i = 2 hbar^2/h^2 + v(x_i), off-diagonal e = -hbar^2/h^2.
struct TridiagonalOperator {
    Grid grid;
    double hbar = 0.0;
    std::vector<double> diag;
    double off = 0.0;
};

struct Eigenpair {
    double lambda = 0.0;
    std::vector<double> psi; // h-weighted L2 normalized
    double residual = 0.0;
    bool degenerate_pair = false;
    std::vector<double> psi_second; // filled when degenerate_pair
};

// Auto grid policy: h <= hbar^{3/2}/4 so the O(h^2) FD error stays below
// the O(hbar^2) effects under study; at least 63 interior nodes.
Grid make_grid(const PotentialModel& model, Interval domain, Interval window, double hbar,
               int explicit_n = 0, double margin_factor = 0.5);

TridiagonalOperator assemble_operator(const PotentialModel& model, const Grid& grid, double hbar);

// Number of eigenvalues below sigma (Sturm/LDL^T inertia count).
int sturm_count(const TridiagonalOperator& op, double sigma);

// All eigenvalues in (window.lo, window.hi), bisection to ~1e-12*scale with
// a long-double polish pass (splittings of nearly degenerate pairs need
// accuracy below the double Sturm floor eps*||T||).
std::vector<double> eigenvalues_in_window(const TridiagonalOperator& op, Interval window,
                                          std::vector<std::string>* warnings = nullptr);

Eigenpair eigenvector(const TridiagonalOperator& op, double lambda);

// Richardson extrapolation from grids h and h/2.
struct RefinedEigenvalue {
    double lambda = 0.0;
    double error_estimate = 0.0;
};
RefinedEigenvalue refine_eigenvalue(double lambda_h, double lambda_h2);

// Direct initial value integration of -hbar^2 psi'' + (v - lambda) psi = 0,
// real (dim 2) or complex (dim 4, split into real components).
OdeResult integrate_ivp(const PotentialModel& model, double lambda, double hbar, double x_start,
                        const std::vector<double>& initial, double x_end,
                        const OdeOptions& opt = {});

// Oracle spectrum with grid-doubling refinement; eigenvalues are matched
// between the two grids by order within the window.
struct OracleSpectrum {
    Grid coarse, fine;
    std::vector<double> lambda_h, lambda_h2;
    std::vector<double> lambda_refined, error_estimate;
};
OracleSpectrum oracle_spectrum(const PotentialModel& model, Interval domain, Interval window,
                               double hbar, int explicit_n = 0);

} // namespace semispec
