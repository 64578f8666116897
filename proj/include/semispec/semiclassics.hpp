#pragma once

#include <optional>
#include <vector>

#include "semispec/actions.hpp"
#include "semispec/langer.hpp"
#include "semispec/oracle.hpp"

namespace semispec {

// Potential + energy window with a fixed well topology; serves actions,
// their inverses, and decompositions across the window.
class SpectralContext {
public:
    SpectralContext(PotentialModel model, Interval domain, Interval window,
                    TurningPointOptions tp = {}, QuadratureOptions quad = {});

    const PotentialModel& model() const { return model_; }
    Interval domain() const { return domain_; }
    Interval window() const { return window_; }
    int well_count() const { return L_; }

    EnergyDecomposition decompose_at(double lambda) const;
    double phi(int well, double lambda) const;
    double phi_dot(int well, double lambda) const;
    double omega(int barrier, double lambda) const;
    double invert_phi(int well, double mu) const;

private:
    PotentialModel model_;
    Interval domain_;
    Interval window_;
    TurningPointOptions tp_;
    QuadratureOptions quad_;
    int L_ = 0;
};

// ---- quantization ----------------------------------------------------------

struct Prediction {
    int well = 0;
    int n = 0;
    double lambda = 0.0; // Psi_well(pi (n + 1/2) hbar)
    double radius = 0.0; // C_r hbar^2
};

struct PredictedSpectrum {
    double hbar = 0.0;
    std::vector<Prediction> entries; // sorted by lambda
};

PredictedSpectrum predict_spectrum(const SpectralContext& ctx, double hbar, double c_r = 5.0);

struct MatchEntry {
    double lambda_num = 0.0;
    int pred_index = -1; // into PredictedSpectrum::entries
    double distance = 0.0;
    bool within_radius = false;
};

struct MatchReport {
    std::vector<MatchEntry> eigenvalues;
    std::vector<int> contained_count; // per prediction: # eigenvalues inside its interval
    int unmatched = 0;                // eigenvalues not inside any interval
    std::vector<int> empty_intervals; // prediction indices with no eigenvalue
};

MatchReport match_spectrum(const PredictedSpectrum& pred, const std::vector<double>& eigenvalues);

// ---- eigenfunction phases --------------------------------------------------

struct PhaseMeasurement {
    double amplitude = 0.0;
    double theta = 0.0;  // mod pi
    double delta = 0.0;  // distance of theta from pi/4, in [0, pi/2]
    double x_star = 0.0; // sample point (action midpoint of the well)
    bool indeterminate = false;
};

enum class WellSide { Left, Right };

// Core extraction on plain arrays; exposed for synthetic inputs.
PhaseMeasurement extract_phase_from_samples(const std::vector<double>& psi, const Grid& grid,
                                            int node, double p, double p_slope, double action,
                                            double hbar, int direction);

PhaseMeasurement extract_phase(const Eigenpair& eig, const Grid& grid, const PotentialModel& model,
                               double lambda, double hbar, const EnergyDecomposition& d, int well,
                               WellSide side, const QuadratureOptions& quad = {});

struct FixingVerdict {
    bool pass = false;
    double delta1 = 0.0, delta2 = 0.0;
    bool indeterminate1 = false, indeterminate2 = false;
};

// Fixing condition across a barrier: passes when either measured side has
// its phase within c_f * hbar of pi/4 (mod pi); an indeterminate side
// passes by itself (the solution is localized on the other side).
FixingVerdict check_fixing(const PhaseMeasurement& left, const PhaseMeasurement& right, double hbar,
                           double c_f = 3.0);

struct LocalizationReport {
    double ratio = 0.0;    // A_far / A_near
    double exponent = 0.0; // -hbar ln ratio, to compare with Omega
};

LocalizationReport localization_ratio(const PhaseMeasurement& near_side,
                                      const PhaseMeasurement& far_side, double hbar);

// Agmon-type envelope bound on |psi| inside a barrier.
struct DecayCheck {
    bool pass = false;
    double worst_ratio = 0.0; // max |psi| / bound over the samples
};

DecayCheck barrier_decay_check(const Eigenpair& eig, const Grid& grid, const PotentialModel& model,
                               double lambda, double hbar, Interval barrier, double amplitude,
                               double omega, double c_bound = 10.0,
                               const QuadratureOptions& quad = {});

// ---- Weyl bounds -----------------------------------------------------------

struct WeylBounds {
    double lower = 0.0, upper = 0.0;
    int count = 0;
    bool pass = false;
};

WeylBounds weyl_count(const SpectralContext& ctx, double hbar, int numerical_count);

// ---- symmetric double well -------------------------------------------------

struct SplittingPair {
    int n = 0;                  // quantum number of the merged interval
    double lambda_minus = 0.0;  // refined
    double lambda_plus = 0.0;
    double splitting = 0.0;
    double lambda_bar = 0.0;
    double omega_bar = 0.0;     // Omega(lambda_bar)
    double exponent = 0.0;      // -hbar ln splitting
    bool parity_alternates = false;
};

struct SplittingReport {
    double hbar = 0.0;
    std::vector<SplittingPair> pairs;
    std::vector<int> excluded; // quantum numbers whose partner fell outside the window
    double omega0_mid = 0.0;   // (1/2) hbar^{-1} e^{-Omega/hbar} at mid-window
};

SplittingReport double_well_analysis(const SpectralContext& ctx, double hbar);

// ---- two-well gamma ratios (L = 2) ----------------------------------------

struct GammaReport {
    double gamma1 = 0.0, gamma2 = 0.0;
    double omega1 = 0.0, omega2 = 0.0;
    double omega0 = 0.0;   // -{u1,u2}/{w1,w2} + omega1*omega2
    double residual = 0.0; // |(gamma1+omega1)(gamma2+omega2) - omega0|
};

GammaReport gamma_ratios(const SpectralContext& ctx, double lambda, double hbar);

// Root of the outer-solutions Wronskian near lambda0: the energy at which
// the constructed decaying solutions actually match. Used to probe the
// consistency identity at exponential accuracy.
double refine_matching_energy(const SpectralContext& ctx, double lambda0, double hbar);

} // namespace semispec
