#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "semispec/actions.hpp"
#include "semispec/airy.hpp"
#include "semispec/ode.hpp"

namespace semispec {

// value * e^{log_scale}; keeps exponentially large/small quantities usable.
struct ScaledValue {
    double mantissa = 0.0;
    double log_scale = 0.0;
    double value() const;
    double log_abs() const; // -inf for zero mantissa
};

// Solution data at one point, in a common scaled frame.
struct SolutionPoint {
    double value = 0.0;
    double deriv = 0.0;
    double log_scale = 0.0;
};

// Langer variable xi around a turning point x0 with v(x0) = lambda:
// xi'^2 xi = v - v(x0), xi'(x0) = sign * |v'(x0)|^{1/3}. Sign +1 puts the
// barrier to the right of x0, -1 to the left.
class LangerFrame {
public:
    LangerFrame(PotentialModel model, double lambda, double x0, int sign, Interval working,
                QuadratureOptions quad = {});

    double xi(double x) const;
    double xi_prime(double x) const;
    double xi_second(double x) const;

    double lambda() const { return lambda_; }
    double anchor() const { return x0_; }
    int sign() const { return sign_; }
    Interval working() const { return working_; }
    const PotentialModel& model() const { return model_; }
    double xi_prime_at_anchor() const { return xi_prime_x0_; }
    bool barrier_side(double x) const { return sign_ * (x - x0_) > 0.0; }

    struct XiSample {
        double x, xi, xi_prime;
    };
    const std::vector<XiSample>& samples() const { return samples_; }

private:
    PotentialModel model_;
    double lambda_;
    double x0_;
    int sign_;
    Interval working_;
    QuadratureOptions quad_;
    double xi_prime_x0_;
    double xi_second_x0_;
    double series_radius_;
    std::vector<XiSample> samples_;
};

// Working interval between the neighbouring turning points (or domain ends).
LangerFrame frame_at_turning_point(const PotentialModel& model, const EnergyDecomposition& d,
                                   double x0, int sign);

enum class SolutionKind { Recessive, Dominant }; // u: decays in barrier; w: grows

// Leading-order Langer form sqrt(pi) h^{-1/6} |xi'|^{-1/2} F(h^{-2/3} xi),
// F = Ai (recessive) or Bi (dominant), with its x-derivative.
SolutionPoint evaluate_langer(SolutionKind kind, const LangerFrame& frame, double hbar, double x);

// Canonical solution backed by ODE integration on the oscillatory side.
// Recessive solutions are seeded deep inside the barrier (where the Airy
// form is exponentially clean) and integrated in their growing direction;
// their barrier-side values come from the scaled Airy form. Dominant
// solutions integrate outward from the anchor in both directions.
class SemiclassicalSolution {
public:
    SolutionKind kind() const { return kind_; }
    double hbar() const { return hbar_; }
    const LangerFrame& frame() const { return *frame_; }

    SolutionPoint eval(double x) const;

    const OdeResult* well_run() const { return well_run_ ? &*well_run_ : nullptr; }
    const OdeResult* barrier_run() const { return barrier_run_ ? &*barrier_run_ : nullptr; }
    double well_run_log_base() const { return well_base_log_; }
    double barrier_run_log_base() const { return barrier_base_log_; }

private:
    friend SemiclassicalSolution integrate_canonical(SolutionKind,
                                                     std::shared_ptr<const LangerFrame>, double,
                                                     Interval, const OdeOptions&);
    SolutionKind kind_ = SolutionKind::Recessive;
    double hbar_ = 0.0;
    std::shared_ptr<const LangerFrame> frame_;
    std::optional<OdeResult> well_run_;
    std::optional<OdeResult> barrier_run_;
    double well_base_log_ = 0.0;
    double barrier_base_log_ = 0.0;
    Interval target_{};
};

SemiclassicalSolution integrate_canonical(SolutionKind kind,
                                          std::shared_ptr<const LangerFrame> frame, double hbar,
                                          Interval target, const OdeOptions& opt = {});

// {s1, s2} = s1' s2 - s1 s2' at x, in scaled form.
ScaledValue wronskian(const SemiclassicalSolution& s1, const SemiclassicalSolution& s2, double x);

} // namespace semispec
