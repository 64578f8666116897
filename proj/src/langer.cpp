#include "semispec/langer.hpp"

#include <cmath>
#include <limits>

namespace semispec {

namespace {
constexpr double kSqrtPi = 1.7724538509055160273;
}

double ScaledValue::value() const { return mantissa * std::exp(log_scale); }

double ScaledValue::log_abs() const {
    if (mantissa == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(std::fabs(mantissa)) + log_scale;
}

LangerFrame::LangerFrame(PotentialModel model, double lambda, double x0, int sign,
                         Interval working, QuadratureOptions quad)
    : model_(std::move(model)), lambda_(lambda), x0_(x0), sign_(sign), working_(working),
      quad_(quad) {
    if (sign_ != 1 && sign_ != -1) throw FrameError("frame sign must be +1 or -1");
    if (!(working_.lo < x0_ && x0_ < working_.hi))
        throw FrameError("anchor must lie inside the working interval");
    const Jet2 j = model_(x0_);
    const double scale = std::max(1.0, std::fabs(lambda_));
    if (std::fabs(j.v - lambda_) > 1e-10 * scale)
        throw FrameError("anchor is not a turning point at this energy");
    if (sign_ * j.d1 <= 0.0) throw FrameError("slope sign at anchor does not match frame sign");

    xi_prime_x0_ = sign_ * std::cbrt(std::fabs(j.d1));
    xi_second_x0_ = xi_prime_x0_ * j.d2 / (5.0 * j.d1);
    series_radius_ = 1e-5 * std::max(1.0, std::fabs(x0_));

    // no other turning point inside the working interval
    const int probes = 128;
    for (int side = 0; side < 2; ++side) {
        const double e0 = side == 0 ? working_.lo : working_.hi;
        for (int k = 1; k < probes; ++k) {
            const double x = x0_ + (e0 - x0_) * k / probes;
            const double gap = model_.value(x) - lambda_;
            const bool barrier = sign_ * (x - x0_) > 0.0;
            if ((barrier && gap <= 0.0) || (!barrier && gap >= 0.0))
                throw FrameError("another turning point inside the working interval");
        }
    }

    samples_.reserve(65);
    for (int k = 0; k <= 64; ++k) {
        const double x = working_.lo + working_.width() * k / 64.0;
        if (std::fabs(x - x0_) < series_radius_) continue;
        samples_.push_back({x, xi(x), xi_prime(x)});
    }
}

double LangerFrame::xi(double x) const {
    const double d = x - x0_;
    if (std::fabs(d) < series_radius_) {
        const double a = xi_second_x0_ / (2.0 * xi_prime_x0_);
        return xi_prime_x0_ * d * (1.0 + a * d);
    }
    auto f = [&](double y) { return std::sqrt(std::fabs(model_.value(y) - lambda_)); };
    const double s = std::fabs(tanh_sinh(f, x0_, x, quad_));
    const double mag = std::pow(1.5 * s, 2.0 / 3.0);
    return barrier_side(x) ? mag : -mag;
}

double LangerFrame::xi_prime(double x) const {
    const double d = x - x0_;
    if (std::fabs(d) < series_radius_) {
        const double a = xi_second_x0_ / (2.0 * xi_prime_x0_);
        return xi_prime_x0_ * (1.0 + 2.0 * a * d);
    }
    const double ratio = (model_.value(x) - lambda_) / xi(x);
    return sign_ * std::sqrt(std::fabs(ratio));
}

double LangerFrame::xi_second(double x) const {
    const double d = x - x0_;
    if (std::fabs(d) < 1e-3 * std::max(1.0, std::fabs(x0_))) return xi_second_x0_;
    const double xp = xi_prime(x);
    return (model_(x).d1 - xp * xp * xp) / (2.0 * xp * xi(x));
}

LangerFrame frame_at_turning_point(const PotentialModel& model, const EnergyDecomposition& d,
                                   double x0, int sign) {
    // neighbouring turning points bound the working interval
    std::vector<double> tps;
    for (const auto& w : d.wells) {
        tps.push_back(w.lo);
        tps.push_back(w.hi);
    }
    double lo = d.domain.lo, hi = d.domain.hi;
    for (double t : tps) {
        if (t < x0 - 1e-12 && t > lo) lo = t;
        if (t > x0 + 1e-12 && t < hi) hi = t;
    }
    return LangerFrame(model, d.lambda, x0, sign, {lo, hi});
}

SolutionPoint evaluate_langer(SolutionKind kind, const LangerFrame& frame, double hbar, double x) {
    if (x < frame.working().lo || x > frame.working().hi)
        throw FrameError("evaluation point outside the working interval");
    const double xi = frame.xi(x);
    const double xp = frame.xi_prime(x);
    const double xs = frame.xi_second(x);
    const double t = xi / std::pow(hbar, 2.0 / 3.0);
    const double amp = 1.0 / std::sqrt(std::fabs(xp));
    const double damp = -0.5 * amp / std::fabs(xp) * (xp > 0 ? 1.0 : -1.0) * xs;
    const double pref = kSqrtPi * std::pow(hbar, -1.0 / 6.0);

    double F, Fp, ls;
    if (t >= 0.0) {
        const ScaledAiryValues sa = airy_log_scaled(t);
        if (kind == SolutionKind::Recessive) {
            F = sa.ai;
            Fp = sa.ai_prime;
            ls = -sa.zeta;
        } else {
            F = sa.bi;
            Fp = sa.bi_prime;
            ls = sa.zeta;
        }
    } else {
        const AiryValues av = airy(t);
        F = kind == SolutionKind::Recessive ? av.ai : av.bi;
        Fp = kind == SolutionKind::Recessive ? av.ai_prime : av.bi_prime;
        ls = 0.0;
    }

    SolutionPoint p;
    p.value = pref * amp * F;
    p.deriv = pref * (damp * F + amp * Fp * xp / std::pow(hbar, 2.0 / 3.0));
    p.log_scale = ls;
    return p;
}

namespace {

OdeRhs schroedinger_rhs(const PotentialModel& model, double lambda, double hbar) {
    const double inv_h2 = 1.0 / (hbar * hbar);
    return [&model, lambda, inv_h2](double x, const double* y, double* dy) {
        dy[0] = y[1];
        dy[1] = (model.value(x) - lambda) * inv_h2 * y[0];
    };
}

} // namespace

SemiclassicalSolution integrate_canonical(SolutionKind kind,
                                          std::shared_ptr<const LangerFrame> frame, double hbar,
                                          Interval target, const OdeOptions& opt) {
    if (hbar <= 0.0) throw FrameError("hbar must be positive");
    const LangerFrame& fr = *frame;
    if (target.lo < fr.working().lo || target.hi > fr.working().hi)
        throw FrameError("target interval outside the working interval");

    SemiclassicalSolution s;
    s.kind_ = kind;
    s.hbar_ = hbar;
    s.frame_ = frame;
    s.target_ = target;

    const double x0 = fr.anchor();
    const int dir = fr.sign(); // barrier direction
    const double well_end = dir > 0 ? target.lo : target.hi;
    const double barrier_end = dir > 0 ? target.hi : target.lo;
    const bool has_well = dir > 0 ? target.lo < x0 : target.hi > x0;
    const bool has_barrier = dir > 0 ? target.hi > x0 : target.lo < x0;

    const OdeRhs rhs = schroedinger_rhs(fr.model(), fr.lambda(), hbar);

    if (kind == SolutionKind::Dominant) {
        const SolutionPoint at0 = evaluate_langer(kind, fr, hbar, x0);
        const double y0[2] = {at0.value, at0.deriv};
        if (has_well) {
            s.well_run_ = integrate_ode(rhs, 2, y0, x0, well_end, opt);
            s.well_base_log_ = at0.log_scale;
        }
        if (has_barrier) {
            s.barrier_run_ = integrate_ode(rhs, 2, y0, x0, barrier_end, opt);
            s.barrier_base_log_ = at0.log_scale;
        }
        return s;
    }

    // Recessive: seed deep in the barrier so the growing admixture stays
    // exponentially below the solution across the region of interest.
    if (has_well) {
        const double far_end = dir > 0 ? fr.working().hi : fr.working().lo;
        const double margin =
            std::min(0.5 * std::pow(hbar, 2.0 / 3.0), 0.25 * std::fabs(far_end - x0));
        double x_seed = far_end - dir * margin;

        // cap the seeding depth: e^{-35} of headroom is plenty
        auto barrier_action = [&](double x) {
            return std::fabs(tanh_sinh(
                [&](double y) {
                    const double p = fr.model().value(y) - fr.lambda();
                    return p > 0.0 ? std::sqrt(p) : 0.0;
                },
                x0, x));
        };
        const double s_max = barrier_action(x_seed);
        const double s_want = 35.0 * hbar;
        if (s_max > s_want) {
            double lo = x0, hi = x_seed;
            for (int it = 0; it < 24; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (barrier_action(mid) < s_want)
                    lo = mid;
                else
                    hi = mid;
            }
            x_seed = 0.5 * (lo + hi);
        }

        const SolutionPoint seed = evaluate_langer(kind, fr, hbar, x_seed);
        const double y0[2] = {seed.value, seed.deriv};
        s.well_run_ = integrate_ode(rhs, 2, y0, x_seed, well_end, opt);
        s.well_base_log_ = seed.log_scale;
    }
    (void)has_barrier; // barrier side is served by the scaled Airy form
    return s;
}

SolutionPoint SemiclassicalSolution::eval(double x) const {
    const LangerFrame& fr = *frame_;
    const bool on_barrier = fr.barrier_side(x);

    if (kind_ == SolutionKind::Recessive) {
        // the run is seeded inside the barrier, so it covers barrier points
        // too; using it everywhere keeps one consistent normalization
        if (well_run_) {
            const double lo = std::min(well_run_->samples.front().x, well_run_->samples.back().x);
            const double hi = std::max(well_run_->samples.front().x, well_run_->samples.back().x);
            if (x >= lo && x <= hi) {
                SolutionPoint p;
                well_run_->eval(x, 0, &p.value, &p.deriv, &p.log_scale);
                p.log_scale += well_base_log_;
                return p;
            }
        }
        return evaluate_langer(kind_, fr, hbar_, x);
    }

    const std::optional<OdeResult>& run = on_barrier ? barrier_run_ : well_run_;
    const double base = on_barrier ? barrier_base_log_ : well_base_log_;
    if (run) {
        const double lo = std::min(run->samples.front().x, run->samples.back().x);
        const double hi = std::max(run->samples.front().x, run->samples.back().x);
        if (x >= lo && x <= hi) {
            SolutionPoint p;
            run->eval(x, 0, &p.value, &p.deriv, &p.log_scale);
            p.log_scale += base;
            return p;
        }
    }
    return evaluate_langer(kind_, fr, hbar_, x);
}

ScaledValue wronskian(const SemiclassicalSolution& s1, const SemiclassicalSolution& s2, double x) {
    const SolutionPoint p1 = s1.eval(x);
    const SolutionPoint p2 = s2.eval(x);
    ScaledValue w;
    w.mantissa = p1.deriv * p2.value - p1.value * p2.deriv;
    w.log_scale = p1.log_scale + p2.log_scale;
    return w;
}

} // namespace semispec
