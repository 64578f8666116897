#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "semispec/langer.hpp"
#include "semispec/oracle.hpp"

using namespace semispec;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kDwOmegaQuarter = 0.9199578258338009504765;

std::shared_ptr<const LangerFrame> harmonic_frame_plus(double lambda = 1.0) {
    const PotentialModel m = parse_potential("x^2");
    const EnergyDecomposition d = decompose_energy(m, lambda, {-4.0, 4.0});
    return std::make_shared<const LangerFrame>(frame_at_turning_point(m, d, d.wells[0].hi, +1));
}

// derivative weights on arbitrary nodes (Fornberg recursion, first order)
void fornberg_d1(const double* x, int n, double x0, double* w) {
    std::vector<std::vector<double>> c(n, std::vector<double>(2, 0.0));
    double c1 = 1.0;
    double c4 = x[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                c[i][1] = c1 * (c[i - 1][0] - c5 * c[i - 1][1]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            c[j][1] = (c4 * c[j][1] - c[j][0]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    for (int i = 0; i < n; ++i) w[i] = c[i][1];
}

} // namespace

TEST_CASE("frame invariants at the harmonic turning point") {
    auto fr = harmonic_frame_plus();
    CHECK(fr->xi_prime_at_anchor() == doctest::Approx(std::cbrt(2.0)).epsilon(1e-8));
    CHECK(fr->xi(1.0) == doctest::Approx(0.0));
    // xi'(x)^2 xi(x) = v(x) - lambda across the working interval
    for (int k = 0; k <= 60; ++k) {
        const double x = -0.95 + (3.9 - (-0.95)) * k / 60.0;
        const double xi = fr->xi(x);
        const double xp = fr->xi_prime(x);
        const double rhs = x * x - 1.0;
        CHECK(std::fabs(xp * xp * xi - rhs) <= 1e-7 * std::max(1.0, std::fabs(rhs)));
    }
    CHECK(fr->sign() * fr->xi_prime(0.5) > 0.0);
    CHECK(fr->sign() * fr->xi_prime(1.5) > 0.0);

    // xi at 1.5 equals (3/2 int_1^1.5 sqrt(y^2-1) dy)^{2/3}
    const double s = 1.5 * std::sqrt(1.5 * 1.5 - 1.0) / 2.0 -
                     std::log(1.5 + std::sqrt(1.25)) / 2.0; // closed form of the integral
    CHECK(fr->xi(1.5) == doctest::Approx(std::pow(1.5 * s, 2.0 / 3.0)).epsilon(1e-9));
}

TEST_CASE("frame rejects bad anchors and foreign turning points") {
    const PotentialModel dw = builtin_potential("double_well");
    const EnergyDecomposition d = decompose_energy(dw, 0.25, {-3.0, 3.0});
    // working interval spanning past the next turning point
    CHECK_THROWS_AS(LangerFrame(dw, 0.25, d.wells[0].hi, +1, {d.wells[0].lo, 3.0}), FrameError);
    // anchor off the energy shell
    CHECK_THROWS_AS(LangerFrame(dw, 0.25, 0.5, +1, {0.0, 1.0}), FrameError);
    // wrong slope sign
    CHECK_THROWS_AS(frame_at_turning_point(dw, d, d.wells[0].hi, -1), FrameError);
}

TEST_CASE("langer form at the anchor and in the oscillatory region") {
    const double hbar = 0.05;
    auto fr = harmonic_frame_plus();
    const SolutionPoint at0 = evaluate_langer(SolutionKind::Recessive, *fr, hbar, 1.0);
    const double expected = std::sqrt(kPi) * std::pow(hbar, -1.0 / 6.0) *
                            std::pow(2.0, -1.0 / 6.0) * 0.35502805388781723926;
    CHECK(at0.value * std::exp(at0.log_scale) == doctest::Approx(expected).epsilon(1e-9));

    // deep in the well (h^{-2/3}|xi| >= 10): the sine form with phase pi/4
    for (double x : {-0.3, -0.1, 0.2, 0.4}) {
        const double p = 1.0 - x * x;
        const double phi_plus = kPi / 4 - (x * std::sqrt(p) / 2.0 + std::asin(x) / 2.0);
        const SolutionPoint u = evaluate_langer(SolutionKind::Recessive, *fr, hbar, x);
        const double predicted = std::sin(phi_plus / hbar + kPi / 4);
        CHECK(std::fabs(u.value * std::pow(p, 0.25) - predicted) <= 2.0 * hbar);
    }
}

TEST_CASE("dominant solution carries coefficient 1 in the barrier") {
    const double hbar = 0.05;
    auto fr = harmonic_frame_plus();
    const double x = 1.5;
    const double p = x * x - 1.0;
    const double s = x * std::sqrt(p) / 2.0 - std::log(x + std::sqrt(p)) / 2.0;
    const SolutionPoint w = evaluate_langer(SolutionKind::Dominant, *fr, hbar, x);
    const double log_pred = -0.25 * std::log(p) + s / hbar;
    const double log_got = std::log(std::fabs(w.value)) + w.log_scale;
    CHECK(std::fabs(std::exp(log_got - log_pred) - 1.0) <= 3.0 * hbar);

    // recessive carries 1/2
    const SolutionPoint u = evaluate_langer(SolutionKind::Recessive, *fr, hbar, x);
    const double log_pred_u = std::log(0.5) - 0.25 * std::log(p) - s / hbar;
    const double log_got_u = std::log(std::fabs(u.value)) + u.log_scale;
    CHECK(std::fabs(std::exp(log_got_u - log_pred_u) - 1.0) <= 3.0 * hbar);
}

TEST_CASE("canonical pair wronskian is -+ 1/hbar and constant") {
    const PotentialModel m = parse_potential("x^2");
    const EnergyDecomposition d = decompose_energy(m, 1.0, {-4.0, 4.0});
    for (double hbar : {0.1, 0.05}) {
        auto fp = std::make_shared<const LangerFrame>(frame_at_turning_point(m, d, 1.0, +1));
        auto fm = std::make_shared<const LangerFrame>(frame_at_turning_point(m, d, -1.0, -1));

        const SemiclassicalSolution up =
            integrate_canonical(SolutionKind::Recessive, fp, hbar, {-0.9, 1.0});
        const SemiclassicalSolution wp =
            integrate_canonical(SolutionKind::Dominant, fp, hbar, {-0.9, 2.0});
        const SemiclassicalSolution um =
            integrate_canonical(SolutionKind::Recessive, fm, hbar, {-1.0, 0.9});
        const SemiclassicalSolution wm =
            integrate_canonical(SolutionKind::Dominant, fm, hbar, {-2.0, 0.9});

        // {u+, w+} = -1/hbar (1 + O(hbar)); {u-, w-} = +1/hbar (1 + O(hbar))
        double drift_ref = 0.0;
        for (double x : {-0.6, -0.2, 0.1, 0.5, 0.8}) {
            const double wp_val = wronskian(up, wp, x).value();
            const double wm_val = wronskian(um, wm, x).value();
            CHECK(std::fabs(hbar * wp_val + 1.0) <= 5.0 * hbar);
            CHECK(std::fabs(hbar * wm_val - 1.0) <= 5.0 * hbar);
            if (drift_ref == 0.0) drift_ref = wp_val;
            // independently integrated runs stay consistent to the
            // accumulated integrator drift
            CHECK(std::fabs(wp_val - drift_ref) <= 1e-5 * std::fabs(drift_ref));
        }

        // the strict constancy bound applies to a co-integrated pair
        {
            const SolutionPoint u0 = evaluate_langer(SolutionKind::Recessive, *fp, hbar, 0.9);
            const SolutionPoint w0 = evaluate_langer(SolutionKind::Dominant, *fp, hbar, 0.9);
            const double f = std::exp(u0.log_scale - w0.log_scale);
            // both components in w0's frame
            const std::vector<double> init{u0.value * f, w0.value, u0.deriv * f, w0.deriv};
            const OdeResult r = integrate_ivp(m, 1.0, hbar, 0.9, init, -0.9);
            const double ww0 = init[2] * init[1] - init[0] * init[3];
            for (const OdeSample& s : r.samples) {
                const double w = (s.y[2] * s.y[1] - s.y[0] * s.y[3]) * std::exp(2.0 * s.log_scale);
                CHECK(std::fabs(w - ww0) <= 1e-8 * std::fabs(ww0));
            }
        }

        // {u-, u+} = hbar^{-1} cos(Phi/hbar) + O(1), Phi = pi/2
        const double expect = std::cos(kPi / 2 / hbar) / hbar;
        double worst_c = 0.0;
        for (double x : {-0.4, 0.0, 0.3}) {
            const double got = wronskian(um, up, x).value();
            worst_c = std::max(worst_c, std::fabs(got - expect));
        }
        CHECK(worst_c <= 5.0);
    }
}

TEST_CASE("recessive decay across the double-well barrier tracks Omega") {
    const PotentialModel m = builtin_potential("double_well");
    const double lambda = 0.25, hbar = 0.05;
    const EnergyDecomposition d = decompose_energy(m, lambda, {-3.0, 3.0});
    const Interval barrier = d.barriers[0];
    auto fp = std::make_shared<const LangerFrame>(frame_at_turning_point(m, d, barrier.lo, +1));

    const double margin = 0.25 * std::pow(hbar, 2.0 / 3.0);
    const SemiclassicalSolution u = integrate_canonical(SolutionKind::Recessive, fp, hbar,
                                                        {d.wells[0].mid(), barrier.hi - margin});

    double log_peak = -1e300;
    const double reach = std::min(5.0 * std::pow(hbar, 2.0 / 3.0), barrier.lo - d.wells[0].lo - 0.05);
    for (int k = 0; k <= 50; ++k) {
        const double x = barrier.lo - reach * k / 50.0;
        const SolutionPoint p = u.eval(x);
        log_peak = std::max(log_peak, std::log(std::fabs(p.value)) + p.log_scale);
    }
    const SolutionPoint far = u.eval(barrier.hi - margin);
    const double drop = std::log(std::fabs(far.value)) + far.log_scale - log_peak;
    CHECK(drop == doctest::Approx(-kDwOmegaQuarter / hbar).epsilon(0.10));
}

TEST_CASE("ode residual at integration nodes") {
    const PotentialModel m = parse_potential("x^2");
    const EnergyDecomposition d = decompose_energy(m, 1.0, {-4.0, 4.0});
    const double hbar = 0.05;
    auto fp = std::make_shared<const LangerFrame>(frame_at_turning_point(m, d, 1.0, +1));
    OdeOptions opt;
    opt.rel_tol = 1e-13;
    const SemiclassicalSolution u =
        integrate_canonical(SolutionKind::Recessive, fp, hbar, {-0.9, 1.0}, opt);
    const OdeResult* run = u.well_run();
    REQUIRE(run != nullptr);

    const auto& smp = run->samples;
    REQUIRE(smp.size() > 12);
    int checked = 0;
    for (std::size_t c = 5; c + 5 < smp.size(); c += 7) {
        if (smp[c].log_scale != smp[c - 2].log_scale ||
            smp[c].log_scale != smp[c + 2].log_scale)
            continue; // renormalization inside the stencil
        const double x = smp[c].x;
        const double gap = std::fabs(m.value(x) - 1.0);
        // stay outside the Airy neighborhood of the turning points, where
        // the local solution scale collapses
        if (gap < 2.0 * std::pow(hbar, 2.0 / 3.0)) continue;
        double xs[5], w[5];
        for (int j = 0; j < 5; ++j) xs[j] = smp[c - 2 + j].x;
        fornberg_d1(xs, 5, smp[c].x, w);
        double psi_dd = 0.0;
        for (int j = 0; j < 5; ++j) psi_dd += w[j] * smp[c - 2 + j].y[1];
        const double psi = smp[c].y[0];
        const double residual = -hbar * hbar * psi_dd + (m.value(x) - 1.0) * psi;
        // solution scale: |psi| away from its nodes, hbar |psi'|/sqrt(gap) near them
        const double scale = std::max(std::fabs(psi), hbar * std::fabs(smp[c].y[1]) / std::sqrt(gap));
        const double tol = 1e-8 * (hbar * hbar + gap) * scale;
        CHECK(std::fabs(residual) <= tol);
        ++checked;
    }
    CHECK(checked >= 20);
}

TEST_CASE("simplified forms approach the integrated solution as hbar shrinks") {
    const PotentialModel m = parse_potential("x^2");
    const EnergyDecomposition d = decompose_energy(m, 1.0, {-4.0, 4.0});
    auto fp = std::make_shared<const LangerFrame>(frame_at_turning_point(m, d, 1.0, +1));

    auto deviation = [&](double hbar) {
        const SemiclassicalSolution u =
            integrate_canonical(SolutionKind::Recessive, fp, hbar, {-0.9, 1.0});
        double dev = 0.0;
        for (int k = 0; k < 12; ++k) {
            const double x = 1.0 - std::sqrt(hbar) * (0.8 + 0.4 * k / 11.0);
            const double p = 1.0 - x * x;
            const double phi_plus = kPi / 4 - (x * std::sqrt(p) / 2.0 + std::asin(x) / 2.0);
            const double simplified = std::pow(p, -0.25) * std::sin(phi_plus / hbar + kPi / 4);
            const SolutionPoint got = u.eval(x);
            dev = std::max(dev, std::fabs(got.value * std::exp(got.log_scale) - simplified) *
                                    std::pow(p, 0.25));
        }
        return dev;
    };

    // remainder ~ hbar |x - x0|^{-3/2} = hbar^{1/4} at |x - x0| = sqrt(hbar);
    // the measured deviation must stay under that envelope with a modest
    // constant for every hbar in the sweep
    for (double hbar : {0.1, 0.05, 0.025}) {
        const double dev = deviation(hbar);
        CHECK(dev <= 0.5 * std::pow(hbar, 0.25));
        CHECK(dev > 0.0);
    }
}
