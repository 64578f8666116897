#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "semispec/tunneling.hpp"

using namespace semispec;

namespace {
const Interval kDom{-2.2, 2.2};
constexpr double kLambda = 0.25;
constexpr double kDwOmegaQuarter = 0.9199578258338009504765;
}

TEST_CASE("transmission and reflection across the double-well barrier") {
    const PotentialModel m = builtin_potential("double_well");
    for (double hbar : {0.05, 0.04}) {
        const TunnelingReport r = compute_rt(m, kDom, kLambda, hbar);
        CHECK(r.omega == doctest::Approx(kDwOmegaQuarter).epsilon(1e-9));
        // |T| e^{Omega/hbar} = 1 + O(hbar)
        const double t_ratio = std::exp(r.log_abs_transmission + r.omega / hbar);
        CHECK(t_ratio >= 1.0 - 5.0 * hbar);
        CHECK(t_ratio <= 1.0 + 5.0 * hbar);
        CHECK(std::fabs(std::abs(r.reflection) - 1.0) <= 5.0 * hbar);
        CHECK(std::fabs(r.flux_defect) <= 1e-6);
        CHECK(r.wronskian_drift <= 1e-8);
    }
}

TEST_CASE("moduli are anchor independent") {
    // wide wells so a full oscillation wavelength fits between the anchor
    // and both turning points; the residual anchor dependence of the moduli
    // is then below 1e-4
    const PotentialModel m = parse_potential("exp(-(x^2))+0.001*x^2");
    const Interval dom{-25.0, 25.0};
    const double lam = 0.5;
    for (double hbar : {0.04, 0.02}) {
        const double xl = -1.8, xr = 1.8;
        auto period_out = [&](double anchor, int dir) {
            double lo = 0.3, hi = 3.0;
            for (int i = 0; i < 50; ++i) {
                const double mid = 0.5 * (lo + hi);
                const double s = dir > 0 ? partial_action(m, lam, anchor, anchor + mid)
                                         : partial_action(m, lam, anchor - mid, anchor);
                if (s < 2.0 * 3.14159265358979324 * hbar)
                    lo = mid;
                else
                    hi = mid;
            }
            return 0.5 * (lo + hi);
        };
        const TunnelingReport a = compute_rt(m, dom, lam, hbar, xl, xr);
        const TunnelingReport b = compute_rt(m, dom, lam, hbar, xl - period_out(xl, -1),
                                             xr + period_out(xr, +1));
        CHECK(std::fabs(std::abs(b.reflection) / std::abs(a.reflection) - 1.0) <= 1e-4);
        CHECK(std::fabs(b.log_abs_transmission - a.log_abs_transmission) <= 1e-4);
    }
}

TEST_CASE("ln|T| against 1/hbar has slope -Omega") {
    const PotentialModel m = builtin_potential("double_well");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (double hbar : {0.1, 0.07, 0.05, 0.04}) {
        const TunnelingReport r = compute_rt(m, kDom, kLambda, hbar);
        const double x = 1.0 / hbar, y = r.log_abs_transmission;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(-slope == doctest::Approx(kDwOmegaQuarter).epsilon(0.05));
}

TEST_CASE("deep barrier: Omega/hbar = 50 stays finite") {
    const PotentialModel m = builtin_potential("double_well");
    const double hbar = kDwOmegaQuarter / 50.0;
    const TunnelingReport r = compute_rt(m, kDom, kLambda, hbar);
    CHECK(std::isfinite(r.log_abs_transmission));
    CHECK(r.log_abs_transmission == doctest::Approx(-50.0).epsilon(0.02));
    CHECK(std::fabs(r.flux_defect) <= 1e-6);
}

TEST_CASE("anchor and topology validation") {
    const PotentialModel m = builtin_potential("double_well");
    // anchor inside the barrier
    CHECK_THROWS(compute_rt(m, kDom, kLambda, 0.05, 0.0, 1.0));
    // above the barrier top there is no single-barrier problem
    CHECK_THROWS_AS(compute_rt(m, kDom, 1.5, 0.05), TopologyError);
}

TEST_CASE("barrier wronskians match the leading asymptotics") {
    const PotentialModel m = builtin_potential("double_well");
    for (double hbar : {0.05, 0.04}) {
        const WronskianSuite s = wronskian_suite(m, kDom, kLambda, hbar);
        CHECK(s.omega == doctest::Approx(kDwOmegaQuarter).epsilon(1e-9));
        CHECK(s.uu_ratio >= 1.0 - 5.0 * hbar);
        CHECK(s.uu_ratio <= 1.0 + 5.0 * hbar);
        CHECK(s.ww_ratio >= 1.0 - 5.0 * hbar);
        CHECK(s.ww_ratio <= 1.0 + 5.0 * hbar);
        CHECK(std::fabs(s.uw_plus + 1.0) <= 5.0 * hbar);
        CHECK(std::fabs(s.uw_minus - 1.0) <= 5.0 * hbar);
        CHECK(s.cross_uw.log_abs() <= s.cross_log_bound);
        CHECK(s.cross_wu.log_abs() <= s.cross_log_bound);
    }
}
