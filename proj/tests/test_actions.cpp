#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "semispec/actions.hpp"

using namespace semispec;

namespace {
constexpr double kPi = 3.14159265358979323846;

// frozen oracle values (30-digit quadrature/Gamma evaluation)
constexpr double kQuarticPhi1 = 1.748038369528079873643;    // Gamma(1/4)Gamma(3/2)/(2 Gamma(7/4))
constexpr double kQuarticPhiDot1 = 1.311028777146059896352; // (3/4) * Phi(1)
constexpr double kDwOmegaQuarter = 0.9199578258338009504765;

// endpoint-substituted composite Simpson oracle for int_a^b sqrt(g): the
// substitutions x = a + u^2 and x = b - u^2 remove the sqrt singularities
template <typename F>
double simpson(F f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

double sqrt_integral_oracle(const PotentialModel& m, double lo, double hi, double lambda,
                            bool barrier) {
    auto g = [&](double x) {
        const double p = barrier ? m.value(x) - lambda : lambda - m.value(x);
        return p > 0.0 ? std::sqrt(p) : 0.0;
    };
    const double mid = 0.5 * (lo + hi);
    auto left = [&](double u) { return 2.0 * u * g(lo + u * u); };
    auto right = [&](double u) { return 2.0 * u * g(hi - u * u); };
    return simpson(left, 0.0, std::sqrt(mid - lo), 20000) +
           simpson(right, 0.0, std::sqrt(hi - mid), 20000);
}

} // namespace

TEST_CASE("harmonic actions in closed form") {
    const PotentialModel m = parse_potential("x^2");
    CHECK(action_phi(m, {-1.0, 1.0}, 1.0) == doctest::Approx(kPi / 2).epsilon(1e-9));
    for (double lam : {0.5, 2.0}) {
        const double r = std::sqrt(lam);
        CHECK(action_phi(m, {-r, r}, lam) == doctest::Approx(kPi * lam / 2).epsilon(1e-9));
        CHECK(action_phi_dot(m, {-r, r}, lam) == doctest::Approx(kPi / 2).epsilon(1e-7));
    }
}

TEST_CASE("quartic action against the Gamma-function value") {
    const PotentialModel m = parse_potential("x^4");
    const double phi = action_phi(m, {-1.0, 1.0}, 1.0);
    CHECK(phi == doctest::Approx(kQuarticPhi1).epsilon(1e-9));
    // independent composite-quadrature oracle route
    CHECK(phi == doctest::Approx(sqrt_integral_oracle(m, -1.0, 1.0, 1.0, false)).epsilon(1e-8));

    const double pd = action_phi_dot(m, {-1.0, 1.0}, 1.0);
    CHECK(pd == doctest::Approx(kQuarticPhiDot1).epsilon(1e-8));
    // central-difference oracle on Phi itself
    const double h = 1e-4;
    auto phi_at = [&](double lam) {
        const double r = std::pow(lam, 0.25);
        return action_phi(m, {-r, r}, lam);
    };
    CHECK(pd == doctest::Approx((phi_at(1.0 + h) - phi_at(1.0 - h)) / (2 * h)).epsilon(1e-6));
}

TEST_CASE("barrier integral of the double well") {
    const PotentialModel m = parse_potential("(x^2-1)^2");
    const double b = std::sqrt(0.5);
    const double om = barrier_omega(m, {-b, b}, 0.25);
    CHECK(om == doctest::Approx(kDwOmegaQuarter).epsilon(1e-9));
    CHECK(om == doctest::Approx(sqrt_integral_oracle(m, -b, b, 0.25, true)).epsilon(1e-8));
    // symmetry: full barrier equals twice the half
    CHECK(om == doctest::Approx(2.0 * barrier_omega(m, {0.0, b}, 0.25)).epsilon(1e-9));
    // Omega decreases toward the barrier top
    double prev = om;
    for (double lam : {0.4, 0.6, 0.8}) {
        const double bb = std::sqrt(1.0 - std::sqrt(lam));
        const double o = barrier_omega(m, {-bb, bb}, lam);
        CHECK(o < prev);
        prev = o;
    }
}

TEST_CASE("partial actions and additivity") {
    const PotentialModel m = parse_potential("x^2");
    CHECK(partial_action(m, 1.0, 1.0, 0.0) == doctest::Approx(kPi / 4).epsilon(1e-9));
    CHECK(partial_action(m, 1.0, 1.0, 1.0) == doctest::Approx(0.0));
    const double plus = partial_action(m, 1.0, 1.0, 0.3);
    const double minus = partial_action(m, 1.0, -1.0, 0.3);
    CHECK(plus + minus == doctest::Approx(kPi / 2).epsilon(1e-9));
    CHECK(plus >= 0.0);
    CHECK(minus >= 0.0);
}

TEST_CASE("inconsistent decomposition is rejected") {
    const PotentialModel m = parse_potential("x^2");
    // interval reaching into the forbidden region at this energy
    CHECK_THROWS_AS(action_phi(m, {-2.0, 2.0}, 1.0), DecompositionError);
}

TEST_CASE("invert_phi round trips") {
    const PotentialModel m = parse_potential("x^2");
    const Interval dom{-4.0, 4.0};
    CHECK(invert_phi(m, dom, 0, kPi / 2, {0.3, 3.0}) == doctest::Approx(1.0).epsilon(1e-10));
    // mu = pi (n + 1/2) hbar with hbar = 0.1, n = 4 -> lambda = 0.9
    CHECK(invert_phi(m, dom, 0, kPi * 4.5 * 0.1, {0.3, 3.0}) == doctest::Approx(0.9).epsilon(1e-10));

    const PotentialModel q = parse_potential("x^4");
    const double mu = action_phi(q, {-1.0, 1.0}, 1.0);
    CHECK(invert_phi(q, {-3.0, 3.0}, 0, mu, {0.3, 2.0}) == doctest::Approx(1.0).epsilon(1e-9));

    CHECK_THROWS(invert_phi(m, dom, 0, 100.0, {0.3, 3.0}));
}

TEST_CASE("derivative consistency on random energies") {
    const PotentialModel m = tilted_double_well(0.1);
    const Interval dom{-2.5, 2.5};
    const double h = 1e-4;
    for (double lam : {0.3, 0.45, 0.62}) {
        const EnergyDecomposition d = decompose_energy(m, lam, dom);
        for (int w = 0; w < d.well_count(); ++w) {
            auto phi_at = [&](double l) {
                const EnergyDecomposition dd = decompose_energy(m, l, dom);
                return action_phi(m, dd.wells[w], l);
            };
            const double fd = (phi_at(lam + h) - phi_at(lam - h)) / (2 * h);
            const double pd = action_phi_dot(m, d.wells[w], lam);
            CHECK(pd == doctest::Approx(fd).epsilon(1e-5));
            CHECK(pd > 0.0);
        }
    }
}
