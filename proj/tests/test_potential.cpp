#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "semispec/potential.hpp"

using namespace semispec;

TEST_CASE("parse and evaluate the benchmark forms") {
    const PotentialModel harmonic = parse_potential("x^2");
    const Jet2 h2 = harmonic(2.0);
    CHECK(h2.v == doctest::Approx(4.0));
    CHECK(h2.d1 == doctest::Approx(4.0));
    CHECK(h2.d2 == doctest::Approx(2.0));

    const PotentialModel dw = parse_potential("(x^2-1)^2");
    CHECK(dw.value(0.0) == doctest::Approx(1.0));
    const Jet2 d0 = dw(0.0);
    CHECK(d0.d1 == doctest::Approx(0.0));
    CHECK(d0.d2 == doctest::Approx(-4.0));

    const Jet2 e0 = parse_potential("exp(x)")(0.0);
    CHECK(e0.v == doctest::Approx(1.0));
    CHECK(e0.d1 == doctest::Approx(1.0));
    CHECK(e0.d2 == doctest::Approx(1.0));
}

TEST_CASE("syntax errors carry the byte offset") {
    CHECK_THROWS_AS(parse_potential(""), ParseError);
    try {
        parse_potential("x^");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset == 2);
    }
    CHECK_THROWS_AS(parse_potential("y + 1"), ParseError);
    CHECK_THROWS_AS(parse_potential("x^1.5"), ParseError);
    CHECK_THROWS_AS(parse_potential("x^-2"), ParseError);
    CHECK_THROWS_AS(parse_potential("tan(x)"), ParseError);
    CHECK_THROWS_AS(parse_potential("(x"), ParseError);
    CHECK_THROWS_AS(parse_potential("x 1"), ParseError);
}

TEST_CASE("evaluation domain errors") {
    const PotentialModel inv = parse_potential("1/x");
    CHECK_THROWS_AS(inv(0.0), EvalDomainError);
    const PotentialModel big = parse_potential("exp(exp(x))");
    CHECK_THROWS_AS(big(100.0), EvalDomainError);
}

TEST_CASE("builtins match their parsed forms") {
    CHECK(builtin_potential("harmonic").value(3.0) == doctest::Approx(9.0));
    CHECK(builtin_potential("double_well").value(0.0) == doctest::Approx(1.0));
    CHECK(builtin_potential("quartic").value(2.0) == doctest::Approx(16.0));
    CHECK(tilted_double_well(0.1).value(1.0) == doctest::Approx(0.1));
    CHECK_THROWS_AS(builtin_potential("morse"), ConfigError);
}

namespace {

// random expression tree over the full grammar
std::string random_expression(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 7);
    std::uniform_real_distribution<double> num(0.2, 3.0);
    switch (pick(rng)) {
        case 0: return "x";
        case 1: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3f", num(rng));
            return buf;
        }
        case 2: return "(" + random_expression(rng, depth - 1) + "+" + random_expression(rng, depth - 1) + ")";
        case 3: return "(" + random_expression(rng, depth - 1) + "-" + random_expression(rng, depth - 1) + ")";
        case 4: return "(" + random_expression(rng, depth - 1) + "*" + random_expression(rng, depth - 1) + ")";
        case 5: return "sin(" + random_expression(rng, depth - 1) + ")";
        case 6: return "cos(" + random_expression(rng, depth - 1) + ")";
        default: return "(" + random_expression(rng, depth - 1) + ")^" + std::to_string(1 + pick(rng) % 4);
    }
}

} // namespace

TEST_CASE("jet derivatives agree with central differences on random models") {
    std::mt19937 rng(20240811);
    std::uniform_real_distribution<double> xs(-1.5, 1.5);
    const double step = 1e-5;
    int tested = 0;
    while (tested < 1000) {
        const std::string text = random_expression(rng, 3);
        const PotentialModel m = parse_potential(text);
        const double x = xs(rng);
        Jet2 j, jp, jm;
        try {
            j = m(x);
            jp = m(x + step);
            jm = m(x - step);
        } catch (const EvalDomainError&) {
            continue;
        }
        const double fd1 = (jp.v - jm.v) / (2.0 * step);
        const double fd2 = (jp.v - 2.0 * j.v + jm.v) / (step * step);
        const double scale1 = std::max({1.0, std::fabs(j.d1), std::fabs(j.v)});
        const double scale2 = std::max({1.0, std::fabs(j.d2), std::fabs(j.d1)});
        CHECK(std::fabs(j.d1 - fd1) <= 1e-6 * scale1);
        CHECK(std::fabs(j.d2 - fd2) <= 1e-4 * scale2); // fd2 itself is O(h^2) + cancellation
        ++tested;
    }
}

TEST_CASE("print round-trip is evaluation-identical and idempotent") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> xs(-2.0, 2.0);
    for (int k = 0; k < 40; ++k) {
        const std::string text = random_expression(rng, 3);
        const PotentialModel m = parse_potential(text);
        const std::string printed = m.print();
        const PotentialModel m2 = parse_potential(printed);
        CHECK(m2.print() == printed);
        for (int i = 0; i < 100; ++i) {
            const double x = xs(rng);
            double a, b;
            try {
                a = m.value(x);
                b = m2.value(x);
            } catch (const EvalDomainError&) {
                continue;
            }
            CHECK(std::fabs(a - b) <= 1e-15 * std::max(1.0, std::fabs(a)));
        }
    }
}
