#pragma once

#include <cmath>

namespace semispec {

// Second-order forward-mode dual number: carries f, f', f'' through
// arithmetic exactly (up to round-off).
struct Jet2 {
    double v = 0.0;   // value
    double d1 = 0.0;  // first derivative
    double d2 = 0.0;  // second derivative

    constexpr Jet2() = default;
    constexpr Jet2(double value) : v(value) {}
    constexpr Jet2(double value, double dv, double ddv) : v(value), d1(dv), d2(ddv) {}

    static constexpr Jet2 variable(double x) { return {x, 1.0, 0.0}; }
};

constexpr Jet2 operator+(Jet2 a, Jet2 b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
constexpr Jet2 operator-(Jet2 a, Jet2 b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
constexpr Jet2 operator-(Jet2 a) { return {-a.v, -a.d1, -a.d2}; }

constexpr Jet2 operator*(Jet2 a, Jet2 b) {
    return {a.v * b.v,
            a.d1 * b.v + a.v * b.d1,
            a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}

constexpr Jet2 operator/(Jet2 a, Jet2 b) {
    const double w = a.v / b.v;
    const double w1 = (a.d1 - w * b.d1) / b.v;
    const double w2 = (a.d2 - 2.0 * w1 * b.d1 - w * b.d2) / b.v;
    return {w, w1, w2};
}

// Integer power by repeated squaring; exponent must be >= 0.
constexpr Jet2 ipow(Jet2 base, unsigned n) {
    Jet2 acc{1.0};
    while (n != 0) {
        if (n & 1u) acc = acc * base;
        base = base * base;
        n >>= 1u;
    }
    return acc;
}

inline Jet2 exp(Jet2 a) {
    const double e = std::exp(a.v);
    return {e, e * a.d1, e * (a.d2 + a.d1 * a.d1)};
}

inline Jet2 sin(Jet2 a) {
    const double s = std::sin(a.v), c = std::cos(a.v);
    return {s, c * a.d1, c * a.d2 - s * a.d1 * a.d1};
}

inline Jet2 cos(Jet2 a) {
    const double s = std::sin(a.v), c = std::cos(a.v);
    return {c, -s * a.d1, -s * a.d2 - c * a.d1 * a.d1};
}

inline Jet2 sinh(Jet2 a) {
    const double s = std::sinh(a.v), c = std::cosh(a.v);
    return {s, c * a.d1, c * a.d2 + s * a.d1 * a.d1};
}

inline Jet2 cosh(Jet2 a) {
    const double s = std::sinh(a.v), c = std::cosh(a.v);
    return {c, s * a.d1, s * a.d2 + c * a.d1 * a.d1};
}

} // namespace semispec
