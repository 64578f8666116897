#pragma once

#include "semispec/errors.hpp"

namespace semispec {

// Ai, Bi and derivatives at one point. Wronskian convention is
// {f,g} = f'g - fg', so ai_prime*bi - ai*bi_prime = -1/pi.
struct AiryValues {
    double ai = 0.0;
    double ai_prime = 0.0;
    double bi = 0.0;
    double bi_prime = 0.0;
};

// Bi(t) exceeds the double range near t ~ 105; airy() then throws this,
// carrying the natural-log magnitudes instead.
struct AiryOverflowError : Error {
    double log_bi;
    double log_bi_prime;
    AiryOverflowError(double lb, double lbp)
        : Error("Bi(t) overflows double range"), log_bi(lb), log_bi_prime(lbp) {}
};

AiryValues airy(double t);

// For t >= 0: Ai-side values carry e^{+zeta}, Bi-side carry e^{-zeta},
// zeta = 2 t^{3/2} / 3. Finite for every representable t.
struct ScaledAiryValues {
    double ai = 0.0;        // Ai(t) * e^{+zeta}
    double ai_prime = 0.0;  // Ai'(t) * e^{+zeta}
    double bi = 0.0;        // Bi(t) * e^{-zeta}
    double bi_prime = 0.0;  // Bi'(t) * e^{-zeta}
    double zeta = 0.0;
};

ScaledAiryValues airy_log_scaled(double t);

} // namespace semispec
