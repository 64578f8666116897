#include "semispec/airy.hpp"

#include <cmath>

namespace semispec {

namespace {

// --- double-double helpers -------------------------------------------------
// The Maclaurin series suffers heavy cancellation near the switch radius
// (terms reach ~2e5 while the sum is O(1) at t = -8), so partial sums and
// term recurrences run in double-double.

struct DD {
    double hi = 0.0, lo = 0.0;
};

DD dd_from(double x) { return {x, 0.0}; }

DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

DD dd_add(DD a, DD b) {
    DD s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    DD r = two_sum(s.hi, s.lo);
    return r;
}

DD two_prod(double a, double b) {
    double p = a * b;
    double err = std::fma(a, b, -p);
    return {p, err};
}

DD dd_mul(DD a, DD b) {
    DD p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return two_sum(p.hi, p.lo);
}

DD dd_mul_d(DD a, double b) {
    DD p = two_prod(a.hi, b);
    p.lo += a.lo * b;
    return two_sum(p.hi, p.lo);
}

DD dd_div_d(DD a, double b) {
    double q1 = a.hi / b;
    DD t = two_prod(q1, b);
    double q2 = ((a.hi - t.hi) - t.lo + a.lo) / b;
    return two_sum(q1, q2);
}

// --- Maclaurin region ------------------------------------------------------
// Ai(t) = c1 f(t) + c2 g(t), Bi(t) = sqrt(3) (c1 f(t) - c2 g(t)), where
// c1 = Ai(0), c2 = Ai'(0) and f, g are the standard auxiliary series.

constexpr double kAi0 = 0.35502805388781723926;   // 3^{-2/3} / Gamma(2/3)
constexpr double kAip0 = -0.25881940379280679840; // -3^{-1/3} / Gamma(1/3)
constexpr double kSqrt3 = 1.7320508075688772935;
constexpr double kSeriesRadius = 8.0;

// f, f', g, g' at t, summed in double-double.
void maclaurin_fg(double t, double& f, double& fp, double& g, double& gp) {
    const DD z3 = dd_mul_d(dd_mul(two_prod(t, t), dd_from(t)), 1.0);

    DD sf = dd_from(1.0), tf = dd_from(1.0);
    DD sg = dd_from(t), tg = dd_from(t);
    DD sfp = dd_from(0.0), tfp = dd_from(0.0);
    DD sgp = dd_from(1.0), tgp = dd_from(1.0);

    // f'(t) = sum_{k>=1} with leading term t^2/2
    tfp = dd_div_d(dd_mul(two_prod(t, t), dd_from(1.0)), 2.0);
    sfp = tfp;

    for (int k = 0; k < 200; ++k) {
        const double k3 = 3.0 * k;
        tf = dd_div_d(dd_mul(tf, z3), (k3 + 2.0) * (k3 + 3.0));
        tg = dd_div_d(dd_mul(tg, z3), (k3 + 3.0) * (k3 + 4.0));
        // derivative series: tfp currently the (k+1)-th term, tgp the k-th
        tgp = dd_div_d(dd_mul(tgp, z3), (k3 + 1.0) * (k3 + 3.0));
        if (k >= 1) {
            tfp = dd_div_d(dd_mul(tfp, z3), k3 * (k3 + 2.0));
        }
        sf = dd_add(sf, tf);
        sg = dd_add(sg, tg);
        sgp = dd_add(sgp, tgp);
        if (k >= 1) sfp = dd_add(sfp, tfp);

        const double scale = std::fabs(sf.hi) + std::fabs(sg.hi) + 1.0;
        if (std::fabs(tf.hi) < 1e-34 * scale && std::fabs(tg.hi) < 1e-34 * scale) break;
    }
    f = sf.hi + sf.lo;
    fp = sfp.hi + sfp.lo;
    g = sg.hi + sg.lo;
    gp = sgp.hi + sgp.lo;
}

AiryValues airy_series(double t) {
    double f, fp, g, gp;
    maclaurin_fg(t, f, fp, g, gp);
    AiryValues r;
    r.ai = kAi0 * f + kAip0 * g;
    r.ai_prime = kAi0 * fp + kAip0 * gp;
    r.bi = kSqrt3 * (kAi0 * f - kAip0 * g);
    r.bi_prime = kSqrt3 * (kAi0 * fp - kAip0 * gp);
    return r;
}

// --- asymptotic region -----------------------------------------------------
// u_k, v_k coefficient pairs; the expansions are summed to their smallest
// term (they start diverging near k ~ 2*zeta, which is ~30 at |t| = 8).

constexpr int kMaxAsym = 40;

struct AsymSums {
    double su_alt, sv_alt;  // sum (-1)^k u_k / zeta^k, same with v_k
    double su, sv;          // sum u_k / zeta^k, same with v_k
    double su_even, su_odd; // even/odd-k partial sums of (-1)^j u_{2j}(+1)
    double sv_even, sv_odd;
};

AsymSums asym_sums(double zeta) {
    AsymSums s{1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 1.0, 0.0};
    double u = 1.0;
    double zk = 1.0;
    double prev = 1.0;
    for (int k = 1; k < kMaxAsym; ++k) {
        const double kk = k;
        u *= (6.0 * kk - 5.0) * (6.0 * kk - 3.0) * (6.0 * kk - 1.0) / ((2.0 * kk - 1.0) * 216.0 * kk);
        const double v = u * (6.0 * kk + 1.0) / (1.0 - 6.0 * kk);
        zk /= zeta;
        const double tu = u * zk;
        if (std::fabs(tu) > prev) break; // past the optimal truncation point
        prev = std::fabs(tu);
        const double tv = v * zk;
        const double sign = (k & 1) ? -1.0 : 1.0;
        s.su_alt += sign * tu;
        s.sv_alt += sign * tv;
        s.su += tu;
        s.sv += tv;
        // oscillatory splitting: j-th term of the cos series is (-1)^j u_{2j},
        // of the sin series (-1)^j u_{2j+1}
        const double osign = ((k / 2) & 1) ? -1.0 : 1.0;
        if ((k & 1) == 0) {
            s.su_even += osign * tu;
            s.sv_even += osign * tv;
        } else {
            s.su_odd += osign * tu;
            s.sv_odd += osign * tv;
        }
        if (std::fabs(tu) < 1e-18 && std::fabs(tv) < 1e-18) break;
    }
    return s;
}

constexpr double kSqrtPi = 1.7724538509055160273;

// t >= radius. Returns scaled values (Ai side carries e^{+zeta}, Bi side
// e^{-zeta}) plus zeta; the caller applies exponentials where wanted.
ScaledAiryValues asym_positive_scaled(double t) {
    const double sq = std::sqrt(t);
    const double zeta = 2.0 / 3.0 * t * sq;
    const AsymSums s = asym_sums(zeta);
    const double t14 = std::sqrt(sq); // t^{1/4}
    ScaledAiryValues r;
    r.zeta = zeta;
    r.ai = 0.5 / (kSqrtPi * t14) * s.su_alt;
    r.ai_prime = -0.5 * t14 / kSqrtPi * s.sv_alt;
    r.bi = 1.0 / (kSqrtPi * t14) * s.su;
    r.bi_prime = t14 / kSqrtPi * s.sv;
    return r;
}

// t <= -radius; modulus-phase forms.
AiryValues asym_negative(double t) {
    const double x = -t;
    const double sq = std::sqrt(x);
    const double zeta = 2.0 / 3.0 * x * sq;
    const AsymSums s = asym_sums(zeta);
    const double t14 = std::sqrt(sq);
    const double c = std::cos(zeta - 0.78539816339744830962);
    const double sn = std::sin(zeta - 0.78539816339744830962);
    AiryValues r;
    r.ai = (c * s.su_even + sn * s.su_odd) / (kSqrtPi * t14);
    r.bi = (-sn * s.su_even + c * s.su_odd) / (kSqrtPi * t14);
    r.ai_prime = t14 / kSqrtPi * (sn * s.sv_even - c * s.sv_odd);
    r.bi_prime = t14 / kSqrtPi * (c * s.sv_even + sn * s.sv_odd);
    return r;
}

// Ai on (2, 8): the Maclaurin form cancels catastrophically there (c1 f and
// c2 g agree to ~12 digits) and the asymptotic series is not yet accurate.
// March Taylor steps of theta'' = t theta downward from t0 = 9, where the
// asymptotic seed is good to ~e^{-2 zeta(9)}; decreasing t is the stable
// direction for the recessive solution.
void airy_ai_march(double t, double& ai, double& aip) {
    double t0 = 9.0;
    {
        const ScaledAiryValues s = asym_positive_scaled(t0);
        const double em = std::exp(-s.zeta);
        ai = s.ai * em;
        aip = s.ai_prime * em;
    }
    while (t0 > t) {
        const double h = std::max(t - t0, -0.5);
        double c[34];
        c[0] = ai;
        c[1] = aip;
        for (int k = 0; k + 2 < 34; ++k)
            c[k + 2] = (t0 * c[k] + (k >= 1 ? c[k - 1] : 0.0)) / ((k + 2.0) * (k + 1.0));
        double v = 0.0, d = 0.0;
        for (int k = 33; k >= 1; --k) {
            v = v * h + c[k];
            d = d * h + k * c[k];
        }
        v = v * h + c[0];
        ai = v;
        aip = d;
        t0 += h;
    }
}

// log Bi(t) for the overflow signal, leading order with first correction.
double log_bi_approx(double t, bool prime) {
    const double sq = std::sqrt(t);
    const double zeta = 2.0 / 3.0 * t * sq;
    const double amp = prime ? std::log(std::sqrt(sq) / kSqrtPi) : -std::log(kSqrtPi * std::sqrt(sq));
    return zeta + amp;
}

constexpr double kOverflowT = 104.0; // 2 t^{3/2} / 3 ~ 707 there

} // namespace

constexpr double kAiMarchLow = 2.0;

AiryValues airy(double t) {
    if (!std::isfinite(t)) throw EvalDomainError("airy: non-finite argument");
    if (t > kOverflowT)
        throw AiryOverflowError(log_bi_approx(t, false), log_bi_approx(t, true));
    if (t >= kSeriesRadius) {
        ScaledAiryValues s = asym_positive_scaled(t);
        const double em = std::exp(-s.zeta), ep = std::exp(s.zeta);
        return {s.ai * em, s.ai_prime * em, s.bi * ep, s.bi_prime * ep};
    }
    if (t <= -kSeriesRadius) return asym_negative(t);
    AiryValues v = airy_series(t);
    if (t > kAiMarchLow) airy_ai_march(t, v.ai, v.ai_prime);
    return v;
}

ScaledAiryValues airy_log_scaled(double t) {
    if (!(t >= 0.0)) throw EvalDomainError("airy_log_scaled: argument must be >= 0");
    if (t >= kSeriesRadius) return asym_positive_scaled(t);
    const AiryValues v = airy(t);
    const double zeta = 2.0 / 3.0 * t * std::sqrt(t);
    ScaledAiryValues r;
    r.zeta = zeta;
    const double ep = std::exp(zeta), em = std::exp(-zeta);
    r.ai = v.ai * ep;
    r.ai_prime = v.ai_prime * ep;
    r.bi = v.bi * em;
    r.bi_prime = v.bi_prime * em;
    return r;
}

} // namespace semispec
