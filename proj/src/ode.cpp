#include "semispec/ode.hpp"

#include <algorithm>
#include <cmath>

namespace semispec {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

using Vec = std::array<double, 4>;

double inf_norm(const Vec& v, int dim) {
    double m = 0.0;
    for (int i = 0; i < dim; ++i) m = std::max(m, std::fabs(v[i]));
    return m;
}

} // namespace

double OdeResult::final_log_magnitude() const {
    const OdeSample& s = samples.back();
    double m = 0.0;
    for (int i = 0; i < dim; ++i) m = std::max(m, std::fabs(s.y[i]));
    return std::log(m) + s.log_scale;
}

void OdeResult::eval(double x, int component, double* value, double* deriv,
                     double* log_scale) const {
    const bool fwd = samples.back().x >= samples.front().x;
    auto cmp = [fwd](const OdeSample& s, double xx) { return fwd ? s.x < xx : s.x > xx; };
    auto it = std::lower_bound(samples.begin(), samples.end(), x, cmp);
    if (it == samples.begin()) ++it;
    if (it == samples.end()) --it;
    const OdeSample& s1 = *(it - 1);
    const OdeSample& s2 = *it;

    // samples may sit in different renormalization frames
    const double shift = s1.log_scale - s2.log_scale; // multiply s1 data by e^{shift}... see below
    const double h = s2.x - s1.x;
    const double u = (x - s1.x) / h;
    // work in s2's frame: rescale s1 by e^{shift}
    const double f = std::exp(shift);
    const double y1 = s1.y[component] * f, d1 = s1.dy[component] * f;
    const double y2 = s2.y[component], d2 = s2.dy[component];
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
    const double h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u);
    const double h11 = u * u * (u - 1);
    if (value) *value = h00 * y1 + h10 * h * d1 + h01 * y2 + h11 * h * d2;
    if (deriv) {
        const double g00 = 6 * u * (u - 1) / h;
        const double g10 = (1 - 4 * u + 3 * u * u);
        const double g01 = -6 * u * (u - 1) / h;
        const double g11 = u * (3 * u - 2);
        *deriv = g00 * y1 + g10 * d1 + g01 * y2 + g11 * d2;
    }
    if (log_scale) *log_scale = s2.log_scale;
}

OdeResult integrate_ode(const OdeRhs& f, int dim, const double* y0, double x0, double x1,
                        const OdeOptions& opt) {
    OdeResult out;
    out.dim = dim;
    if (x0 == x1) throw IntegrationError("integrate_ode: empty interval");
    const double dir = x1 > x0 ? 1.0 : -1.0;
    const double span = std::fabs(x1 - x0);

    Vec y{}, k1{}, k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, yt{}, yn{}, err{};
    for (int i = 0; i < dim; ++i) y[i] = y0[i];
    double x = x0;
    double log_scale = 0.0;

    f(x, y.data(), k1.data());
    double h = opt.initial_step > 0.0 ? opt.initial_step * dir : dir * span * 1e-4;

    out.samples.push_back({x, y, k1, log_scale});

    int steps = 0;
    // stop once the remaining distance is below resolvable resolution
    while (dir * (x1 - x) > span * 1e-14) {
        if (++steps > opt.max_steps) throw IntegrationError("integrate_ode: step limit exceeded");
        if (dir * (x + h - x1) > 0.0) h = x1 - x;
        if (std::fabs(h) < span * 1e-15)
            throw IntegrationError("integrate_ode: step size underflow");

        auto stage = [&](Vec& k, double c1, double c2, double c3, double c4, double c5,
                         double frac) {
            for (int i = 0; i < dim; ++i)
                yt[i] = y[i] + h * (c1 * k1[i] + c2 * k2[i] + c3 * k3[i] + c4 * k4[i] + c5 * k5[i]);
            f(x + frac * h, yt.data(), k.data());
        };
        stage(k2, a21, 0, 0, 0, 0, 0.2);
        stage(k3, a31, a32, 0, 0, 0, 0.3);
        stage(k4, a41, a42, a43, 0, 0, 0.8);
        stage(k5, a51, a52, a53, a54, 0, 8.0 / 9.0);
        stage(k6, a61, a62, a63, a64, a65, 1.0);
        for (int i = 0; i < dim; ++i)
            yn[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        f(x + h, yn.data(), k7.data());
        for (int i = 0; i < dim; ++i)
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                          e7 * k7[i]);

        double norm = 0.0;
        for (int i = 0; i < dim; ++i) {
            const double sc = opt.rel_tol * std::max({std::fabs(y[i]), std::fabs(yn[i]), 1e-30});
            norm = std::max(norm, std::fabs(err[i]) / sc);
        }

        if (norm <= 1.0) {
            x += h;
            y = yn;
            k1 = k7; // FSAL
            // renormalization is only valid for linear systems (every use here)
            const double mag = inf_norm(y, dim);
            if (mag > opt.renorm_threshold) {
                const double lf = std::log(mag);
                for (int i = 0; i < dim; ++i) y[i] /= mag;
                for (int i = 0; i < dim; ++i) k1[i] /= mag;
                log_scale += lf;
                out.renorms.emplace_back(x, lf);
                out.total_log_scale += lf;
            }
            out.samples.push_back({x, y, k1, log_scale});
        }
        const double fac = norm > 0.0 ? 0.9 * std::pow(norm, -0.2) : 5.0;
        h *= std::clamp(fac, 0.2, 5.0);
    }
    return out;
}

} // namespace semispec
