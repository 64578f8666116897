#include "semispec/tunneling.hpp"

#include <cmath>

#include "semispec/oracle.hpp"

namespace semispec {

namespace {

constexpr double kQuarterPi = 0.78539816339744830962;

struct WkbPoint {
    std::complex<double> value, deriv;
};

// Outgoing WKB wave (lambda - v)^{-1/4} exp(i S/hbar + i pi/4) with the
// amplitude-derivative term kept in the derivative.
WkbPoint wkb_wave(const PotentialModel& model, double lambda, double hbar, double action,
                  double x) {
    const Jet2 v = model(x);
    const double p = lambda - v.v;
    if (p <= 0.0) throw Error("wkb_wave: anchor in classically forbidden region");
    const double amp = std::pow(p, -0.25);
    const double phase = action / hbar + kQuarterPi;
    const std::complex<double> e{std::cos(phase), std::sin(phase)};
    WkbPoint w;
    w.value = amp * e;
    // d/dx [p^{-1/4}] = (v'/4) p^{-5/4}
    const std::complex<double> damp{0.25 * v.d1 * std::pow(p, -1.25),
                                    std::sqrt(p) / hbar * amp};
    w.deriv = damp * e;
    return w;
}

std::complex<double> cross_wronskian(const WkbPoint& a, const WkbPoint& b) {
    return a.deriv * b.value - a.value * b.deriv;
}

struct BarrierGeometry {
    EnergyDecomposition d;
    Interval barrier;
};

BarrierGeometry single_barrier(const PotentialModel& model, Interval domain, double lambda) {
    BarrierGeometry g;
    g.d = decompose_energy(model, lambda, domain);
    if (g.d.barriers.size() != 1)
        throw TopologyError("tunneling: exactly one finite barrier required at this energy");
    g.barrier = g.d.barriers[0];
    return g;
}

double action_midpoint(const PotentialModel& model, double lambda, Interval iv, bool allowed,
                       const QuadratureOptions& quad) {
    auto f = [&](double y) {
        const double g = model.value(y) - lambda;
        const double p = allowed ? -g : g;
        return p > 0.0 ? std::sqrt(p) : 0.0;
    };
    const double total = tanh_sinh(f, iv.lo, iv.hi, quad);
    double lo = iv.lo, hi = iv.hi;
    for (int it = 0; it < 48; ++it) {
        const double m = 0.5 * (lo + hi);
        if (tanh_sinh(f, iv.lo, m, quad) < 0.5 * total)
            lo = m;
        else
            hi = m;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TunnelingReport compute_rt(const PotentialModel& model, Interval domain, double lambda, double hbar,
                           double left_anchor, double right_anchor,
                           const QuadratureOptions& quad) {
    const BarrierGeometry g = single_barrier(model, domain, lambda);
    const double b1 = g.barrier.lo, b2 = g.barrier.hi;
    const Interval left_well = g.d.wells.front();
    const Interval right_well = g.d.wells.back();
    // nominal clearance 3 hbar^{2/3}, capped so narrow wells stay usable
    const double cl_left = std::min(3.0 * std::pow(hbar, 2.0 / 3.0), 0.25 * left_well.width());
    const double cl_right = std::min(3.0 * std::pow(hbar, 2.0 / 3.0), 0.25 * right_well.width());
    if (left_anchor - left_well.lo < cl_left || b1 - left_anchor < cl_left)
        throw Error("compute_rt: left anchor too close to a turning point");
    if (right_anchor - b2 < cl_right || right_well.hi - right_anchor < cl_right)
        throw Error("compute_rt: right anchor too close to a turning point");

    TunnelingReport rep;
    rep.hbar = hbar;
    rep.omega = barrier_omega(model, g.barrier, lambda, quad);

    // outgoing data on the right, integrated (as 4 real components) to the left
    const double s_right = partial_action(model, lambda, b2, right_anchor, quad);
    const WkbPoint f2r = wkb_wave(model, lambda, hbar, s_right, right_anchor);
    const std::vector<double> init{f2r.value.real(), f2r.value.imag(), f2r.deriv.real(),
                                   f2r.deriv.imag()};
    OdeOptions opt;
    opt.renorm_threshold = 1e100;
    const OdeResult run = integrate_ivp(model, lambda, hbar, right_anchor, init, left_anchor, opt);

    // drift of {f2, conj f2} = 2i (Re psi Im psi' - Im psi Re psi') along the
    // run, measured against the local product scale (inside the barrier the
    // wronskian is an exponentially small difference of huge products)
    const double w0 = 1.0 / hbar;
    double drift = 0.0;
    for (const OdeSample& s : run.samples) {
        const double e2 = std::exp(2.0 * s.log_scale);
        const double w = (s.y[0] * s.y[3] - s.y[1] * s.y[2]) * e2;
        const double scale = (std::fabs(s.y[0] * s.y[3]) + std::fabs(s.y[1] * s.y[2])) * e2 + w0;
        drift = std::max(drift, std::fabs(w - w0) / scale);
    }
    rep.wronskian_drift = drift;

    const OdeSample& endp = run.samples.back();
    const std::complex<double> f2v{endp.y[0], endp.y[1]};
    const std::complex<double> f2d{endp.y[2], endp.y[3]};
    const double ls = endp.log_scale;

    // decompose in the (f1, conj f1) WKB basis at the left anchor
    const double s_left = -partial_action(model, lambda, b1, left_anchor, quad); // negative side
    const WkbPoint f1 = wkb_wave(model, lambda, hbar, s_left, left_anchor);
    const WkbPoint f1c{std::conj(f1.value), std::conj(f1.deriv)};
    const WkbPoint f2{f2v, f2d}; // scaled by e^{ls}

    const std::complex<double> w11 = cross_wronskian(f1, f1c); // 2i/hbar exactly
    const std::complex<double> a_scaled = cross_wronskian(f2, f1c) / w11;
    const std::complex<double> b_scaled = cross_wronskian(f1, f2) / w11;

    rep.reflection = b_scaled / a_scaled; // scale cancels
    const double la = std::log(std::abs(a_scaled)) + ls;
    rep.log_abs_transmission = -la;
    const std::complex<double> a_unit = a_scaled / std::abs(a_scaled);
    rep.transmission = std::exp(-la) / a_unit;
    rep.flux_defect = std::norm(rep.reflection) + std::exp(2.0 * rep.log_abs_transmission) - 1.0;
    return rep;
}

TunnelingReport compute_rt(const PotentialModel& model, Interval domain, double lambda, double hbar,
                           const QuadratureOptions& quad) {
    const BarrierGeometry g = single_barrier(model, domain, lambda);
    const double xl = action_midpoint(model, lambda, g.d.wells.front(), true, quad);
    const double xr = action_midpoint(model, lambda, g.d.wells.back(), true, quad);
    return compute_rt(model, domain, lambda, hbar, xl, xr, quad);
}

WronskianSuite wronskian_suite(const PotentialModel& model, Interval domain, double lambda,
                               double hbar, const QuadratureOptions& quad) {
    const BarrierGeometry g = single_barrier(model, domain, lambda);
    const double b1 = g.barrier.lo, b2 = g.barrier.hi;

    WronskianSuite s;
    s.hbar = hbar;
    s.omega = barrier_omega(model, g.barrier, lambda, quad);
    s.cross_log_bound = std::log(1.0 / hbar) - 0.8 * s.omega / hbar;

    auto fp = std::make_shared<const LangerFrame>(frame_at_turning_point(model, g.d, b1, +1));
    auto fm = std::make_shared<const LangerFrame>(frame_at_turning_point(model, g.d, b2, -1));

    const double margin = 0.25 * std::pow(hbar, 2.0 / 3.0);
    const double xm = action_midpoint(model, lambda, g.barrier, false, quad);

    const SemiclassicalSolution w_plus =
        integrate_canonical(SolutionKind::Dominant, fp, hbar, {b1 + 1e-9, b2 - margin * 0.5});
    const SemiclassicalSolution w_minus =
        integrate_canonical(SolutionKind::Dominant, fm, hbar, {b1 + margin * 0.5, b2 - 1e-9});

    // recessive values in the barrier come from the scaled Airy form
    auto u_plus_at = [&](double x) { return evaluate_langer(SolutionKind::Recessive, *fp, hbar, x); };
    auto u_minus_at = [&](double x) { return evaluate_langer(SolutionKind::Recessive, *fm, hbar, x); };
    auto wron = [](const SolutionPoint& a, const SolutionPoint& b) {
        ScaledValue w;
        w.mantissa = a.deriv * b.value - a.value * b.deriv;
        w.log_scale = a.log_scale + b.log_scale;
        return w;
    };

    s.uu = wron(u_plus_at(xm), u_minus_at(xm));
    s.ww = wronskian(w_plus, w_minus, xm);
    s.cross_uw = wron(u_plus_at(b2 - margin), w_minus.eval(b2 - margin));
    s.cross_wu = wron(u_minus_at(b1 + margin), w_plus.eval(b1 + margin));

    // sign-aware ratios against the leading asymptotics
    s.uu_ratio = -2.0 * hbar * s.uu.mantissa * std::exp(s.uu.log_scale + s.omega / hbar);
    s.ww_ratio = 0.5 * hbar * s.ww.mantissa * std::exp(s.ww.log_scale - s.omega / hbar);

    const ScaledValue uw_p = wron(u_plus_at(xm), w_plus.eval(xm));
    const ScaledValue uw_m = wron(u_minus_at(xm), w_minus.eval(xm));
    s.uw_plus = hbar * uw_p.mantissa * std::exp(uw_p.log_scale);
    s.uw_minus = hbar * uw_m.mantissa * std::exp(uw_m.log_scale);
    return s;
}

} // namespace semispec
