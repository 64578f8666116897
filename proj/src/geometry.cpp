#include "semispec/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace semispec {

namespace {

// Bisection until the bracket is tight, then Newton with the Jet2 slope.
double refine_root(const PotentialModel& model, double lambda, double lo, double hi, double tol) {
    double flo = model.value(lo) - lambda;
    for (int i = 0; i < 20; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = model.value(mid) - lambda;
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 40; ++i) {
        const Jet2 j = model(x);
        const double fx = j.v - lambda;
        if (std::fabs(fx) <= tol) return x;
        if (j.d1 == 0.0) break;
        const double step = fx / j.d1;
        const double xn = x - step;
        if (xn <= lo || xn >= hi) {
            // Newton left the bracket; fall back to bisection
            const double mid = 0.5 * (lo + hi);
            const double fm = model.value(mid) - lambda;
            if ((flo < 0.0) == (fm < 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
            x = 0.5 * (lo + hi);
        } else {
            if (model.value(xn) - lambda < 0.0) {
                if (flo < 0.0)
                    lo = xn;
                else
                    hi = xn;
            } else {
                if (flo < 0.0)
                    hi = xn;
                else
                    lo = xn;
            }
            x = xn;
        }
    }
    return x;
}

} // namespace

std::vector<TurningPoint> find_turning_points(const PotentialModel& model, double lambda,
                                              Interval domain, const TurningPointOptions& opt,
                                              std::vector<std::string>* warnings) {
    if (opt.scan_n < 64) throw ConfigError("find_turning_points: scan_n must be >= 64");
    if (!(domain.lo < domain.hi)) throw ConfigError("find_turning_points: empty domain");
    if (model.value(domain.lo) <= lambda || model.value(domain.hi) <= lambda)
        throw EndpointError("v must exceed lambda at both truncation endpoints");

    const double tol = opt.root_tol * std::max(1.0, std::fabs(lambda));
    const double h = domain.width() / opt.scan_n;

    std::vector<double> roots;
    double xp = domain.lo;
    double fp = model.value(xp) - lambda;
    for (int i = 1; i <= opt.scan_n; ++i) {
        const double xc = (i == opt.scan_n) ? domain.hi : domain.lo + i * h;
        const double fc = model.value(xc) - lambda;
        if (fc == 0.0) {
            roots.push_back(xc); // grid point hit the root exactly
        } else if (fp != 0.0 && (fp < 0.0) != (fc < 0.0)) {
            roots.push_back(refine_root(model, lambda, xp, xc, tol));
        }
        xp = xc;
        fp = fc;
    }

    std::sort(roots.begin(), roots.end());
    for (std::size_t i = 1; i < roots.size(); ++i) {
        if (roots[i] - roots[i - 1] < 1e-10)
            throw CriticalEnergyError("two turning points merged; energy is critical");
        if (warnings && roots[i] - roots[i - 1] < h)
            warnings->push_back("aliasing: two turning points inside one scan cell");
    }

    std::vector<TurningPoint> out;
    out.reserve(roots.size());
    for (double r : roots) {
        const Jet2 j = model(r);
        if (std::fabs(j.d1) < opt.critical_slope)
            throw CriticalEnergyError("turning point with near-zero slope; energy is critical");
        out.push_back({r, j.d1, j.d1 > 0.0});
    }
    return out;
}

EnergyDecomposition decompose(const std::vector<TurningPoint>& points, const PotentialModel& model,
                              double lambda, Interval domain) {
    if (points.empty()) throw DecompositionError("no turning points in domain");
    if (points.size() % 2 != 0) throw DecompositionError("odd number of turning points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        const bool expect_rising = (i % 2 == 1);
        if (points[i].rising != expect_rising)
            throw DecompositionError("turning points do not alternate falling/rising");
    }

    EnergyDecomposition d;
    d.lambda = lambda;
    d.domain = domain;
    for (std::size_t i = 0; i + 1 < points.size(); i += 2)
        d.wells.push_back({points[i].x, points[i + 1].x});
    for (std::size_t i = 1; i + 1 < points.size(); i += 2)
        d.barriers.push_back({points[i].x, points[i + 1].x});

    // spot check the sign pattern on a few interior samples
    auto check = [&](const Interval& iv, bool below) {
        for (int k = 1; k <= 15; ++k) {
            const double x = iv.lo + iv.width() * k / 16.0;
            const double p = model.value(x) - lambda;
            if (below ? (p >= 0.0) : (p <= 0.0))
                throw DecompositionError("sign pattern violated inside well/barrier");
        }
    };
    for (const auto& w : d.wells) check(w, true);
    for (const auto& b : d.barriers) check(b, false);
    return d;
}

EnergyDecomposition decompose_energy(const PotentialModel& model, double lambda, Interval domain,
                                     const TurningPointOptions& opt) {
    return decompose(find_turning_points(model, lambda, domain, opt), model, lambda, domain);
}

} // namespace semispec
