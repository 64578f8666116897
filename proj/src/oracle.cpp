#include "semispec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace semispec {

namespace {

// Inertia count with long-double pivots for the polish stages.
template <typename Real>
int count_below(const std::vector<double>& diag, double off, double sigma) {
    const Real e2 = Real(off) * Real(off);
    const Real tiny = std::numeric_limits<Real>::min() / std::numeric_limits<Real>::epsilon();
    int cnt = 0;
    Real d = Real(diag[0]) - Real(sigma);
    if (d < 0) ++cnt;
    for (std::size_t i = 1; i < diag.size(); ++i) {
        if (d == 0) d = tiny;
        d = Real(diag[i]) - Real(sigma) - e2 / d;
        if (d < 0) ++cnt;
    }
    return cnt;
}

// fixed-seed xorshift for the inverse-iteration start vector
struct Rng {
    std::uint64_t s = 0x9e3779b97f4a7c15ull;
    double next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return 2.0 * (static_cast<double>(s >> 11) * 0x1.0p-53) - 1.0;
    }
};

// Solve (T - lambda I) x = b in place; pivots regularized near singularity.
void shifted_solve(const TridiagonalOperator& op, double lambda, std::vector<double>& x) {
    const std::size_t n = op.diag.size();
    static thread_local std::vector<double> d, u;
    d.assign(n, 0.0);
    u.assign(n, 0.0);
    const double e = op.off;
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm = std::max(norm, std::fabs(op.diag[i] - lambda));
    norm += 2.0 * std::fabs(e);
    const double floor_piv = norm * 1e-300 + 1e-280;

    // forward elimination
    d[0] = op.diag[0] - lambda;
    if (std::fabs(d[0]) < floor_piv) d[0] = floor_piv;
    for (std::size_t i = 1; i < n; ++i) {
        const double m = e / d[i - 1];
        d[i] = op.diag[i] - lambda - m * e;
        if (std::fabs(d[i]) < floor_piv) d[i] = floor_piv;
        x[i] -= m * x[i - 1];
    }
    x[n - 1] /= d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (x[i] - e * x[i + 1]) / d[i];

    // rescale to unit h-weighted norm to avoid overflow across iterations
    double s = 0.0;
    for (double v : x) s += v * v;
    s = std::sqrt(s * op.grid.h());
    if (s > 0.0)
        for (double& v : x) v /= s;
}

double hnorm(const std::vector<double>& v, double h) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s * h);
}

double residual_norm(const TridiagonalOperator& op, double lambda, const std::vector<double>& x) {
    const std::size_t n = op.diag.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = (op.diag[i] - lambda) * x[i];
        if (i > 0) r += op.off * x[i - 1];
        if (i + 1 < n) r += op.off * x[i + 1];
        s += r * r;
    }
    return std::sqrt(s * op.grid.h());
}

void fix_sign(std::vector<double>& v) {
    double best = 0.0;
    for (double x : v)
        if (std::fabs(x) > std::fabs(best)) best = x;
    if (best < 0.0)
        for (double& x : v) x = -x;
}

} // namespace

int Grid::nearest_node(double x) const {
    int i = static_cast<int>(std::lround((x - a) / h())) - 1;
    return std::clamp(i, 0, n - 1);
}

Grid make_grid(const PotentialModel& model, Interval domain, Interval window, double hbar,
               int explicit_n, double margin_factor) {
    const double margin = margin_factor * (window.hi - window.lo);
    if (model.value(domain.lo) <= window.hi + margin ||
        model.value(domain.hi) <= window.hi + margin)
        throw EndpointError("truncation endpoints too low for the energy window");
    Grid g;
    g.a = domain.lo;
    g.b = domain.hi;
    if (explicit_n > 0) {
        g.n = std::max(explicit_n, 63);
    } else {
        const double target_h = std::pow(hbar, 1.5) / 4.0;
        g.n = std::max(63, static_cast<int>(std::ceil(domain.width() / target_h)) - 1);
    }
    return g;
}

TridiagonalOperator assemble_operator(const PotentialModel& model, const Grid& grid, double hbar) {
    TridiagonalOperator op;
    op.grid = grid;
    op.hbar = hbar;
    const double h = grid.h();
    const double k = hbar * hbar / (h * h);
    op.off = -k;
    op.diag.resize(grid.n);
    for (int i = 0; i < grid.n; ++i) op.diag[i] = 2.0 * k + model.value(grid.node(i));
    return op;
}

int sturm_count(const TridiagonalOperator& op, double sigma) {
    return count_below<double>(op.diag, op.off, sigma);
}

std::vector<double> eigenvalues_in_window(const TridiagonalOperator& op, Interval window,
                                          std::vector<std::string>* warnings) {
    const int k_lo = count_below<double>(op.diag, op.off, window.lo);
    const int k_hi = count_below<double>(op.diag, op.off, window.hi);
    std::vector<double> out;
    const double scale = std::max({1.0, std::fabs(window.lo), std::fabs(window.hi)});

    for (int k = k_lo; k < k_hi; ++k) {
        // eigenvalue number k (0-based): count_below(sigma) > k  <=>  lambda_k < sigma
        double lo = window.lo, hi = window.hi;
        while (hi - lo > 1e-11 * scale) {
            const double mid = 0.5 * (lo + hi);
            if (count_below<double>(op.diag, op.off, mid) > k)
                hi = mid;
            else
                lo = mid;
        }
        // long-double polish below the double Sturm floor
        for (int it = 0; it < 24 && hi - lo > 1e-16 * scale; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (count_below<long double>(op.diag, op.off, mid) > k)
                hi = mid;
            else
                lo = mid;
        }
        out.push_back(0.5 * (lo + hi));
    }

    if (warnings && !out.empty()) {
        const Eigenpair top = eigenvector(op, out.back());
        const double h = op.grid.h();
        double mass = 0.0;
        const std::size_t n = top.psi.size();
        for (std::size_t i = 0; i < 5 && i < n; ++i)
            mass += (top.psi[i] * top.psi[i] + top.psi[n - 1 - i] * top.psi[n - 1 - i]) * h;
        if (mass > 1e-8)
            warnings->push_back("eigenvector mass near truncation boundary exceeds 1e-8");
    }
    return out;
}

Eigenpair eigenvector(const TridiagonalOperator& op, double lambda) {
    const std::size_t n = op.diag.size();
    const double scale = std::max(1.0, std::fabs(lambda));

    // isolation test against the two neighbours
    const int below = count_below<double>(op.diag, op.off, lambda - 1e-10 * scale);
    const int above = count_below<double>(op.diag, op.off, lambda + 1e-10 * scale);
    const bool degenerate = (above - below) > 1;

    Rng rng;
    std::vector<double> x(n);
    for (double& v : x) v = rng.next();

    Eigenpair ep;
    ep.lambda = lambda;
    for (int it = 0; it < 3; ++it) shifted_solve(op, lambda, x);
    fix_sign(x);
    {
        const double nn = hnorm(x, op.grid.h());
        for (double& v : x) v /= nn;
    }
    ep.residual = residual_norm(op, lambda, x);
    ep.psi = std::move(x);

    if (degenerate) {
        ep.degenerate_pair = true;
        std::vector<double> y(n);
        Rng rng2;
        rng2.next();
        for (double& v : y) v = rng2.next();
        for (int it = 0; it < 3; ++it) {
            shifted_solve(op, lambda, y);
            // project out the first vector (h-weighted inner product)
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += y[i] * ep.psi[i];
            dot *= op.grid.h();
            for (std::size_t i = 0; i < n; ++i) y[i] -= dot * ep.psi[i];
        }
        fix_sign(y);
        const double nn = hnorm(y, op.grid.h());
        for (double& v : y) v /= nn;
        ep.psi_second = std::move(y);
    }
    return ep;
}

RefinedEigenvalue refine_eigenvalue(double lambda_h, double lambda_h2) {
    RefinedEigenvalue r;
    r.lambda = (4.0 * lambda_h2 - lambda_h) / 3.0;
    r.error_estimate = std::fabs(lambda_h2 - lambda_h) / 3.0;
    return r;
}

OdeResult integrate_ivp(const PotentialModel& model, double lambda, double hbar, double x_start,
                        const std::vector<double>& initial, double x_end, const OdeOptions& opt) {
    const double inv_h2 = 1.0 / (hbar * hbar);
    if (initial.size() == 2) {
        auto rhs = [&](double x, const double* y, double* dy) {
            const double q = (model.value(x) - lambda) * inv_h2;
            dy[0] = y[1];
            dy[1] = q * y[0];
        };
        return integrate_ode(rhs, 2, initial.data(), x_start, x_end, opt);
    }
    if (initial.size() == 4) {
        // (Re psi, Im psi, Re psi', Im psi')
        auto rhs = [&](double x, const double* y, double* dy) {
            const double q = (model.value(x) - lambda) * inv_h2;
            dy[0] = y[2];
            dy[1] = y[3];
            dy[2] = q * y[0];
            dy[3] = q * y[1];
        };
        return integrate_ode(rhs, 4, initial.data(), x_start, x_end, opt);
    }
    throw IntegrationError("integrate_ivp: initial data must have 2 (real) or 4 (complex) entries");
}

OracleSpectrum oracle_spectrum(const PotentialModel& model, Interval domain, Interval window,
                               double hbar, int explicit_n) {
    OracleSpectrum s;
    s.coarse = make_grid(model, domain, window, hbar, explicit_n);
    s.fine = s.coarse;
    s.fine.n = 2 * s.coarse.n + 1; // halves the spacing exactly
    const TridiagonalOperator op_h = assemble_operator(model, s.coarse, hbar);
    const TridiagonalOperator op_h2 = assemble_operator(model, s.fine, hbar);
    s.lambda_h = eigenvalues_in_window(op_h, window);
    s.lambda_h2 = eigenvalues_in_window(op_h2, window);
    // FD eigenvalues converge from below as h decreases; match by order when
    // counts agree, otherwise by nearest coarse partner.
    const std::size_t m = std::min(s.lambda_h.size(), s.lambda_h2.size());
    for (std::size_t i = 0; i < s.lambda_h2.size(); ++i) {
        double lh;
        if (s.lambda_h.size() == s.lambda_h2.size()) {
            lh = s.lambda_h[i];
        } else {
            if (s.lambda_h.empty() || m == 0) break;
            auto it = std::lower_bound(s.lambda_h.begin(), s.lambda_h.end(), s.lambda_h2[i]);
            if (it == s.lambda_h.end()) --it;
            if (it != s.lambda_h.begin() &&
                std::fabs(*(it - 1) - s.lambda_h2[i]) < std::fabs(*it - s.lambda_h2[i]))
                --it;
            lh = *it;
        }
        const RefinedEigenvalue r = refine_eigenvalue(lh, s.lambda_h2[i]);
        s.lambda_refined.push_back(r.lambda);
        s.error_estimate.push_back(r.error_estimate);
    }
    return s;
}

} // namespace semispec
