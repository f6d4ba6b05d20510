#include "hsx/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hsx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void record(CheckReport& r, double err, double location, double time) {
    if (err > r.max_error) r.max_error = err;
    if (r.worst.size() < 8) {
        r.worst.push_back({location, time, err});
        std::sort(r.worst.begin(), r.worst.end(),
                  [](const CheckSample& a, const CheckSample& b) { return a.error > b.error; });
    } else if (err > r.worst.back().error) {
        r.worst.back() = {location, time, err};
        std::sort(r.worst.begin(), r.worst.end(),
                  [](const CheckSample& a, const CheckSample& b) { return a.error > b.error; });
    }
}

CheckReport finish(CheckReport r) {
    r.passed = r.max_error <= r.tolerance;
    return r;
}

// sup{xi : X(xi) <= x} for nondecreasing X; +-inf when the tail never reaches x
double rightmost_preimage(const PiecewiseLinear& X, double x) {
    if (x < X.ys.front()) {
        if (X.slope_left <= 0.0) return -kInf;
        return X.xs.front() + (x - X.ys.front()) / X.slope_left;
    }
    if (x >= X.ys.back()) {
        if (X.slope_right <= 0.0) return kInf;
        return X.xs.back() + (x - X.ys.back()) / X.slope_right;
    }
    // last node with value <= x, then walk into the strictly rising piece
    const std::size_t j =
        std::upper_bound(X.ys.begin(), X.ys.end(), x) - X.ys.begin() - 1;
    const double rise = X.ys[j + 1] - X.ys[j];
    if (x == X.ys[j]) return X.xs[j];
    return X.xs[j] + (x - X.ys[j]) * (X.xs[j + 1] - X.xs[j]) / rise;
}

}  // namespace

CheckReport suite_conservation(const AlphaParametrization& p, std::span<const double> times,
                               double tolerance, const Tolerances& tol) {
    CheckReport r;
    r.name = "conservation";
    r.tolerance = tolerance;
    for (double t : times) {
        const double err = std::fabs(total_mass(evolve(p, t, tol).mu) - p.energy);
        record(r, err, 0.0, t);
    }
    return finish(r);
}

CheckReport suite_weak_form(const AlphaParametrization& p, std::span<const double> times,
                            std::span<const double> grid, double tolerance,
                            const Tolerances& tol) {
    CheckReport r;
    r.name = "weak_form";
    r.tolerance = tolerance;
    for (double t : times) {
        const PiecewiseLinear y = y_curve(p, t);
        const CdfEvaluator F(evolve(p, t, tol).mu);
        for (double a : grid) {
            const double lhs = 0.5 * (a - p.x_bar(a));
            const double rhs = 0.5 * F.closed(y(a));
            record(r, std::fabs(lhs - rhs), a, t);
        }
    }
    return finish(r);
}

CheckReport suite_characteristic_ode(const AlphaParametrization& p, std::span<const double> grid,
                                     std::span<const double> times, double h, double tolerance) {
    if (h <= 0.0) throw std::invalid_argument("step size must be positive");
    CheckReport r;
    r.name = "characteristic_ode";
    r.tolerance = tolerance;
    for (double t : times) {
        for (double a : grid) {
            const double diff = (y_at(p, a, t + h) - y_at(p, a, t - h)) / (2.0 * h);
            record(r, std::fabs(diff - u_along(p, a, t)), a, t);
        }
    }
    return finish(r);
}

CheckReport oracle_pushforward(const PiecewiseLinear& X, const PiecewiseConstant& g,
                               std::size_t cells, double tolerance, const Tolerances& tol) {
    if (cells < 1000) throw std::invalid_argument("oracle needs at least 1000 cells");
    CheckReport r;
    r.name = "pushforward_oracle";
    r.tolerance = tolerance;

    const CdfEvaluator decomposed(pushforward_decompose(X, g, tol));
    const PiecewiseLinear cum_g = cumulative(g);
    const double total = cum_g.ys.back();

    const double lo = X.ys.front() - 1.0;
    const double hi = X.ys.back() + 1.0;
    const double step = (hi - lo) / static_cast<double>(cells - 1);
    for (std::size_t k = 0; k < cells; ++k) {
        const double x = lo + step * static_cast<double>(k);
        const double xi = rightmost_preimage(X, x);
        double brute;
        if (xi == -kInf)
            brute = 0.0;
        else if (xi == kInf)
            brute = total;
        else
            brute = cum_g(xi);
        record(r, std::fabs(brute - decomposed.closed(x)), x, 0.0);
    }
    return finish(r);
}

CheckReport suite_structure(const AlphaParametrization& p, double t, double tolerance,
                            const Tolerances& tol) {
    if (t == 0.0) throw std::invalid_argument("structure suite requires t != 0");
    CheckReport r;
    r.name = "structure";
    r.tolerance = tolerance;

    const Snapshot snap = evolve(p, t, tol);
    const RadonMeasure mu0 = pushforward_decompose(p.x_bar, p.f, tol);
    const CdfEvaluator F0(mu0);
    const double slope_tol = 10.0 * tol.slope;

    for (const Atom& a : snap.mu.atoms) {
        if (!a.source) throw std::logic_error("evolved atom lost its provenance label");
        const double x1 = a.source->lo, x2 = a.source->hi;

        // (a) + (d): every piece feeding this atom sits in the initial
        // absolutely continuous part at profile slope -2/t
        bool touched = false;
        for (const AlphaPiece& pc : p.piece) {
            if (!std::isfinite(pc.span.lo) || !std::isfinite(pc.span.hi)) continue;
            const double plo = p.x_bar(pc.span.lo), phi = p.x_bar(pc.span.hi);
            if (std::min(phi, x2) - std::max(plo, x1) <= tol.x) continue;
            touched = true;
            if (pc.initially_flat) {
                record(r, 1.0, a.x, t);  // source inside the flattened singular support
                continue;
            }
            const double cerr = std::fabs(pc.u_bar_slope + 2.0 / t);
            record(r, cerr <= slope_tol ? 0.0 : cerr, x1, t);
        }
        if (!touched) record(r, 1.0, a.x, t);

        // (b) mass from the source length
        record(r, std::fabs(a.mass - (4.0 / (t * t)) * (x2 - x1)), a.x, t);

        // (c) location from the initial datum alone; the closed CDF lands on
        // the run start even when an initial atom sits exactly at x1
        const double z1 = x1 + F0.closed(x1);
        const double loc = x1 + p.v_bar(z1) * t + 0.25 * t * t * (z1 - x1);
        record(r, std::fabs(a.x - loc), a.x, t);
    }
    return finish(r);
}

InitialDatum random_datum(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> npieces(1, 8);
    std::uniform_int_distribution<int> natoms(0, 3);
    std::uniform_real_distribution<double> uu(0.0, 1.0);

    const int n = npieces(rng);
    const double window = 2.0 + 7.0 * uu(rng);
    const double x0 = -10.0 + (20.0 - window) * uu(rng);

    std::vector<double> widths(n);
    double wsum = 0.0;
    for (double& w : widths) {
        w = 0.2 + 0.8 * uu(rng);
        wsum += w;
    }
    std::vector<double> xs{x0};
    for (double w : widths) xs.push_back(xs.back() + w * window / wsum);

    std::vector<double> ys{-2.0 + 4.0 * uu(rng)};
    for (int i = 0; i < n; ++i) {
        const double slope = -4.0 + 8.0 * uu(rng);
        ys.push_back(ys.back() + slope * (xs[i + 1] - xs[i]));
    }
    PiecewiseLinear u_bar = make_piecewise_linear(std::move(xs), std::move(ys), 0.0, 0.0);

    std::vector<Atom> atoms;
    const int k = natoms(rng);
    double prev = -kInf;
    for (int i = 0; i < k; ++i) {
        double loc = x0 - 1.0 + (window + 2.0) * uu(rng);
        if (loc <= prev + 0.05) loc = prev + 0.05;
        prev = loc;
        atoms.push_back(Atom{loc, 0.05 + 1.95 * uu(rng), std::nullopt});
    }
    return make_datum(std::move(u_bar), std::move(atoms));
}

std::vector<double> sample_grid(const AlphaParametrization& p, std::mt19937_64& rng,
                                std::size_t extra) {
    std::vector<double> grid;
    for (const AlphaPiece& pc : p.piece) {
        if (std::isfinite(pc.span.lo) && std::isfinite(pc.span.hi))
            grid.push_back(pc.span.lo + 0.5 * pc.span.length());
    }
    for (double a : p.grid) {
        grid.push_back(a - 1e-6);
        grid.push_back(a + 1e-6);
    }
    std::uniform_real_distribution<double> ua(p.grid.front() - 1.0, p.grid.back() + 1.0);
    for (std::size_t i = 0; i < extra; ++i) grid.push_back(ua(rng));
    return grid;
}

double pick_regular_time(const AlphaParametrization& p, std::mt19937_64& rng, double lo,
                         double hi, double margin) {
    std::vector<double> avoid;
    for (const SingularEvent& ev : predict_singular_times(p)) avoid.push_back(ev.t_star);
    if (!p.piece.empty()) {
        for (const AlphaPiece& pc : p.piece)
            if (pc.initially_flat) {
                avoid.push_back(0.0);  // the initial measure itself carries atoms
                break;
            }
    }
    std::uniform_real_distribution<double> ut(lo, hi);
    for (int tries = 0; tries < 1000; ++tries) {
        const double s = ut(rng);
        bool ok = true;
        for (double bad : avoid)
            if (std::fabs(s - bad) < margin) ok = false;
        if (ok) return s;
    }
    throw std::runtime_error("could not find a regular time in the requested range");
}

}  // namespace hsx
