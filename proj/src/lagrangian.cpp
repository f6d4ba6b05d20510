#include "hsx/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hsx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

double sq(double x) { return x * x; }

// snap away sub-ulp decreases from interpolation; anything larger is a bug
void snap_nondecreasing(std::vector<double>& ys) {
    double scale = 1.0;
    for (double y : ys) scale = std::max(scale, std::fabs(y));
    for (std::size_t i = 0; i + 1 < ys.size(); ++i) {
        if (ys[i + 1] < ys[i]) {
            if (ys[i] - ys[i + 1] > 1e-11 * scale)
                throw std::logic_error("characteristic curve decreased beyond rounding");
            ys[i + 1] = ys[i];
        }
    }
}

}  // namespace

InitialDatum make_datum(PiecewiseLinear u_bar, std::vector<Atom> atoms) {
    require(u_bar.slope_left == 0.0 && u_bar.slope_right == 0.0,
            "initial profile must be constant outside a bounded window");
    InitialDatum d{std::move(u_bar), std::move(atoms)};
    energy_measure(d);  // validates atom list and derived density
    return d;
}

RadonMeasure energy_measure(const InitialDatum& d) {
    return make_measure(square(derivative(d.u_bar)), d.atoms);
}

MonotoneGraph cumulative_graph(const RadonMeasure& mu) {
    PiecewiseLinear cum = cumulative(mu.density);
    std::vector<double> ys(cum.size());
    for (std::size_t i = 0; i < cum.size(); ++i) ys[i] = cum.xs[i] + cum.ys[i];
    MonotoneGraph g;
    g.base = make_piecewise_linear(cum.xs, std::move(ys), 1.0 + cum.slope_left,
                                   1.0 + cum.slope_right);
    for (const Atom& a : mu.atoms) g.jumps.emplace_back(a.x, a.mass);
    return g;
}

AlphaParametrization build(const InitialDatum& d, const Tolerances& tol) {
    const RadonMeasure mu = energy_measure(d);

    AlphaParametrization p;
    p.x_bar = pseudo_inverse_curve(cumulative_graph(mu));
    {
        std::vector<double> fv(p.x_bar.size() + 1);
        for (std::size_t k = 0; k <= p.x_bar.size(); ++k) {
            // analytically in [0, 1]; rounding of the graph nodes can push the
            // slope a few ulp past 1, so clamp
            fv[k] = std::max(0.0, 1.0 - p.x_bar.slope_of_piece(k));
        }
        p.f = make_piecewise_constant(p.x_bar.xs, std::move(fv));
    }
    p.v_bar = compose_monotone(d.u_bar, p.x_bar);
    p.energy = total_mass(mu);

    // the composition keeps every x_bar breakpoint, so v_bar's breakpoints
    // already refine both curves
    p.grid = p.v_bar.xs;
    for (double a : p.x_bar.xs)
        if (!std::binary_search(p.grid.begin(), p.grid.end(), a))
            throw std::logic_error("alpha grid lost a breakpoint of x_bar");

    p.piece.resize(p.grid.size() + 1);
    for (std::size_t k = 0; k <= p.grid.size(); ++k) {
        AlphaPiece& pc = p.piece[k];
        pc.span.lo = (k == 0) ? -kInf : p.grid[k - 1];
        pc.span.hi = (k == p.grid.size()) ? kInf : p.grid[k];
        double probe;
        if (k == 0)
            probe = p.grid.front() - 1.0;
        else if (k == p.grid.size())
            probe = p.grid.back() + 1.0;
        else
            probe = pc.span.lo + 0.5 * (pc.span.hi - pc.span.lo);
        pc.x_slope = p.x_bar.slope_after(probe);
        pc.v_slope = p.v_bar.slope_after(probe);
        pc.f_value = p.f(probe);
        pc.initially_flat = pc.x_slope <= tol.slope;
        // read the profile's own stored slope so level sets group exactly
        pc.u_bar_slope = pc.initially_flat ? 0.0 : d.u_bar.slope_after(p.x_bar(probe));
    }

    const double rt = cdf_sup_distance(pushforward_decompose(p.x_bar, p.f, tol), mu, tol.x);
    if (rt > 1e-12 * (1.0 + p.energy))
        throw std::logic_error("alpha parametrization failed its defining round trip");
    return p;
}

double y_at(const AlphaParametrization& p, double alpha, double t) {
    const double xb = p.x_bar(alpha);
    return xb + p.v_bar(alpha) * t + 0.25 * t * t * (alpha - xb);
}

PiecewiseLinear y_curve(const AlphaParametrization& p, double t) {
    std::vector<double> ys(p.grid.size());
    for (std::size_t i = 0; i < p.grid.size(); ++i) {
        const double xb = p.x_bar(p.grid[i]);
        ys[i] = xb + p.v_bar.ys[i] * t + 0.25 * t * t * (p.grid[i] - xb);
    }
    snap_nondecreasing(ys);
    auto tail = [&](double sx, double sv) { return sx + sv * t + 0.25 * t * t * (1.0 - sx); };
    return make_piecewise_linear(p.grid, std::move(ys),
                                 tail(p.x_bar.slope_left, p.v_bar.slope_left),
                                 tail(p.x_bar.slope_right, p.v_bar.slope_right));
}

double y_alpha(const AlphaParametrization& p, double alpha, double t) {
    const std::size_t k = std::upper_bound(p.grid.begin(), p.grid.end(), alpha) - p.grid.begin();
    const AlphaPiece& pc = p.piece[k];
    if (pc.initially_flat) return 0.25 * t * t;
    return pc.x_slope * sq(1.0 + 0.5 * t * pc.u_bar_slope);
}

double u_along(const AlphaParametrization& p, double alpha, double t) {
    return p.v_bar(alpha) + 0.5 * t * (alpha - p.x_bar(alpha));
}

PiecewiseLinear u_along_curve(const AlphaParametrization& p, double t) {
    std::vector<double> ys(p.grid.size());
    for (std::size_t i = 0; i < p.grid.size(); ++i)
        ys[i] = p.v_bar.ys[i] + 0.5 * t * (p.grid[i] - p.x_bar(p.grid[i]));
    auto tail = [&](double sx, double sv) { return sv + 0.5 * t * (1.0 - sx); };
    return make_piecewise_linear(p.grid, std::move(ys),
                                 tail(p.x_bar.slope_left, p.v_bar.slope_left),
                                 tail(p.x_bar.slope_right, p.v_bar.slope_right));
}

std::vector<ClassifiedPiece> classify_alpha(const AlphaParametrization& p, double t,
                                            const Tolerances& tol) {
    std::vector<ClassifiedPiece> out;
    out.reserve(p.piece.size());
    for (const AlphaPiece& pc : p.piece) {
        bool flat;
        if (t == 0.0) {
            flat = pc.initially_flat;
        } else if (pc.initially_flat) {
            flat = false;  // flattened initial atoms never concentrate again
        } else {
            flat = pc.x_slope * sq(1.0 + 0.5 * t * pc.u_bar_slope) <= tol.slope;
        }
        out.push_back({pc.span, flat ? PieceClass::flat : PieceClass::positive});
    }
    return out;
}

}  // namespace hsx
