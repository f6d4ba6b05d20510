#pragma once

// Exact arithmetic on piecewise-linear and piecewise-constant functions of one
// real variable. Every curve the solver produces (wave profiles, characteristics,
// cumulative energy distributions) stays in this class, so all operations here
// are closed-form; the only error source is IEEE rounding.

#include <cstddef>
#include <utility>
#include <vector>

namespace hsx {

// Shared tolerance knobs. `x` guards abscissa coincidence, `v` value
// coincidence, `slope` flat-span detection.
struct Tolerances {
    double x = 1e-12;
    double v = 1e-12;
    double slope = 1e-10;
};

// Continuous piecewise-linear function, affine beyond the first/last
// breakpoint. Piece index p ranges over [0, size()]: p = 0 is the left tail,
// p = size() the right tail, and p in between is (xs[p-1], xs[p]).
struct PiecewiseLinear {
    std::vector<double> xs;  // strictly increasing, at least one
    std::vector<double> ys;  // value at each breakpoint
    double slope_left = 0.0;
    double slope_right = 0.0;

    double operator()(double x) const;
    std::size_t size() const { return xs.size(); }

    double slope_of_piece(std::size_t p) const;
    // Slope of the piece immediately left (resp. right) of x; at a breakpoint
    // the two differ, in the interior of a piece they agree.
    double slope_before(double x) const;
    double slope_after(double x) const;
};

PiecewiseLinear make_piecewise_linear(std::vector<double> xs, std::vector<double> ys,
                                      double slope_left, double slope_right);
PiecewiseLinear constant_function(double value);
PiecewiseLinear identity_function();

// Piecewise-constant function, defined a.e.; evaluation at a breakpoint
// returns the right-limit. values[p] lives on piece p (same indexing as
// PiecewiseLinear pieces), so values.size() == xs.size() + 1.
struct PiecewiseConstant {
    std::vector<double> xs;
    std::vector<double> values;

    double operator()(double x) const;
    std::size_t pieces() const { return values.size(); }
};

PiecewiseConstant make_piecewise_constant(std::vector<double> xs, std::vector<double> values);

PiecewiseConstant derivative(const PiecewiseLinear& f);
// Antiderivative normalized to vanish at -infinity; requires zero tail values.
PiecewiseLinear cumulative(const PiecewiseConstant& g);
PiecewiseConstant square(const PiecewiseConstant& g);
// Exact integral over [a, b]; a = -inf or b = +inf allowed when the
// corresponding tail value is zero, otherwise throws.
double integrate(const PiecewiseConstant& g, double a, double b);

// Merges breakpoints closer than tol_x and pieces collinear (resp. equal)
// within tol_v. Evaluation changes by at most tol_v on merged spans.
// With tol_x == tol_v == 0 the input is returned unchanged.
PiecewiseLinear consolidate(const PiecewiseLinear& f, double tol_x, double tol_v);
PiecewiseConstant consolidate(const PiecewiseConstant& g, double tol_x, double tol_v);

// Exact composition f(g(.)) for nondecreasing g. Breakpoints of the result are
// g's breakpoints merged with the g-preimages of f's breakpoints, so the
// result is affine on every piece. Throws if g is decreasing anywhere.
PiecewiseLinear compose_monotone(const PiecewiseLinear& f, const PiecewiseLinear& g);

// Strictly increasing graph with jump discontinuities: x -> base(x) + (sum of
// jump heights at locations <= x). Models x + mu((-inf, x]) for a finite
// nonnegative measure mu, which is the map whose pseudo-inverse flattens the
// singular part of mu.
struct MonotoneGraph {
    PiecewiseLinear base;                          // continuous part, strictly increasing
    std::vector<std::pair<double, double>> jumps;  // (location, height > 0), increasing

    double value_left(double x) const;   // limit from below
    double value_right(double x) const;  // jumps at x included
};

// The generalized inverse: the unique x with
//   value_left(x) <= alpha <= value_right(x).
// Jumps of the graph become exactly flat spans of the inverse.
double pseudo_inverse(const MonotoneGraph& g, double alpha);
PiecewiseLinear pseudo_inverse_curve(const MonotoneGraph& g);

}  // namespace hsx
