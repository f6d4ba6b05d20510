#pragma once

// The Lagrangian side of the solver: from an initial pair (u, energy measure)
// build the alpha-parametrization (x_bar, f, u o x_bar) by pseudo-inverting
// x -> x + mu((-inf, x]). Every later-time quantity is an explicit polynomial
// in t over this parametrization, so evaluation at any time is exact.

#include <vector>

#include "hsx/measure.hpp"
#include "hsx/pwfun.hpp"

namespace hsx {

// Initial datum: a continuous profile that is constant outside a bounded
// window, plus the pure-point part of the initial energy measure. The
// absolutely continuous part is always the squared slope of the profile and
// is derived, never supplied.
struct InitialDatum {
    PiecewiseLinear u_bar;
    std::vector<Atom> atoms;
};

InitialDatum make_datum(PiecewiseLinear u_bar, std::vector<Atom> atoms);
RadonMeasure energy_measure(const InitialDatum& d);
// The strictly increasing graph x -> x + mu((-inf, x]).
MonotoneGraph cumulative_graph(const RadonMeasure& mu);

// One maximal interval of the alpha axis on which everything is affine.
struct AlphaPiece {
    Interval span;        // +-inf on the tails
    double x_slope;       // x_bar'
    double v_slope;       // (u_bar o x_bar)'
    double f_value;       // energy density in alpha
    double u_bar_slope;   // slope of the initial profile seen by this piece (0 when flat)
    bool initially_flat;  // x_bar' below tolerance: the flattened singular support
};

struct AlphaParametrization {
    PiecewiseLinear x_bar;
    PiecewiseLinear v_bar;  // u_bar o x_bar
    PiecewiseConstant f;    // 1 - x_bar'
    double energy = 0.0;
    std::vector<double> grid;       // merged breakpoints of x_bar and v_bar
    std::vector<AlphaPiece> piece;  // grid.size() + 1 entries, tails included
};

// Construct the parametrization and verify the defining round trip
// x_bar#(f dalpha) == energy measure.
AlphaParametrization build(const InitialDatum& d, const Tolerances& tol = {});

// Characteristics: y(alpha, t) = x_bar + v_bar t + (t^2/4)(alpha - x_bar),
// quadratic in t and piecewise linear in alpha.
double y_at(const AlphaParametrization& p, double alpha, double t);
PiecewiseLinear y_curve(const AlphaParametrization& p, double t);

// dy/dalpha; on pieces carrying the flattened initial singular part this is
// exactly t^2/4, elsewhere x_bar' (1 + (t/2) u_bar')^2. At a grid point the
// right-sided value is returned.
double y_alpha(const AlphaParametrization& p, double alpha, double t);

// The solution transported along the characteristic through alpha:
// v_bar + (t/2)(alpha - x_bar).
double u_along(const AlphaParametrization& p, double alpha, double t);
PiecewiseLinear u_along_curve(const AlphaParametrization& p, double t);

// Flat pieces of y(.,t) concentrate energy into atoms; the rest carry the
// absolutely continuous part. A singular-continuous class is structurally
// impossible for piecewise-linear data, so no such label exists.
enum class PieceClass { positive, flat };

struct ClassifiedPiece {
    Interval span;
    PieceClass cls;
};

std::vector<ClassifiedPiece> classify_alpha(const AlphaParametrization& p, double t,
                                            const Tolerances& tol = {});

}  // namespace hsx
