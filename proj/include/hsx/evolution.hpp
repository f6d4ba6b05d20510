#pragma once

// Time evolution: produce the pair (u(.,t), mu(t)) at any real t, locate every
// energy-concentration event in closed form, and restart the semi-group from
// any time at which the measure is atom-free.

#include <span>
#include <vector>

#include "hsx/lagrangian.hpp"
#include "hsx/measure.hpp"

namespace hsx {

struct Snapshot {
    double t = 0.0;
    PiecewiseLinear u;
    RadonMeasure mu;  // atom sources relabeled to x-intervals of the initial datum
    bool is_singular = false;
};

// One concentration time: all initial-profile pieces of slope c focus at
// t_star = -2/c, each maximal source interval [x1, x2] dropping an atom of
// mass (4/t_star^2)(x2 - x1).
struct SingularEvent {
    double t_star = 0.0;
    double slope = 0.0;
    std::vector<Atom> atoms;
};

Snapshot evolve(const AlphaParametrization& p, double t, const Tolerances& tol = {});
// Point evaluation of u(x, t); inside the image of a flat span this is the
// single transported value.
double evaluate_u(const AlphaParametrization& p, double x, double t, const Tolerances& tol = {});

// All concentration events, sorted by |t_star|. Slopes within tol.slope of
// each other concentrate together and are grouped into one event.
std::vector<SingularEvent> predict_singular_times(const AlphaParametrization& p,
                                                  const Tolerances& tol = {});

// Classical flow map X(xi, t) = xi + u(xi) t + (t^2/4) F(xi) for an atom-free
// datum, with F the cumulative energy of the derived density.
double flow_map_X(const InitialDatum& d, double xi, double t);
PiecewiseLinear flow_map_curve(const InitialDatum& d, double t);

// New initial datum read off at a non-singular time s; throws if mu(s)
// carries atoms.
InitialDatum restart(const AlphaParametrization& p, double s, const Tolerances& tol = {});

struct SemigroupCheck {
    double y_deviation = 0.0;        // |X(y(.,s), t-s) - y(.,t)| over the grid
    double u_deviation = 0.0;        // u(x,t) rebuilt from the restart profile
    double measure_deviation = 0.0;  // cdf distance of mu(t) vs X#(u_x^2 dx)
    double max() const;
};

SemigroupCheck check_semigroup(const AlphaParametrization& p, double s, double t,
                               std::span<const double> alphas, const Tolerances& tol = {});

}  // namespace hsx
