#pragma once

// Verification suites: each one turns a structural identity of the evolution
// into a deterministic, seeded check with an explicit tolerance. The
// push-forward oracle is an independent brute-force route used to cross-check
// the decomposition.

#include <random>
#include <span>
#include <string>
#include <vector>

#include "hsx/evolution.hpp"

namespace hsx {

struct CheckSample {
    double location = 0.0;
    double time = 0.0;
    double error = 0.0;
};

struct CheckReport {
    std::string name;
    double max_error = 0.0;
    double tolerance = 0.0;
    bool passed = true;
    std::vector<CheckSample> worst;  // a few largest offenders
};

// |mu(t)(R) - E| over the given times (singular ones included).
CheckReport suite_conservation(const AlphaParametrization& p, std::span<const double> times,
                               double tolerance = 1e-10, const Tolerances& tol = {});

// The transported form of the equation: (1/2)(alpha - x_bar) must equal
// (1/2) F(y(alpha,t), t). Times must avoid the singular set.
CheckReport suite_weak_form(const AlphaParametrization& p, std::span<const double> times,
                            std::span<const double> grid, double tolerance = 1e-10,
                            const Tolerances& tol = {});

// Central difference of t -> y(alpha,t) against u_along; exact up to rounding
// because y is quadratic in t.
CheckReport suite_characteristic_ode(const AlphaParametrization& p, std::span<const double> grid,
                                     std::span<const double> times, double h,
                                     double tolerance = 1e-10);

// Brute-force CDF of X#(g dxi) on a uniform grid of `cells` points, compared
// against the decomposed measure. Requires cells >= 1000.
CheckReport oracle_pushforward(const PiecewiseLinear& X, const PiecewiseConstant& g,
                               std::size_t cells, double tolerance = 1e-9,
                               const Tolerances& tol = {});

// For every atom of mu(t): the source interval sees profile slope -2/t, the
// mass is (4/t^2) times the source length, the location matches
// x + u(x) t + (t^2/4) mu((-inf,x)), and no source lies in the flattened
// initial singular support. Requires t != 0.
CheckReport suite_structure(const AlphaParametrization& p, double t, double tolerance = 1e-10,
                            const Tolerances& tol = {});

// Seeded generator covering both time signs of concentration and atom
// dissolution: 1-8 profile pieces with slopes in [-4, 4] on a window inside
// [-10, 10], and 0-3 atoms with masses up to 2.
InitialDatum random_datum(std::mt19937_64& rng);

// Piece midpoints, breakpoints +- 1e-6, and `extra` uniform draws over the
// widened window.
std::vector<double> sample_grid(const AlphaParametrization& p, std::mt19937_64& rng,
                                std::size_t extra = 256);

// A time in [lo, hi] keeping `margin` away from every concentration time
// (and from 0 when the datum carries initial atoms).
double pick_regular_time(const AlphaParametrization& p, std::mt19937_64& rng, double lo,
                         double hi, double margin = 0.05);

}  // namespace hsx
