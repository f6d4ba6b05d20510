#pragma once

// Finite nonnegative Radon measures on the line: an absolutely continuous part
// with piecewise-constant density plus finitely many atoms. In this
// representation the singular-continuous part is structurally empty; Cantor-type
// measures are reachable only as limits of atom families.

#include <optional>
#include <vector>

#include "hsx/pwfun.hpp"

namespace hsx {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
};

struct Atom {
    double x = 0.0;
    double mass = 0.0;
    // Provenance: the span of the generating flat run, in the domain
    // coordinate of the map that produced this atom (alpha for the
    // characteristic push-forward; snapshots relabel it to x-space).
    std::optional<Interval> source;
};

enum class Endpoint { open, closed };

struct RadonMeasure {
    PiecewiseConstant density;  // >= 0, zero tails
    std::vector<Atom> atoms;    // strictly increasing locations, masses > 0
};

RadonMeasure make_measure(PiecewiseConstant density, std::vector<Atom> atoms);
RadonMeasure zero_measure();

// mu((-inf, x)) for open, mu((-inf, x]) for closed.
double cdf(const RadonMeasure& mu, double x, Endpoint ep);
double total_mass(const RadonMeasure& mu);

// The push-forward X#(g dxi) of the density g under a nondecreasing map X,
// split into its Lebesgue components. Pieces where X climbs contribute the
// density g / X' on the image interval; every maximal flat run of X carrying
// positive g-mass collapses to an atom at its image point, labeled with the
// generating span. Atoms landing within tol.x of each other merge.
RadonMeasure pushforward_decompose(const PiecewiseLinear& X, const PiecewiseConstant& g,
                                   const Tolerances& tol = {});

// Sup distance of the cumulative distributions, probed at both endpoint
// conventions. Candidate points closer than tol_x are treated as one location,
// so atoms displaced by mere rounding compare as aligned.
double cdf_sup_distance(const RadonMeasure& mu, const RadonMeasure& nu, double tol_x = 1e-12);

// O(log n) repeated CDF evaluation.
class CdfEvaluator {
  public:
    explicit CdfEvaluator(const RadonMeasure& mu);
    double closed(double x) const;
    double open(double x) const;

  private:
    PiecewiseLinear cum_;
    std::vector<double> atom_x_;
    std::vector<double> atom_prefix_;  // atom_prefix_[i] = mass of first i atoms
};

}  // namespace hsx
