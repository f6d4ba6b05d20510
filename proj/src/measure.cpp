#include "hsx/measure.hpp"

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

// merge adjacent pieces with bitwise-equal values
PiecewiseConstant merge_equal_pieces(const PiecewiseConstant& g) {
    std::vector<double> xs;
    std::vector<double> values{g.values.front()};
    for (std::size_t i = 0; i < g.xs.size(); ++i) {
        if (g.values[i + 1] == values.back()) continue;
        xs.push_back(g.xs[i]);
        values.push_back(g.values[i + 1]);
    }
    return make_piecewise_constant(std::move(xs), std::move(values));
}

}  // namespace

RadonMeasure make_measure(PiecewiseConstant density, std::vector<Atom> atoms) {
    for (double v : density.values) require(v >= 0.0, "density must be nonnegative");
    require(density.values.front() == 0.0 && density.values.back() == 0.0,
            "density must vanish at infinity");
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        require(std::isfinite(atoms[i].x) && std::isfinite(atoms[i].mass),
                "atoms must be finite");
        require(atoms[i].mass > 0.0, "atom mass must be positive");
        if (i > 0) require(atoms[i].x > atoms[i - 1].x, "atom locations must be strictly increasing");
    }
    return RadonMeasure{std::move(density), std::move(atoms)};
}

RadonMeasure zero_measure() {
    return RadonMeasure{make_piecewise_constant({}, {0.0}), {}};
}

double cdf(const RadonMeasure& mu, double x, Endpoint ep) {
    double v = integrate(mu.density, -kInf, x);
    for (const Atom& a : mu.atoms) {
        if (a.x < x || (ep == Endpoint::closed && a.x == x)) v += a.mass;
        if (a.x >= x) break;
    }
    return v;
}

double total_mass(const RadonMeasure& mu) {
    double v = integrate(mu.density, -kInf, kInf);
    for (const Atom& a : mu.atoms) v += a.mass;
    return v;
}

RadonMeasure pushforward_decompose(const PiecewiseLinear& X, const PiecewiseConstant& g,
                                   const Tolerances& tol) {
    require(X.slope_left >= 0 && X.slope_right >= 0, "push-forward map must be nondecreasing");
    for (std::size_t i = 0; i + 1 < X.size(); ++i)
        require(X.ys[i + 1] >= X.ys[i], "push-forward map must be nondecreasing");
    for (double v : g.values) require(v >= 0.0, "density must be nonnegative");
    require(g.values.front() == 0.0 && g.values.back() == 0.0, "density must vanish at infinity");

    std::vector<double> grid = X.xs;
    grid.insert(grid.end(), g.xs.begin(), g.xs.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<double> img(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) img[k] = X(grid[k]);
    for (std::size_t k = 0; k + 1 < grid.size(); ++k)  // guard interpolation wobble
        img[k + 1] = std::max(img[k + 1], img[k]);

    struct AcPiece {
        double xlo, xhi, value;
    };
    std::vector<AcPiece> ac;
    std::vector<Atom> atoms;

    bool in_flat = false;
    double flat_lo = 0.0, flat_hi = 0.0, flat_img = 0.0, flat_mass = 0.0;
    auto close_flat = [&] {
        if (in_flat && flat_mass > 0.0)
            atoms.push_back(Atom{flat_img, flat_mass, Interval{flat_lo, flat_hi}});
        in_flat = false;
    };

    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        const double dxi = grid[k + 1] - grid[k];
        const double gv = g(grid[k] + 0.5 * dxi);
        const double w = img[k + 1] - img[k];
        if (w / dxi <= tol.slope) {
            if (!in_flat) {
                in_flat = true;
                flat_lo = grid[k];
                flat_img = img[k];
                flat_mass = 0.0;
            }
            flat_mass += gv * dxi;
            flat_hi = grid[k + 1];
        } else {
            close_flat();
            // density chosen so the piece carries exactly gv * dxi of mass
            if (gv != 0.0) ac.push_back(AcPiece{img[k], img[k + 1], gv * dxi / w});
        }
    }
    close_flat();

    // atoms whose image points coincide up to tol.x concentrate together
    std::vector<Atom> merged;
    for (Atom& a : atoms) {
        if (!merged.empty() && a.x - merged.back().x <= tol.x) {
            Atom& m = merged.back();
            m.mass += a.mass;
            if (m.source && a.source)
                m.source = Interval{std::min(m.source->lo, a.source->lo),
                                    std::max(m.source->hi, a.source->hi)};
        } else {
            merged.push_back(a);
        }
    }

    // assemble the density from the ordered image intervals; gaps between
    // non-contiguous pieces read zero
    std::vector<double> dx;
    std::vector<double> dv{0.0};
    for (const AcPiece& p : ac) {
        if (!dx.empty() && p.xlo == dx.back()) {
            dv.back() = p.value;  // contiguous: overwrite the closing zero
        } else {
            dx.push_back(p.xlo);
            dv.push_back(p.value);
        }
        dx.push_back(p.xhi);
        dv.push_back(0.0);
    }

    PiecewiseConstant density = merge_equal_pieces(make_piecewise_constant(dx, dv));
    return make_measure(std::move(density), std::move(merged));
}

double cdf_sup_distance(const RadonMeasure& mu, const RadonMeasure& nu, double tol_x) {
    std::vector<double> pts;
    auto collect = [&pts](const RadonMeasure& m) {
        pts.insert(pts.end(), m.density.xs.begin(), m.density.xs.end());
        for (const Atom& a : m.atoms) pts.push_back(a.x);
    };
    collect(mu);
    collect(nu);
    std::sort(pts.begin(), pts.end());

    const CdfEvaluator fmu(mu), fnu(nu);
    double worst = std::fabs(total_mass(mu) - total_mass(nu));
    std::size_t i = 0;
    while (i < pts.size()) {
        std::size_t j = i;
        while (j + 1 < pts.size() && pts[j + 1] - pts[j] <= tol_x) ++j;
        const double lo = pts[i], hi = pts[j];
        worst = std::max(worst, std::fabs(fmu.open(lo) - fnu.open(lo)));
        worst = std::max(worst, std::fabs(fmu.closed(hi) - fnu.closed(hi)));
        i = j + 1;
    }
    return worst;
}

CdfEvaluator::CdfEvaluator(const RadonMeasure& mu) : cum_(cumulative(mu.density)) {
    atom_prefix_.push_back(0.0);
    for (const Atom& a : mu.atoms) {
        atom_x_.push_back(a.x);
        atom_prefix_.push_back(atom_prefix_.back() + a.mass);
    }
}

double CdfEvaluator::closed(double x) const {
    const std::size_t n = std::upper_bound(atom_x_.begin(), atom_x_.end(), x) - atom_x_.begin();
    return cum_(x) + atom_prefix_[n];
}

double CdfEvaluator::open(double x) const {
    const std::size_t n = std::lower_bound(atom_x_.begin(), atom_x_.end(), x) - atom_x_.begin();
    return cum_(x) + atom_prefix_[n];
}

}  // namespace hsx
