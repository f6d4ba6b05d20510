#include "hsx/pwfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hsx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

void check_finite_increasing(const std::vector<double>& xs, const char* what) {
    require(!xs.empty(), "breakpoint list must be nonempty");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        require(std::isfinite(xs[i]), what);
        if (i > 0) require(xs[i] > xs[i - 1], "breakpoints must be strictly increasing");
    }
}

}  // namespace

double PiecewiseLinear::operator()(double x) const {
    if (x <= xs.front()) return ys.front() + (x - xs.front()) * slope_left;
    if (x >= xs.back()) return ys.back() + (x - xs.back()) * slope_right;
    const std::size_t i = std::upper_bound(xs.begin(), xs.end(), x) - xs.begin() - 1;
    const double s = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
    return ys[i] + (x - xs[i]) * s;
}

double PiecewiseLinear::slope_of_piece(std::size_t p) const {
    if (p == 0) return slope_left;
    if (p >= size()) return slope_right;
    return (ys[p] - ys[p - 1]) / (xs[p] - xs[p - 1]);
}

double PiecewiseLinear::slope_before(double x) const {
    const std::size_t p = std::lower_bound(xs.begin(), xs.end(), x) - xs.begin();
    return slope_of_piece(p);
}

double PiecewiseLinear::slope_after(double x) const {
    const std::size_t p = std::upper_bound(xs.begin(), xs.end(), x) - xs.begin();
    return slope_of_piece(p);
}

PiecewiseLinear make_piecewise_linear(std::vector<double> xs, std::vector<double> ys,
                                      double slope_left, double slope_right) {
    check_finite_increasing(xs, "breakpoints must be finite");
    require(xs.size() == ys.size(), "breakpoints and values must have equal length");
    for (double y : ys) require(std::isfinite(y), "values must be finite");
    require(std::isfinite(slope_left) && std::isfinite(slope_right), "tail slopes must be finite");
    PiecewiseLinear f;
    f.xs = std::move(xs);
    f.ys = std::move(ys);
    f.slope_left = slope_left;
    f.slope_right = slope_right;
    return f;
}

PiecewiseLinear constant_function(double value) {
    return make_piecewise_linear({0.0}, {value}, 0.0, 0.0);
}

PiecewiseLinear identity_function() {
    return make_piecewise_linear({0.0}, {0.0}, 1.0, 1.0);
}

double PiecewiseConstant::operator()(double x) const {
    const std::size_t p = std::upper_bound(xs.begin(), xs.end(), x) - xs.begin();
    return values[p];
}

PiecewiseConstant make_piecewise_constant(std::vector<double> xs, std::vector<double> values) {
    require(values.size() == xs.size() + 1, "piecewise-constant needs one value per piece");
    if (!xs.empty()) check_finite_increasing(xs, "breakpoints must be finite");
    for (double v : values) require(std::isfinite(v), "values must be finite");
    PiecewiseConstant g;
    g.xs = std::move(xs);
    g.values = std::move(values);
    return g;
}

PiecewiseConstant derivative(const PiecewiseLinear& f) {
    std::vector<double> values;
    values.reserve(f.size() + 1);
    for (std::size_t p = 0; p <= f.size(); ++p) values.push_back(f.slope_of_piece(p));
    return make_piecewise_constant(f.xs, std::move(values));
}

PiecewiseLinear cumulative(const PiecewiseConstant& g) {
    require(g.values.front() == 0.0 && g.values.back() == 0.0,
            "cumulative requires zero tail values");
    if (g.xs.empty()) return constant_function(0.0);
    std::vector<double> ys(g.xs.size());
    ys[0] = 0.0;
    for (std::size_t i = 0; i + 1 < g.xs.size(); ++i)
        ys[i + 1] = ys[i] + g.values[i + 1] * (g.xs[i + 1] - g.xs[i]);
    return make_piecewise_linear(g.xs, std::move(ys), 0.0, 0.0);
}

PiecewiseConstant square(const PiecewiseConstant& g) {
    std::vector<double> values(g.values.size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = g.values[i] * g.values[i];
    return make_piecewise_constant(g.xs, std::move(values));
}

double integrate(const PiecewiseConstant& g, double a, double b) {
    require(!(a > b), "integration bounds must satisfy a <= b");
    if (a == b) return 0.0;
    if (a == -kInf) require(g.values.front() == 0.0, "non-integrable left tail");
    if (b == kInf) require(g.values.back() == 0.0, "non-integrable right tail");
    if (g.xs.empty()) {
        // single constant piece; reachable only with value 0 for infinite bounds
        if (a == -kInf || b == kInf) return 0.0;
        return g.values[0] * (b - a);
    }
    const double lo = (a == -kInf) ? g.xs.front() : a;
    const double hi = (b == kInf) ? g.xs.back() : b;
    if (lo >= hi) {
        if (a == -kInf || b == kInf) return 0.0;
        return g(lo) * (hi - lo);  // hi < lo impossible here; equal gives 0
    }
    double total = 0.0;
    // contribution left of the first / right of the last breakpoint
    if (lo < g.xs.front()) total += g.values.front() * (std::min(hi, g.xs.front()) - lo);
    if (hi > g.xs.back()) total += g.values.back() * (hi - std::max(lo, g.xs.back()));
    for (std::size_t i = 0; i + 1 < g.xs.size(); ++i) {
        const double plo = std::max(lo, g.xs[i]);
        const double phi = std::min(hi, g.xs[i + 1]);
        if (phi > plo) total += g.values[i + 1] * (phi - plo);
    }
    return total;
}

PiecewiseLinear consolidate(const PiecewiseLinear& f, double tol_x, double tol_v) {
    require(tol_x >= 0 && tol_v >= 0, "tolerances must be nonnegative");
    if (tol_x == 0.0 && tol_v == 0.0) return f;
    // near-coincident abscissae: keep the first of each cluster
    std::vector<double> xs, ys;
    xs.reserve(f.size());
    ys.reserve(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!xs.empty() && f.xs[i] - xs.back() <= tol_x) continue;
        xs.push_back(f.xs[i]);
        ys.push_back(f.ys[i]);
    }
    // drop interior points collinear with their kept neighbours
    std::vector<double> ox, oy;
    ox.reserve(xs.size());
    oy.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        while (ox.size() >= 2) {
            const double x0 = ox[ox.size() - 2], y0 = oy[oy.size() - 2];
            const double x1 = ox.back(), y1 = oy.back();
            const double chord = y0 + (x1 - x0) * (ys[i] - y0) / (xs[i] - x0);
            if (std::fabs(y1 - chord) <= tol_v) {
                ox.pop_back();
                oy.pop_back();
            } else {
                break;
            }
        }
        ox.push_back(xs[i]);
        oy.push_back(ys[i]);
    }
    // endpoints absorbed by the tails when collinear with them
    if (ox.size() >= 2) {
        const double pred = oy[1] - (ox[1] - ox[0]) * f.slope_left;
        if (std::fabs(oy[0] - pred) <= tol_v) {
            ox.erase(ox.begin());
            oy.erase(oy.begin());
        }
    }
    if (ox.size() >= 2) {
        const std::size_t n = ox.size();
        const double pred = oy[n - 2] + (ox[n - 1] - ox[n - 2]) * f.slope_right;
        if (std::fabs(oy[n - 1] - pred) <= tol_v) {
            ox.pop_back();
            oy.pop_back();
        }
    }
    return make_piecewise_linear(std::move(ox), std::move(oy), f.slope_left, f.slope_right);
}

PiecewiseConstant consolidate(const PiecewiseConstant& g, double tol_x, double tol_v) {
    require(tol_x >= 0 && tol_v >= 0, "tolerances must be nonnegative");
    if (tol_x == 0.0 && tol_v == 0.0) return g;
    // merge adjacent pieces whose values agree within tol_v
    std::vector<double> xs;
    std::vector<double> values{g.values.front()};
    for (std::size_t i = 0; i < g.xs.size(); ++i) {
        if (std::fabs(g.values[i + 1] - values.back()) <= tol_v) continue;
        xs.push_back(g.xs[i]);
        values.push_back(g.values[i + 1]);
    }
    // absorb sliver pieces narrower than tol_x into their left neighbour when
    // the value step stays within tol_v
    std::vector<double> ox;
    std::vector<double> ov{values.front()};
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!ox.empty() && xs[i] - ox.back() <= tol_x &&
            std::fabs(values[i + 1] - ov[ov.size() - 2]) <= tol_v) {
            ox.back() = xs[i];
            ov.back() = values[i + 1];
            continue;
        }
        ox.push_back(xs[i]);
        ov.push_back(values[i + 1]);
    }
    return make_piecewise_constant(std::move(ox), std::move(ov));
}

PiecewiseLinear compose_monotone(const PiecewiseLinear& f, const PiecewiseLinear& g) {
    require(g.slope_left >= 0 && g.slope_right >= 0, "composition requires nondecreasing g");
    for (std::size_t i = 0; i + 1 < g.size(); ++i)
        require(g.ys[i + 1] >= g.ys[i], "composition requires nondecreasing g");

    std::vector<double> cand = g.xs;
    for (double b : f.xs) {
        if (g.slope_left > 0 && b < g.ys.front())
            cand.push_back(g.xs.front() + (b - g.ys.front()) / g.slope_left);
        for (std::size_t i = 0; i + 1 < g.size(); ++i) {
            const double ylo = g.ys[i], yhi = g.ys[i + 1];
            if (ylo < b && b < yhi)
                cand.push_back(g.xs[i] + (b - ylo) * (g.xs[i + 1] - g.xs[i]) / (yhi - ylo));
        }
        if (g.slope_right > 0 && b > g.ys.back())
            cand.push_back(g.xs.back() + (b - g.ys.back()) / g.slope_right);
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    std::vector<double> vals(cand.size());
    for (std::size_t i = 0; i < cand.size(); ++i) vals[i] = f(g(cand[i]));

    // beyond the outermost candidate no f-breakpoint is crossed, so a rising
    // tail of g lands in the corresponding tail of f
    const double sl = (g.slope_left == 0.0) ? 0.0 : f.slope_left * g.slope_left;
    const double sr = (g.slope_right == 0.0) ? 0.0 : f.slope_right * g.slope_right;
    return make_piecewise_linear(std::move(cand), std::move(vals), sl, sr);
}

double MonotoneGraph::value_left(double x) const {
    double v = base(x);
    for (const auto& [loc, h] : jumps) {
        if (loc >= x) break;
        v += h;
    }
    return v;
}

double MonotoneGraph::value_right(double x) const {
    double v = base(x);
    for (const auto& [loc, h] : jumps) {
        if (loc > x) break;
        v += h;
    }
    return v;
}

PiecewiseLinear pseudo_inverse_curve(const MonotoneGraph& g) {
    require(g.base.slope_left > 0 && g.base.slope_right > 0,
            "pseudo-inverse requires a strictly increasing graph");
    for (std::size_t p = 1; p < g.base.size(); ++p)
        require(g.base.slope_of_piece(p) > 0, "pseudo-inverse requires a strictly increasing graph");
    for (std::size_t j = 0; j < g.jumps.size(); ++j) {
        require(g.jumps[j].second > 0, "jump heights must be positive");
        if (j > 0) require(g.jumps[j].first > g.jumps[j - 1].first, "jumps must be sorted");
    }

    std::vector<double> pts = g.base.xs;
    for (const auto& [loc, h] : g.jumps) pts.push_back(loc);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    // trace the completed graph; swapping coordinates turns vertical jump
    // segments into exactly flat spans of the inverse
    std::vector<double> gx, gy;
    gx.reserve(pts.size() + g.jumps.size());
    gy.reserve(pts.size() + g.jumps.size());
    double jump_sum = 0.0;
    std::size_t ji = 0;
    for (double x : pts) {
        const double lo = g.base(x) + jump_sum;
        gx.push_back(lo);
        gy.push_back(x);
        if (ji < g.jumps.size() && g.jumps[ji].first == x) {
            jump_sum += g.jumps[ji].second;
            gx.push_back(lo + g.jumps[ji].second);
            gy.push_back(x);
            ++ji;
        }
    }
    return make_piecewise_linear(std::move(gx), std::move(gy), 1.0 / g.base.slope_left,
                                 1.0 / g.base.slope_right);
}

double pseudo_inverse(const MonotoneGraph& g, double alpha) {
    return pseudo_inverse_curve(g)(alpha);
}

}  // namespace hsx
