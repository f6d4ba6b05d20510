#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hsx/pwfun.hpp"

using namespace hsx;

namespace {

// profile of the textbook blow-up datum: 0, -x, -1
PiecewiseLinear intro_profile() {
    return make_piecewise_linear({0.0, 1.0}, {0.0, -1.0}, 0.0, 0.0);
}

// its pseudo-inverse map, derived by hand from G(x) = x + min(max(x,0),1):
// alpha, alpha/2, alpha - 1 on (-inf,0), (0,2), (2,inf)
MonotoneGraph intro_graph() {
    MonotoneGraph g;
    g.base = make_piecewise_linear({0.0, 1.0}, {0.0, 2.0}, 1.0, 1.0);
    return g;
}

MonotoneGraph atom_graph(double mass) {
    MonotoneGraph g;
    g.base = identity_function();
    g.jumps = {{0.0, mass}};
    return g;
}

MonotoneGraph random_graph(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uu(0.0, 1.0);
    std::uniform_int_distribution<int> npieces(1, 5);
    std::uniform_int_distribution<int> natoms(0, 3);
    const int n = npieces(rng);
    std::vector<double> xs{-3.0 + 2.0 * uu(rng)};
    std::vector<double> ys{xs.front()};
    for (int i = 0; i < n; ++i) {
        const double w = 0.3 + 2.0 * uu(rng);
        const double density = 3.0 * uu(rng);
        xs.push_back(xs.back() + w);
        ys.push_back(ys.back() + w * (1.0 + density));
    }
    MonotoneGraph g;
    g.base = make_piecewise_linear(std::move(xs), std::move(ys), 1.0, 1.0);
    const int k = natoms(rng);
    double loc = -2.5;
    for (int i = 0; i < k; ++i) {
        loc += 0.3 + 2.0 * uu(rng);
        g.jumps.emplace_back(loc, 0.1 + 2.0 * uu(rng));
    }
    return g;
}

}  // namespace

TEST_CASE("evaluate: identity and the intro profile") {
    CHECK(identity_function()(3.5) == 3.5);
    const PiecewiseLinear u = intro_profile();
    CHECK(u(0.5) == -0.5);
    CHECK(u(-7.0) == 0.0);
    CHECK(u(42.0) == -1.0);
    const PiecewiseConstant ux = derivative(u);
    CHECK(ux(0.5) == -1.0);
    CHECK(ux(-1.0) == 0.0);
    CHECK(ux(2.0) == 0.0);
    CHECK(ux(0.0) == -1.0);  // right-limit at a breakpoint
}

TEST_CASE("derivative: identity, intro profile, intro pseudo-inverse") {
    const PiecewiseConstant one = derivative(identity_function());
    CHECK(one(-5.0) == 1.0);
    CHECK(one(5.0) == 1.0);

    const PiecewiseLinear xbar = pseudo_inverse_curve(intro_graph());
    const PiecewiseConstant xslope = derivative(xbar);
    CHECK(xslope(-1.0) == 1.0);
    CHECK(xslope(1.0) == 0.5);
    CHECK(xslope(3.0) == 1.0);
}

TEST_CASE("pseudo-inverse: identity graph, intro graph, single atom") {
    MonotoneGraph id;
    id.base = identity_function();
    for (double a : {-3.0, 0.0, 0.7, 11.0}) CHECK(pseudo_inverse(id, a) == a);

    CHECK(pseudo_inverse(intro_graph(), 1.0) == 0.5);
    CHECK(pseudo_inverse(intro_graph(), -2.0) == -2.0);
    CHECK(pseudo_inverse(intro_graph(), 3.0) == 2.0);

    const MonotoneGraph ga = atom_graph(2.0);
    const PiecewiseLinear inv = pseudo_inverse_curve(ga);
    CHECK(inv(0.0) == 0.0);
    CHECK(inv(1.0) == 0.0);
    CHECK(inv(2.0) == 0.0);
    CHECK(inv(2.5) == 0.5);
    CHECK(inv(-1.0) == -1.0);
}

TEST_CASE("pseudo-inverse sandwich and regularity over random graphs") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ua(-8.0, 12.0);
    for (int trial = 0; trial < 40; ++trial) {
        const MonotoneGraph g = random_graph(rng);
        const PiecewiseLinear inv = pseudo_inverse_curve(g);
        double prev_a = 0.0, prev_x = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double a = ua(rng);
            const double x = inv(a);
            // G(x-) <= alpha <= G(x+)
            CHECK(g.value_left(x) <= a + 1e-9);
            CHECK(g.value_right(x) >= a - 1e-9);
            if (i > 0) {
                const double da = a - prev_a, dx = x - prev_x;
                CHECK(da * dx >= -1e-12);                       // nondecreasing
                CHECK(std::fabs(dx) <= std::fabs(da) + 1e-12);  // 1-Lipschitz
            }
            prev_a = a;
            prev_x = x;
        }
    }
}

TEST_CASE("compose_monotone: identity, intro, atom-flattened") {
    const PiecewiseLinear u = intro_profile();
    const PiecewiseLinear same = compose_monotone(u, identity_function());
    for (double x : {-1.0, 0.25, 0.75, 2.0}) CHECK(same(x) == u(x));

    // u o x_bar for the intro datum: 0, -alpha/2, -1
    const PiecewiseLinear v = compose_monotone(u, pseudo_inverse_curve(intro_graph()));
    CHECK(v(-1.0) == 0.0);
    CHECK(v(1.0) == -0.5);
    CHECK(v(0.5) == -0.25);
    CHECK(v(3.0) == -1.0);

    // constant profile composed with the atom-flattened inverse stays zero
    const PiecewiseLinear flat =
        compose_monotone(constant_function(0.0), pseudo_inverse_curve(atom_graph(1.5)));
    for (double a : {-1.0, 0.0, 0.7, 1.5, 4.0}) CHECK(flat(a) == 0.0);
}

TEST_CASE("compose_monotone agrees with pointwise evaluation") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uu(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        // random f, random nondecreasing g with occasional flat pieces
        std::vector<double> fx{-2.0}, fy{uu(rng)};
        for (int i = 0; i < 5; ++i) {
            fx.push_back(fx.back() + 0.2 + uu(rng));
            fy.push_back(2.0 * uu(rng) - 1.0);
        }
        const PiecewiseLinear f =
            make_piecewise_linear(fx, fy, uu(rng) - 0.5, uu(rng) - 0.5);
        std::vector<double> gx{-3.0}, gy{-4.0 + uu(rng)};
        for (int i = 0; i < 5; ++i) {
            gx.push_back(gx.back() + 0.2 + uu(rng));
            gy.push_back(gy.back() + (uu(rng) < 0.3 ? 0.0 : 1.5 * uu(rng)));
        }
        const PiecewiseLinear g = make_piecewise_linear(gx, gy, 0.8, 1.3);
        const PiecewiseLinear h = compose_monotone(f, g);
        std::uniform_real_distribution<double> ux(-6.0, 8.0);
        for (int i = 0; i < 1000; ++i) {
            const double a = ux(rng);
            worst = std::max(worst, std::fabs(h(a) - f(g(a))));
        }
    }
    CHECK(worst <= 1e-13);  // both sides are the same affine arithmetic up to rounding
}

TEST_CASE("compose_monotone rejects a decreasing map") {
    const PiecewiseLinear down = make_piecewise_linear({0.0, 1.0}, {1.0, 0.0}, 0.0, 0.0);
    CHECK_THROWS_AS(compose_monotone(intro_profile(), down), std::invalid_argument);
}

TEST_CASE("integrate: zero, intro energy density, atom plateau") {
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(integrate(make_piecewise_constant({}, {0.0}), -inf, inf) == 0.0);

    // f = 1 - x_bar' of the intro datum: 1/2 on (0, 2)
    const PiecewiseConstant f = derivative(make_piecewise_linear(
        {0.0, 2.0}, {0.0, 1.0}, 0.0, 0.0));  // slope 1/2 inside, 0 outside
    CHECK(integrate(f, -inf, inf) == 1.0);
    CHECK(integrate(f, 0.0, 1.0) == 0.5);

    // f of the atom datum with mass 2: identically 1 on (0, 2)
    const PiecewiseConstant fa = make_piecewise_constant({0.0, 2.0}, {0.0, 1.0, 0.0});
    CHECK(integrate(fa, 0.0, 2.0) == 2.0);
    CHECK(integrate(fa, -inf, 1.0) == 1.0);

    const PiecewiseConstant bad = make_piecewise_constant({0.0}, {1.0, 0.0});
    CHECK_THROWS_AS(integrate(bad, -inf, 0.0), std::invalid_argument);
}

TEST_CASE("consolidate on piecewise-linear data") {
    // three collinear points collapse to their endpoints
    const PiecewiseLinear three =
        make_piecewise_linear({0.0, 1.0, 2.0}, {0.0, 1.0, 2.0}, 0.0, 0.0);
    const PiecewiseLinear two = consolidate(three, 1e-12, 1e-12);
    CHECK(two.size() == 2);
    CHECK(two(1.0) == 1.0);

    // near-duplicate breakpoints merge to one
    const PiecewiseLinear dup =
        make_piecewise_linear({0.0, 1e-13, 1.0}, {0.0, 0.0, 1.0}, 0.0, 0.0);
    CHECK(consolidate(dup, 1e-12, 1e-12).size() == 2);

    // zero tolerances return the input unchanged
    const PiecewiseLinear kept = consolidate(three, 0.0, 0.0);
    CHECK(kept.size() == 3);
}

TEST_CASE("consolidate on piecewise-constant data") {
    const PiecewiseConstant g =
        make_piecewise_constant({0.0, 1.0, 2.0}, {0.0, 3.0, 3.0, 0.0});
    const PiecewiseConstant merged = consolidate(g, 1e-12, 1e-12);
    CHECK(merged.xs.size() == 2);
    CHECK(merged(0.5) == 3.0);
    CHECK(merged(1.5) == 3.0);
    CHECK(consolidate(g, 0.0, 0.0).xs.size() == 3);
}

TEST_CASE("derivative of cumulative recovers the density a.e.") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> uu(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> xs{-1.0};
        std::vector<double> vals{0.0};
        for (int i = 0; i < 6; ++i) {
            xs.push_back(xs.back() + 0.1 + 2.0 * uu(rng));
            vals.push_back(4.0 * uu(rng));
        }
        vals.push_back(0.0);
        const PiecewiseConstant g = make_piecewise_constant(xs, vals);
        const PiecewiseConstant back = derivative(cumulative(g));
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            const double mid = 0.5 * (xs[i] + xs[i + 1]);
            CHECK(std::fabs(back(mid) - g(mid)) <= 1e-13);
        }
        CHECK(back(xs.front() - 1.0) == 0.0);
        CHECK(back(xs.back() + 1.0) == 0.0);
    }
}

TEST_CASE("cumulative rejects non-integrable tails") {
    CHECK_THROWS_AS(cumulative(make_piecewise_constant({0.0}, {0.5, 0.0})),
                    std::invalid_argument);
}
