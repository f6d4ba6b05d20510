#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "hsx/datum_io.hpp"
#include "hsx/evolution.hpp"
#include "hsx/verify.hpp"

using namespace hsx;

namespace {

double sup_diff(const PiecewiseLinear& a, const PiecewiseLinear& b, double lo, double hi, int n) {
    double worst = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = lo + (hi - lo) * i / n;
        worst = std::max(worst, std::fabs(a(x) - b(x)));
    }
    return worst;
}

}  // namespace

TEST_CASE("evolve at t = 0 reproduces the datum") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const InitialDatum d = random_datum(rng);
        const AlphaParametrization p = build(d);
        const Snapshot snap = evolve(p, 0.0);
        CHECK(sup_diff(snap.u, d.u_bar, d.u_bar.xs.front() - 2.0, d.u_bar.xs.back() + 2.0, 500) <=
              1e-12);
        CHECK(cdf_sup_distance(snap.mu, energy_measure(d)) <= 1e-12 * (1.0 + p.energy));
        CHECK(snap.is_singular == !d.atoms.empty());
    }
}

TEST_CASE("intro datum: blow-up at t = 2 and the closed form at t = 1") {
    const AlphaParametrization p = build(demo_intro());

    const Snapshot s2 = evolve(p, 2.0);
    CHECK(s2.is_singular);
    REQUIRE(s2.mu.atoms.size() == 1);
    CHECK(s2.mu.atoms[0].x == 0.0);
    CHECK(s2.mu.atoms[0].mass == 1.0);
    REQUIRE(s2.mu.atoms[0].source.has_value());
    CHECK(s2.mu.atoms[0].source->lo == 0.0);  // source interval in x-space
    CHECK(s2.mu.atoms[0].source->hi == 1.0);
    for (int i = 0; i <= 1000; ++i) CHECK(std::fabs(s2.u(-2.0 + 4.0 * i / 1000.0)) <= 1e-10);

    const Snapshot s1 = evolve(p, 1.0);
    CHECK(!s1.is_singular);
    auto closed_form = [](double x) {
        if (x <= 0.0) return 0.0;
        if (x <= 0.25) return -2.0 * x;
        return -0.5;
    };
    for (int i = 0; i <= 1000; ++i) {
        const double x = -1.0 + 2.5 * i / 1000.0;
        CHECK(std::fabs(s1.u(x) - closed_form(x)) <= 1e-12);
    }
    CHECK(s1.mu.density(0.1) == 4.0);
    CHECK(std::fabs(total_mass(s1.mu) - 1.0) <= 1e-12);
}

TEST_CASE("evaluate_u: far-field values and an interior point") {
    const AlphaParametrization p = build(demo_intro());
    CHECK(evaluate_u(p, 0.125, 1.0) == -0.25);
    for (double t : {-2.0, -1.0, 0.5, 1.0, 3.0}) {
        CHECK(evaluate_u(p, -50.0, t) == 0.0);            // left limit of the datum
        CHECK(evaluate_u(p, 50.0, t) == -1.0 + 0.5 * t);  // right limit + E t / 2
    }
}

TEST_CASE("predict_singular_times") {
    CHECK(predict_singular_times(build(make_datum(constant_function(2.5), {}))).empty());

    const auto intro_events = predict_singular_times(build(demo_intro()));
    REQUIRE(intro_events.size() == 1);
    CHECK(intro_events[0].t_star == 2.0);
    CHECK(intro_events[0].slope == -1.0);
    REQUIRE(intro_events[0].atoms.size() == 1);
    CHECK(intro_events[0].atoms[0].x == 0.0);
    CHECK(intro_events[0].atoms[0].mass == 1.0);
    CHECK(intro_events[0].atoms[0].source->lo == 0.0);
    CHECK(intro_events[0].atoms[0].source->hi == 1.0);

    // pure atom data never concentrate
    CHECK(predict_singular_times(build(demo_atom(2.0))).empty());

    // positive slope concentrates at negative time
    const InitialDatum up =
        make_datum(make_piecewise_linear({0.0, 1.0}, {0.0, 2.0}, 0.0, 0.0), {});
    const auto up_events = predict_singular_times(build(up));
    REQUIRE(up_events.size() == 1);
    CHECK(up_events[0].t_star == -1.0);  // -2 / 2
    CHECK(up_events[0].atoms.size() == 1);
}

TEST_CASE("cantor demo: events per level and the kept-set mass at t = 2") {
    const int depth = 4;
    const AlphaParametrization p = build(demo_cantor(depth));
    const auto events = predict_singular_times(p);
    REQUIRE(events.size() == static_cast<std::size_t>(depth));  // kept set + levels 2..depth

    CHECK(std::fabs(events[0].t_star - 2.0) <= 1e-12);
    CHECK(events[0].atoms.size() == 16);  // 2^depth
    double mass = 0.0;
    for (const Atom& a : events[0].atoms) mass += a.mass;
    CHECK(std::fabs(mass - 0.53125) <= 1e-12);  // 1/2 + 2^-(depth+1)

    // levels n = 4, 3, 2 concentrate at 2n/(n-1) with 2^(n-1) atoms,
    // ordered by increasing |t|
    const std::vector<double> expected{8.0 / 3.0, 3.0, 4.0};
    const std::vector<std::size_t> counts{8, 4, 2};
    const std::vector<int> levels{4, 3, 2};
    REQUIRE(events.size() == 4);
    for (std::size_t k = 1; k < events.size(); ++k) {
        CHECK(std::fabs(events[k].t_star - expected[k - 1]) <= 1e-12);
        CHECK(events[k].atoms.size() == counts[k - 1]);
        const double width = std::pow(0.25, levels[k - 1]);
        for (const Atom& a : events[k].atoms)
            CHECK(std::fabs(a.source->length() - width) <= 1e-12);
    }
}

TEST_CASE("flow map: identity at t = 0 and the intro value") {
    const InitialDatum d = demo_intro();
    for (double xi : {-1.0, 0.3, 0.9, 2.0}) CHECK(flow_map_X(d, xi, 0.0) == xi);
    CHECK(flow_map_X(d, 1.0, 1.0) == 0.25);  // 1 - 1 + (1/4) F(1) with F(1) = 1
    const InitialDatum flat = make_datum(constant_function(0.0), {});
    for (double xi : {-2.0, 0.0, 3.0}) CHECK(flow_map_X(flat, xi, 1.7) == xi);
    CHECK_THROWS_AS(flow_map_X(demo_atom(1.0), 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("restart") {
    // round trip at s = 0 for an atom-free datum
    const InitialDatum d = demo_intro();
    const AlphaParametrization p = build(d);
    const InitialDatum back = restart(p, 0.0);
    CHECK(sup_diff(back.u_bar, d.u_bar, -2.0, 3.0, 500) <= 1e-12);
    CHECK(back.atoms.empty());

    // rejected at the blow-up time
    CHECK_THROWS_AS(restart(p, 2.0), std::invalid_argument);

    // atom datum restarted anywhere else: u = 2x/s on (0, m s^2/4)
    const double m = 1.5;
    const AlphaParametrization pa = build(demo_atom(m));
    for (double s : {-2.0, -0.5, 1.0, 2.0}) {
        const InitialDatum rd = restart(pa, s);
        CHECK(rd.atoms.empty());
        const double support = m * s * s / 4.0;
        for (int i = 1; i < 20; ++i) {
            const double x = support * i / 20.0;
            CHECK(std::fabs(rd.u_bar(x) - 2.0 * x / s) <= 1e-12);
        }
        CHECK(std::fabs(rd.u_bar(support + 1.0) - m * s / 2.0) <= 1e-12);
        // the restarted profile carries the same energy
        CHECK(std::fabs(total_mass(energy_measure(rd)) - m) <= 1e-10);
    }
    CHECK_THROWS_AS(restart(pa, 0.0), std::invalid_argument);
}

TEST_CASE("restart density matches the evolved measure") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 15; ++trial) {
        const AlphaParametrization p = build(random_datum(rng));
        const double s = pick_regular_time(p, rng, -2.0, 2.0);
        const InitialDatum rd = restart(p, s);
        const RadonMeasure mu_s = evolve(p, s).mu;
        const PiecewiseConstant rho = square(derivative(rd.u_bar));
        double worst = 0.0;
        for (std::size_t i = 0; i + 1 < rho.xs.size(); ++i) {
            const double mid = 0.5 * (rho.xs[i] + rho.xs[i + 1]);
            worst = std::max(worst, std::fabs(rho(mid) - mu_s.density(mid)));
        }
        CHECK(worst <= 1e-10 * (1.0 + p.energy));
    }
}

TEST_CASE("semigroup composition through the intro blow-up") {
    const AlphaParametrization p = build(demo_intro());
    std::mt19937_64 rng(13);
    const std::vector<double> grid = sample_grid(p, rng);

    CHECK(check_semigroup(p, 1.0, 1.0, grid).max() == 0.0);

    // restart at s = 1 and reach t = 2 including the reconstructed atom
    const SemigroupCheck chk = check_semigroup(p, 1.0, 2.0, grid);
    CHECK(chk.y_deviation <= 1e-10);
    CHECK(chk.u_deviation <= 1e-10);
    CHECK(chk.measure_deviation <= 1e-10);
}

TEST_CASE("semigroup composition over random data") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 25; ++trial) {
        const AlphaParametrization p = build(random_datum(rng));
        const double s = pick_regular_time(p, rng, -1.5, 1.5);
        const std::vector<double> grid = sample_grid(p, rng);
        for (double t : {s - 1.0, s + 1.0}) {
            const SemigroupCheck chk = check_semigroup(p, s, t, grid);
            CHECK(chk.max() <= 1e-9 * (1.0 + p.energy));
        }
    }
}

TEST_CASE("energy is conserved through every predicted concentration") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        const AlphaParametrization p = build(random_datum(rng));
        std::vector<double> times{-3.0, -1.0, -0.25, 0.0, 0.25, 1.0, 3.0};
        for (const SingularEvent& ev : predict_singular_times(p)) times.push_back(ev.t_star);
        for (double t : times)
            CHECK(std::fabs(total_mass(evolve(p, t).mu) - p.energy) <= 1e-10 * (1.0 + p.energy));
    }
}

TEST_CASE("transported energy identity on the regular set") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 15; ++trial) {
        const AlphaParametrization p = build(random_datum(rng));
        const double t = pick_regular_time(p, rng, -2.0, 2.0);
        const Snapshot snap = evolve(p, t);
        const PiecewiseConstant ux = derivative(snap.u);
        // u_x^2(y(alpha,t), t) y_alpha(alpha, t) = f(alpha) piece by piece
        for (const AlphaPiece& pc : p.piece) {
            if (!std::isfinite(pc.span.lo) || !std::isfinite(pc.span.hi)) continue;
            const double am = pc.span.lo + 0.5 * pc.span.length();
            const double ya = y_alpha(p, am, t);
            if (ya <= 1e-8) continue;
            const double uxv = ux(y_at(p, am, t));
            CHECK(std::fabs(uxv * uxv * ya - p.f(am)) <= 1e-10 * (1.0 + p.energy));
        }
    }
}

TEST_CASE("cumulative identity along characteristics") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 15; ++trial) {
        const AlphaParametrization p = build(random_datum(rng));
        const double t = pick_regular_time(p, rng, -2.0, 2.0);
        const CdfEvaluator F(evolve(p, t).mu);
        const std::vector<double> grid = sample_grid(p, rng, 64);
        for (double a : grid) {
            const double target = a - p.x_bar(a);
            const double y = y_at(p, a, t);
            CHECK(F.open(y) <= target + 1e-10 * (1.0 + p.energy));
            CHECK(F.closed(y) >= target - 1e-10 * (1.0 + p.energy));
        }
    }
}

TEST_CASE("initial atoms dissolve for every t != 0") {
    for (double m : {0.5, 1.0, 3.0}) {
        const AlphaParametrization p = build(demo_atom(m));
        for (double t : {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0}) {
            const Snapshot snap = evolve(p, t);
            CHECK(snap.mu.atoms.empty());
            const double plateau = 4.0 / (t * t);
            const double support = m * t * t / 4.0;
            CHECK(std::fabs(snap.mu.density(0.5 * support) - plateau) <= 1e-10);
            CHECK(std::fabs(total_mass(snap.mu) - m) <= 1e-10);
        }
    }
}

TEST_CASE("initial atoms never re-concentrate even among sloped pieces") {
    // an atom sitting inside the blow-up window splits the concentration
    const InitialDatum d =
        make_datum(make_piecewise_linear({0.0, 1.0}, {0.0, -1.0}, 0.0, 0.0),
                   {Atom{0.5, 0.8, std::nullopt}});
    const AlphaParametrization p = build(d);
    const auto events = predict_singular_times(p);
    REQUIRE(events.size() == 1);
    CHECK(events[0].t_star == 2.0);
    REQUIRE(events[0].atoms.size() == 2);  // split by the dissolved atom
    CHECK(std::fabs(events[0].atoms[0].mass - 0.5) <= 1e-12);
    CHECK(std::fabs(events[0].atoms[1].mass - 0.5) <= 1e-12);
    // the dissolved atom's plateau separates the two concentration points
    CHECK(events[0].atoms[1].x - events[0].atoms[0].x > 0.5);
    CHECK(std::fabs(total_mass(evolve(p, 2.0).mu) - p.energy) <= 1e-10);
}
