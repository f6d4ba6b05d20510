// hsx: exact conservative solutions of the Hunter-Saxton equation for
// piecewise-linear data. Subcommands: demo, evolve, singular, semigroup,
// verify. All machine output is JSON carrying the tool version and the full
// configuration used.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hsx/datum_io.hpp"
#include "hsx/evolution.hpp"
#include "hsx/verify.hpp"

namespace {

using nlohmann::json;

struct CommonOpts {
    std::string input;
    std::string demo;
    double mass = 1.0;
    int depth = 4;
    std::string output;
    hsx::Tolerances tol;
    unsigned long long seed = 42;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_datum = true) {
    if (needs_datum) {
        auto* in = cmd->add_option("--input", o.input, "datum file (JSON)");
        auto* de = cmd->add_option("--demo", o.demo, "built-in datum: intro | atom | cantor");
        in->excludes(de);
        cmd->add_option("--mass", o.mass, "atom demo mass")->check(CLI::PositiveNumber);
        cmd->add_option("--depth", o.depth, "cantor demo depth")->check(CLI::Range(1, 20));
    }
    cmd->add_option("--output", o.output, "write here instead of stdout");
    cmd->add_option("--tol-x", o.tol.x, "abscissa coincidence tolerance");
    cmd->add_option("--tol-slope", o.tol.slope, "flat-span detection tolerance");
    cmd->add_option("--seed", o.seed, "seed for randomized grids");
}

hsx::InitialDatum resolve_datum(const CommonOpts& o) {
    if (!o.input.empty()) return hsx::load_datum(o.input);
    if (!o.demo.empty()) return hsx::demo_datum(o.demo, o.mass, o.depth);
    throw std::runtime_error("no datum given: pass --input FILE or --demo NAME");
}

json config_json(const CommonOpts& o) {
    return json{{"tol_x", o.tol.x},
                {"tol_v", o.tol.v},
                {"tol_slope", o.tol.slope},
                {"seed", o.seed}};
}

json header_json(const CommonOpts& o) {
    return json{{"tool", {{"name", hsx::kToolName}, {"version", hsx::kToolVersion}}},
                {"config", config_json(o)}};
}

void write_text(const CommonOpts& o, const std::string& text) {
    if (o.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(o.output);
    if (!out) throw std::runtime_error("cannot open output file " + o.output);
    out << text;
}

json atoms_json(const std::vector<hsx::Atom>& atoms) {
    json arr = json::array();
    for (const hsx::Atom& a : atoms) {
        json ja{{"x", a.x}, {"mass", a.mass}};
        if (a.source) ja["source"] = {a.source->lo, a.source->hi};
        arr.push_back(std::move(ja));
    }
    return arr;
}

json report_json(const hsx::CheckReport& r) {
    json worst = json::array();
    for (const hsx::CheckSample& s : r.worst)
        worst.push_back({{"location", s.location}, {"time", s.time}, {"error", s.error}});
    return json{{"name", r.name},
                {"max_error", r.max_error},
                {"tolerance", r.tolerance},
                {"passed", r.passed},
                {"worst", std::move(worst)}};
}

std::string format_g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int cmd_demo(const CommonOpts& o) {
    write_text(o, hsx::emit_datum(resolve_datum(o)));
    return 0;
}

int cmd_evolve(const CommonOpts& o, double t, int samples, const std::string& format) {
    const hsx::InitialDatum d = resolve_datum(o);
    const hsx::AlphaParametrization p = hsx::build(d, o.tol);
    const hsx::Snapshot snap = hsx::evolve(p, t, o.tol);

    const double lo = snap.u.xs.front() - 1.0;
    const double hi = snap.u.xs.back() + 1.0;
    std::vector<std::pair<double, double>> pts(samples);
    for (int i = 0; i < samples; ++i) {
        const double x = (samples == 1) ? lo : lo + (hi - lo) * i / double(samples - 1);
        pts[i] = {x, snap.u(x)};
    }

    if (format == "csv") {
        std::string body = "x,u\n";
        for (auto [x, u] : pts) body += format_g17(x) + "," + format_g17(u) + "\n";
        std::string atom_table = "x,mass,source_lo,source_hi\n";
        for (const hsx::Atom& a : snap.mu.atoms)
            atom_table += format_g17(a.x) + "," + format_g17(a.mass) + "," +
                          format_g17(a.source ? a.source->lo : a.x) + "," +
                          format_g17(a.source ? a.source->hi : a.x) + "\n";
        const std::string head = std::string("# ") + hsx::kToolName + " " + hsx::kToolVersion +
                                 " t=" + format_g17(t) + " tol_x=" + format_g17(o.tol.x) +
                                 " tol_slope=" + format_g17(o.tol.slope) + "\n";
        if (o.output.empty()) {
            std::cout << head << body << "\n# atoms\n" << atom_table;
        } else {
            write_text(o, head + body);
            std::ofstream at(o.output + ".atoms.csv");
            at << atom_table;
        }
        return 0;
    }

    json out = header_json(o);
    out["t"] = t;
    out["energy"] = p.energy;
    json js = json::array();
    for (auto [x, u] : pts) js.push_back({x, u});
    out["samples"] = std::move(js);
    json dens = json::array();
    const hsx::PiecewiseConstant& rho = snap.mu.density;
    for (std::size_t i = 0; i + 1 < rho.xs.size(); ++i)
        if (rho.values[i + 1] != 0.0)
            dens.push_back({rho.xs[i], rho.xs[i + 1], rho.values[i + 1]});
    out["density_pieces"] = std::move(dens);
    out["atoms"] = atoms_json(snap.mu.atoms);
    write_text(o, out.dump(2) + "\n");
    return 0;
}

int cmd_singular(const CommonOpts& o) {
    const hsx::AlphaParametrization p = hsx::build(resolve_datum(o), o.tol);
    const auto events = hsx::predict_singular_times(p, o.tol);

    json out = header_json(o);
    json jev = json::array();
    for (const hsx::SingularEvent& ev : events) {
        double mass = 0.0;
        for (const hsx::Atom& a : ev.atoms) mass += a.mass;
        jev.push_back({{"t", ev.t_star},
                       {"slope", ev.slope},
                       {"total_mass", mass},
                       {"atoms", atoms_json(ev.atoms)}});
    }
    out["events"] = std::move(jev);
    write_text(o, out.dump(2) + "\n");

    std::cerr << events.size() << " concentration event(s)\n";
    for (const hsx::SingularEvent& ev : events)
        std::cerr << "  t = " << ev.t_star << "  slope " << ev.slope << "  atoms "
                  << ev.atoms.size() << "\n";
    return 0;
}

int cmd_semigroup(const CommonOpts& o, double s, double t, double pass_tol) {
    const hsx::AlphaParametrization p = hsx::build(resolve_datum(o), o.tol);
    std::mt19937_64 rng(o.seed);
    const std::vector<double> grid = hsx::sample_grid(p, rng);
    const hsx::SemigroupCheck chk = hsx::check_semigroup(p, s, t, grid, o.tol);

    json out = header_json(o);
    out["s"] = s;
    out["t"] = t;
    out["y_deviation"] = chk.y_deviation;
    out["u_deviation"] = chk.u_deviation;
    out["measure_deviation"] = chk.measure_deviation;
    out["max_deviation"] = chk.max();
    out["tolerance"] = pass_tol;
    const bool ok = chk.max() <= pass_tol;
    out["passed"] = ok;
    write_text(o, out.dump(2) + "\n");
    std::cerr << (ok ? "PASS" : "FAIL") << " semigroup: max deviation " << chk.max() << "\n";
    return ok ? 0 : 1;
}

int cmd_verify(const CommonOpts& o, const std::string& suite) {
    const hsx::AlphaParametrization p = hsx::build(resolve_datum(o), o.tol);
    std::mt19937_64 rng(o.seed);
    const std::vector<double> grid = hsx::sample_grid(p, rng);
    const auto events = hsx::predict_singular_times(p, o.tol);

    std::vector<double> all_times;
    for (double t = -3.0; t <= 3.0; t += 0.5) all_times.push_back(t);
    for (const auto& ev : events) all_times.push_back(ev.t_star);
    std::vector<double> regular_times;
    for (double t : all_times) {
        bool ok = t != 0.0 || p.piece.empty();
        for (const auto& ev : events)
            if (std::fabs(t - ev.t_star) < 0.05) ok = false;
        for (const hsx::AlphaPiece& pc : p.piece)
            if (pc.initially_flat && t == 0.0) ok = false;
        if (ok) regular_times.push_back(t);
    }

    std::vector<hsx::CheckReport> reports;
    auto want = [&suite](const char* name) { return suite == "all" || suite == name; };
    if (want("conservation"))
        reports.push_back(hsx::suite_conservation(p, all_times, 1e-10, o.tol));
    if (want("weak"))
        reports.push_back(hsx::suite_weak_form(p, regular_times, grid, 1e-10, o.tol));
    if (want("ode"))
        reports.push_back(hsx::suite_characteristic_ode(p, grid, all_times, 1e-3, 1e-9));
    if (want("structure")) {
        if (events.empty()) {
            reports.push_back(hsx::suite_structure(p, 1.0, 1e-10, o.tol));
        } else {
            for (const auto& ev : events)
                reports.push_back(hsx::suite_structure(p, ev.t_star, 1e-10, o.tol));
        }
    }
    if (want("oracle")) {
        reports.push_back(hsx::oracle_pushforward(p.x_bar, p.f, 100000, 1e-9, o.tol));
        const double t_probe = regular_times.empty() ? 1.0 : regular_times.back();
        reports.push_back(
            hsx::oracle_pushforward(hsx::y_curve(p, t_probe), p.f, 100000, 1e-9, o.tol));
    }
    if (reports.empty()) throw std::runtime_error("unknown suite '" + suite + "'");

    bool all_ok = true;
    json out = header_json(o);
    json jr = json::array();
    for (const hsx::CheckReport& r : reports) {
        all_ok = all_ok && r.passed;
        jr.push_back(report_json(r));
        std::cerr << (r.passed ? "PASS " : "FAIL ") << r.name << "  max_error " << r.max_error
                  << "  tolerance " << r.tolerance << "\n";
    }
    out["suites"] = std::move(jr);
    out["passed"] = all_ok;
    write_text(o, out.dump(2) + "\n");
    if (!all_ok)
        for (const hsx::CheckReport& r : reports)
            if (!r.passed) std::cerr << "failing check: " << r.name << "\n";
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact conservative solutions of the Hunter-Saxton equation"};
    app.require_subcommand(1);

    CommonOpts o;

    auto* demo = app.add_subcommand("demo", "write a built-in datum file");
    add_common(demo, o);

    double t = 0.0, s = 0.0;
    int samples = 201;
    std::string format = "json";
    auto* evolve = app.add_subcommand("evolve", "solution and energy measure at a time");
    add_common(evolve, o);
    evolve->add_option("--time", t, "evaluation time")->required();
    evolve->add_option("--samples", samples, "number of profile samples")
        ->check(CLI::Range(1, 10000000));
    evolve->add_option("--format", format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}));

    auto* singular = app.add_subcommand("singular", "predict every concentration event");
    add_common(singular, o);

    double pass_tol = 1e-9;
    auto* semigroup = app.add_subcommand("semigroup", "check the restart composition identity");
    add_common(semigroup, o);
    semigroup->add_option("--s", s, "restart time (non-singular)")->required();
    semigroup->add_option("--t", t, "target time")->required();
    semigroup->add_option("--tol", pass_tol, "pass threshold");

    std::string suite = "all";
    auto* verify = app.add_subcommand("verify", "run verification suites");
    add_common(verify, o);
    verify->add_option("--suite", suite, "all | conservation | weak | ode | structure | oracle")
        ->check(CLI::IsMember({"all", "conservation", "weak", "ode", "structure", "oracle"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (demo->parsed()) return cmd_demo(o);
        if (evolve->parsed()) return cmd_evolve(o, t, samples, format);
        if (singular->parsed()) return cmd_singular(o);
        if (semigroup->parsed()) return cmd_semigroup(o, s, t, pass_tol);
        if (verify->parsed()) return cmd_verify(o, suite);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
