#include "hsx/datum_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace hsx {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error("datum: " + msg); }

double number_at(const json& j, const char* what) {
    if (!j.is_number()) fail(std::string("malformed number in ") + what);
    return j.get<double>();
}

}  // namespace

InitialDatum parse_datum_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        fail(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) fail("top level must be an object");

    double u_left = 0.0;
    if (doc.contains("u_left")) u_left = number_at(doc["u_left"], "u_left");

    std::vector<double> xs, ys;
    if (doc.contains("pieces")) {
        const json& pieces = doc["pieces"];
        if (!pieces.is_array()) fail("pieces must be an array");
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            const json& p = pieces[i];
            if (!p.is_array() || p.size() != 3) fail("each piece must be [x_start, x_end, slope]");
            const double a = number_at(p[0], "pieces");
            const double b = number_at(p[1], "pieces");
            const double slope = number_at(p[2], "pieces");
            if (!(b > a)) fail("piece width must be positive");
            if (!std::isfinite(slope)) fail("piece slope must be finite");
            if (xs.empty()) {
                xs.push_back(a);
                ys.push_back(u_left);
            } else if (std::fabs(a - xs.back()) > 1e-9 * std::max(1.0, std::fabs(a))) {
                fail("pieces must be contiguous");
            }
            xs.push_back(b);
            ys.push_back(ys.back() + slope * (b - xs[xs.size() - 2]));
        }
    }
    if (xs.empty()) {
        xs.push_back(0.0);
        ys.push_back(u_left);
    }

    std::vector<Atom> atoms;
    if (doc.contains("atoms")) {
        const json& ja = doc["atoms"];
        if (!ja.is_array()) fail("atoms must be an array");
        for (const json& a : ja) {
            if (!a.is_array() || a.size() != 2) fail("each atom must be [location, mass]");
            const double loc = number_at(a[0], "atoms");
            const double mass = number_at(a[1], "atoms");
            if (!(mass > 0.0)) fail("atom mass must be positive");
            atoms.push_back(Atom{loc, mass, std::nullopt});
        }
        std::sort(atoms.begin(), atoms.end(),
                  [](const Atom& l, const Atom& r) { return l.x < r.x; });
        for (std::size_t i = 1; i < atoms.size(); ++i)
            if (atoms[i].x == atoms[i - 1].x) fail("duplicate atom location");
    }

    try {
        return make_datum(make_piecewise_linear(std::move(xs), std::move(ys), 0.0, 0.0),
                          std::move(atoms));
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
}

InitialDatum load_datum(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("datum: cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_datum_text(buf.str());
}

std::string emit_datum(const InitialDatum& d) {
    json doc;
    doc["u_left"] = d.u_bar.ys.front();
    json pieces = json::array();
    for (std::size_t i = 0; i + 1 < d.u_bar.size(); ++i) {
        const double dx = d.u_bar.xs[i + 1] - d.u_bar.xs[i];
        pieces.push_back({d.u_bar.xs[i], d.u_bar.xs[i + 1],
                          (d.u_bar.ys[i + 1] - d.u_bar.ys[i]) / dx});
    }
    doc["pieces"] = std::move(pieces);
    json atoms = json::array();
    for (const Atom& a : d.atoms) atoms.push_back({a.x, a.mass});
    doc["atoms"] = std::move(atoms);
    return doc.dump(2) + "\n";
}

InitialDatum demo_intro() {
    return make_datum(make_piecewise_linear({0.0, 1.0}, {0.0, -1.0}, 0.0, 0.0), {});
}

InitialDatum demo_atom(double mass) {
    if (!(mass > 0.0) || !std::isfinite(mass))
        throw std::invalid_argument("atom demo needs a positive mass");
    return make_datum(constant_function(0.0), {Atom{0.0, mass, std::nullopt}});
}

InitialDatum demo_cantor(int depth) {
    if (depth < 1) throw std::invalid_argument("cantor demo needs depth >= 1");
    struct Piece {
        double lo, hi, slope;
    };
    std::vector<Interval> kept{{0.0, 1.0}};
    std::vector<Piece> removed;
    double gap = 0.25;  // 4^-n at step n
    for (int n = 1; n <= depth; ++n) {
        std::vector<Interval> next;
        next.reserve(kept.size() * 2);
        const double slope = -1.0 + 1.0 / static_cast<double>(n);
        for (const Interval& iv : kept) {
            const double mid = 0.5 * (iv.lo + iv.hi);
            const double ra = mid - 0.5 * gap;
            const double rb = mid + 0.5 * gap;
            removed.push_back({ra, rb, slope});
            next.push_back({iv.lo, ra});
            next.push_back({rb, iv.hi});
        }
        kept = std::move(next);
        gap *= 0.25;
    }

    std::vector<Piece> pieces;
    pieces.reserve(kept.size() + removed.size());
    for (const Interval& iv : kept) pieces.push_back({iv.lo, iv.hi, -1.0});
    pieces.insert(pieces.end(), removed.begin(), removed.end());
    std::sort(pieces.begin(), pieces.end(),
              [](const Piece& a, const Piece& b) { return a.lo < b.lo; });

    std::vector<double> xs{0.0}, ys{0.0};
    for (const Piece& p : pieces) {
        xs.push_back(p.hi);
        ys.push_back(ys.back() + p.slope * (p.hi - p.lo));
    }
    return make_datum(make_piecewise_linear(std::move(xs), std::move(ys), 0.0, 0.0), {});
}

InitialDatum demo_datum(const std::string& name, double mass, int depth) {
    if (name == "intro") return demo_intro();
    if (name == "atom") return demo_atom(mass);
    if (name == "cantor") return demo_cantor(depth);
    throw std::invalid_argument("unknown demo '" + name + "' (expected intro, atom, or cantor)");
}

}  // namespace hsx
