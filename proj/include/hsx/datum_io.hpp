#pragma once

// Datum files and demo generators. A datum file is a small JSON document:
//
//   {
//     "u_left": 0.0,                  // value of the profile at -infinity
//     "pieces": [[0.0, 1.0, -1.0]],   // [x_start, x_end, slope], contiguous
//     "atoms":  [[0.0, 2.0]]          // [location, mass > 0]
//   }
//
// The profile is constant outside the covered window and the absolutely
// continuous energy density is always derived as the squared slope.

#include <filesystem>
#include <string>

#include "hsx/lagrangian.hpp"

namespace hsx {

inline constexpr const char* kToolName = "hsx";
inline constexpr const char* kToolVersion = "0.1.0";

InitialDatum parse_datum_text(const std::string& text);
InitialDatum load_datum(const std::filesystem::path& path);
std::string emit_datum(const InitialDatum& d);

// The textbook blow-up datum: slope -1 on (0,1), zero outside; all energy
// concentrates into a unit atom at the origin at t = 2.
InitialDatum demo_intro();
// Pure atom of the given mass at the origin over a flat profile; dissolves
// into an absolutely continuous plateau for every t != 0.
InitialDatum demo_atom(double mass);
// Finite-depth fat Cantor datum on [0,1]: at step n the middle open interval
// of length 4^-n is removed from each of the 2^(n-1) surviving intervals. The
// 2^depth kept intervals get slope -1, intervals removed at step n get slope
// -1 + 1/n, so each level concentrates at its own time.
InitialDatum demo_cantor(int depth);
// Dispatch by name ("intro" | "atom" | "cantor"); throws on unknown names or
// invalid parameters.
InitialDatum demo_datum(const std::string& name, double mass, int depth);

}  // namespace hsx
