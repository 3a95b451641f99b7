#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "edgsolve/program.hpp"

// Shared example programs used across the suites.

namespace fixtures {

// Three programs with identical atom-level dependency graphs and entirely
// different stable-model sets.
inline const char* kPi1 =
    "p :- not p, not e.\n"
    "a :- not b.\n"
    "b :- not a.\n"
    "e :- not f.\n"
    "f :- not h.\n"
    "h :- not e.\n"
    "h :- not a.\n";

inline const char* kPi2 =
    "p :- not p.\n"
    "p :- not e.\n"
    "a :- not b.\n"
    "b :- not a.\n"
    "e :- not f.\n"
    "f :- not h.\n"
    "h :- not e, not a.\n";

inline const char* kPi3 =
    "p :- not p, not e.\n"
    "a :- not b.\n"
    "b :- not a.\n"
    "e :- not f.\n"
    "f :- not h.\n"
    "h :- not e, not a.\n";

// Ten rules, six cycles, a two-rule bridge chain.
inline const char* kPi4 =
    "p :- not p, not q.\n"
    "q :- not q, not p.\n"
    "q :- not v.\n"
    "v :- not w.\n"
    "w :- not a.\n"
    "a :- not b.\n"
    "b :- not a.\n"
    "z :- not z, not k.\n"
    "k :- not l.\n"
    "l :- not k.\n";

// Constrained odd cycles whose partial models cannot be combined.
inline const char* kInconsistentHandles =
    "p :- not p, not a.\n"
    "q :- not q.\n"
    "q :- not a.\n";

inline const char* kTwoModels = "q :- not p, not c.\np :- not q.\np :- c.\n";
inline const char* kOddTriple = "a :- not b.\nb :- not c.\nc :- not a.\n";
inline const char* kUnconstrainedOdd = "p :- not p.\na :- not b.\nb :- not a.\n";

inline edgsolve::Program pi1() { return edgsolve::parse_program(kPi1); }
inline edgsolve::Program pi2() { return edgsolve::parse_program(kPi2); }
inline edgsolve::Program pi3() { return edgsolve::parse_program(kPi3); }
inline edgsolve::Program pi4() { return edgsolve::parse_program(kPi4); }

// Canonical view of a model list: sorted atom names per model, models sorted
// by size then lexicographically.
inline std::vector<std::vector<std::string>> names_of(const edgsolve::Program& p,
                                                      const std::vector<edgsolve::Interpretation>& models) {
    std::vector<std::vector<std::string>> out;
    out.reserve(models.size());
    for (const auto& m : models) out.push_back(m.names(p));
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

}  // namespace fixtures
