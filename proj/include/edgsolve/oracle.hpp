#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "edgsolve/errors.hpp"
#include "edgsolve/program.hpp"

// Reference semantics. Deliberately the simplest correct implementation;
// every other solver in the library is validated against this one.

namespace edgsolve {

// A program with neg(rule) empty everywhere. Has a unique least model.
struct PositiveProgram {
    Program program;

    static PositiveProgram check(Program p) {
        for (const Rule& r : p.rules())
            if (!r.neg.empty()) throw Error("program is not positive");
        return PositiveProgram{std::move(p)};
    }
};

// Reduct of p w.r.t. s: drop rules with a negative literal contradicted by s,
// then drop the remaining negative literals. Survivor order is source order.
inline PositiveProgram gl_reduct(const Program& p, const Interpretation& s) {
    std::vector<Rule> rules;
    for (const Rule& r : p.rules()) {
        bool blocked = false;
        for (AtomId a : r.neg) {
            if (s.contains(a)) {
                blocked = true;
                break;
            }
        }
        if (blocked) continue;
        rules.push_back(Rule{r.head, r.pos, {}});
    }
    return PositiveProgram{Program(p.atoms(), std::move(rules))};
}

// Least fixpoint of the one-step consequence operator.
inline Interpretation minimal_model(const PositiveProgram& pp) {
    const auto& rules = pp.program.rules();
    std::vector<char> in(static_cast<size_t>(pp.program.atoms().size()), 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Rule& r : rules) {
            if (in[static_cast<size_t>(r.head)]) continue;
            bool fires = true;
            for (AtomId a : r.pos) {
                if (!in[static_cast<size_t>(a)]) {
                    fires = false;
                    break;
                }
            }
            if (fires) {
                in[static_cast<size_t>(r.head)] = 1;
                changed = true;
            }
        }
    }
    std::vector<AtomId> atoms;
    for (size_t i = 0; i < in.size(); ++i)
        if (in[i]) atoms.push_back(static_cast<AtomId>(i));
    return Interpretation(std::move(atoms));
}

inline bool is_stable(const Program& p, const Interpretation& s) {
    return minimal_model(gl_reduct(p, s)) == s;
}

// All stable models by exhaustive application of the reduct equation.
// Only subsets of head atoms are candidates (a stable model is a least model,
// hence contained in the heads). Result is sorted by size, then atom ids.
inline std::vector<Interpretation> enumerate_stable_brute(const Program& p,
                                                          long atom_cap = kDefaultAtomCap) {
    long atoms = static_cast<long>(p.occurring_atoms().size());
    if (atoms > atom_cap || atoms >= 62) throw TooManyAtoms(atoms, std::min(atom_cap, 61L));
    std::vector<AtomId> heads = p.head_atoms();
    std::vector<Interpretation> found;
    const uint64_t limit = uint64_t{1} << heads.size();
    for (uint64_t mask = 0; mask < limit; ++mask) {
        std::vector<AtomId> atoms_of_mask;
        for (size_t i = 0; i < heads.size(); ++i)
            if (mask & (uint64_t{1} << i)) atoms_of_mask.push_back(heads[i]);
        Interpretation s(std::move(atoms_of_mask));
        if (is_stable(p, s)) found.push_back(std::move(s));
    }
    std::sort(found.begin(), found.end());
    return found;
}

}  // namespace edgsolve
