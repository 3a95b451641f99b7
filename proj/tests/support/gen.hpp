#pragma once

#include <random>
#include <string>
#include <vector>

#include "edgsolve/kernel.hpp"
#include "edgsolve/program.hpp"

// Deterministic random-program generators for the property suites.

namespace gen {

inline std::string atom_name(int i) {
    std::string name(1, static_cast<char>('a' + i % 26));
    if (i >= 26) name += std::to_string(i / 26);
    return name;
}

struct ProgramShape {
    int max_atoms = 10;
    int max_rules = 20;
    int max_pos = 2;
    int max_neg = 3;
    bool allow_pos = true;
};

inline edgsolve::Program random_program(std::mt19937& rng, const ProgramShape& shape = {}) {
    std::uniform_int_distribution<int> atom_count(1, shape.max_atoms);
    int atoms = atom_count(rng);
    std::uniform_int_distribution<int> rule_count(0, shape.max_rules);
    std::uniform_int_distribution<int> pick(0, atoms - 1);
    std::uniform_int_distribution<int> pos_size(0, shape.allow_pos ? shape.max_pos : 0);
    std::uniform_int_distribution<int> neg_size(0, shape.max_neg);

    int rules = rule_count(rng);
    std::string text;
    for (int i = 0; i < rules; ++i) {
        std::string head = atom_name(pick(rng));
        std::vector<std::string> body;
        int np = pos_size(rng), nn = neg_size(rng);
        for (int k = 0; k < np; ++k) body.push_back(atom_name(pick(rng)));
        for (int k = 0; k < nn; ++k) body.push_back("not " + atom_name(pick(rng)));
        text += head;
        if (!body.empty()) {
            text += " :- ";
            for (size_t k = 0; k < body.size(); ++k) text += (k ? ", " : "") + body[k];
        }
        text += ".\n";
    }
    return edgsolve::parse_program(text);
}

// Bipartite construction: heads in one group only depend positively on their
// own group and negatively on the other, so no odd negative loop can close.
inline edgsolve::Program random_call_consistent_program(std::mt19937& rng, int max_atoms = 8,
                                                        int max_rules = 14) {
    std::uniform_int_distribution<int> atom_count(2, max_atoms);
    int atoms = atom_count(rng);
    std::vector<int> group(static_cast<size_t>(atoms));
    std::uniform_int_distribution<int> coin(0, 1);
    for (int& g : group) g = coin(rng);

    std::uniform_int_distribution<int> rule_count(1, max_rules);
    std::uniform_int_distribution<int> pick(0, atoms - 1);
    std::uniform_int_distribution<int> body_size(0, 2);
    int rules = rule_count(rng);
    std::string text;
    for (int i = 0; i < rules; ++i) {
        int head = pick(rng);
        std::vector<std::string> body;
        for (int k = 0, n = body_size(rng); k < n; ++k) {
            int b = pick(rng);
            if (group[static_cast<size_t>(b)] == group[static_cast<size_t>(head)])
                body.push_back(gen::atom_name(b));
            else
                body.push_back("not " + gen::atom_name(b));
        }
        text += atom_name(head);
        if (!body.empty()) {
            text += " :- ";
            for (size_t k = 0; k < body.size(); ++k) text += (k ? ", " : "") + body[k];
        }
        text += ".\n";
    }
    return edgsolve::parse_program(text);
}

// Random program reduced to its kernel.
inline edgsolve::KernelProgram random_kernel(std::mt19937& rng, const ProgramShape& shape = {}) {
    for (;;) {
        try {
            return edgsolve::to_kernel(random_program(rng, shape)).first;
        } catch (const edgsolve::UnfoldBudgetExceeded&) {
            continue;
        }
    }
}

}  // namespace gen
