#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "edgsolve/errors.hpp"
#include "edgsolve/graph.hpp"
#include "edgsolve/kernel.hpp"
#include "edgsolve/oracle.hpp"
#include "edgsolve/program.hpp"

// Structural existence conditions and the cycle-decomposition solver: a
// program is pulled apart into its negative cycles plus auxiliary rules,
// every hypothesis on the handle atoms is completed into a standalone
// program, and consistent combinations of the partial stable models are
// reassembled into stable models of the whole program.

namespace edgsolve {

struct StratificationResult {
    bool stratified;
    std::vector<AtomId> offending_scc;  // atoms of a dependency SCC with an internal negative edge
};

namespace detail {

// Atom-level adjacency: body atom -> head, for each rule.
inline std::vector<std::vector<std::pair<int, bool>>> atom_dependencies(const Program& p) {
    std::vector<std::vector<std::pair<int, bool>>> adj(static_cast<size_t>(p.atoms().size()));
    for (const Rule& r : p.rules()) {
        for (AtomId c : r.pos) adj[static_cast<size_t>(c)].emplace_back(r.head, false);
        for (AtomId c : r.neg) adj[static_cast<size_t>(c)].emplace_back(r.head, true);
    }
    return adj;
}

}  // namespace detail

// A program is stratified when no dependency cycle passes through negation.
inline StratificationResult is_stratified(const Program& p) {
    size_t n = static_cast<size_t>(p.atoms().size());
    auto deps = detail::atom_dependencies(p);
    std::vector<std::vector<int>> adj(n);
    for (size_t c = 0; c < n; ++c)
        for (const auto& [head, negated] : deps[c]) adj[c].push_back(head);
    std::vector<char> alive(n, 1);
    std::vector<int> comp = detail::scc_ids(adj, alive);
    for (const Rule& r : p.rules()) {
        for (AtomId c : r.neg) {
            if (comp[static_cast<size_t>(c)] == comp[static_cast<size_t>(r.head)]) {
                std::vector<AtomId> scc;
                for (size_t a = 0; a < n; ++a)
                    if (comp[a] == comp[static_cast<size_t>(c)]) scc.push_back(static_cast<AtomId>(a));
                return {false, std::move(scc)};
            }
        }
    }
    return {true, {}};
}

struct CallConsistencyResult {
    bool call_consistent;
    std::vector<AtomId> odd_path;  // closed walk with an odd number of negations, when inconsistent
};

// No atom may depend on itself through an odd number of negative conditions.
// Checked by parity-reachability: node (atom, parity of negations so far).
inline CallConsistencyResult is_call_consistent(const Program& p) {
    size_t n = static_cast<size_t>(p.atoms().size());
    auto deps = detail::atom_dependencies(p);
    auto node = [](AtomId a, int parity) { return 2 * a + parity; };
    for (AtomId a = 0; a < static_cast<AtomId>(n); ++a) {
        std::vector<int> parent(2 * n, -1);
        std::deque<int> queue{node(a, 0)};
        std::vector<char> seen(2 * n, 0);
        seen[static_cast<size_t>(node(a, 0))] = 1;
        while (!queue.empty()) {
            int cur = queue.front();
            queue.pop_front();
            AtomId atom = cur / 2;
            int parity = cur % 2;
            for (const auto& [head, negated] : deps[static_cast<size_t>(atom)]) {
                int next = node(head, parity ^ (negated ? 1 : 0));
                if (seen[static_cast<size_t>(next)]) continue;
                seen[static_cast<size_t>(next)] = 1;
                parent[static_cast<size_t>(next)] = cur;
                if (next == node(a, 1)) {
                    std::vector<AtomId> path;
                    for (int at = next; at != -1; at = parent[static_cast<size_t>(at)]) path.push_back(at / 2);
                    std::reverse(path.begin(), path.end());
                    return {false, std::move(path)};
                }
                queue.push_back(next);
            }
        }
    }
    return {true, {}};
}

// One cycle together with all rules defining its atoms from outside the
// cycle, and the atoms its handles depend on.
struct ExtendedCycle {
    CycleInfo cycle;
    std::vector<int> cycle_rules;      // global rule positions, sorted
    std::vector<int> auxiliary_rules;  // global rule positions, sorted
    std::vector<AtomId> handle_atoms;  // sorted
};

// Extended cycle plus a truth hypothesis on its handle atoms.
struct CompletedCycle {
    ExtendedCycle base;
    std::vector<AtomId> hypothesis;  // sorted subset of base.handle_atoms

    // The completed cycle as a standalone program: cycle and auxiliary rules
    // in source order, hypothesis atoms as facts.
    Program to_program(const Program& origin) const {
        std::vector<int> indices = base.cycle_rules;
        indices.insert(indices.end(), base.auxiliary_rules.begin(), base.auxiliary_rules.end());
        std::sort(indices.begin(), indices.end());
        std::vector<Rule> rules;
        rules.reserve(indices.size() + hypothesis.size());
        for (int i : indices) rules.push_back(origin.rule(i));
        for (AtomId a : hypothesis) rules.push_back(Rule{a, {}, {}});
        return Program(origin.atoms(), std::move(rules));
    }
};

inline ExtendedCycle make_extended_cycle(const Program& p, const Edg& g, const CycleInfo& cycle) {
    ExtendedCycle ec;
    ec.cycle = cycle;
    ec.cycle.handles = find_handles(cycle, g);
    for (int v : cycle.vertices) ec.cycle_rules.push_back(g.vertex(v).rule);
    std::sort(ec.cycle_rules.begin(), ec.cycle_rules.end());
    std::set<AtomId> handle_atoms;
    for (int i = 0; i < p.rule_count(); ++i) {
        if (!detail::sorted_contains(cycle.atoms, p.rule(i).head)) continue;
        if (detail::sorted_contains(ec.cycle_rules, i)) continue;
        ec.auxiliary_rules.push_back(i);
        const Rule& r = p.rule(i);
        handle_atoms.insert(r.pos.begin(), r.pos.end());
        handle_atoms.insert(r.neg.begin(), r.neg.end());
    }
    for (int i : ec.cycle_rules) {
        const Rule& r = p.rule(i);
        for (AtomId a : r.pos)
            if (!detail::sorted_contains(cycle.atoms, a)) handle_atoms.insert(a);
        for (AtomId a : r.neg)
            if (!detail::sorted_contains(cycle.atoms, a)) handle_atoms.insert(a);
    }
    ec.handle_atoms.assign(handle_atoms.begin(), handle_atoms.end());
    return ec;
}

inline CompletedCycle complete(const Program& p, const ExtendedCycle& ec, std::vector<AtomId> hypothesis) {
    detail::sort_unique(hypothesis);
    for (AtomId a : hypothesis)
        if (!detail::sorted_contains(ec.handle_atoms, a)) throw HypothesisOutOfRange(p.atom_name(a));
    return CompletedCycle{ec, std::move(hypothesis)};
}

// Rules heading no cycle atom, chained between cycles.
struct BridgeRule {
    int rule;
    std::vector<int> from_cycles;  // cycles feeding this rule, through the chain
    std::vector<int> to_cycles;    // cycles this rule feeds into
};

struct Decomposition {
    std::vector<ExtendedCycle> extended;
    std::vector<BridgeRule> bridges;
};

// One extended cycle per elementary cycle; rules may belong to several.
// Rules defining no cycle atom are reported as bridges with the cycles they
// connect.
inline Decomposition decompose(const KernelProgram& kp, const Edg& g, long cycle_cap = kDefaultCycleCap) {
    const Program& p = kp.program;
    Decomposition d;
    for (const CycleInfo& c : enumerate_cycles(g, cycle_cap)) d.extended.push_back(make_extended_cycle(p, g, c));

    std::map<AtomId, std::vector<int>> cycles_of_atom;
    for (size_t i = 0; i < d.extended.size(); ++i)
        for (AtomId a : d.extended[i].cycle.atoms) cycles_of_atom[a].push_back(static_cast<int>(i));

    std::map<AtomId, std::vector<int>> rules_of_head, rules_with_body_atom;
    for (int i = 0; i < p.rule_count(); ++i) {
        rules_of_head[p.rule(i).head].push_back(i);
        for (AtomId a : p.rule(i).pos) rules_with_body_atom[a].push_back(i);
        for (AtomId a : p.rule(i).neg) rules_with_body_atom[a].push_back(i);
    }

    auto trace = [&](AtomId start, bool forward) {
        std::set<int> cycles;
        std::set<AtomId> visited;
        std::deque<AtomId> queue{start};
        while (!queue.empty()) {
            AtomId x = queue.front();
            queue.pop_front();
            if (!visited.insert(x).second) continue;
            auto it = cycles_of_atom.find(x);
            if (it != cycles_of_atom.end()) {
                cycles.insert(it->second.begin(), it->second.end());
                continue;  // the chain ends where a cycle starts
            }
            if (forward) {
                for (int r : rules_with_body_atom[x]) queue.push_back(p.rule(r).head);
            } else {
                for (int r : rules_of_head[x]) {
                    const Rule& rule = p.rule(r);
                    for (AtomId a : rule.pos) queue.push_back(a);
                    for (AtomId a : rule.neg) queue.push_back(a);
                }
            }
        }
        return std::vector<int>(cycles.begin(), cycles.end());
    };

    for (int i = 0; i < p.rule_count(); ++i) {
        if (cycles_of_atom.count(p.rule(i).head)) continue;  // cycle or auxiliary rule
        BridgeRule b;
        b.rule = i;
        b.to_cycles = trace(p.rule(i).head, true);
        std::set<int> sources;
        for (AtomId a : p.rule(i).pos)
            for (int c : trace(a, false)) sources.insert(c);
        for (AtomId a : p.rule(i).neg)
            for (int c : trace(a, false)) sources.insert(c);
        b.from_cycles.assign(sources.begin(), sources.end());
        d.bridges.push_back(std::move(b));
    }
    return d;
}

enum class ExistenceStatus { no_models_proven, models_guaranteed, unknown };

inline std::string to_string(ExistenceStatus s) {
    switch (s) {
        case ExistenceStatus::no_models_proven: return "no_models_proven";
        case ExistenceStatus::models_guaranteed: return "models_guaranteed";
        default: return "unknown";
    }
}

struct ExistenceVerdict {
    ExistenceStatus status;
    std::vector<std::string> reasons;
};

namespace detail {

inline std::string atom_set_string(const Program& p, const std::vector<AtomId>& atoms) {
    std::vector<std::string> names;
    names.reserve(atoms.size());
    for (AtomId a : atoms) names.push_back(p.atom_name(a));
    std::sort(names.begin(), names.end());
    std::ostringstream out;
    out << "{";
    for (size_t i = 0; i < names.size(); ++i) out << (i ? ", " : "") << names[i];
    out << "}";
    return out.str();
}

// True when some hypothesis on the handle atoms completes the cycle into a
// program with a stable model. Skipped (returns true) when scanning would be
// too expensive.
inline bool some_completion_has_model(const Program& p, const ExtendedCycle& ec) {
    if (ec.handle_atoms.size() > 10) return true;
    try {
        for (uint64_t mask = 0; mask < (uint64_t{1} << ec.handle_atoms.size()); ++mask) {
            std::vector<AtomId> hyp;
            for (size_t i = 0; i < ec.handle_atoms.size(); ++i)
                if (mask & (uint64_t{1} << i)) hyp.push_back(ec.handle_atoms[i]);
            CompletedCycle cc = complete(p, ec, std::move(hyp));
            if (!enumerate_stable_brute(cc.to_program(p)).empty()) return true;
        }
    } catch (const TooManyAtoms&) {
        return true;
    }
    return false;
}

}  // namespace detail

// Structural necessity: a program with an unconstrained odd cycle has no
// stable models; a call-consistent program has at least one.
inline ExistenceVerdict check_necessary_condition(const KernelProgram& kp, const Edg& g,
                                                  long cycle_cap = kDefaultCycleCap) {
    const Program& p = kp.program;
    std::vector<CycleInfo> cycles;
    try {
        cycles = enumerate_cycles(g, cycle_cap);
    } catch (const CycleBudgetExceeded& e) {
        return {ExistenceStatus::unknown, {std::string(e.what())}};
    }
    for (const CycleInfo& c : cycles) {
        if (!c.odd) continue;
        if (find_handles(c, g).empty())
            return {ExistenceStatus::no_models_proven,
                    {"unconstrained odd cycle " + detail::atom_set_string(p, c.atoms)}};
    }
    CallConsistencyResult cc = is_call_consistent(p);
    if (cc.call_consistent) return {ExistenceStatus::models_guaranteed, {"call-consistent"}};

    std::vector<std::string> reasons;
    std::string path;
    for (size_t i = 0; i < cc.odd_path.size(); ++i)
        path += (i ? " -> " : "") + p.atom_name(cc.odd_path[i]);
    reasons.push_back("not call-consistent: odd negative dependency " + path);
    for (const CycleInfo& c : cycles) {
        if (!c.odd) continue;
        ExtendedCycle ec = make_extended_cycle(p, g, c);
        if (!detail::some_completion_has_model(p, ec))
            reasons.push_back("odd cycle " + detail::atom_set_string(p, c.atoms) +
                              ": no handle hypothesis yields a stable model");
    }
    return {ExistenceStatus::unknown, std::move(reasons)};
}

struct DecompositionOptions {
    long hypothesis_budget = kDefaultHypothesisBudget;
    long cycle_cap = kDefaultCycleCap;
    long atom_cap = kDefaultAtomCap;
};

namespace detail {

class DecompositionSolver {
public:
    DecompositionSolver(const KernelProgram& kp, const Edg& g, const DecompositionOptions& options)
        : program_(kp.program), options_(options), decomposition_(decompose(kp, g, options.cycle_cap)) {}

    std::vector<Interpretation> run() {
        const auto& ecs = decomposition_.extended;
        long double space = 1;
        for (const ExtendedCycle& ec : ecs) {
            if (ec.handle_atoms.size() >= 62)
                throw DecompositionBudgetExceeded(options_.hypothesis_budget);
            space *= std::pow(2.0L, static_cast<long double>(ec.handle_atoms.size()));
            if (space > static_cast<long double>(options_.hypothesis_budget))
                throw DecompositionBudgetExceeded(options_.hypothesis_budget);
        }
        prepare_bridges();
        descend(0);
        return {results_.begin(), results_.end()};
    }

private:
    void prepare_bridges() {
        std::set<AtomId> heads;
        for (const BridgeRule& b : decomposition_.bridges) heads.insert(program_.rule(b.rule).head);
        bridge_heads_.assign(heads.begin(), heads.end());
        for (const BridgeRule& b : decomposition_.bridges)
            bridge_rules_[program_.rule(b.rule).head].push_back(b.rule);
    }

    void descend(size_t level) {
        if (++steps_ > options_.hypothesis_budget * 16)
            throw DecompositionBudgetExceeded(options_.hypothesis_budget);
        const auto& ecs = decomposition_.extended;
        if (level == ecs.size()) {
            finish();
            return;
        }
        const ExtendedCycle& ec = ecs[level];
        for (uint64_t mask = 0; mask < (uint64_t{1} << ec.handle_atoms.size()); ++mask) {
            std::vector<AtomId> hyp;
            for (size_t i = 0; i < ec.handle_atoms.size(); ++i)
                if (mask & (uint64_t{1} << i)) hyp.push_back(ec.handle_atoms[i]);
            for (const Interpretation& model : models_of(level, mask)) {
                // the cycle claims exactly its own atoms
                std::vector<std::pair<AtomId, bool>> claimed;
                bool consistent = true;
                for (AtomId a : ec.cycle.atoms) {
                    bool val = model.contains(a);
                    auto it = assigned_.find(a);
                    if (it != assigned_.end()) {
                        if (it->second != val) {
                            consistent = false;
                            break;
                        }
                    } else {
                        claimed.emplace_back(a, val);
                    }
                }
                if (consistent) {
                    for (const auto& [a, val] : claimed) assigned_[a] = val;
                    hypotheses_[level] = hyp;
                    descend(level + 1);
                    for (const auto& [a, val] : claimed) assigned_.erase(a);
                }
            }
        }
    }

    const std::vector<Interpretation>& models_of(size_t level, uint64_t mask) {
        auto key = std::make_pair(level, mask);
        auto it = model_cache_.find(key);
        if (it != model_cache_.end()) return it->second;
        const ExtendedCycle& ec = decomposition_.extended[level];
        std::vector<AtomId> hyp;
        for (size_t i = 0; i < ec.handle_atoms.size(); ++i)
            if (mask & (uint64_t{1} << i)) hyp.push_back(ec.handle_atoms[i]);
        CompletedCycle cc = complete(program_, ec, std::move(hyp));
        auto models = enumerate_stable_brute(cc.to_program(program_), options_.atom_cap);
        return model_cache_.emplace(key, std::move(models)).first->second;
    }

    void finish() {
        // bridge atoms take whatever truth flows through the chain
        std::map<AtomId, bool> value = assigned_;
        std::vector<AtomId> pending = bridge_heads_;
        while (!pending.empty()) {
            bool progressed = false;
            std::vector<AtomId> still;
            for (AtomId h : pending) {
                bool known = true, truth = false;
                for (int ri : bridge_rules_[h]) {
                    const Rule& r = program_.rule(ri);
                    bool fires = true;
                    for (AtomId a : r.neg) {
                        auto it = value.find(a);
                        if (it == value.end()) { known = false; break; }
                        if (it->second) { fires = false; break; }
                    }
                    if (!known) break;
                    if (fires) { truth = true; break; }
                }
                if (known) {
                    value[h] = truth;
                    progressed = true;
                } else {
                    still.push_back(h);
                }
            }
            if (!progressed) throw Error("internal: bridge rules do not form a chain");
            pending = std::move(still);
        }

        // the hypothesis of every cycle must match the assembled truth
        const auto& ecs = decomposition_.extended;
        for (size_t i = 0; i < ecs.size(); ++i) {
            const auto& hyp = hypotheses_.at(i);
            for (AtomId a : ecs[i].handle_atoms) {
                bool hypothesized = std::binary_search(hyp.begin(), hyp.end(), a);
                auto it = value.find(a);
                bool actual = it != value.end() && it->second;
                if (hypothesized != actual) return;
            }
        }

        std::vector<AtomId> atoms;
        for (const auto& [a, val] : value)
            if (val) atoms.push_back(a);
        Interpretation candidate(std::move(atoms));
        if (is_stable(program_, candidate)) results_.insert(std::move(candidate));
    }

    const Program& program_;
    DecompositionOptions options_;
    Decomposition decomposition_;
    std::map<AtomId, bool> assigned_;
    std::map<size_t, std::vector<AtomId>> hypotheses_;
    std::map<std::pair<size_t, uint64_t>, std::vector<Interpretation>> model_cache_;
    std::vector<AtomId> bridge_heads_;
    std::map<AtomId, std::vector<int>> bridge_rules_;
    std::set<Interpretation> results_;
    long steps_ = 0;
};

}  // namespace detail

// All stable models of a kernel program, assembled from consistent partial
// stable models of its completed extended cycles. Every candidate passes a
// final reduct check, so the result is exactly the stable-model set.
inline std::vector<Interpretation> solve_by_decomposition(const KernelProgram& kp,
                                                          const DecompositionOptions& options = {}) {
    if (kp.program.empty()) return {Interpretation{}};
    Edg g = build_edg(kp.program);
    detail::DecompositionSolver solver(kp, g, options);
    return solver.run();
}

}  // namespace edgsolve
