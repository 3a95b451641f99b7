#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "edgsolve/errors.hpp"
#include "edgsolve/program.hpp"

namespace edgsolve {

// A program where no rule has positive conditions, every head occurs in the
// body of some rule, and no body is empty. Shares the atom table of the
// program it was derived from, so atom ids remain comparable.
struct KernelProgram {
    Program program;
};

inline bool is_kernel(const Program& p) {
    std::vector<AtomId> body_atoms;
    for (const Rule& r : p.rules()) {
        if (!r.pos.empty() || r.neg.empty()) return false;
        body_atoms.insert(body_atoms.end(), r.neg.begin(), r.neg.end());
    }
    detail::sort_unique(body_atoms);
    for (AtomId h : p.head_atoms())
        if (!detail::sorted_contains(body_atoms, h)) return false;
    for (AtomId a : body_atoms)
        if (!p.is_head(a)) return false;  // no undefined atoms, every vertex keeps an in-edge
    return true;
}

// Replayable record of every simplification applied by to_kernel.
struct TransformLog {
    std::vector<AtomId> established_facts;  // atoms proven true
    std::vector<AtomId> forced_false;       // atoms with no surviving derivation

    // Heads removed because they occur in no body, with their defining rules
    // as they stood at removal time, in removal order.
    struct StrippedLayer {
        AtomId atom;
        std::vector<Rule> rules;
    };
    std::vector<StrippedLayer> stripped_tail;

    long generated_rules = 0;  // rules produced by unfolding
    long unfold_cap = kDefaultUnfoldCap;

    std::vector<AtomId> kernel_atoms;  // atom universe of the kernel program
};

namespace detail {

// All loop-free positive derivations of `atom` against `rules`, each reported
// as the set of negative literals it collects. A derivation branch that
// revisits an atom on its own ancestor chain can never bootstrap and is
// dropped. Worst case is exponential; `budget` bounds the damage.
class Unfolder {
public:
    Unfolder(const std::vector<Rule>& rules, long cap, long& counter)
        : cap_(cap), counter_(counter) {
        for (size_t i = 0; i < rules.size(); ++i) by_head_[rules[i].head].push_back(static_cast<int>(i));
        rules_ = &rules;
    }

    std::vector<std::vector<AtomId>> expand_rule(const Rule& r) {
        std::set<AtomId> chain{r.head};
        return combine(r.pos, r.neg, chain);
    }

private:
    std::vector<std::vector<AtomId>> expand_atom(AtomId atom, std::set<AtomId>& chain) {
        if (chain.count(atom)) return {};
        auto it = by_head_.find(atom);
        if (it == by_head_.end()) return {};
        chain.insert(atom);
        std::vector<std::vector<AtomId>> out;
        for (int idx : it->second) {
            const Rule& d = (*rules_)[static_cast<size_t>(idx)];
            for (auto& body : combine(d.pos, d.neg, chain)) out.push_back(std::move(body));
        }
        chain.erase(atom);
        dedup(out);
        return out;
    }

    // Cross product of the derivations of `pos`, each seeded with `neg`.
    std::vector<std::vector<AtomId>> combine(const std::vector<AtomId>& pos,
                                             const std::vector<AtomId>& neg,
                                             std::set<AtomId>& chain) {
        std::vector<std::vector<AtomId>> acc{neg};
        for (AtomId b : pos) {
            auto subs = expand_atom(b, chain);
            if (subs.empty()) return {};
            std::vector<std::vector<AtomId>> next;
            for (const auto& left : acc) {
                for (const auto& right : subs) {
                    if (++counter_ > cap_) throw UnfoldBudgetExceeded(cap_);
                    std::vector<AtomId> merged = left;
                    merged.insert(merged.end(), right.begin(), right.end());
                    sort_unique(merged);
                    next.push_back(std::move(merged));
                }
            }
            acc = std::move(next);
            dedup(acc);
        }
        return acc;
    }

    static void dedup(std::vector<std::vector<AtomId>>& bodies) {
        std::set<std::vector<AtomId>> seen;
        std::vector<std::vector<AtomId>> out;
        for (auto& b : bodies)
            if (seen.insert(b).second) out.push_back(std::move(b));
        bodies = std::move(out);
    }

    const std::vector<Rule>* rules_;
    std::map<AtomId, std::vector<int>> by_head_;
    long cap_;
    long& counter_;
};

}  // namespace detail

// Reduce p to an equivalent kernel program. Stable models of the kernel are
// in bijection with stable models of p via reconstruct_model.
//
// Construction, iterated to fixpoint:
//   1. rules whose pos and neg overlap can never fire and are dropped;
//   2. facts propagate: rules for a proven atom go away, `not fact` kills a
//      rule, positive occurrences of a fact are erased;
//   3. atoms without rules are false: `not atom` is erased as satisfied,
//      rules requiring the atom positively go away;
//   4. remaining positive conditions are unfolded into all their loop-free
//      derivations (budgeted, see UnfoldBudgetExceeded);
//   5. heads occurring in no body are stripped in ascending atom order and
//      logged for reconstruction.
inline std::pair<KernelProgram, TransformLog> to_kernel(const Program& p,
                                                        long unfold_cap = kDefaultUnfoldCap) {
    TransformLog log;
    log.unfold_cap = unfold_cap;
    std::vector<Rule> cur = p.rules();
    std::set<AtomId> facts, falsies;
    std::vector<AtomId> original_atoms = p.occurring_atoms();

    auto erase_rules = [&](auto&& pred) {
        auto it = std::remove_if(cur.begin(), cur.end(), pred);
        bool removed = it != cur.end();
        cur.erase(it, cur.end());
        return removed;
    };

    bool changed = true;
    while (changed) {
        changed = false;

        if (erase_rules([](const Rule& r) { return r.contrary(); })) changed = true;

        // Fact propagation.
        std::set<AtomId> new_facts;
        for (const Rule& r : cur)
            if (r.is_fact()) new_facts.insert(r.head);
        if (!new_facts.empty()) {
            facts.insert(new_facts.begin(), new_facts.end());
            erase_rules([&](const Rule& r) {
                if (new_facts.count(r.head)) return true;
                for (AtomId a : r.neg)
                    if (new_facts.count(a)) return true;
                return false;
            });
            for (Rule& r : cur)
                r.pos.erase(std::remove_if(r.pos.begin(), r.pos.end(),
                                           [&](AtomId a) { return new_facts.count(a) != 0; }),
                            r.pos.end());
            changed = true;
            continue;
        }

        // Falsity propagation: an atom with no rules left cannot become true.
        std::set<AtomId> heads;
        for (const Rule& r : cur) heads.insert(r.head);
        std::set<AtomId> new_false;
        for (AtomId a : original_atoms)
            if (!heads.count(a) && !facts.count(a) && !falsies.count(a)) new_false.insert(a);
        if (!new_false.empty()) {
            falsies.insert(new_false.begin(), new_false.end());
            erase_rules([&](const Rule& r) {
                for (AtomId a : r.pos)
                    if (new_false.count(a)) return true;
                return false;
            });
            for (Rule& r : cur)
                r.neg.erase(std::remove_if(r.neg.begin(), r.neg.end(),
                                           [&](AtomId a) { return new_false.count(a) != 0; }),
                            r.neg.end());
            changed = true;
            continue;
        }

        // Positive unfolding.
        bool has_pos = std::any_of(cur.begin(), cur.end(), [](const Rule& r) { return !r.pos.empty(); });
        if (has_pos) {
            detail::Unfolder unfolder(cur, unfold_cap, log.generated_rules);
            std::vector<Rule> next;
            for (const Rule& r : cur) {
                if (r.pos.empty()) {
                    next.push_back(r);
                    continue;
                }
                for (auto& body : unfolder.expand_rule(r)) next.push_back(Rule{r.head, {}, std::move(body)});
            }
            cur = std::move(next);
            changed = true;
        }
    }

    // Tail stripping: remove heads that no body mentions, smallest atom first.
    for (;;) {
        std::set<AtomId> body_atoms;
        for (const Rule& r : cur) body_atoms.insert(r.neg.begin(), r.neg.end());
        AtomId strip = -1;
        for (const Rule& r : cur) {
            if (!body_atoms.count(r.head) && (strip == -1 || r.head < strip)) strip = r.head;
        }
        if (strip == -1) break;
        TransformLog::StrippedLayer layer{strip, {}};
        for (const Rule& r : cur)
            if (r.head == strip) layer.rules.push_back(r);
        erase_rules([&](const Rule& r) { return r.head == strip; });
        log.stripped_tail.push_back(std::move(layer));
    }

    log.established_facts.assign(facts.begin(), facts.end());
    log.forced_false.assign(falsies.begin(), falsies.end());
    Program kernel(p.atoms(), std::move(cur));
    log.kernel_atoms = kernel.occurring_atoms();
    return {KernelProgram{std::move(kernel)}, std::move(log)};
}

// Lift a stable model of the kernel back to the original program: add the
// established facts, then replay the stripped tail newest-first, deriving
// each stripped atom from its logged rules.
inline Interpretation reconstruct_model(const Interpretation& s, const TransformLog& log) {
    std::map<AtomId, bool> value;
    for (AtomId a : log.kernel_atoms) value[a] = false;
    for (AtomId a : s.atoms) {
        auto it = value.find(a);
        if (it == value.end()) throw InconsistentLog("model atom is not a kernel atom");
        it->second = true;
    }
    for (AtomId a : log.established_facts) value[a] = true;
    for (AtomId a : log.forced_false) value[a] = false;

    auto lookup = [&](AtomId a) {
        auto it = value.find(a);
        if (it == value.end()) throw InconsistentLog("stripped rule references an unvalued atom");
        return it->second;
    };

    std::vector<AtomId> result = s.atoms;
    for (AtomId a : log.established_facts) result.push_back(a);
    for (auto layer = log.stripped_tail.rbegin(); layer != log.stripped_tail.rend(); ++layer) {
        bool truth = false;
        for (const Rule& r : layer->rules) {
            bool fires = true;
            for (AtomId a : r.pos)
                if (!lookup(a)) { fires = false; break; }
            if (fires)
                for (AtomId a : r.neg)
                    if (lookup(a)) { fires = false; break; }
            if (fires) { truth = true; break; }
        }
        value[layer->atom] = truth;
        if (truth) result.push_back(layer->atom);
    }
    return Interpretation(std::move(result));
}

}  // namespace edgsolve
