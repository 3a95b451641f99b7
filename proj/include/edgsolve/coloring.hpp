#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "edgsolve/errors.hpp"
#include "edgsolve/graph.hpp"
#include "edgsolve/program.hpp"

// Stable models as graph colorings. A total green/red coloring of a
// kernel-program graph is admissible when no negative edge joins two green
// vertices and no red vertex is fed only by red vertices; admissible
// colorings correspond one-to-one to stable models.

namespace edgsolve {

enum class Color : unsigned char { unassigned, green, red };

struct Coloring {
    std::vector<Color> assignment;  // indexed by vertex

    explicit Coloring(int vertices = 0)
        : assignment(static_cast<size_t>(vertices), Color::unassigned) {}

    Color at(int v) const { return assignment.at(static_cast<size_t>(v)); }
    void set(int v, Color c) { assignment.at(static_cast<size_t>(v)) = c; }

    bool total() const {
        return std::none_of(assignment.begin(), assignment.end(),
                            [](Color c) { return c == Color::unassigned; });
    }

    friend bool operator==(const Coloring& a, const Coloring& b) { return a.assignment == b.assignment; }
};

struct Violation {
    enum class Kind { green_green_edge, red_all_red_in } kind;
    Edg::Edge edge{-1, -1, EdgeSign::negative};  // witness for green_green_edge
    int vertex = -1;                             // witness for red_all_red_in
};

struct AdmissibilityResult {
    bool admissible;
    std::vector<Violation> violations;
};

namespace detail {

inline void require_kernel_graph(const Edg& g) {
    if (!g.negative_only()) throw NonKernelGraph("graph has positive edges");
    if (!g.every_vertex_has_in_edge()) throw NonKernelGraph("vertex without incoming edges");
}

}  // namespace detail

// Checks a total coloring against the two admissibility clauses and reports
// every violation.
inline AdmissibilityResult is_admissible(const Edg& g, const Coloring& c) {
    detail::require_kernel_graph(g);
    if (!c.total()) throw Error("coloring is not total");
    std::vector<Violation> violations;
    for (const Edg::Edge& e : g.edges()) {
        if (c.at(e.from) == Color::green && c.at(e.to) == Color::green)
            violations.push_back({Violation::Kind::green_green_edge, e, -1});
    }
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (c.at(v) != Color::red) continue;
        bool all_red = true;
        for (int ei : g.in_edges(v)) {
            if (c.at(g.edges()[static_cast<size_t>(ei)].from) != Color::red) {
                all_red = false;
                break;
            }
        }
        if (all_red) violations.push_back({Violation::Kind::red_all_red_in, {}, v});
    }
    return {violations.empty(), std::move(violations)};
}

struct Conflict {
    int vertex;
    std::string forced_green_because;
    std::string forced_red_because;
};

struct PropagationResult {
    Coloring closure;
    std::optional<Conflict> conflict;
};

// Closure of the two forcing rules: a vertex with a green in-neighbor must be
// red, a vertex whose in-neighbors are all red must be green. Reports a
// conflict when some vertex is forced both ways (an explicit assignment
// counts as a forcing).
inline PropagationResult propagate(const Edg& g, Coloring partial) {
    detail::require_kernel_graph(g);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int v = 0; v < g.vertex_count(); ++v) {
            int green_in = -1;
            bool all_red = true;
            for (int ei : g.in_edges(v)) {
                int from = g.edges()[static_cast<size_t>(ei)].from;
                if (partial.at(from) == Color::green && green_in == -1) green_in = from;
                if (partial.at(from) != Color::red) all_red = false;
            }
            std::string red_reason, green_reason;
            bool force_red = green_in != -1;
            bool force_green = all_red;
            if (force_red) red_reason = "green in-neighbor " + g.label(green_in);
            if (force_green) green_reason = "all in-neighbors red";
            if (partial.at(v) == Color::green && !force_green) green_reason = "assigned";
            if (partial.at(v) == Color::red && !force_red) red_reason = "assigned";
            bool green = force_green || partial.at(v) == Color::green;
            bool red = force_red || partial.at(v) == Color::red;
            if (green && red)
                return {std::move(partial), Conflict{v, green_reason, red_reason}};
            if (force_red && partial.at(v) == Color::unassigned) {
                partial.set(v, Color::red);
                changed = true;
            } else if (force_green && partial.at(v) == Color::unassigned) {
                partial.set(v, Color::green);
                changed = true;
            }
        }
    }
    return {std::move(partial), std::nullopt};
}

struct SolveOptions {
    long max_models = kDefaultModelCap;
    enum class Heuristic { handles, lexicographic } heuristic = Heuristic::handles;
    long cycle_cap = kDefaultCycleCap;  // used by the handle heuristic only
};

struct ColoringModel {
    Coloring coloring;
    Interpretation interpretation;
};

struct SolveResult {
    std::vector<ColoringModel> models;
    bool truncated = false;
};

// Atom is true when one of its rules fires, i.e. some vertex of it is green.
inline Interpretation coloring_to_interpretation(const Edg& g, const Coloring& c) {
    std::vector<AtomId> atoms;
    for (int v = 0; v < g.vertex_count(); ++v)
        if (c.at(v) == Color::green && g.vertex(v).rule >= 0) atoms.push_back(g.vertex(v).atom);
    return Interpretation(std::move(atoms));
}

// Vertex is green exactly when the body of its rule is satisfied by s: every
// atom it depends on (negatively, in a kernel graph) is false.
inline Coloring interpretation_to_coloring(const Edg& g, const Interpretation& s) {
    Coloring c(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) {
        bool body_satisfied = true;
        for (int ei : g.in_edges(v)) {
            AtomId dep = g.vertex(g.edges()[static_cast<size_t>(ei)].from).atom;
            if (s.contains(dep)) {
                body_satisfied = false;
                break;
            }
        }
        c.set(v, body_satisfied ? Color::green : Color::red);
    }
    return c;
}

namespace detail {

// Branch order: sources of handles of odd cycles first, everything else in
// index order. Falls back to plain index order when cycle enumeration blows
// its budget.
inline std::vector<int> branch_order(const Edg& g, const SolveOptions& options) {
    std::vector<int> order;
    if (options.heuristic == SolveOptions::Heuristic::handles) {
        try {
            std::set<int> preferred;
            for (const CycleInfo& c : enumerate_cycles(g, options.cycle_cap)) {
                if (!c.odd) continue;
                for (const Handle& h : find_handles(c, g)) preferred.insert(h.edge.from);
            }
            order.assign(preferred.begin(), preferred.end());
        } catch (const CycleBudgetExceeded&) {
            order.clear();
        }
    }
    std::set<int> seen(order.begin(), order.end());
    for (int v = 0; v < g.vertex_count(); ++v)
        if (!seen.count(v)) order.push_back(v);
    return order;
}

class ColoringSearch {
public:
    ColoringSearch(const Edg& g, const SolveOptions& options)
        : g_(g), options_(options), order_(branch_order(g, options)) {}

    SolveResult run() {
        SolveResult result;
        Coloring empty(g_.vertex_count());
        descend(std::move(empty), result);
        return result;
    }

private:
    // returns false when the model cap was hit and search must stop
    bool descend(Coloring partial, SolveResult& result) {
        PropagationResult prop = propagate(g_, std::move(partial));
        if (prop.conflict) return true;
        int branch = -1;
        for (int v : order_) {
            if (prop.closure.at(v) == Color::unassigned) {
                branch = v;
                break;
            }
        }
        if (branch == -1) {
            if (is_admissible(g_, prop.closure).admissible) {
                if (static_cast<long>(result.models.size()) >= options_.max_models) {
                    result.truncated = true;
                    return false;
                }
                Interpretation s = coloring_to_interpretation(g_, prop.closure);
                result.models.push_back({std::move(prop.closure), std::move(s)});
            }
            return true;
        }
        for (Color c : {Color::green, Color::red}) {
            Coloring next = prop.closure;
            next.set(branch, c);
            if (!descend(std::move(next), result)) return false;
        }
        return true;
    }

    const Edg& g_;
    SolveOptions options_;
    std::vector<int> order_;
};

}  // namespace detail

// All admissible total colorings paired with their interpretations, in
// deterministic search order (green before red on the first undecided vertex
// of the branch order).
inline SolveResult solve_colorings(const Edg& g, const SolveOptions& options = {}) {
    detail::require_kernel_graph(g);
    detail::ColoringSearch search(g, options);
    return search.run();
}

}  // namespace edgsolve
