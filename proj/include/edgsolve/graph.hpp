#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "edgsolve/errors.hpp"
#include "edgsolve/program.hpp"

namespace edgsolve {

enum class EdgeSign { positive, negative };

inline char sign_char(EdgeSign s) { return s == EdgeSign::positive ? '+' : '-'; }

// Rule-level dependency graph: one vertex per rule, one per atom that never
// appears in a head, and a signed edge from every vertex of a body atom into
// the rule vertex it conditions.
class Edg {
public:
    // rule == -1 marks a vertex for an atom without defining rules.
    struct Vertex {
        AtomId atom;
        int rule_index;  // ordinal among rules with the same head, -1 if undefined
        int rule;        // global rule position, -1 if undefined
    };

    struct Edge {
        int from;
        int to;
        EdgeSign sign;

        friend bool operator==(const Edge& a, const Edge& b) {
            return a.from == b.from && a.to == b.to && a.sign == b.sign;
        }
    };

    Edg(std::vector<Vertex> vertices, std::vector<Edge> edges, std::vector<std::string> atom_names)
        : vertices_(std::move(vertices)), edges_(std::move(edges)), atom_names_(std::move(atom_names)) {
        std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
            return std::tie(a.from, a.to, a.sign) < std::tie(b.from, b.to, b.sign);
        });
        out_.resize(vertices_.size());
        in_.resize(vertices_.size());
        for (size_t i = 0; i < edges_.size(); ++i) {
            out_[static_cast<size_t>(edges_[i].from)].push_back(static_cast<int>(i));
            in_[static_cast<size_t>(edges_[i].to)].push_back(static_cast<int>(i));
        }
        for (size_t v = 0; v < vertices_.size(); ++v)
            atom_vertices_[vertices_[v].atom].push_back(static_cast<int>(v));
    }

    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    const std::vector<Vertex>& vertices() const { return vertices_; }
    const Vertex& vertex(int v) const { return vertices_.at(static_cast<size_t>(v)); }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<int>& out_edges(int v) const { return out_.at(static_cast<size_t>(v)); }
    const std::vector<int>& in_edges(int v) const { return in_.at(static_cast<size_t>(v)); }

    const std::vector<int>& vertices_of_atom(AtomId a) const {
        static const std::vector<int> none;
        auto it = atom_vertices_.find(a);
        return it == atom_vertices_.end() ? none : it->second;
    }

    const std::string& atom_name(AtomId a) const { return atom_names_.at(static_cast<size_t>(a)); }

    // Duplicate vertices follow the priming convention: a, a', a'', ...
    std::string label(int v) const {
        const Vertex& vx = vertex(v);
        std::string out = atom_name(vx.atom);
        for (int k = 0; k < vx.rule_index; ++k) out.push_back('\'');
        return out;
    }

    bool negative_only() const {
        return std::all_of(edges_.begin(), edges_.end(),
                           [](const Edge& e) { return e.sign == EdgeSign::negative; });
    }

    bool every_vertex_has_in_edge() const {
        for (size_t v = 0; v < vertices_.size(); ++v)
            if (in_[v].empty()) return false;
        return true;
    }

private:
    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::vector<std::string> atom_names_;
    std::vector<std::vector<int>> out_, in_;
    std::map<AtomId, std::vector<int>> atom_vertices_;
};

// Classical atom-level dependency graph.
class Dg {
public:
    struct Edge {
        int from;  // positions in atoms()
        int to;
        EdgeSign sign;
    };

    Dg(std::vector<AtomId> atoms, std::vector<Edge> edges, std::vector<std::string> atom_names)
        : atoms_(std::move(atoms)), edges_(std::move(edges)), atom_names_(std::move(atom_names)) {
        std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
            return std::tie(a.from, a.to, a.sign) < std::tie(b.from, b.to, b.sign);
        });
        edges_.erase(std::unique(edges_.begin(), edges_.end(),
                                 [](const Edge& a, const Edge& b) {
                                     return std::tie(a.from, a.to, a.sign) == std::tie(b.from, b.to, b.sign);
                                 }),
                     edges_.end());
    }

    const std::vector<AtomId>& atoms() const { return atoms_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::string label(int v) const { return atom_names_.at(static_cast<size_t>(atoms_.at(static_cast<size_t>(v)))); }

    // Equality up to atom names.
    friend bool operator==(const Dg& a, const Dg& b) {
        auto names = [](const Dg& g) {
            std::vector<std::string> out;
            for (size_t v = 0; v < g.atoms_.size(); ++v) out.push_back(g.label(static_cast<int>(v)));
            std::sort(out.begin(), out.end());
            return out;
        };
        auto edge_names = [](const Dg& g) {
            std::vector<std::tuple<std::string, std::string, char>> out;
            for (const Edge& e : g.edges_) out.emplace_back(g.label(e.from), g.label(e.to), sign_char(e.sign));
            std::sort(out.begin(), out.end());
            return out;
        };
        return names(a) == names(b) && edge_names(a) == edge_names(b);
    }

private:
    std::vector<AtomId> atoms_;
    std::vector<Edge> edges_;
    std::vector<std::string> atom_names_;
};

namespace detail {

inline std::vector<std::string> snapshot_names(const Program& p) {
    std::vector<std::string> names;
    names.reserve(static_cast<size_t>(p.atoms().size()));
    for (AtomId a = 0; a < p.atoms().size(); ++a) names.push_back(p.atom_name(a));
    return names;
}

// Head atoms in first-rule order, then undefined atoms alphabetically.
inline std::vector<AtomId> graph_atom_order(const Program& p) {
    std::vector<AtomId> order;
    std::set<AtomId> seen;
    for (const Rule& r : p.rules())
        if (seen.insert(r.head).second) order.push_back(r.head);
    std::vector<std::pair<std::string, AtomId>> undefined;
    for (AtomId a : p.occurring_atoms())
        if (!p.is_head(a)) undefined.emplace_back(p.atom_name(a), a);
    std::sort(undefined.begin(), undefined.end());
    for (const auto& [name, a] : undefined) order.push_back(a);
    return order;
}

}  // namespace detail

inline Edg build_edg(const Program& p) {
    std::vector<Edg::Vertex> vertices;
    for (int i = 0; i < p.rule_count(); ++i)
        vertices.push_back({p.rule(i).head, p.head_ordinal(i), i});
    for (AtomId a : detail::graph_atom_order(p))
        if (!p.is_head(a)) vertices.push_back({a, -1, -1});

    std::map<AtomId, std::vector<int>> of_atom;
    for (size_t v = 0; v < vertices.size(); ++v) of_atom[vertices[v].atom].push_back(static_cast<int>(v));

    std::vector<Edg::Edge> edges;
    for (int i = 0; i < p.rule_count(); ++i) {
        const Rule& r = p.rule(i);
        for (AtomId c : r.pos)
            for (int from : of_atom[c]) edges.push_back({from, i, EdgeSign::positive});
        for (AtomId c : r.neg)
            for (int from : of_atom[c]) edges.push_back({from, i, EdgeSign::negative});
    }
    return Edg(std::move(vertices), std::move(edges), detail::snapshot_names(p));
}

inline Dg build_dg(const Program& p) {
    std::vector<AtomId> atoms = detail::graph_atom_order(p);
    std::map<AtomId, int> index;
    for (size_t i = 0; i < atoms.size(); ++i) index[atoms[i]] = static_cast<int>(i);

    std::vector<Dg::Edge> edges;
    for (const Rule& r : p.rules()) {
        int to = index[r.head];
        for (AtomId c : r.pos) edges.push_back({index[c], to, EdgeSign::positive});
        for (AtomId c : r.neg) edges.push_back({index[c], to, EdgeSign::negative});
    }
    return Dg(std::move(atoms), std::move(edges), detail::snapshot_names(p));
}

// Incoming arc of a cycle. OR handles come from a duplicate vertex of a cycle
// atom (an alternative rule for it), AND handles from an atom outside the cycle.
struct Handle {
    Edg::Edge edge;
    enum class Kind { AND, OR } kind;
    AtomId source_atom;
};

// Elementary directed cycle over negative edges, listed from its smallest vertex.
struct CycleInfo {
    std::vector<int> vertices;
    std::vector<AtomId> atoms;  // sorted, unique
    bool odd;
    std::vector<Handle> handles;
};

namespace detail {

// Tarjan over an adjacency restricted to a vertex subset, iterative.
inline std::vector<int> scc_ids(const std::vector<std::vector<int>>& adj, const std::vector<char>& alive) {
    int n = static_cast<int>(adj.size());
    std::vector<int> comp(static_cast<size_t>(n), -1), low(static_cast<size_t>(n)), num(static_cast<size_t>(n), -1);
    std::vector<int> stack;
    std::vector<char> on_stack(static_cast<size_t>(n), 0);
    int counter = 0, comps = 0;

    struct Frame { int v; size_t edge; };
    for (int root = 0; root < n; ++root) {
        if (!alive[static_cast<size_t>(root)] || num[static_cast<size_t>(root)] != -1) continue;
        std::vector<Frame> frames{{root, 0}};
        num[static_cast<size_t>(root)] = low[static_cast<size_t>(root)] = counter++;
        stack.push_back(root);
        on_stack[static_cast<size_t>(root)] = 1;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.edge < adj[static_cast<size_t>(f.v)].size()) {
                int w = adj[static_cast<size_t>(f.v)][f.edge++];
                if (!alive[static_cast<size_t>(w)]) continue;
                if (num[static_cast<size_t>(w)] == -1) {
                    num[static_cast<size_t>(w)] = low[static_cast<size_t>(w)] = counter++;
                    stack.push_back(w);
                    on_stack[static_cast<size_t>(w)] = 1;
                    frames.push_back({w, 0});
                } else if (on_stack[static_cast<size_t>(w)]) {
                    low[static_cast<size_t>(f.v)] = std::min(low[static_cast<size_t>(f.v)], num[static_cast<size_t>(w)]);
                }
            } else {
                int v = f.v;
                frames.pop_back();
                if (!frames.empty())
                    low[static_cast<size_t>(frames.back().v)] =
                        std::min(low[static_cast<size_t>(frames.back().v)], low[static_cast<size_t>(v)]);
                if (low[static_cast<size_t>(v)] == num[static_cast<size_t>(v)]) {
                    for (;;) {
                        int w = stack.back();
                        stack.pop_back();
                        on_stack[static_cast<size_t>(w)] = 0;
                        comp[static_cast<size_t>(w)] = comps;
                        if (w == v) break;
                    }
                    ++comps;
                }
            }
        }
    }
    return comp;
}

// Johnson's elementary-circuit search over one strong component.
class CircuitSearch {
public:
    CircuitSearch(const std::vector<std::vector<int>>& adj, long cap, long& count,
                  std::vector<std::vector<int>>& out)
        : adj_(adj), cap_(cap), count_(count), out_(out) {
        size_t n = adj.size();
        blocked_.assign(n, 0);
        blocklist_.assign(n, {});
    }

    void run(int start) {
        start_ = start;
        circuit(start);
        for (auto& b : blocklist_) b.clear();
        std::fill(blocked_.begin(), blocked_.end(), 0);
    }

private:
    bool circuit(int v) {
        bool found = false;
        path_.push_back(v);
        blocked_[static_cast<size_t>(v)] = 1;
        for (int w : adj_[static_cast<size_t>(v)]) {
            if (w == start_) {
                if (++count_ > cap_) throw CycleBudgetExceeded(cap_);
                out_.push_back(path_);
                found = true;
            } else if (!blocked_[static_cast<size_t>(w)]) {
                if (circuit(w)) found = true;
            }
        }
        if (found) {
            unblock(v);
        } else {
            for (int w : adj_[static_cast<size_t>(v)]) {
                auto& lst = blocklist_[static_cast<size_t>(w)];
                if (std::find(lst.begin(), lst.end(), v) == lst.end()) lst.push_back(v);
            }
        }
        path_.pop_back();
        return found;
    }

    void unblock(int v) {
        blocked_[static_cast<size_t>(v)] = 0;
        auto pending = std::move(blocklist_[static_cast<size_t>(v)]);
        blocklist_[static_cast<size_t>(v)].clear();
        for (int u : pending)
            if (blocked_[static_cast<size_t>(u)]) unblock(u);
    }

    const std::vector<std::vector<int>>& adj_;
    long cap_;
    long& count_;
    std::vector<std::vector<int>>& out_;
    std::vector<char> blocked_;
    std::vector<std::vector<int>> blocklist_;
    std::vector<int> path_;
    int start_ = -1;
};

}  // namespace detail

// All elementary cycles of the negative subgraph, each once, rooted at its
// smallest vertex. Throws CycleBudgetExceeded past `cap` cycles.
inline std::vector<CycleInfo> enumerate_cycles(const Edg& g, long cap = kDefaultCycleCap) {
    int n = g.vertex_count();
    std::vector<std::vector<int>> adj(static_cast<size_t>(n));
    for (const Edg::Edge& e : g.edges())
        if (e.sign == EdgeSign::negative) adj[static_cast<size_t>(e.from)].push_back(e.to);
    for (auto& a : adj) std::sort(a.begin(), a.end());

    std::vector<std::vector<int>> raw;
    long count = 0;
    for (int s = 0; s < n; ++s) {
        std::vector<char> alive(static_cast<size_t>(n), 0);
        for (int v = s; v < n; ++v) alive[static_cast<size_t>(v)] = 1;
        std::vector<int> comp = detail::scc_ids(adj, alive);
        // restrict to the strong component of s
        std::vector<std::vector<int>> sub(static_cast<size_t>(n));
        for (int v = s; v < n; ++v) {
            if (comp[static_cast<size_t>(v)] != comp[static_cast<size_t>(s)]) continue;
            for (int w : adj[static_cast<size_t>(v)])
                if (w >= s && comp[static_cast<size_t>(w)] == comp[static_cast<size_t>(s)])
                    sub[static_cast<size_t>(v)].push_back(w);
        }
        if (sub[static_cast<size_t>(s)].empty()) continue;
        detail::CircuitSearch search(sub, cap, count, raw);
        search.run(s);
    }

    std::vector<CycleInfo> cycles;
    cycles.reserve(raw.size());
    for (auto& path : raw) {
        CycleInfo info;
        info.vertices = std::move(path);
        for (int v : info.vertices) info.atoms.push_back(g.vertex(v).atom);
        detail::sort_unique(info.atoms);
        info.odd = info.vertices.size() % 2 == 1;
        cycles.push_back(std::move(info));
    }
    return cycles;
}

// Every edge entering the cycle from outside its vertex set, classified.
inline std::vector<Handle> find_handles(const CycleInfo& c, const Edg& g) {
    std::set<int> in_cycle(c.vertices.begin(), c.vertices.end());
    std::vector<Handle> handles;
    for (const Edg::Edge& e : g.edges()) {
        if (!in_cycle.count(e.to) || in_cycle.count(e.from)) continue;
        AtomId source = g.vertex(e.from).atom;
        bool duplicate_of_cycle_atom = detail::sorted_contains(c.atoms, source);
        handles.push_back({e, duplicate_of_cycle_atom ? Handle::Kind::OR : Handle::Kind::AND, source});
    }
    return handles;
}

namespace detail {

inline std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

template <typename Edges, typename LabelFrom, typename LabelTo, typename LabelVertex>
std::string render_dot(const std::string& name, int vertex_count, const Edges& edges,
                       LabelFrom&& from_label, LabelTo&& to_label, LabelVertex&& vertex_label) {
    std::ostringstream out;
    out << "digraph " << name << " {\n";
    for (int v = 0; v < vertex_count; ++v) out << "  " << dot_quote(vertex_label(v)) << ";\n";
    for (const auto& e : edges) {
        out << "  " << dot_quote(from_label(e)) << " -> " << dot_quote(to_label(e));
        if (e.sign == EdgeSign::negative)
            out << " [style=dashed, label=\"-\"]";
        else
            out << " [label=\"+\"]";
        out << ";\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace detail

inline std::string to_dot(const Edg& g) {
    return detail::render_dot(
        "edg", g.vertex_count(), g.edges(), [&](const Edg::Edge& e) { return g.label(e.from); },
        [&](const Edg::Edge& e) { return g.label(e.to); }, [&](int v) { return g.label(v); });
}

inline std::string to_dot(const Dg& g) {
    return detail::render_dot(
        "dg", static_cast<int>(g.atoms().size()), g.edges(),
        [&](const Dg::Edge& e) { return g.label(e.from); }, [&](const Dg::Edge& e) { return g.label(e.to); },
        [&](int v) { return g.label(v); });
}

}  // namespace edgsolve
