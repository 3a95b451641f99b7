#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "edgsolve/coloring.hpp"
#include "edgsolve/kernel.hpp"
#include "edgsolve/oracle.hpp"
#include "support/fixtures.hpp"
#include "support/gen.hpp"

using namespace edgsolve;

namespace {

// color a graph by vertex label
Coloring color_by_label(const Edg& g, const std::map<std::string, Color>& colors) {
    Coloring c(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) c.set(v, colors.at(g.label(v)));
    return c;
}

Coloring all(const Edg& g, Color color) {
    Coloring c(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) c.set(v, color);
    return c;
}

}  // namespace

TEST_CASE("the known admissible coloring of pi1") {
    Edg g = build_edg(fixtures::pi1());
    Coloring c = color_by_label(g, {{"p", Color::red},
                                    {"a", Color::red},
                                    {"b", Color::green},
                                    {"e", Color::green},
                                    {"f", Color::red},
                                    {"h", Color::red},
                                    {"h'", Color::green}});
    AdmissibilityResult r = is_admissible(g, c);
    CHECK(r.admissible);
    CHECK(coloring_to_interpretation(g, c).names(fixtures::pi1()) ==
          std::vector<std::string>{"b", "e", "h"});
}

TEST_CASE("green e and green h violate their edge") {
    Edg g = build_edg(fixtures::pi1());
    Coloring c = color_by_label(g, {{"p", Color::red},
                                    {"a", Color::red},
                                    {"b", Color::green},
                                    {"e", Color::green},
                                    {"f", Color::red},
                                    {"h", Color::green},
                                    {"h'", Color::green}});
    AdmissibilityResult r = is_admissible(g, c);
    CHECK(!r.admissible);
    bool found = false;
    for (const Violation& v : r.violations) {
        if (v.kind != Violation::Kind::green_green_edge) continue;
        if (g.label(v.edge.from) == "e" && g.label(v.edge.to) == "h") found = true;
    }
    CHECK(found);
}

TEST_CASE("an all-red feed into a red vertex is rejected") {
    Edg g = build_edg(fixtures::pi1());
    Coloring c = color_by_label(g, {{"p", Color::red},
                                    {"a", Color::red},
                                    {"b", Color::green},
                                    {"e", Color::green},
                                    {"f", Color::red},
                                    {"h", Color::red},
                                    {"h'", Color::red}});
    AdmissibilityResult r = is_admissible(g, c);
    CHECK(!r.admissible);
    bool found = false;
    for (const Violation& v : r.violations)
        if (v.kind == Violation::Kind::red_all_red_in && g.label(v.vertex) == "f") found = true;
    CHECK(found);
}

TEST_CASE("self-loop propagation conflicts") {
    Edg g = build_edg(parse_program("p :- not p."));

    PropagationResult idle = propagate(g, Coloring(g.vertex_count()));
    CHECK(!idle.conflict);
    CHECK(idle.closure.at(0) == Color::unassigned);

    Coloring seeded(g.vertex_count());
    seeded.set(0, Color::green);
    PropagationResult clash = propagate(g, seeded);
    REQUIRE(clash.conflict);
    CHECK(clash.conflict->vertex == 0);

    // both total colorings are inadmissible
    CHECK(!is_admissible(g, all(g, Color::green)).admissible);
    CHECK(!is_admissible(g, all(g, Color::red)).admissible);
}

TEST_CASE("the golden cascade from h-prime") {
    Edg g = build_edg(fixtures::pi1());
    std::map<std::string, int> at;
    for (int v = 0; v < g.vertex_count(); ++v) at[g.label(v)] = v;

    Coloring seed(g.vertex_count());
    seed.set(at["h'"], Color::green);
    PropagationResult r = propagate(g, seed);
    REQUIRE(!r.conflict);
    CHECK(r.closure.at(at["h'"]) == Color::green);
    CHECK(r.closure.at(at["f"]) == Color::red);
    CHECK(r.closure.at(at["e"]) == Color::green);
    CHECK(r.closure.at(at["p"]) == Color::red);
    CHECK(r.closure.at(at["h"]) == Color::red);
    CHECK(r.closure.at(at["a"]) == Color::unassigned);
    CHECK(r.closure.at(at["b"]) == Color::unassigned);
}

TEST_CASE("propagation on the even loop") {
    Edg g = build_edg(parse_program("a :- not b. b :- not a."));
    Coloring seed(g.vertex_count());
    seed.set(0, Color::green);
    PropagationResult r = propagate(g, seed);
    REQUIRE(!r.conflict);
    CHECK(r.closure.at(1) == Color::red);
    CHECK(is_admissible(g, r.closure).admissible);
}

TEST_CASE("solving the running examples") {
    SolveResult r1 = solve_colorings(build_edg(fixtures::pi1()));
    REQUIRE(r1.models.size() == 1);
    CHECK(r1.models[0].interpretation.names(fixtures::pi1()) ==
          std::vector<std::string>{"b", "e", "h"});
    CHECK(!r1.truncated);

    CHECK(solve_colorings(build_edg(fixtures::pi3())).models.empty());

    Program even = parse_program("a :- not b. b :- not a.");
    SolveResult r2 = solve_colorings(build_edg(even));
    REQUIRE(r2.models.size() == 2);
}

TEST_CASE("empty graph has exactly the empty model") {
    SolveResult r = solve_colorings(build_edg(Program{}));
    REQUIRE(r.models.size() == 1);
    CHECK(r.models[0].interpretation.empty());
}

TEST_CASE("model cap is reported") {
    Program even = parse_program("a :- not b. b :- not a.");
    SolveOptions opts;
    opts.max_models = 1;
    SolveResult r = solve_colorings(build_edg(even), opts);
    CHECK(r.models.size() == 1);
    CHECK(r.truncated);
}

TEST_CASE("non-kernel graphs are rejected") {
    CHECK_THROWS_AS(solve_colorings(build_edg(parse_program("a :- c, not b."))), NonKernelGraph);
    CHECK_THROWS_AS(solve_colorings(build_edg(parse_program("a :- not b."))), NonKernelGraph);
}

TEST_CASE("interpretation to coloring and back") {
    Program p = fixtures::pi1();
    Edg g = build_edg(p);

    Interpretation s = Interpretation::of(p, {"b", "h", "e"});
    Coloring c = interpretation_to_coloring(g, s);
    std::map<std::string, Color> expected{{"p", Color::red},  {"a", Color::red},
                                          {"b", Color::green}, {"e", Color::green},
                                          {"f", Color::red},  {"h", Color::red},
                                          {"h'", Color::green}};
    for (int v = 0; v < g.vertex_count(); ++v) CHECK(c.at(v) == expected.at(g.label(v)));
    CHECK(is_admissible(g, c).admissible);
    CHECK(coloring_to_interpretation(g, c) == s);

    SUBCASE("the empty interpretation on a self-loop is not admissible") {
        Edg loop = build_edg(parse_program("p :- not p."));
        Coloring lc = interpretation_to_coloring(loop, Interpretation{});
        CHECK(lc.at(0) == Color::green);  // body satisfied, yet inadmissible
        CHECK(!is_admissible(loop, lc).admissible);
    }

    SUBCASE("two-atom loop") {
        Program even = parse_program("a :- not b. b :- not a.");
        Edg eg = build_edg(even);
        Coloring ec = interpretation_to_coloring(eg, Interpretation::of(even, {"a"}));
        CHECK(ec.at(0) == Color::green);
        CHECK(ec.at(1) == Color::red);
    }
}

TEST_CASE("local fixpoint law on admissible colorings") {
    std::mt19937 rng(67);
    for (int i = 0; i < 60; ++i) {
        KernelProgram kp = gen::random_kernel(rng, {6, 10, 1, 2, true});
        Edg g = build_edg(kp.program);
        for (const ColoringModel& m : solve_colorings(g).models) {
            for (int v = 0; v < g.vertex_count(); ++v) {
                bool all_in_red = true;
                for (int ei : g.in_edges(v))
                    if (m.coloring.at(g.edges()[static_cast<size_t>(ei)].from) != Color::red)
                        all_in_red = false;
                CHECK((m.coloring.at(v) == Color::green) == all_in_red);
            }
        }
    }
}

TEST_CASE("admissible colorings are exactly the stable models") {
    std::mt19937 rng(71);
    int exhaustive_checked = 0;
    for (int i = 0; i < 120; ++i) {
        KernelProgram kp = gen::random_kernel(rng, {6, 9, 1, 2, true});
        Edg g = build_edg(kp.program);
        int n = g.vertex_count();
        if (n > 8) continue;
        ++exhaustive_checked;

        std::set<std::vector<AtomId>> images;
        long admissible = 0;
        for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask) {
            Coloring c(n);
            for (int v = 0; v < n; ++v)
                c.set(v, (mask & (uint64_t{1} << v)) ? Color::green : Color::red);
            if (is_admissible(g, c).admissible) {
                ++admissible;
                images.insert(coloring_to_interpretation(g, c).atoms);
            }
        }
        auto stable = enumerate_stable_brute(kp.program);
        CHECK(admissible == static_cast<long>(stable.size()));
        CHECK(images.size() == stable.size());  // injectivity on admissible colorings
        for (const Interpretation& s : stable) CHECK(images.count(s.atoms) == 1);
    }
    CHECK(exhaustive_checked > 20);
}

TEST_CASE("round trip through colorings for every stable model") {
    std::mt19937 rng(73);
    for (int i = 0; i < 60; ++i) {
        KernelProgram kp = gen::random_kernel(rng, {7, 11, 1, 2, true});
        Edg g = build_edg(kp.program);
        for (const Interpretation& s : enumerate_stable_brute(kp.program)) {
            Coloring c = interpretation_to_coloring(g, s);
            CHECK(is_admissible(g, c).admissible);
            CHECK(coloring_to_interpretation(g, c) == s);
        }
    }
}

TEST_CASE("heuristics agree on the model set") {
    std::mt19937 rng(79);
    for (int i = 0; i < 60; ++i) {
        KernelProgram kp = gen::random_kernel(rng, {7, 11, 1, 2, true});
        Edg g = build_edg(kp.program);
        SolveOptions handles;
        SolveOptions lex;
        lex.heuristic = SolveOptions::Heuristic::lexicographic;
        std::set<std::vector<AtomId>> a, b;
        for (const ColoringModel& m : solve_colorings(g, handles).models) a.insert(m.interpretation.atoms);
        for (const ColoringModel& m : solve_colorings(g, lex).models) b.insert(m.interpretation.atoms);
        CHECK(a == b);
    }
}

TEST_CASE("solver output matches brute force through the full pipeline") {
    std::mt19937 rng(83);
    for (int i = 0; i < 120; ++i) {
        Program p = gen::random_program(rng, {8, 14, 2, 3, true});
        std::vector<Interpretation> expected = enumerate_stable_brute(p);
        std::vector<Interpretation> actual;
        try {
            auto [kernel, log] = to_kernel(p);
            for (const ColoringModel& m : solve_colorings(build_edg(kernel.program)).models)
                actual.push_back(reconstruct_model(m.interpretation, log));
        } catch (const UnfoldBudgetExceeded&) {
            continue;
        }
        std::sort(actual.begin(), actual.end());
        REQUIRE(fixtures::names_of(p, actual) == fixtures::names_of(p, expected));
    }
}
