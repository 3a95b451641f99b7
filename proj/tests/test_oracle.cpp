#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "edgsolve/oracle.hpp"
#include "support/fixtures.hpp"
#include "support/gen.hpp"

using namespace edgsolve;

TEST_CASE("reduct of pi1 under its stable model") {
    Program p = fixtures::pi1();
    Interpretation s = Interpretation::of(p, {"b", "h", "e"});
    PositiveProgram reduct = gl_reduct(p, s);
    REQUIRE(reduct.program.rule_count() == 3);
    for (const Rule& r : reduct.program.rules()) {
        CHECK(r.is_fact());
    }
    CHECK(p.atom_name(reduct.program.rule(0).head) == "b");
    CHECK(p.atom_name(reduct.program.rule(1).head) == "e");
    CHECK(p.atom_name(reduct.program.rule(2).head) == "h");
}

TEST_CASE("reduct leaves positive programs alone") {
    Program p = parse_program("c. a :- c. b :- a.");
    CHECK(gl_reduct(p, Interpretation::of(p, {"a"})).program == p);
    CHECK(gl_reduct(p, Interpretation{}).program == p);
}

TEST_CASE("reduct can empty a program") {
    Program p = parse_program("a :- not b.");
    CHECK(gl_reduct(p, Interpretation::of(p, {"b"})).program.empty());
}

TEST_CASE("minimal model") {
    Program facts = parse_program("b. e. h.");
    CHECK(minimal_model(PositiveProgram::check(facts)).names(facts) ==
          std::vector<std::string>{"b", "e", "h"});

    Program loop = parse_program("a :- b. b :- a.");
    CHECK(minimal_model(PositiveProgram::check(loop)).empty());

    Program chain = parse_program("c. a :- c. b :- a.");
    CHECK(minimal_model(PositiveProgram::check(chain)).names(chain) ==
          std::vector<std::string>{"a", "b", "c"});

    CHECK_THROWS_AS(PositiveProgram::check(parse_program("a :- not b.")), Error);
}

TEST_CASE("stability of the running examples") {
    Program p1 = fixtures::pi1();
    CHECK(is_stable(p1, Interpretation::of(p1, {"b", "h", "e"})));
    CHECK(!is_stable(p1, Interpretation::of(p1, {"a", "f", "p"})));

    Program p2 = fixtures::pi2();
    CHECK(is_stable(p2, Interpretation::of(p2, {"a", "f", "p"})));

    Program p3 = fixtures::pi3();
    std::vector<AtomId> universe = p3.occurring_atoms();
    REQUIRE(universe.size() == 6);
    for (uint64_t mask = 0; mask < 64; ++mask) {
        std::vector<AtomId> atoms;
        for (size_t i = 0; i < universe.size(); ++i)
            if (mask & (uint64_t{1} << i)) atoms.push_back(universe[i]);
        CHECK(!is_stable(p3, Interpretation(std::move(atoms))));
    }
}

TEST_CASE("brute enumeration") {
    Program two = parse_program(fixtures::kTwoModels);
    auto models = enumerate_stable_brute(two);
    CHECK(fixtures::names_of(two, models) ==
          std::vector<std::vector<std::string>>{{"p"}, {"q"}});

    Program odd = parse_program(fixtures::kOddTriple);
    CHECK(enumerate_stable_brute(odd).empty());

    Program empty;
    auto empty_models = enumerate_stable_brute(empty);
    REQUIRE(empty_models.size() == 1);
    CHECK(empty_models[0].empty());
}

TEST_CASE("atom cap") {
    // one head plus 24 distinct body atoms: 25 occurring atoms, cheap to solve
    std::string text = "a :- ";
    for (int i = 1; i <= 24; ++i) text += std::string(i > 1 ? ", not " : "not ") + gen::atom_name(i);
    text += ".\n";
    Program p = parse_program(text);
    REQUIRE(p.occurring_atoms().size() == 25);
    CHECK_THROWS_AS(enumerate_stable_brute(p), TooManyAtoms);
    auto models = enumerate_stable_brute(p, 25);
    REQUIRE(models.size() == 1);
    CHECK(models[0].names(p) == std::vector<std::string>{"a"});
}

TEST_CASE("survivors shrink as the interpretation grows") {
    std::mt19937 rng(17);
    for (int i = 0; i < 100; ++i) {
        Program p = gen::random_program(rng);
        std::vector<AtomId> atoms = p.occurring_atoms();
        if (atoms.empty()) continue;
        std::uniform_int_distribution<int> coin(0, 2);
        std::vector<AtomId> small, big;
        for (AtomId a : atoms) {
            int c = coin(rng);
            if (c == 0) small.push_back(a);
            if (c <= 1) big.push_back(a);
        }
        Interpretation s(small), t(big);
        // every rule surviving the big reduct survives the small one
        auto survives = [&](const Rule& r, const Interpretation& m) {
            for (AtomId a : r.neg)
                if (m.contains(a)) return false;
            return true;
        };
        for (const Rule& r : p.rules())
            if (survives(r, t)) CHECK(survives(r, s));
    }
}

TEST_CASE("minimal model is closed and head-bounded") {
    std::mt19937 rng(19);
    for (int i = 0; i < 100; ++i) {
        Program p = gen::random_program(rng);
        std::vector<AtomId> subset;
        for (AtomId a : p.occurring_atoms())
            if (a % 2 == 0) subset.push_back(a);
        PositiveProgram reduct = gl_reduct(p, Interpretation(subset));
        Interpretation lm = minimal_model(reduct);
        for (AtomId a : lm.atoms) CHECK(reduct.program.is_head(a));
        for (const Rule& r : reduct.program.rules()) {
            bool body_true = true;
            for (AtomId a : r.pos)
                if (!lm.contains(a)) body_true = false;
            if (body_true) CHECK(lm.contains(r.head));
        }
    }
}

TEST_CASE("enumeration output is exactly the stable set") {
    std::mt19937 rng(23);
    for (int i = 0; i < 50; ++i) {
        Program p = gen::random_program(rng, {6, 10, 2, 2, true});
        auto models = enumerate_stable_brute(p);
        for (const Interpretation& m : models) CHECK(is_stable(p, m));
        std::vector<AtomId> heads = p.head_atoms();
        uint64_t count = 0;
        for (uint64_t mask = 0; mask < (uint64_t{1} << heads.size()); ++mask) {
            std::vector<AtomId> atoms;
            for (size_t k = 0; k < heads.size(); ++k)
                if (mask & (uint64_t{1} << k)) atoms.push_back(heads[k]);
            if (is_stable(p, Interpretation(std::move(atoms)))) ++count;
        }
        CHECK(count == models.size());
    }
}
