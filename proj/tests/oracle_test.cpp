#include <doctest.h>

#include <random>

#include "mpr/oracle.hpp"
#include "support/chase.hpp"
#include "support/gen.hpp"
#include "support/util.hpp"

using namespace mpr;
using mpr::testing::c;
using mpr::testing::oatom;
using mpr::testing::v;

namespace {

Ontology person_ontology() {
    Ontology t;
    t.axioms.push_back(OntologyAxiom::concept_inclusion({"Empl"}, {"Person"}));
    t.axioms.push_back(OntologyAxiom::concept_inclusion({"Boss"}, {"Person"}));
    return t;
}

std::set<std::string> disjunct_strs(const UCQ& u) {
    std::set<std::string> out;
    for (const CQ& d : u.disjuncts) out.insert(d.canonical().str());
    return out;
}

} // namespace

TEST_CASE("rewriting Person(X) under two inclusions gives three disjuncts") {
    CQ q;
    q.answer_vars = {"X"};
    q.atoms.push_back(oatom("Person", {v("X")}));
    UCQ rew = rewrite_ucq(q, person_ontology());
    CHECK(disjunct_strs(rew) ==
          std::set<std::string>{"[X] Person(X)", "[X] Empl(X)", "[X] Boss(X)"});
}

TEST_CASE("rewriting an existential role atom reaches the subsumer concept") {
    auto spec = mpr::testing::jobs_spec();
    CQ q;
    q.answer_vars = {"X"};
    q.existential_vars = {"Y"};
    q.atoms.push_back(oatom("depHeadOf", {v("X"), v("Y")}));
    UCQ rew = rewrite_ucq(q, spec.ontology);
    CHECK(disjunct_strs(rew) ==
          std::set<std::string>{"[X] Boss(X)", "[X] exists _e0. depHeadOf(X,_e0)"});
}

TEST_CASE("rewriting with the empty ontology is the identity up to pruning") {
    CQ q;
    q.answer_vars = {"X"};
    q.atoms.push_back(oatom("P", {v("X")}));
    UCQ rew = rewrite_ucq(q, Ontology{});
    REQUIRE(rew.disjuncts.size() == 1);
    CHECK(rew.disjuncts[0] == q);
}

TEST_CASE("entails answers inclusion chains the atoms alone would miss") {
    EntailmentOracle oracle(person_ontology());
    MappingInterpretation A;
    A.atoms.insert(oatom("Empl", {c("a")}));

    CQ q;
    q.atoms.push_back(oatom("Person", {c("a")}));
    CHECK(oracle.entails(A, q, EntailmentOracle::Context::Query));

    CQ q2;
    q2.atoms.push_back(oatom("Boss", {c("a")}));
    CHECK_FALSE(oracle.entails(A, q2, EntailmentOracle::Context::Query));
}

TEST_CASE("boolean existential queries follow role subsumption") {
    auto spec = mpr::testing::jobs_spec();
    EntailmentOracle oracle(spec.ontology);
    MappingInterpretation A;
    A.atoms.insert(oatom("Boss", {c("a")}));

    CQ q;
    q.existential_vars = {"Y"};
    q.atoms.push_back(oatom("depHeadOf", {c("a"), v("Y")}));
    CHECK(oracle.entails(A, q, EntailmentOracle::Context::Query));

    CQ q2;
    q2.existential_vars = {"Y"};
    q2.atoms.push_back(oatom("hasSup", {v("Y"), c("a")}));
    CHECK(oracle.entails(A, q2, EntailmentOracle::Context::Query));

    CQ q3;
    q3.atoms.push_back(oatom("depHeadOf", {c("a"), c("b")}));
    CHECK_FALSE(oracle.entails(A, q3, EntailmentOracle::Context::Query));
}

TEST_CASE("supports returns the minimal entailing subsets") {
    EntailmentOracle oracle(person_ontology());
    MappingInterpretation A;
    A.atoms.insert(oatom("Empl", {c("a")}));
    A.atoms.insert(oatom("Boss", {c("a")}));
    A.atoms.insert(oatom("Person", {c("b")}));

    CQ q;
    q.atoms.push_back(oatom("Person", {c("a")}));
    UCQ u;
    u.disjuncts.push_back(q);
    auto supp = oracle.supports(A, u, EntailmentOracle::Context::CheckSat);
    std::set<std::set<Atom>> got(supp.begin(), supp.end());
    CHECK(got == std::set<std::set<Atom>>{{oatom("Empl", {c("a")})},
                                          {oatom("Boss", {c("a")})}});
}

TEST_CASE("consistency is exactly the absence of disjointness violations") {
    Ontology t = person_ontology();
    t.axioms.push_back(OntologyAxiom::concept_disjointness({"Empl"}, {"Mgr"}));
    EntailmentOracle oracle(t);

    MappingInterpretation A;
    A.atoms.insert(oatom("Empl", {c("a")}));
    A.atoms.insert(oatom("Mgr", {c("b")}));
    CHECK(oracle.is_consistent(A));

    A.atoms.insert(oatom("Mgr", {c("a")}));
    CHECK_FALSE(oracle.is_consistent(A));

    CQ q;
    q.atoms.push_back(oatom("Person", {c("a")}));
    CHECK_THROWS_AS(oracle.entails(A, q, EntailmentOracle::Context::Query), Error);
}

TEST_CASE("disjointness violations are found through inclusions") {
    Ontology t;
    t.axioms.push_back(OntologyAxiom::concept_inclusion({"Boss"}, {"Empl"}));
    t.axioms.push_back(OntologyAxiom::concept_disjointness({"Empl"}, {"Ext"}));
    EntailmentOracle oracle(t);

    MappingInterpretation A;
    A.atoms.insert(oatom("Boss", {c("a")}));
    A.atoms.insert(oatom("Ext", {c("a")}));
    CHECK_FALSE(oracle.is_consistent(A));
    CHECK(oracle.is_consistent(A.without(oatom("Ext", {c("a")}))));
}

TEST_CASE("entails_head requires every conjunct and never holds for bot") {
    EntailmentOracle oracle(person_ontology());
    MappingInterpretation A;
    A.atoms.insert(oatom("Empl", {c("a")}));

    std::vector<Atom> head{oatom("Person", {c("a")})};
    CHECK(oracle.entails_head(A, head, EntailmentOracle::Context::CheckSat));
    head.push_back(oatom("Boss", {c("a")}));
    CHECK_FALSE(oracle.entails_head(A, head, EntailmentOracle::Context::CheckSat));
    CHECK_FALSE(oracle.entails_head(A, std::nullopt, EntailmentOracle::Context::CheckSat));
}

TEST_CASE("counters attribute calls to the asking procedure") {
    EntailmentOracle oracle(person_ontology());
    oracle.reset_counters();
    MappingInterpretation A;
    A.atoms.insert(oatom("Empl", {c("a")}));
    CQ q;
    q.atoms.push_back(oatom("Person", {c("a")}));
    oracle.entails(A, q, EntailmentOracle::Context::MakeReduct);
    oracle.entails(A, q, EntailmentOracle::Context::CheckSat, true);

    auto counts = oracle.counters();
    CHECK(counts.positive[static_cast<std::size_t>(EntailmentOracle::Context::MakeReduct)] == 1);
    CHECK(counts.negative[static_cast<std::size_t>(EntailmentOracle::Context::CheckSat)] == 1);
    CHECK(counts.total() == 2);
    oracle.reset_counters();
    CHECK(oracle.counters().total() == 0);
}

TEST_CASE("oracle agrees with a bounded chase on random ontologies") {
    std::mt19937 rng(7);
    mpr::testing::GenOptions opts;
    for (int trial = 0; trial < 40; ++trial) {
        auto spec = mpr::testing::random_spec(rng, opts);
        EntailmentOracle oracle(spec.ontology);
        MappingInterpretation A;
        std::uniform_int_distribution<int> coin(0, 1);
        for (const std::string& name : {"a", "b"}) {
            if (coin(rng)) A.atoms.insert(oatom("P", {c(name)}));
            if (coin(rng)) A.atoms.insert(oatom("Q", {c(name)}));
            if (coin(rng)) A.atoms.insert(oatom("R", {c(name), c(coin(rng) ? "a" : "b")}));
        }
        bool cons = oracle.is_consistent(A);
        REQUIRE(cons == mpr::testing::chase_consistent(A.atoms, spec.ontology));
        if (!cons) continue;
        for (int qi = 0; qi < 4; ++qi) {
            CQ q = mpr::testing::random_ground_query(rng, spec);
            REQUIRE(oracle.entails(A, q, EntailmentOracle::Context::Query) ==
                    mpr::testing::chase_entails(A.atoms, spec.ontology, q));
        }
    }
}
