#include <doctest.h>

#include "mpr/grounder.hpp"
#include "support/util.hpp"

using namespace mpr;
using mpr::testing::c;
using mpr::testing::oatom;
using mpr::testing::v;

TEST_CASE("skolemize names functions after the variable, with collision suffixes") {
    auto spec = mpr::testing::jobs_spec();
    SkolemProgram sk = skolemize(spec.rules);
    REQUIRE(sk.skolem_symbols.size() == 1);
    CHECK(sk.skolem_symbols.count("sk_z"));
    CHECK(sk.skolem_symbols.at("sk_z") == std::vector<std::string>{"X"});

    // m1's head existential Z became sk_z(X); the neg just Y stayed a variable.
    const MappingRule& m1 = sk.rules[0];
    CHECK(m1.head->existential_vars.empty());
    CHECK(m1.head->atoms[0].args[1] == Term::skolem("sk_z", {v("X")}));
    CHECK(m1.neg_justs[0].existential_vars.count("_Y"));

    // A second rule reusing the same existential name gets a fresh symbol.
    std::vector<MappingRule> two{spec.rules[0], spec.rules[0]};
    two[1].label = "m1b";
    SkolemProgram sk2 = skolemize(two);
    REQUIRE(sk2.skolem_symbols.size() == 2);
    CHECK(sk2.skolem_symbols.count("sk_z"));
    CHECK(sk2.skolem_symbols.count("sk_z_2"));
}

TEST_CASE("eval_source answers top at every arity") {
    DatabaseInstance db;
    db.add(Atom{"s", Namespace::Source, {c("a"), c("b")}});
    db.add(Atom{"t", Namespace::Source, {c("b")}});

    CQ unary;
    unary.answer_vars = {"X"};
    unary.atoms.push_back(Atom{"top", Namespace::Source, {v("X")}});
    CHECK(eval_source(unary, db).size() == 2); // active domain {a, b}

    CQ binary;
    binary.answer_vars = {"X", "Y"};
    binary.atoms.push_back(Atom{"top", Namespace::Source, {v("X"), v("Y")}});
    auto ans = eval_source(binary, db);
    REQUIRE(ans.size() == 1); // only s has arity 2
    CHECK(ans[0].at("X") == c("a"));
    CHECK(ans[0].at("Y") == c("b"));

    CQ ternary;
    ternary.answer_vars = {"X", "Y", "Z"};
    ternary.atoms.push_back(Atom{"top", Namespace::Source, {v("X"), v("Y"), v("Z")}});
    CHECK(eval_source(ternary, db).size() == 8); // no arity-3 relation: 2^3 tuples
}

TEST_CASE("unknown source predicates answer empty, or fail in strict mode") {
    DatabaseInstance db;
    db.add(Atom{"s", Namespace::Source, {c("a")}});
    CQ q;
    q.answer_vars = {"X"};
    q.atoms.push_back(Atom{"nosuch", Namespace::Source, {v("X")}});
    CHECK(eval_source(q, db).empty());
    CHECK_THROWS_AS(eval_source(q, db, nullptr, true), Error);

    // A declared-but-empty relation is fine even in strict mode.
    Signature sig;
    sig.declare("nosuch", 1, Namespace::Source);
    CHECK(eval_source(q, db, &sig, true).empty());
}

TEST_CASE("relevant grounding keeps only source-certified instances") {
    auto spec = mpr::testing::jobs_spec();
    PartialGroundProgram pg = partial_ground(skolemize(spec.rules), spec.database);
    REQUIRE(pg.rules.size() == 3); // one instance of each rule for jobs_db(a,b)
    for (const GroundRule& r : pg.rules) CHECK(r.source_certified);

    const GroundRule& g1 = pg.rules[0];
    CHECK(g1.origin == 0);
    CHECK(g1.head->at(0) == oatom("hasSup", {c("a"), Term::skolem("sk_z", {c("a")})}));
    // The neg-justification existential survives grounding.
    REQUIRE(g1.neg_justs.size() == 1);
    CHECK_FALSE(g1.neg_justs[0].is_ground());
    CHECK(g1.neg_justs[0].is_boolean());
    CHECK(g1.neg_justs[0].atoms[0].args[0] == c("a"));
}

TEST_CASE("full grounding ranges over all grounding constants") {
    auto spec = mpr::testing::jobs_spec();
    PartialGroundProgram pg =
        partial_ground(skolemize(spec.rules), spec.database, GroundMode::Full);
    // m1: 2x2, m2: 2, m3: 2x2 over constants {a, b}.
    CHECK(pg.rules.size() == 10);
    std::size_t m1_count = 0;
    for (const GroundRule& r : pg.rules) {
        CHECK_FALSE(r.source_certified);
        if (r.origin == 0) ++m1_count;
    }
    CHECK(m1_count == 4);
    CHECK(pg.count_neg_justs() == 4);
}

TEST_CASE("rule constants join the grounding domain") {
    auto spec = mpr::testing::jobs_spec();
    spec.database.facts.clear();
    spec.database.add(Atom{"jobs_db", Namespace::Source, {c("x1"), c("x1")}});
    SkolemProgram sk = skolemize(spec.rules);
    // m2 mentions the constant b, so full grounding uses {b, x1}.
    CHECK(grounding_constants(sk, spec.database) == std::set<std::string>{"b", "x1"});
    PartialGroundProgram pg = partial_ground(sk, spec.database, GroundMode::Full);
    CHECK(pg.rules.size() == 10);
}

TEST_CASE("grounding and herbrand caps are enforced") {
    auto spec = mpr::testing::jobs_spec();
    SkolemProgram sk = skolemize(spec.rules);
    Limits tight;
    tight.ground_cap = 5;
    CHECK_THROWS_AS(partial_ground(sk, spec.database, GroundMode::Full, tight), Error);
    tight.herbrand_cap = 10;
    CHECK_THROWS_AS(herbrand_base(sk, spec.database, tight), Error);
    try {
        herbrand_base(sk, spec.database, tight);
    } catch (const Error& e) {
        CHECK(e.kind() == Error::Kind::Cap);
    }
}
