#include <doctest.h>

#include "mpr/compiler.hpp"
#include "support/util.hpp"

using namespace mpr;
using mpr::testing::c;
using mpr::testing::oatom;
using mpr::testing::v;

namespace {

Atom prop(const std::string& name) { return Atom{name, Namespace::Ontology, {}}; }

std::set<Atom> ontology_part(const std::set<Atom>& atoms) {
    std::set<Atom> out;
    for (const Atom& a : atoms)
        if (a.ns == Namespace::Ontology) out.insert(a);
    return out;
}

} // namespace

TEST_CASE("rewrite_rule distributes the negative justification over its rewriting") {
    auto spec = mpr::testing::jobs_spec();
    SkolemProgram sk = skolemize(spec.rules);
    MappingRule rw = rewrite_rule(sk.rules[0], spec.ontology);

    REQUIRE(rw.neg_justs.size() == 2);
    std::set<std::string> justs{rw.neg_justs[0].str(), rw.neg_justs[1].str()};
    CHECK(justs.count("[X] Boss(X)"));
    CHECK(rw.head->str() == sk.rules[0].head->str());
    CHECK(rw.source_query.str() == sk.rules[0].source_query.str());
}

TEST_CASE("rewriting with the empty ontology leaves the program unchanged") {
    auto spec = mpr::testing::jobs_spec();
    SkolemProgram sk = skolemize(spec.rules);
    RewrittenProgram rw = rewrite_program(sk, Ontology{});
    REQUIRE(rw.program.rules.size() == sk.rules.size());
    for (std::size_t i = 0; i < sk.rules.size(); ++i) {
        CHECK(rw.source_rule[i] == i);
        CHECK(rw.program.rules[i].label == sk.rules[i].label);
        REQUIRE(rw.program.rules[i].neg_justs.size() == sk.rules[i].neg_justs.size());
        for (std::size_t j = 0; j < sk.rules[i].neg_justs.size(); ++j)
            CHECK(rw.program.rules[i].neg_justs[j] == sk.rules[i].neg_justs[j]);
    }
}

TEST_CASE("positive disjuncts distribute into one rule copy each") {
    GeneralizedObdaSpec spec = parse_spec(
        "%ontology\n"
        "Empl [= Person.\n"
        "Boss [= Person.\n"
        "%mapping\n"
        "m: Head(X) <- (Person(X)), @s(X).\n"
        "%database\n"
        "s(a).\n");
    RewrittenProgram rw = rewrite_program(skolemize(spec.rules), spec.ontology);
    REQUIRE(rw.program.rules.size() == 3);
    std::set<std::string> labels, justs;
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(rw.source_rule[i] == 0);
        labels.insert(rw.program.rules[i].label);
        REQUIRE(rw.program.rules[i].pos_justs.size() == 1);
        justs.insert(rw.program.rules[i].pos_justs[0].str());
    }
    CHECK(labels == std::set<std::string>{"m.1", "m.2", "m.3"});
    CHECK(justs == std::set<std::string>{"[X] Person(X)", "[X] Empl(X)", "[X] Boss(X)"});
}

TEST_CASE("chosen disjuncts split into connected components") {
    GeneralizedObdaSpec spec = parse_spec(
        "%mapping\n"
        "m: Head(X) <- (R(X, _Y), P(_Z)), @s(X).\n"
        "%database\n"
        "s(a).\n");
    RewrittenProgram rw = rewrite_program(skolemize(spec.rules), Ontology{});
    REQUIRE(rw.program.rules.size() == 1);
    const MappingRule& r = rw.program.rules[0];
    CHECK(r.label == "m"); // single copy keeps the label
    REQUIRE(r.pos_justs.size() == 2);
    std::set<std::string> parts{r.pos_justs[0].str(), r.pos_justs[1].str()};
    CHECK(parts == std::set<std::string>{"[X] exists _e0. R(X,_e0)", "exists _e0. P(_e0)"});
}

TEST_CASE("rewriting commutes with the reduct on the running example") {
    auto spec = mpr::testing::jobs_spec();
    SkolemProgram sk = skolemize(spec.rules);
    MappingInterpretation A;
    A.atoms = {oatom("Empl", {c("a")}), oatom("Boss", {c("a")})};
    CHECK(reduct_commutes_check(sk, spec.ontology, spec.database, A));
    CHECK(reduct_commutes_check(sk, spec.ontology, spec.database, MappingInterpretation{}));
    CHECK(reduct_commutes_check(sk, Ontology{}, spec.database, A));
}

TEST_CASE("to_exists_asp compiles the source away and keeps D as facts") {
    auto spec = mpr::testing::jobs_spec();
    RewrittenProgram rw = rewrite_program(skolemize(spec.rules), spec.ontology);
    ExistsAspProgram ep = to_exists_asp(rw, spec.database);

    CHECK(ep.domain.size() == 4); // a, b, sk_z(a), sk_z(b)
    REQUIRE(ep.rules.size() == 4);
    // Fact rule for the database tuple.
    CHECK(ep.rules[0].head == std::vector<Atom>{Atom{"jobs_db", Namespace::Source, {c("a"), c("b")}}});
    CHECK(ep.rules[0].pos_body.empty());
    // m1's instance keeps both rewritten negative bodies.
    const ExistsRule& m1 = ep.rules[1];
    CHECK(m1.head == std::vector<Atom>{oatom("hasSup", {c("a"), Term::skolem("sk_z", {c("a")})})});
    CHECK(m1.neg_bodies.size() == 2);
    CHECK(m1.pos_body == std::vector<Atom>{Atom{"jobs_db", Namespace::Source, {c("a"), c("b")}},
                                           oatom("Empl", {c("a")})});
}

TEST_CASE("exists_to_classical introduces one aux predicate per negative pattern") {
    auto spec = mpr::testing::jobs_spec();
    ClassicalAspProgram cp =
        compile_classical(skolemize(spec.rules), spec.ontology, spec.database);

    CHECK(cp.aux_preds == std::set<std::string>{"aux_0"});
    std::size_t aux_defs = 0;
    const ClassicalRule* main_rule = nullptr;
    for (const ClassicalRule& r : cp.rules) {
        if (r.head && r.head->pred == "aux_0") {
            ++aux_defs;
            REQUIRE(r.pos.size() == 1);
            CHECK(r.pos[0].pred == "depHeadOf");
        }
        if (r.head && r.head->pred == "hasSup") main_rule = &r;
    }
    // One defining rule per domain term for the existential Y.
    CHECK(aux_defs == 4);
    REQUIRE(main_rule);
    // Boss(a) is a single ground atom, so it skips the aux predicate.
    std::set<std::string> neg;
    for (const Atom& a : main_rule->neg) neg.insert(a.str());
    CHECK(neg == std::set<std::string>{"aux_0(a)", "Boss(a)"});
}

TEST_CASE("ground single-atom negative bodies skip the aux predicate entirely") {
    ExistsAspProgram ep;
    ep.domain = {c("a")};
    CQ nb;
    nb.atoms.push_back(oatom("Q", {c("a")}));
    ep.rules.push_back(ExistsRule{{oatom("P", {c("a")})}, {}, {nb}});
    ClassicalAspProgram cp = exists_to_classical(ep);
    CHECK(cp.aux_preds.empty());
    REQUIRE(cp.rules.size() == 1);
    CHECK(cp.rules[0].neg == std::vector<Atom>{oatom("Q", {c("a")})});
}

TEST_CASE("solve_classical on textbook programs") {
    SUBCASE("even loop has two stable models") {
        ClassicalAspProgram p;
        p.rules.push_back(ClassicalRule{prop("p"), {}, {prop("q")}});
        p.rules.push_back(ClassicalRule{prop("q"), {}, {prop("p")}});
        auto models = solve_classical(p);
        CHECK(models == std::vector<std::set<Atom>>{{prop("p")}, {prop("q")}});
    }
    SUBCASE("self-support is not stable") {
        ClassicalAspProgram p;
        p.rules.push_back(ClassicalRule{prop("p"), {prop("p")}, {}});
        auto models = solve_classical(p);
        CHECK(models == std::vector<std::set<Atom>>{{}});
    }
    SUBCASE("an unsupported constraint kills every model") {
        ClassicalAspProgram p;
        p.rules.push_back(ClassicalRule{std::nullopt, {}, {prop("p")}});
        CHECK(solve_classical(p).empty());
        // Adding a generator for p restores the model.
        p.rules.push_back(ClassicalRule{prop("p"), {}, {prop("q")}});
        CHECK(solve_classical(p) == std::vector<std::set<Atom>>{{prop("p")}});
    }
    SUBCASE("serial and parallel agree") {
        ClassicalAspProgram p;
        p.rules.push_back(ClassicalRule{prop("p"), {}, {prop("q")}});
        p.rules.push_back(ClassicalRule{prop("q"), {}, {prop("r")}});
        p.rules.push_back(ClassicalRule{prop("r"), {}, {prop("p")}});
        CHECK(solve_classical(p, Limits{}, Execution::Serial) ==
              solve_classical(p, Limits{}, Execution::Parallel));
    }
}

TEST_CASE("project_aux strips exactly the auxiliary atoms") {
    std::set<Atom> m{prop("p"), Atom{"aux_0", Namespace::Aux, {c("a")}}};
    CHECK(project_aux(m, {"aux_0"}) == std::set<Atom>{prop("p")});
}

TEST_CASE("the compiled program reproduces the T-answer set of the running example") {
    auto spec = mpr::testing::jobs_spec();
    ClassicalAspProgram cp =
        compile_classical(skolemize(spec.rules), spec.ontology, spec.database);
    auto models = solve_classical(cp);
    REQUIRE(models.size() == 1);
    CHECK(ontology_part(project_aux(models[0], cp.aux_preds)) ==
          std::set<Atom>{oatom("Empl", {c("a")}), oatom("Boss", {c("a")})});
}

TEST_CASE("emit_asp_text mangles skolem terms and documents the mangling") {
    auto spec = mpr::testing::jobs_spec();
    ClassicalAspProgram cp =
        compile_classical(skolemize(spec.rules), spec.ontology, spec.database);
    std::string text = emit_asp_text(cp);
    CHECK(text.find("% ground classical ASP program") == 0);
    CHECK(text.find("% skf_z_a = sk_z(a)") != std::string::npos);
    CHECK(text.find("% auxiliary predicates: aux_0") != std::string::npos);
    CHECK(text.find("boss(a) :- jobs_db(a, b).") != std::string::npos);
}
