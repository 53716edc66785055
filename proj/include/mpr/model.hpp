#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mpr/query.hpp"

namespace mpr {

/// Atomic concept A, or exists-restriction on a role: ∃R (inverse=false) /
/// ∃R⁻ (inverse=true).
struct BasicConcept {
    std::string name;
    bool is_exists = false;
    bool inverse = false;

    std::string str() const;
    bool operator==(const BasicConcept& o) const {
        return name == o.name && is_exists == o.is_exists && inverse == o.inverse;
    }
};

struct RoleExpr {
    std::string name;
    bool inverse = false;

    std::string str() const;
    bool operator==(const RoleExpr& o) const { return name == o.name && inverse == o.inverse; }
};

struct OntologyAxiom {
    enum class Kind { ConceptInclusion, ConceptDisjointness, RoleInclusion };
    Kind kind = Kind::ConceptInclusion;
    BasicConcept clhs, crhs; // concept axioms
    RoleExpr rlhs, rrhs;     // role inclusions

    static OntologyAxiom concept_inclusion(BasicConcept lhs, BasicConcept rhs);
    static OntologyAxiom concept_disjointness(BasicConcept lhs, BasicConcept rhs);
    static OntologyAxiom role_inclusion(RoleExpr lhs, RoleExpr rhs);

    std::string str() const;
};

struct Ontology {
    std::vector<OntologyAxiom> axioms;
    bool empty() const { return axioms.empty(); }
};

struct DatabaseInstance {
    std::set<Atom> facts;

    /// Constants occurring in some fact position.
    std::set<std::string> active_domain() const;
    void add(Atom fact);
};

/// One rule of a mapping program. A nullopt head is the constraint head ⊥.
/// Invariants: head and justification answer variables are a subset of the
/// source query's answer variables; only the head has existential variables
/// outside the negative justifications.
struct MappingRule {
    std::string label;
    std::optional<CQ> head;     // ontology namespace
    std::vector<CQ> neg_justs;  // ontology namespace
    std::vector<UCQ> pos_justs; // ontology namespace
    CQ source_query;            // source namespace

    bool is_constraint() const { return !head.has_value(); }
    void validate() const;
};

/// A candidate T-answer set: ground ontology atoms over constants and Skolem
/// terms. Consistency with T is checked by the oracle, not enforced here.
struct MappingInterpretation {
    std::set<Atom> atoms;

    bool contains(const Atom& a) const { return atoms.count(a) != 0; }
    MappingInterpretation without(const Atom& a) const;
    std::string str() const;
    void validate() const; // ground, ontology namespace, no nested Skolem terms
};

struct Signature {
    struct PredInfo {
        std::size_t arity = 0;
        Namespace ns = Namespace::Ontology;
        bool declared = false; // false when inferred from use
    };
    std::map<std::string, PredInfo> preds;

    void declare(const std::string& name, std::size_t arity, Namespace ns, bool declared = true);
    const PredInfo* find(const std::string& name) const;
};

struct GeneralizedObdaSpec {
    DatabaseInstance database;
    std::vector<MappingRule> rules;
    Ontology ontology;
    Signature signature;

    void validate() const;
};

} // namespace mpr
