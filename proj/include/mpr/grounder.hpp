#pragma once

#include "mpr/model.hpp"

namespace mpr {

/// Resource caps shared across grounding and solving.
struct Limits {
    std::size_t herbrand_cap = 10000;  // max Herbrand base size
    std::size_t ground_cap = 200000;   // max partially ground rules
    std::size_t enumeration_cap = 24;  // max candidate atoms enumerated over
};

/// sk(M): head existential variables replaced by Skolem terms over the head's
/// universal variables, in source order.
struct SkolemProgram {
    std::vector<MappingRule> rules;
    // skolem id -> ordered universal variables it abstracts
    std::map<std::string, std::vector<std::string>> skolem_symbols;
};

SkolemProgram skolemize(const std::vector<MappingRule>& rules);

enum class GroundMode { Relevant, Full };

/// One partially ground rule: everything ground except existential variables
/// in negative justifications (and inside the source query, which is only
/// ever evaluated over D).
struct GroundRule {
    std::optional<std::vector<Atom>> head; // nullopt = ⊥
    std::vector<CQ> neg_justs;             // boolean CQs over the ontology namespace
    std::vector<UCQ> pos_justs;            // boolean UCQs over the ontology namespace
    CQ source_query;                       // ground-answer source query
    bool source_certified = false;         // relevant mode: eval over D already succeeded
    std::size_t origin = 0;                // index into the Skolem program
    Binding binding;

    std::string str() const;
};

struct PartialGroundProgram {
    std::vector<GroundRule> rules;
    GroundMode mode = GroundMode::Relevant;

    std::size_t count_neg_justs() const;
    std::size_t count_pos_justs() const;
};

/// Standard CQ evaluation over D. The reserved predicate top(x̄) answers every
/// tuple occurring in the database: for arity 1 the active domain, for higher
/// arities the argument tuples of facts of that arity (cartesian power of the
/// active domain if no relation of that arity exists).
std::vector<Binding> eval_source(const CQ& q, const DatabaseInstance& db,
                                 const Signature* sig = nullptr, bool strict = false);

PartialGroundProgram partial_ground(const SkolemProgram& program, const DatabaseInstance& db,
                                    GroundMode mode = GroundMode::Relevant,
                                    const Limits& limits = {});

/// Ground ontology atoms over {grounding constants} ∪ {ground Skolem terms},
/// for the ontology predicates occurring in the program. Skolem terms never
/// nest and never appear inside other Skolem terms.
std::set<Atom> herbrand_base(const SkolemProgram& program, const DatabaseInstance& db,
                             const Limits& limits = {});

/// Active-domain constants plus constants mentioned in the rules.
std::set<std::string> grounding_constants(const SkolemProgram& program,
                                          const DatabaseInstance& db);

} // namespace mpr
