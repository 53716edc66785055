#pragma once

#include "mpr/solver.hpp"

namespace mpr {

/// Justifications replaced by their rewritings with respect to T: negative
/// UCQs distribute to one negative CQ per disjunct, positive justifications
/// become full UCQ rewritings (no distribution yet). Head and source query
/// are unchanged.
MappingRule rewrite_rule(const MappingRule& rule, const Ontology& ontology);

/// T-rewritten program: positive justification disjuncts distributed into one
/// rule copy per combination, each chosen disjunct split into connected
/// components along shared existential variables (one single-disjunct UCQ
/// justification per component).
struct RewrittenProgram {
    SkolemProgram program;
    std::vector<std::size_t> source_rule; // per rewritten rule: input rule index
};

RewrittenProgram rewrite_program(const SkolemProgram& program, const Ontology& ontology);

/// Reduct-rewriting commutation: rewriting then reducing with the empty
/// ontology yields the same ground positive program as reducing with T then
/// rewriting, compared rule-by-rule up to query equivalence.
bool reduct_commutes_check(const SkolemProgram& program, const Ontology& ontology,
                           const DatabaseInstance& db, const MappingInterpretation& A,
                           const Limits& limits = {});

/// A rule of an existential ASP program: ground head and positive body,
/// negative bodies that are boolean CQs whose variables are existential.
struct ExistsRule {
    std::vector<Atom> head; // empty = constraint
    std::vector<Atom> pos_body;
    std::vector<CQ> neg_bodies;

    std::string str() const;
};

struct ExistsAspProgram {
    std::vector<ExistsRule> rules;
    std::vector<Term> domain; // constants plus ground Skolem terms
};

/// Source queries compiled away by grounding over D; positive-justification
/// existentials ground over the combined domain; database facts included as
/// fact rules.
ExistsAspProgram to_exists_asp(const RewrittenProgram& program, const DatabaseInstance& db,
                               GroundMode mode = GroundMode::Relevant, const Limits& limits = {});

struct ClassicalRule {
    std::optional<Atom> head; // nullopt = constraint
    std::vector<Atom> pos;
    std::vector<Atom> neg;

    std::string str() const;
};

struct ClassicalAspProgram {
    std::vector<ClassicalRule> rules;
    std::set<std::string> aux_preds;
};

/// Auxiliary-predicate reduction: each distinct negative body becomes an aux
/// atom over its ground terms, defined by one rule per grounding of its
/// existential variables. Ground single-atom negative bodies skip the aux
/// predicate.
ClassicalAspProgram exists_to_classical(const ExistsAspProgram& p, const Limits& limits = {});

std::set<Atom> project_aux(const std::set<Atom>& answer_set, const std::set<std::string>& aux_preds);

/// Exact stable models of a ground normal program, in canonical order
/// (size, then lexicographic).
std::vector<std::set<Atom>> solve_classical(const ClassicalAspProgram& p, const Limits& limits = {},
                                            Execution exec = Execution::Parallel);

std::string emit_asp_text(const ClassicalAspProgram& p);

/// rewrite_program → to_exists_asp → exists_to_classical.
ClassicalAspProgram compile_classical(const SkolemProgram& program, const Ontology& ontology,
                                      const DatabaseInstance& db,
                                      GroundMode mode = GroundMode::Relevant,
                                      const Limits& limits = {});

} // namespace mpr
