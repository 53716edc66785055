#pragma once

#include "mpr/model.hpp"

namespace mpr {

struct ParseOptions {
    bool strict = false; // unknown predicates are errors instead of warnings
};

/// Parses the textual specification language:
///
///   %ontology     Empl [= Person.   Boss [= exists hasSup-.   Empl [= not Boss.
///   %mapping      m1: hasSup(X, exists Z) <- not depHeadOf(X, _Y), Empl(X), @jobs_db(X, P).
///   %database     jobs_db(a, b).
///   %signature    source jobs_db/2.   ontology Empl/1.
///
/// `@` marks source atoms (together they form the rule's source query),
/// `exists`-prefixed head variables are existential, `_`-prefixed variables
/// are existential, `bot` is the constraint head, `top(X)` the universal
/// source query, `#` starts a comment. Uppercase-first tokens in argument
/// position are variables, everything else a constant; `sk_`-prefixed
/// functors are Skolem terms.
GeneralizedObdaSpec parse_spec(const std::string& text, const ParseOptions& opts = {});

/// Candidate interpretation: one ground atom per line, `.`-terminated.
/// Source atoms are accepted as a database echo (each must be a fact of D)
/// and stripped; the ontology atoms form the interpretation.
MappingInterpretation parse_candidate(const std::string& text, const GeneralizedObdaSpec& spec);

/// Query syntax: `exists Y, Z. hasSup(Y, a), Empl(Z)`. Variables not listed
/// in the `exists` prefix are answer variables.
CQ parse_query(const std::string& text);

/// One relation per CSV file; header row is ignored beyond fixing the arity.
void load_csv_facts(GeneralizedObdaSpec& spec, const std::string& relation,
                    const std::string& csv_text);

/// Inverse of parse_spec up to formatting: parse(print(spec)) is structurally
/// equal to spec.
std::string print_spec(const GeneralizedObdaSpec& spec);

std::string print_rule(const MappingRule& rule);
std::string print_axiom(const OntologyAxiom& axiom);

} // namespace mpr
