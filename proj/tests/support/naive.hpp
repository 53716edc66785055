#pragma once

#include "mpr/grounder.hpp"

namespace mpr::testing {

/// Exhaustive T-answer-set enumeration straight from the definition: every
/// consistent subset of the Herbrand base is tested with a chase-based
/// entailment oracle and a full proper-subset minimality check. Only
/// practical for Herbrand bases of at most ~16 atoms.
std::vector<std::set<Atom>> naive_answer_sets(const GeneralizedObdaSpec& spec,
                                              std::size_t max_hb = 16);

} // namespace mpr::testing
