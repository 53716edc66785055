#pragma once

#include <random>

#include "mpr/model.hpp"

namespace mpr::testing {

struct GenOptions {
    bool with_ontology = true;     // false: T = ∅
    bool allow_disjointness = true;
    std::size_t max_hb = 12;       // rejection-sample until the base fits
};

/// Small random specification: up to 3 constants, 2 concepts and a role, 4
/// rules and 4 axioms, constrained so the Skolem Herbrand base stays within
/// max_hb atoms.
GeneralizedObdaSpec random_spec(std::mt19937& rng, const GenOptions& opts = {});

/// Random boolean ground query of 1-2 atoms over the spec's ontology
/// predicates and constants.
CQ random_ground_query(std::mt19937& rng, const GeneralizedObdaSpec& spec);

} // namespace mpr::testing
