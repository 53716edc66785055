#pragma once

#include "mpr/grounder.hpp"
#include "mpr/oracle.hpp"

namespace mpr {

/// T-reduct: rules with an entailed negative justification removed, negative
/// justifications stripped from the rest.
struct PositiveReduct {
    std::vector<GroundRule> rules;        // no rule has negative justifications
    std::vector<std::size_t> removed;     // indices into the PG rule list

    std::size_t count_pos_justs() const;
};

/// Oracle-call accounting for one verifier run (or an aggregate of runs).
/// check_min_* figures count the entailment questions asked inside CHECK-MIN;
/// they are answered from supports memoized during CHECK-SAT, so they do not
/// hit the oracle again, but they are what the per-procedure bounds cover.
struct SolveStats {
    long make_reduct_neg_calls = 0;
    long check_sat_pos_calls = 0;
    long check_sat_head_calls = 0;
    long check_min_check_sat_invocations = 0;
    long check_min_pos_calls = 0;
    long check_min_head_calls = 0;
    long candidates_examined = 0;

    void merge(const SolveStats& o);
};

/// Worst-case per-procedure bounds computed from program shape, next to the
/// measured figures.
struct StatsReport {
    std::size_t n_neg_pg = 0;      // negative justifications in PG(M)
    std::size_t n_pos_reduct = 0;  // positive justifications in the reduct
    std::size_t n_heads_reduct = 0;
    std::size_t interpretation_size = 0;

    long bound_make_reduct() const { return static_cast<long>(n_neg_pg); }
    long bound_check_sat() const { return static_cast<long>(n_pos_reduct + n_heads_reduct); }
    long bound_check_min() const {
        return static_cast<long>(interpretation_size * (n_pos_reduct + n_heads_reduct));
    }

    SolveStats measured;
    bool within_bounds() const;
    std::string str() const;
};

enum class VerifyStatus { AnswerSet, Inconsistent, Unsatisfied, NotMinimal };

struct VerifyResult {
    bool ok = false;
    VerifyStatus status = VerifyStatus::NotMinimal;
    std::string detail;
    SolveStats stats;
    PositiveReduct reduct;
};

/// True iff the rule's source-query component holds (certified by grounding
/// provenance in relevant mode, evaluated over D in full mode).
bool source_holds(const GroundRule& rule, const DatabaseInstance& db);

PositiveReduct make_reduct(const PartialGroundProgram& pg, const EntailmentOracle& oracle,
                           const MappingInterpretation& A, SolveStats* stats = nullptr);

bool check_sat(const MappingInterpretation& A, const PositiveReduct& reduct,
               const EntailmentOracle& oracle, const DatabaseInstance& db,
               SolveStats* stats = nullptr);

bool check_min(const MappingInterpretation& A, const PositiveReduct& reduct,
               const EntailmentOracle& oracle, const DatabaseInstance& db,
               SolveStats* stats = nullptr);

/// T-answer set verifier: MAKE-REDUCT, CHECK-SAT, CHECK-MIN, plus a
/// least-model comparison that completes the singleton minimality check on
/// cyclically supported candidates (answered from memoized supports, no
/// further oracle calls).
VerifyResult verify(const EntailmentOracle& oracle, const PartialGroundProgram& pg,
                    const DatabaseInstance& db, const MappingInterpretation& A);

struct AnswerSet {
    MappingInterpretation interpretation;

    bool operator<(const AnswerSet& o) const;
    bool operator==(const AnswerSet& o) const { return interpretation.atoms == o.interpretation.atoms; }
};

enum class Execution { Serial, Parallel };

struct EnumerationResult {
    std::vector<AnswerSet> answer_sets; // canonical order: by size, then lexicographic
    SolveStats stats;
    std::size_t pool = 0;   // distinct ground head atoms enumerated over
    bool truncated = false; // limit reached
};

/// Sound and complete enumeration of T-answer sets (within the caps). Every
/// answer set is the least model of its own reduct, hence a subset of the
/// distinct ground head atoms of PG: each consistent subset B of that pool is
/// kept iff B equals the least model of the reduct with respect to B and no
/// surviving constraint fires.
EnumerationResult enumerate_answer_sets(const EntailmentOracle& oracle,
                                        const PartialGroundProgram& pg,
                                        const DatabaseInstance& db,
                                        std::size_t limit = static_cast<std::size_t>(-1),
                                        const Limits& limits = {},
                                        Execution exec = Execution::Parallel);

bool brave_entails(const EntailmentOracle& oracle, const PartialGroundProgram& pg,
                   const DatabaseInstance& db, const CQ& phi, const Limits& limits = {});
bool cautious_entails(const EntailmentOracle& oracle, const PartialGroundProgram& pg,
                      const DatabaseInstance& db, const CQ& phi, const Limits& limits = {});

StatsReport solve_stats_report(const SolveStats& stats, const PartialGroundProgram& pg,
                               const PositiveReduct& reduct, std::size_t interpretation_size);

} // namespace mpr
