#pragma once

#include <array>
#include <atomic>
#include <map>
#include <shared_mutex>

#include "mpr/model.hpp"

namespace mpr {

/// UCQ rewriting of a CQ with respect to a DL-Lite style ontology
/// (backward axiom application plus most-general-unifier reduction,
/// saturated to a fixpoint, subsumed disjuncts pruned, canonical order).
UCQ rewrite_ucq(const CQ& q, const Ontology& ontology);

/// Certain-answer entailment oracle for T ∪ A over ground ontology queries,
/// with a thread-safe rewriting cache and per-procedure call counters.
class EntailmentOracle {
public:
    /// Which procedure is calling, for cost accounting.
    enum class Context { MakeReduct, CheckSat, CheckMin, Consistency, Query, Other };
    static constexpr std::size_t kContexts = 6;

    struct Counters {
        std::array<long, kContexts> positive{}; // oracle calls (entailment asked)
        std::array<long, kContexts> negative{}; // co-oracle calls (non-entailment asked)
        long total() const;
    };

    explicit EntailmentOracle(Ontology ontology);

    const Ontology& ontology() const { return ontology_; }

    /// Cached T-rewriting of q.
    const UCQ& rewrite(const CQ& q) const;

    /// True iff T ∪ A ⊨ q, for q with ground answer positions (existential
    /// variables allowed). Throws Error(Inconsistent) if A is T-inconsistent.
    bool entails(const MappingInterpretation& A, const CQ& q, Context ctx,
                 bool co_call = false) const;
    bool entails(const MappingInterpretation& A, const UCQ& q, Context ctx,
                 bool co_call = false) const;

    /// Minimal supports of q in A: the minimal subsets S ⊆ A with T ∪ S ⊨ q.
    /// Counts as a single oracle call in ctx.
    std::vector<std::set<Atom>> supports(const MappingInterpretation& A, const UCQ& q,
                                         Context ctx, bool co_call = false) const;

    /// True iff T ∪ A has a model. Inclusions alone never cause inconsistency;
    /// only disjointness violation patterns are checked.
    bool is_consistent(const MappingInterpretation& A) const;

    /// True iff every conjunct of the ground head is entailed; ⊥ is never
    /// entailed. A nullopt head is ⊥.
    bool entails_head(const MappingInterpretation& A,
                      const std::optional<std::vector<Atom>>& head, Context ctx) const;

    Counters counters() const;
    void reset_counters() const;

private:
    void count(Context ctx, bool co_call) const;
    bool entails_unchecked(const AtomIndex& A, const CQ& q) const;

    Ontology ontology_;
    std::vector<UCQ> violation_patterns_; // rewritten disjointness patterns

    mutable std::shared_mutex cache_mu_;
    mutable std::map<std::string, UCQ> rewrite_cache_;
    mutable std::array<std::atomic<long>, kContexts> pos_calls_{};
    mutable std::array<std::atomic<long>, kContexts> neg_calls_{};
};

} // namespace mpr
