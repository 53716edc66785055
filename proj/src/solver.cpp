#include "mpr/solver.hpp"

#include <algorithm>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mpr {

namespace {

/// Head satisfaction is membership of the head atoms in the interpretation;
/// ⊥ is never satisfied.
bool head_satisfied(const std::optional<std::vector<Atom>>& head, const std::set<Atom>& atoms) {
    if (!head) return false;
    for (const Atom& h : *head)
        if (!atoms.count(h)) return false;
    return true;
}

/// Per-rule memo of CHECK-SAT's entailment work against a fixed A: whether
/// the source component holds, and the minimal supports of every positive
/// justification in A. A justification unentailed by A cannot be entailed by
/// any subset, recorded as can_fire = false.
struct BodyEval {
    struct Rule {
        bool source_ok = false;
        bool can_fire = false; // every positive justification entailed by A
        std::vector<std::vector<std::set<Atom>>> supports; // one list per justification
    };
    std::vector<Rule> rules;

    bool fires(std::size_t i, const std::set<Atom>& atoms) const {
        const Rule& r = rules[i];
        if (!r.source_ok || !r.can_fire) return false;
        for (const auto& supp : r.supports) {
            bool ok = false;
            for (const auto& s : supp)
                if (std::includes(atoms.begin(), atoms.end(), s.begin(), s.end())) {
                    ok = true;
                    break;
                }
            if (!ok) return false;
        }
        return true;
    }
};

/// CHECK-SAT over A, memoizing supports for the CHECK-MIN and least-model
/// passes. Counts one co-oracle call per positive justification examined and
/// one head check per fired body.
bool check_sat_eval(const MappingInterpretation& A, const PositiveReduct& reduct,
                    const EntailmentOracle& oracle, const DatabaseInstance& db,
                    SolveStats* stats, BodyEval* out) {
    bool sat = true;
    if (out) out->rules.resize(reduct.rules.size());
    for (std::size_t i = 0; i < reduct.rules.size(); ++i) {
        const GroundRule& rule = reduct.rules[i];
        bool src = source_holds(rule, db);
        bool can_fire = true;
        std::vector<std::vector<std::set<Atom>>> supports;
        if (src) {
            for (const UCQ& j : rule.pos_justs) {
                if (stats) ++stats->check_sat_pos_calls;
                auto supp = oracle.supports(A, j, EntailmentOracle::Context::CheckSat, true);
                if (supp.empty()) {
                    can_fire = false;
                    break;
                }
                supports.push_back(std::move(supp));
            }
        }
        bool fired = src && can_fire;
        if (fired) {
            if (stats) ++stats->check_sat_head_calls;
            if (!head_satisfied(rule.head, A.atoms)) {
                sat = false;
                if (!out) return false;
            }
        }
        if (out) {
            auto& r = out->rules[i];
            r.source_ok = src;
            r.can_fire = can_fire;
            r.supports = std::move(supports);
        }
        if (!sat && !out) return false;
    }
    return sat;
}

/// Simulated CHECK-SAT(A∖{a}) answered from the memoized supports; the
/// pos/head figures are counted so the §-style per-procedure bounds can be
/// checked against what Algorithm 1 would have asked.
bool check_sat_from_eval(const std::set<Atom>& atoms, const PositiveReduct& reduct,
                         const BodyEval& eval, SolveStats* stats, bool count_as_check_min) {
    for (std::size_t i = 0; i < reduct.rules.size(); ++i) {
        const BodyEval::Rule& r = eval.rules[i];
        if (!r.source_ok) continue;
        bool fires = r.can_fire;
        if (fires) {
            for (const auto& supp : r.supports) {
                if (stats && count_as_check_min) ++stats->check_min_pos_calls;
                bool ok = false;
                for (const auto& s : supp)
                    if (std::includes(atoms.begin(), atoms.end(), s.begin(), s.end())) {
                        ok = true;
                        break;
                    }
                if (!ok) {
                    fires = false;
                    break;
                }
            }
        }
        if (fires) {
            if (stats && count_as_check_min) ++stats->check_min_head_calls;
            if (!head_satisfied(reduct.rules[i].head, atoms)) return false;
        }
    }
    return true;
}

bool check_min_eval(const MappingInterpretation& A, const PositiveReduct& reduct,
                    const BodyEval& eval, SolveStats* stats) {
    for (const Atom& a : A.atoms) {
        if (stats) ++stats->check_min_check_sat_invocations;
        std::set<Atom> smaller = A.atoms;
        smaller.erase(a);
        if (check_sat_from_eval(smaller, reduct, eval, stats, true)) return false;
    }
    return true;
}

/// Least model of the reduct computed from memoized supports; closes upward
/// from ∅. Returns false as soon as the least model leaves A.
bool least_model_equals(const MappingInterpretation& A, const PositiveReduct& reduct,
                        const BodyEval& eval) {
    std::set<Atom> model;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < reduct.rules.size(); ++i) {
            const GroundRule& rule = reduct.rules[i];
            if (!rule.head) continue;
            if (!eval.fires(i, model)) continue;
            for (const Atom& h : *rule.head) {
                if (!A.atoms.count(h)) return false;
                if (model.insert(h).second) changed = true;
            }
        }
    }
    return model == A.atoms;
}

} // namespace

std::size_t PositiveReduct::count_pos_justs() const {
    std::size_t n = 0;
    for (const GroundRule& r : rules) n += r.pos_justs.size();
    return n;
}

void SolveStats::merge(const SolveStats& o) {
    make_reduct_neg_calls += o.make_reduct_neg_calls;
    check_sat_pos_calls += o.check_sat_pos_calls;
    check_sat_head_calls += o.check_sat_head_calls;
    check_min_check_sat_invocations += o.check_min_check_sat_invocations;
    check_min_pos_calls += o.check_min_pos_calls;
    check_min_head_calls += o.check_min_head_calls;
    candidates_examined += o.candidates_examined;
}

bool source_holds(const GroundRule& rule, const DatabaseInstance& db) {
    if (rule.source_certified) return true;
    if (rule.source_query.atoms.empty()) return true;
    return !eval_source(rule.source_query, db).empty();
}

PositiveReduct make_reduct(const PartialGroundProgram& pg, const EntailmentOracle& oracle,
                           const MappingInterpretation& A, SolveStats* stats) {
    if (!oracle.is_consistent(A))
        throw inconsistent_error("MAKE-REDUCT on a T-inconsistent interpretation " + A.str());
    PositiveReduct out;
    for (std::size_t i = 0; i < pg.rules.size(); ++i) {
        const GroundRule& rule = pg.rules[i];
        bool removed = false;
        for (const CQ& j : rule.neg_justs) {
            if (stats) ++stats->make_reduct_neg_calls;
            if (oracle.entails(A, j, EntailmentOracle::Context::MakeReduct)) {
                removed = true;
                break; // "there exists some i": stop at the first entailed one
            }
        }
        if (removed) {
            out.removed.push_back(i);
        } else {
            GroundRule stripped = rule;
            stripped.neg_justs.clear();
            out.rules.push_back(std::move(stripped));
        }
    }
    return out;
}

bool check_sat(const MappingInterpretation& A, const PositiveReduct& reduct,
               const EntailmentOracle& oracle, const DatabaseInstance& db, SolveStats* stats) {
    return check_sat_eval(A, reduct, oracle, db, stats, nullptr);
}

bool check_min(const MappingInterpretation& A, const PositiveReduct& reduct,
               const EntailmentOracle& oracle, const DatabaseInstance& db, SolveStats* stats) {
    BodyEval eval;
    check_sat_eval(A, reduct, oracle, db, nullptr, &eval);
    return check_min_eval(A, reduct, eval, stats);
}

VerifyResult verify(const EntailmentOracle& oracle, const PartialGroundProgram& pg,
                    const DatabaseInstance& db, const MappingInterpretation& A) {
    VerifyResult res;
    A.validate();
    if (!oracle.is_consistent(A)) {
        res.status = VerifyStatus::Inconsistent;
        res.detail = "interpretation is inconsistent with the ontology";
        return res;
    }
    res.reduct = make_reduct(pg, oracle, A, &res.stats);
    BodyEval eval;
    if (!check_sat_eval(A, res.reduct, oracle, db, &res.stats, &eval)) {
        res.status = VerifyStatus::Unsatisfied;
        res.detail = "a reduct rule with a satisfied body has an unsatisfied head";
        return res;
    }
    if (!check_min_eval(A, res.reduct, eval, &res.stats)) {
        res.status = VerifyStatus::NotMinimal;
        res.detail = "a proper subset obtained by removing one atom still satisfies the reduct";
        return res;
    }
    // Removing single atoms does not catch cyclically supported candidates
    // ({a <- b, b <- a} with {a,b}); compare against the least model.
    if (!least_model_equals(A, res.reduct, eval)) {
        res.status = VerifyStatus::NotMinimal;
        res.detail = "interpretation is not the least model of its reduct";
        return res;
    }
    res.ok = true;
    res.status = VerifyStatus::AnswerSet;
    return res;
}

bool AnswerSet::operator<(const AnswerSet& o) const {
    if (interpretation.atoms.size() != o.interpretation.atoms.size())
        return interpretation.atoms.size() < o.interpretation.atoms.size();
    return std::lexicographical_compare(
        interpretation.atoms.begin(), interpretation.atoms.end(), o.interpretation.atoms.begin(),
        o.interpretation.atoms.end());
}

namespace {

/// Rewritten justifications, fixed once per enumeration so the per-candidate
/// loop evaluates them without touching the oracle's cache lock or counters.
struct RewrittenJusts {
    std::vector<std::vector<UCQ>> neg; // per rule, per negative justification
    std::vector<std::vector<UCQ>> pos; // per rule, per positive justification

    RewrittenJusts(const PartialGroundProgram& pg, const EntailmentOracle& oracle) {
        neg.resize(pg.rules.size());
        pos.resize(pg.rules.size());
        for (std::size_t i = 0; i < pg.rules.size(); ++i) {
            for (const CQ& j : pg.rules[i].neg_justs) neg[i].push_back(oracle.rewrite(j));
            for (const UCQ& j : pg.rules[i].pos_justs) {
                UCQ u;
                for (const CQ& d : j.disjuncts)
                    for (const CQ& rd : oracle.rewrite(d).disjuncts) u.disjuncts.push_back(rd);
                pos[i].push_back(std::move(u));
            }
        }
    }
};

bool rewritten_holds(const UCQ& rw, const AtomIndex& idx) {
    for (const CQ& d : rw.disjuncts)
        if (holds(d, idx)) return true;
    return false;
}

/// One candidate subset B of the head-atom pool: B is an answer set iff it is
/// consistent, equals the least model of the reduct with respect to B, and no
/// surviving constraint fires under B.
std::optional<MappingInterpretation> try_candidate_mask(std::uint64_t mask,
                                                        const PartialGroundProgram& pg,
                                                        const std::vector<Atom>& pool,
                                                        const std::vector<char>& source_ok,
                                                        const EntailmentOracle& oracle,
                                                        const RewrittenJusts& rw) {
    MappingInterpretation B;
    for (std::size_t i = 0; i < pool.size(); ++i)
        if (mask >> i & 1) B.atoms.insert(pool[i]);
    if (!oracle.is_consistent(B)) return std::nullopt;
    AtomIndex idx_b(B.atoms);

    std::vector<char> removed(pg.rules.size(), 0);
    for (std::size_t i = 0; i < pg.rules.size(); ++i) {
        if (!source_ok[i]) {
            removed[i] = 1;
            continue;
        }
        for (const UCQ& j : rw.neg[i])
            if (rewritten_holds(j, idx_b)) {
                removed[i] = 1;
                break;
            }
    }

    // Least model of the reduct, with sticky per-justification entailment
    // flags (entailment is monotone in the growing model). The iteration
    // stays inside B or bails out, so intermediate models stay consistent.
    MappingInterpretation model;
    std::vector<char> fired(pg.rules.size(), 0);
    std::vector<std::vector<char>> just_done(pg.rules.size());
    for (std::size_t i = 0; i < pg.rules.size(); ++i)
        just_done[i].assign(pg.rules[i].pos_justs.size(), 0);

    bool changed = true;
    while (changed) {
        changed = false;
        AtomIndex idx_model(model.atoms);
        for (std::size_t i = 0; i < pg.rules.size(); ++i) {
            const GroundRule& rule = pg.rules[i];
            if (removed[i] || fired[i] || !rule.head) continue;
            bool fires = true;
            for (std::size_t k = 0; k < rule.pos_justs.size(); ++k) {
                if (just_done[i][k]) continue;
                if (rewritten_holds(rw.pos[i][k], idx_model))
                    just_done[i][k] = 1;
                else
                    fires = false;
            }
            if (!fires) continue;
            fired[i] = 1;
            for (const Atom& h : *rule.head) {
                if (!B.atoms.count(h)) return std::nullopt; // least model leaves B
                if (model.atoms.insert(h).second) changed = true;
            }
        }
    }
    if (model.atoms != B.atoms) return std::nullopt;

    // Surviving constraints must not fire.
    for (std::size_t i = 0; i < pg.rules.size(); ++i) {
        const GroundRule& rule = pg.rules[i];
        if (removed[i] || rule.head) continue;
        bool fires = true;
        for (const UCQ& j : rw.pos[i])
            if (!rewritten_holds(j, idx_b)) {
                fires = false;
                break;
            }
        if (fires) return std::nullopt;
    }
    return B;
}

} // namespace

EnumerationResult enumerate_answer_sets(const EntailmentOracle& oracle,
                                        const PartialGroundProgram& pg,
                                        const DatabaseInstance& db, std::size_t limit,
                                        const Limits& limits, Execution exec) {
    EnumerationResult res;

    std::vector<char> source_ok(pg.rules.size());
    for (std::size_t i = 0; i < pg.rules.size(); ++i)
        source_ok[i] = source_holds(pg.rules[i], db);

    // Candidate pool: distinct ground head atoms of rules whose source query
    // holds.
    std::set<Atom> pool_set;
    for (std::size_t i = 0; i < pg.rules.size(); ++i)
        if (source_ok[i] && pg.rules[i].head)
            for (const Atom& h : *pg.rules[i].head) pool_set.insert(h);
    std::vector<Atom> pool(pool_set.begin(), pool_set.end());
    res.pool = pool.size();
    if (pool.size() > limits.enumeration_cap)
        throw cap_error("enumeration over " + std::to_string(pool.size()) +
                        " candidate atoms exceeds cap of " +
                        std::to_string(limits.enumeration_cap));

    const std::uint64_t total = std::uint64_t(1) << pool.size();
    const RewrittenJusts rw(pg, oracle);
    std::vector<AnswerSet> found;

    if (exec == Execution::Parallel) {
        std::vector<std::vector<AnswerSet>> per_thread;
        long examined = 0;
#ifdef _OPENMP
        per_thread.resize(static_cast<std::size_t>(omp_get_max_threads()));
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : examined)
        for (std::int64_t mask = 0; mask < static_cast<std::int64_t>(total); ++mask) {
            ++examined;
            auto model = try_candidate_mask(static_cast<std::uint64_t>(mask), pg, pool, source_ok,
                                            oracle, rw);
            if (model)
                per_thread[static_cast<std::size_t>(omp_get_thread_num())].push_back(
                    AnswerSet{std::move(*model)});
        }
#else
        per_thread.resize(1);
        for (std::uint64_t mask = 0; mask < total; ++mask) {
            ++examined;
            auto model = try_candidate_mask(mask, pg, pool, source_ok, oracle, rw);
            if (model) per_thread[0].push_back(AnswerSet{std::move(*model)});
        }
#endif
        res.stats.candidates_examined = examined;
        for (auto& v : per_thread)
            for (auto& a : v) found.push_back(std::move(a));
    } else {
        for (std::uint64_t mask = 0; mask < total; ++mask) {
            ++res.stats.candidates_examined;
            auto model = try_candidate_mask(mask, pg, pool, source_ok, oracle, rw);
            if (model) found.push_back(AnswerSet{std::move(*model)});
        }
    }

    std::sort(found.begin(), found.end());
    if (found.size() > limit) {
        found.resize(limit);
        res.truncated = true;
    }
    res.answer_sets = std::move(found);
    return res;
}

bool brave_entails(const EntailmentOracle& oracle, const PartialGroundProgram& pg,
                   const DatabaseInstance& db, const CQ& phi, const Limits& limits) {
    auto res = enumerate_answer_sets(oracle, pg, db, static_cast<std::size_t>(-1), limits);
    for (const AnswerSet& a : res.answer_sets)
        if (oracle.entails(a.interpretation, phi, EntailmentOracle::Context::Query)) return true;
    return false;
}

bool cautious_entails(const EntailmentOracle& oracle, const PartialGroundProgram& pg,
                      const DatabaseInstance& db, const CQ& phi, const Limits& limits) {
    auto res = enumerate_answer_sets(oracle, pg, db, static_cast<std::size_t>(-1), limits);
    for (const AnswerSet& a : res.answer_sets)
        if (!oracle.entails(a.interpretation, phi, EntailmentOracle::Context::Query)) return false;
    return true; // vacuously true without answer sets
}

StatsReport solve_stats_report(const SolveStats& stats, const PartialGroundProgram& pg,
                               const PositiveReduct& reduct, std::size_t interpretation_size) {
    StatsReport rep;
    rep.n_neg_pg = pg.count_neg_justs();
    rep.n_pos_reduct = reduct.count_pos_justs();
    rep.n_heads_reduct = reduct.rules.size();
    rep.interpretation_size = interpretation_size;
    rep.measured = stats;
    return rep;
}

bool StatsReport::within_bounds() const {
    if (measured.make_reduct_neg_calls > bound_make_reduct()) return false;
    if (measured.check_sat_pos_calls + measured.check_sat_head_calls > bound_check_sat())
        return false;
    if (measured.check_min_check_sat_invocations > static_cast<long>(interpretation_size))
        return false;
    if (measured.check_min_pos_calls + measured.check_min_head_calls > bound_check_min())
        return false;
    return true;
}

std::string StatsReport::str() const {
    std::ostringstream os;
    os << "make-reduct: " << measured.make_reduct_neg_calls << " negative oracle calls (bound "
       << bound_make_reduct() << ")\n";
    os << "check-sat:   " << measured.check_sat_pos_calls << " co-oracle + "
       << measured.check_sat_head_calls << " head calls (bound " << bound_check_sat() << ")\n";
    os << "check-min:   " << measured.check_min_check_sat_invocations
       << " check-sat invocations (bound " << interpretation_size << "), "
       << measured.check_min_pos_calls + measured.check_min_head_calls
       << " memoized entailment questions (bound " << bound_check_min() << ")\n";
    os << "candidates examined: " << measured.candidates_examined << "\n";
    os << "within bounds: " << (within_bounds() ? "yes" : "no");
    return os.str();
}

} // namespace mpr
