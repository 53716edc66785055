#include "mpr/oracle.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <functional>

namespace mpr {

namespace {

Atom concept_atom(const BasicConcept& c, const Term& at, int& fresh) {
    if (!c.is_exists) return Atom{c.name, Namespace::Ontology, {at}};
    Term other = Term::variable("_f" + std::to_string(fresh++));
    if (c.inverse) return Atom{c.name, Namespace::Ontology, {other, at}};
    return Atom{c.name, Namespace::Ontology, {at, other}};
}

/// Occurrence count of each variable over all atom argument positions.
std::map<std::string, int> var_occurrences(const CQ& q) {
    std::map<std::string, int> occ;
    std::function<void(const Term&)> visit = [&](const Term& t) {
        if (t.is_variable()) ++occ[t.name()];
        for (const Term& a : t.args()) visit(a);
    };
    for (const Atom& a : q.atoms)
        for (const Term& t : a.args) visit(t);
    return occ;
}

bool is_unbound(const Term& t, const CQ& q, const std::map<std::string, int>& occ) {
    return t.is_variable() && q.existential_vars.count(t.name()) && occ.at(t.name()) == 1;
}

CQ rebuild(const CQ& q, std::vector<Atom> atoms) {
    CQ out;
    out.atoms = std::move(atoms);
    std::sort(out.atoms.begin(), out.atoms.end());
    out.atoms.erase(std::unique(out.atoms.begin(), out.atoms.end()), out.atoms.end());
    out.answer_vars = q.answer_vars;
    std::set<std::string> answers(q.answer_vars.begin(), q.answer_vars.end());
    for (const std::string& v : out.variables())
        if (!answers.count(v)) out.existential_vars.insert(v);
    return out;
}

/// Backward application of one axiom to atom position i, when applicable.
std::optional<CQ> apply_axiom(const CQ& q, std::size_t i, const OntologyAxiom& ax,
                              const std::map<std::string, int>& occ, int& fresh) {
    const Atom& g = q.atoms[i];
    if (g.ns != Namespace::Ontology) return std::nullopt;
    std::optional<Atom> replacement;
    if (ax.kind == OntologyAxiom::Kind::ConceptInclusion) {
        const BasicConcept& rhs = ax.crhs;
        if (!rhs.is_exists) {
            if (g.pred == rhs.name && g.args.size() == 1)
                replacement = concept_atom(ax.clhs, g.args[0], fresh);
        } else if (g.pred == rhs.name && g.args.size() == 2) {
            const Term& bound = rhs.inverse ? g.args[1] : g.args[0];
            const Term& witness = rhs.inverse ? g.args[0] : g.args[1];
            if (is_unbound(witness, q, occ)) replacement = concept_atom(ax.clhs, bound, fresh);
        }
    } else if (ax.kind == OntologyAxiom::Kind::RoleInclusion) {
        if (g.pred == ax.rrhs.name && g.args.size() == 2) {
            Term x = ax.rrhs.inverse ? g.args[1] : g.args[0];
            Term y = ax.rrhs.inverse ? g.args[0] : g.args[1];
            if (ax.rlhs.inverse)
                replacement = Atom{ax.rlhs.name, Namespace::Ontology, {y, x}};
            else
                replacement = Atom{ax.rlhs.name, Namespace::Ontology, {x, y}};
        }
    }
    if (!replacement) return std::nullopt;
    std::vector<Atom> atoms = q.atoms;
    atoms[i] = *replacement;
    return rebuild(q, std::move(atoms));
}

Term walk(const Term& t, const Binding& subst) {
    if (t.is_variable()) {
        auto it = subst.find(t.name());
        if (it != subst.end()) return walk(it->second, subst);
        return t;
    }
    if (t.is_constant()) return t;
    std::vector<Term> args;
    for (const Term& a : t.args()) args.push_back(walk(a, subst));
    return Term::skolem(t.name(), std::move(args));
}

bool occurs(const std::string& var, const Term& t) {
    if (t.is_variable()) return t.name() == var;
    for (const Term& a : t.args())
        if (occurs(var, a)) return true;
    return false;
}

/// MGU with existential variables flexible and everything else rigid.
bool unify(const Term& a, const Term& b, const std::set<std::string>& flexible, Binding& subst) {
    Term x = walk(a, subst);
    Term y = walk(b, subst);
    if (x == y) return true;
    auto bind = [&](const Term& v, const Term& t) {
        if (occurs(v.name(), t)) return false;
        subst.emplace(v.name(), t);
        return true;
    };
    if (x.is_variable() && flexible.count(x.name())) return bind(x, y);
    if (y.is_variable() && flexible.count(y.name())) return bind(y, x);
    if (x.is_skolem() && y.is_skolem() && x.name() == y.name() &&
        x.args().size() == y.args().size()) {
        for (std::size_t i = 0; i < x.args().size(); ++i)
            if (!unify(x.args()[i], y.args()[i], flexible, subst)) return false;
        return true;
    }
    return false;
}

std::optional<CQ> reduce_pair(const CQ& q, std::size_t i, std::size_t j) {
    const Atom& g1 = q.atoms[i];
    const Atom& g2 = q.atoms[j];
    if (g1.pred != g2.pred || g1.ns != g2.ns || g1.args.size() != g2.args.size())
        return std::nullopt;
    Binding subst;
    for (std::size_t k = 0; k < g1.args.size(); ++k)
        if (!unify(g1.args[k], g2.args[k], q.existential_vars, subst)) return std::nullopt;
    if (subst.empty()) return std::nullopt; // atoms already equal or no progress
    std::vector<Atom> atoms;
    for (const Atom& a : q.atoms) {
        Atom na{a.pred, a.ns, {}};
        for (const Term& t : a.args) na.args.push_back(walk(t, subst));
        atoms.push_back(std::move(na));
    }
    return rebuild(q, std::move(atoms));
}

} // namespace

UCQ rewrite_ucq(const CQ& q, const Ontology& ontology) {
    q.validate();
    int fresh = 0;
    std::map<std::string, CQ> seen; // canonical str -> canonical CQ
    std::deque<CQ> work;
    CQ start = q.canonical();
    seen.emplace(start.str(), start);
    work.push_back(start);
    while (!work.empty()) {
        CQ cur = std::move(work.front());
        work.pop_front();
        auto push = [&](const CQ& next) {
            CQ canon = next.canonical();
            std::string key = canon.str();
            if (seen.emplace(key, canon).second) work.push_back(std::move(canon));
        };
        std::map<std::string, int> occ = var_occurrences(cur);
        for (std::size_t i = 0; i < cur.atoms.size(); ++i)
            for (const OntologyAxiom& ax : ontology.axioms)
                if (auto next = apply_axiom(cur, i, ax, occ, fresh)) push(*next);
        for (std::size_t i = 0; i < cur.atoms.size(); ++i)
            for (std::size_t j = i + 1; j < cur.atoms.size(); ++j)
                if (auto next = reduce_pair(cur, i, j)) push(*next);
    }

    std::vector<CQ> disjuncts;
    for (auto& [key, cq] : seen) disjuncts.push_back(cq);
    // Drop disjuncts into which a more general (or lexicographically earlier
    // equivalent) disjunct maps homomorphically.
    std::vector<CQ> kept;
    for (std::size_t i = 0; i < disjuncts.size(); ++i) {
        bool redundant = false;
        for (std::size_t j = 0; j < disjuncts.size() && !redundant; ++j) {
            if (i == j) continue;
            if (!subsumes(disjuncts[j], disjuncts[i])) continue;
            if (subsumes(disjuncts[i], disjuncts[j]) && i < j) continue; // equivalent, keep first
            redundant = true;
        }
        if (!redundant) kept.push_back(disjuncts[i]);
    }
    UCQ out;
    out.answer_vars = q.answer_vars;
    out.disjuncts = std::move(kept);
    return out;
}

long EntailmentOracle::Counters::total() const {
    long n = 0;
    for (long c : positive) n += c;
    for (long c : negative) n += c;
    return n;
}

EntailmentOracle::EntailmentOracle(Ontology ontology) : ontology_(std::move(ontology)) {
    for (const OntologyAxiom& ax : ontology_.axioms) {
        if (ax.kind != OntologyAxiom::Kind::ConceptDisjointness) continue;
        int fresh = 0;
        CQ pattern;
        Term x = Term::variable("_x");
        pattern.atoms.push_back(concept_atom(ax.clhs, x, fresh));
        pattern.atoms.push_back(concept_atom(ax.crhs, x, fresh));
        for (const std::string& v : pattern.variables()) pattern.existential_vars.insert(v);
        violation_patterns_.push_back(rewrite_ucq(pattern, ontology_));
    }
}

const UCQ& EntailmentOracle::rewrite(const CQ& q) const {
    std::string key = q.str();
    {
        std::shared_lock lock(cache_mu_);
        auto it = rewrite_cache_.find(key);
        if (it != rewrite_cache_.end()) return it->second;
    }
    UCQ rewritten = rewrite_ucq(q, ontology_);
    std::unique_lock lock(cache_mu_);
    return rewrite_cache_.emplace(key, std::move(rewritten)).first->second;
}

void EntailmentOracle::count(Context ctx, bool co_call) const {
    auto i = static_cast<std::size_t>(ctx);
    if (co_call)
        neg_calls_[i].fetch_add(1, std::memory_order_relaxed);
    else
        pos_calls_[i].fetch_add(1, std::memory_order_relaxed);
}

bool EntailmentOracle::entails_unchecked(const AtomIndex& A, const CQ& q) const {
    const UCQ& r = rewrite(q);
    for (const CQ& d : r.disjuncts)
        if (holds(d, A)) return true;
    return false;
}

bool EntailmentOracle::entails(const MappingInterpretation& A, const CQ& q, Context ctx,
                               bool co_call) const {
    if (!q.answer_vars.empty())
        throw input_error("entailment query has unsubstituted answer variables: " + q.str());
    if (!is_consistent(A))
        throw inconsistent_error("entailment over a T-inconsistent interpretation " + A.str());
    count(ctx, co_call);
    return entails_unchecked(AtomIndex(A.atoms), q);
}

bool EntailmentOracle::entails(const MappingInterpretation& A, const UCQ& q, Context ctx,
                               bool co_call) const {
    if (!is_consistent(A))
        throw inconsistent_error("entailment over a T-inconsistent interpretation " + A.str());
    count(ctx, co_call);
    AtomIndex idx(A.atoms);
    for (const CQ& d : q.disjuncts) {
        if (!d.answer_vars.empty())
            throw input_error("entailment query has unsubstituted answer variables: " + d.str());
        if (entails_unchecked(idx, d)) return true;
    }
    return false;
}

std::vector<std::set<Atom>> EntailmentOracle::supports(const MappingInterpretation& A,
                                                       const UCQ& q, Context ctx,
                                                       bool co_call) const {
    if (!is_consistent(A))
        throw inconsistent_error("entailment over a T-inconsistent interpretation " + A.str());
    count(ctx, co_call);
    AtomIndex idx(A.atoms);
    std::set<std::set<Atom>> all;
    for (const CQ& d : q.disjuncts) {
        for (const CQ& rd : rewrite(d).disjuncts)
            for (auto& img : hom_images(rd, idx)) all.insert(std::move(img));
    }
    std::vector<std::set<Atom>> out;
    for (const auto& s : all) {
        bool dominated = false;
        for (const auto& t : all)
            if (t != s && std::includes(s.begin(), s.end(), t.begin(), t.end())) {
                dominated = true;
                break;
            }
        if (!dominated) out.push_back(s);
    }
    return out;
}

bool EntailmentOracle::is_consistent(const MappingInterpretation& A) const {
    if (violation_patterns_.empty()) return true;
    AtomIndex idx(A.atoms);
    for (const UCQ& pattern : violation_patterns_)
        for (const CQ& d : pattern.disjuncts)
            if (holds(d, idx)) return false;
    return true;
}

bool EntailmentOracle::entails_head(const MappingInterpretation& A,
                                    const std::optional<std::vector<Atom>>& head,
                                    Context ctx) const {
    if (!head) {
        count(ctx, false);
        return false; // ⊥ is never entailed
    }
    if (!is_consistent(A))
        throw inconsistent_error("entailment over a T-inconsistent interpretation " + A.str());
    count(ctx, false);
    AtomIndex idx(A.atoms);
    for (const Atom& h : *head) {
        CQ q;
        q.atoms.push_back(h);
        if (!entails_unchecked(idx, q)) return false;
    }
    return true;
}

EntailmentOracle::Counters EntailmentOracle::counters() const {
    Counters c;
    for (std::size_t i = 0; i < kContexts; ++i) {
        c.positive[i] = pos_calls_[i].load(std::memory_order_relaxed);
        c.negative[i] = neg_calls_[i].load(std::memory_order_relaxed);
    }
    return c;
}

void EntailmentOracle::reset_counters() const {
    for (std::size_t i = 0; i < kContexts; ++i) {
        pos_calls_[i].store(0, std::memory_order_relaxed);
        neg_calls_[i].store(0, std::memory_order_relaxed);
    }
}

} // namespace mpr
