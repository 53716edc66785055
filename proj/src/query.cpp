#include "mpr/query.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace mpr {

namespace {

void collect_vars(const Term& t, std::set<std::string>& out) {
    if (t.is_variable()) out.insert(t.name());
    for (const Term& a : t.args()) collect_vars(a, out);
}

std::string masked_key(const Atom& a, const std::set<std::string>& existentials) {
    std::function<std::string(const Term&)> key = [&](const Term& t) -> std::string {
        if (t.is_variable())
            return existentials.count(t.name()) ? std::string("_") : "$" + t.name();
        if (t.is_constant()) return t.name();
        std::string s = t.name() + "(";
        for (const Term& x : t.args()) s += key(x) + ",";
        return s + ")";
    };
    std::string s = to_string(a.ns) + ":" + a.pred + "/";
    for (const Term& t : a.args) s += key(t) + ",";
    return s;
}

} // namespace

bool CQ::is_ground() const {
    for (const Atom& a : atoms)
        if (!a.is_ground()) return false;
    return true;
}

std::set<std::string> CQ::variables() const {
    std::set<std::string> vars;
    for (const Atom& a : atoms)
        for (const Term& t : a.args) collect_vars(t, vars);
    return vars;
}

void CQ::validate() const {
    std::set<std::string> answers(answer_vars.begin(), answer_vars.end());
    for (const std::string& v : answer_vars)
        if (existential_vars.count(v))
            throw input_error("variable " + v + " is both an answer and an existential variable");
    for (const std::string& v : variables())
        if (!answers.count(v) && !existential_vars.count(v))
            throw input_error("variable " + v + " in query atoms is neither answer nor existential");
}

CQ CQ::canonical() const {
    // Stable pre-order that does not depend on existential variable names.
    std::vector<Atom> sorted = atoms;
    std::stable_sort(sorted.begin(), sorted.end(), [&](const Atom& a, const Atom& b) {
        return masked_key(a, existential_vars) < masked_key(b, existential_vars);
    });
    Binding rename;
    int next = 0;
    std::function<void(const Term&)> visit = [&](const Term& t) {
        if (t.is_variable() && existential_vars.count(t.name()) && !rename.count(t.name()))
            rename.emplace(t.name(), Term::variable("_e" + std::to_string(next++)));
        for (const Term& a : t.args()) visit(a);
    };
    for (const Atom& a : sorted)
        for (const Term& t : a.args) visit(t);

    CQ out;
    out.answer_vars = answer_vars;
    for (const auto& [from, to] : rename) out.existential_vars.insert(to.name());
    std::function<Term(const Term&)> apply = [&](const Term& t) -> Term {
        if (t.is_variable()) {
            auto it = rename.find(t.name());
            return it == rename.end() ? t : it->second;
        }
        if (t.is_constant()) return t;
        std::vector<Term> args;
        for (const Term& a : t.args()) args.push_back(apply(a));
        return Term::skolem(t.name(), std::move(args));
    };
    for (const Atom& a : sorted) {
        Atom na{a.pred, a.ns, {}};
        for (const Term& t : a.args) na.args.push_back(apply(t));
        out.atoms.push_back(std::move(na));
    }
    std::sort(out.atoms.begin(), out.atoms.end());
    // Duplicate conjuncts are redundant; dropping them here also unblocks the
    // rewriter, whose applicability checks count variable occurrences.
    out.atoms.erase(std::unique(out.atoms.begin(), out.atoms.end()), out.atoms.end());
    return out;
}

std::string CQ::str() const {
    CQ c = canonical();
    std::ostringstream os;
    if (!c.answer_vars.empty()) {
        os << '[';
        for (std::size_t i = 0; i < c.answer_vars.size(); ++i) {
            if (i) os << ',';
            os << c.answer_vars[i];
        }
        os << "] ";
    }
    if (!c.existential_vars.empty()) {
        os << "exists ";
        bool first = true;
        for (const std::string& v : c.existential_vars) {
            if (!first) os << ',';
            os << v;
            first = false;
        }
        os << ". ";
    }
    for (std::size_t i = 0; i < c.atoms.size(); ++i) {
        if (i) os << ", ";
        os << c.atoms[i].str();
    }
    return os.str();
}

void UCQ::validate() const {
    for (const CQ& d : disjuncts) {
        d.validate();
        if (d.answer_vars != answer_vars)
            throw input_error("UCQ disjunct answer variables differ from the union's");
    }
}

std::string UCQ::str() const {
    std::vector<std::string> parts;
    for (const CQ& d : disjuncts) parts.push_back(d.str());
    std::sort(parts.begin(), parts.end());
    std::ostringstream os;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) os << " | ";
        os << parts[i];
    }
    return os.str();
}

Term substitute(const Term& t, const Binding& binding) {
    if (t.is_variable()) {
        auto it = binding.find(t.name());
        return it == binding.end() ? t : it->second;
    }
    if (t.is_constant()) return t;
    std::vector<Term> args;
    for (const Term& a : t.args()) args.push_back(substitute(a, binding));
    return Term::skolem(t.name(), std::move(args));
}

Atom substitute(const Atom& a, const Binding& binding) {
    Atom out{a.pred, a.ns, {}};
    for (const Term& t : a.args) out.args.push_back(substitute(t, binding));
    return out;
}

CQ substitute(const CQ& q, const Binding& binding) {
    for (const auto& [var, _] : binding)
        if (q.existential_vars.count(var))
            throw input_error("cannot bind existential variable " + var);

    // Capture avoidance: rename existentials clashing with variables that
    // occur inside binding values.
    std::set<std::string> incoming;
    for (const auto& [_, t] : binding) collect_vars(t, incoming);
    Binding rename;
    int fresh = 0;
    CQ out;
    for (const std::string& v : q.existential_vars) {
        if (incoming.count(v)) {
            std::string nv;
            do nv = v + "#" + std::to_string(fresh++);
            while (incoming.count(nv) || q.existential_vars.count(nv));
            rename.emplace(v, Term::variable(nv));
            out.existential_vars.insert(nv);
        } else {
            out.existential_vars.insert(v);
        }
    }
    for (const std::string& v : q.answer_vars)
        if (!binding.count(v)) out.answer_vars.push_back(v);
    for (const Atom& a : q.atoms) {
        Atom renamed = rename.empty() ? a : substitute(a, rename);
        out.atoms.push_back(substitute(renamed, binding));
    }
    return out;
}

UCQ substitute(const UCQ& q, const Binding& binding) {
    UCQ out;
    for (const std::string& v : q.answer_vars)
        if (!binding.count(v)) out.answer_vars.push_back(v);
    for (const CQ& d : q.disjuncts) out.disjuncts.push_back(substitute(d, binding));
    return out;
}

AtomIndex::AtomIndex(const std::set<Atom>& atoms) {
    for (const Atom& a : atoms) add(a);
}

AtomIndex::AtomIndex(const std::vector<Atom>& atoms) {
    for (const Atom& a : atoms) add(a);
}

void AtomIndex::add(const Atom& a) {
    std::function<void(const Term&)> reg = [&](const Term& t) {
        terms_.insert(t);
    };
    for (const Term& t : a.args) reg(t);
    by_pred_[{a.ns, a.pred}].push_back(a);
    ++size_;
}

const std::vector<Atom>& AtomIndex::with_pred(Namespace ns, const std::string& pred) const {
    static const std::vector<Atom> empty;
    auto it = by_pred_.find({ns, pred});
    return it == by_pred_.end() ? empty : it->second;
}

bool AtomIndex::contains(const Atom& a) const {
    const auto& v = with_pred(a.ns, a.pred);
    return std::find(v.begin(), v.end(), a) != v.end();
}

namespace {

bool unify_term(const Term& pat, const Term& ground, Binding& b) {
    if (pat.is_variable()) {
        auto it = b.find(pat.name());
        if (it != b.end()) return it->second == ground;
        b.emplace(pat.name(), ground);
        return true;
    }
    if (pat.is_constant()) return pat == ground;
    // Skolem pattern: ground must be a Skolem term with the same id.
    if (!ground.is_skolem() || ground.name() != pat.name() ||
        ground.args().size() != pat.args().size())
        return false;
    for (std::size_t i = 0; i < pat.args().size(); ++i)
        if (!unify_term(pat.args()[i], ground.args()[i], b)) return false;
    return true;
}

/// Backtracking match of q's atoms against db. `on_match` receives the full
/// binding and the matched atoms; returning false stops the search.
bool search(const CQ& q, const AtomIndex& db, Binding& b, std::size_t i,
            std::vector<Atom>& image,
            const std::function<bool(const Binding&, const std::vector<Atom>&)>& on_match) {
    if (i == q.atoms.size()) return on_match(b, image);
    const Atom& pat = q.atoms[i];
    for (const Atom& cand : db.with_pred(pat.ns, pat.pred)) {
        if (cand.args.size() != pat.args.size()) continue;
        Binding saved = b;
        bool ok = true;
        for (std::size_t k = 0; k < pat.args.size() && ok; ++k)
            ok = unify_term(pat.args[k], cand.args[k], b);
        if (ok) {
            image.push_back(cand);
            if (!search(q, db, b, i + 1, image, on_match)) return false;
            image.pop_back();
        }
        b = std::move(saved);
    }
    return true;
}

} // namespace

std::vector<Binding> eval_cq(const CQ& q, const AtomIndex& db) {
    std::set<std::string> answers(q.answer_vars.begin(), q.answer_vars.end());
    std::set<std::string> seen;
    std::vector<Binding> out;
    Binding b;
    std::vector<Atom> image;
    search(q, db, b, 0, image, [&](const Binding& full, const std::vector<Atom>&) {
        Binding proj;
        for (const auto& [v, t] : full)
            if (answers.count(v)) proj.emplace(v, t);
        std::string key;
        for (const auto& [v, t] : proj) key += v + "=" + t.str() + ";";
        if (seen.insert(key).second) out.push_back(std::move(proj));
        return true;
    });
    return out;
}

bool holds(const CQ& q, const AtomIndex& db) {
    if (!q.answer_vars.empty())
        throw internal_error("boolean evaluation of a CQ with free answer variables");
    bool found = false;
    Binding b;
    std::vector<Atom> image;
    search(q, db, b, 0, image, [&](const Binding&, const std::vector<Atom>&) {
        found = true;
        return false;
    });
    return found;
}

bool holds(const UCQ& q, const AtomIndex& db) {
    for (const CQ& d : q.disjuncts)
        if (holds(d, db)) return true;
    return false;
}

std::vector<std::set<Atom>> hom_images(const CQ& q, const AtomIndex& db) {
    if (!q.answer_vars.empty())
        throw internal_error("hom_images requires a boolean CQ");
    std::set<std::set<Atom>> images;
    Binding b;
    std::vector<Atom> image;
    search(q, db, b, 0, image, [&](const Binding&, const std::vector<Atom>& img) {
        images.emplace(img.begin(), img.end());
        return true;
    });
    // Keep only minimal images: a superset image is never needed as a support.
    std::vector<std::set<Atom>> out;
    for (const auto& s : images) {
        bool dominated = false;
        for (const auto& t : images)
            if (t != s && std::includes(s.begin(), s.end(), t.begin(), t.end())) {
                dominated = true;
                break;
            }
        if (!dominated) out.push_back(s);
    }
    return out;
}

bool subsumes(const CQ& q1, const CQ& q2) {
    if (q1.answer_vars != q2.answer_vars) return false;
    // Evaluate q1 over q2's atoms with q2's variables frozen as constants.
    Binding freeze;
    for (const std::string& v : q2.variables())
        freeze.emplace(v, Term::constant("frz#" + v));
    CQ target;
    target.atoms.reserve(q2.atoms.size());
    for (const Atom& a : q2.atoms) target.atoms.push_back(substitute(a, freeze));
    AtomIndex db(target.atoms);

    CQ probe = q1;
    Binding fix;
    for (const std::string& v : q1.answer_vars) fix.emplace(v, Term::constant("frz#" + v));
    probe = substitute(probe, fix);
    return holds(probe, db);
}

} // namespace mpr
