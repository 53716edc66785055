#include "mpr/grounder.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <functional>
#include <sstream>

namespace mpr {

namespace {

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

Atom substitute_raw(const Atom& a, const Binding& b) { return substitute(a, b); }

} // namespace

SkolemProgram skolemize(const std::vector<MappingRule>& rules) {
    SkolemProgram out;
    for (const MappingRule& rule : rules) {
        rule.validate();
        MappingRule sk = rule;
        if (sk.head && !sk.head->existential_vars.empty()) {
            // Ordered sequence of universal variables in the head.
            std::vector<Term> universals;
            for (const std::string& v : sk.head->answer_vars) universals.push_back(Term::variable(v));
            Binding repl;
            for (const std::string& z : sk.head->existential_vars) {
                std::string id = "sk_" + lower(z);
                std::string candidate = id;
                for (int n = 2; out.skolem_symbols.count(candidate); ++n)
                    candidate = id + "_" + std::to_string(n);
                std::vector<std::string> abstracted;
                for (const Term& u : universals) abstracted.push_back(u.name());
                out.skolem_symbols.emplace(candidate, std::move(abstracted));
                repl.emplace(z, Term::skolem(candidate, universals));
            }
            CQ head;
            head.answer_vars = sk.head->answer_vars;
            for (const Atom& a : sk.head->atoms) head.atoms.push_back(substitute_raw(a, repl));
            sk.head = std::move(head);
        }
        out.rules.push_back(std::move(sk));
    }
    return out;
}

std::vector<Binding> eval_source(const CQ& q, const DatabaseInstance& db, const Signature* sig,
                                 bool strict) {
    for (const Atom& a : q.atoms)
        if (a.ns != Namespace::Source)
            throw input_error("source query contains non-source atom " + a.str());

    std::set<std::string> dom = db.active_domain();
    std::vector<Atom> facts(db.facts.begin(), db.facts.end());

    // Virtual top(x̄) relation: every tuple occurring in the database.
    std::set<std::size_t> top_arities;
    for (const Atom& a : q.atoms)
        if (a.pred == "top") top_arities.insert(a.args.size());
    for (std::size_t arity : top_arities) {
        std::set<std::vector<Term>> tuples;
        if (arity == 1) {
            for (const std::string& c : dom) tuples.insert({Term::constant(c)});
        } else {
            bool relation_of_arity = false;
            for (const Atom& f : db.facts)
                if (f.args.size() == arity) {
                    relation_of_arity = true;
                    tuples.insert(f.args);
                }
            if (!relation_of_arity) {
                // No relation of this arity: fall back to the cartesian power.
                std::vector<Term> tuple(arity, Term::constant("?"));
                std::function<void(std::size_t)> rec = [&](std::size_t i) {
                    if (i == arity) {
                        tuples.insert(tuple);
                        return;
                    }
                    for (const std::string& c : dom) {
                        tuple[i] = Term::constant(c);
                        rec(i + 1);
                    }
                };
                if (!dom.empty()) rec(0);
            }
        }
        for (const auto& t : tuples) facts.push_back(Atom{"top", Namespace::Source, t});
    }

    // Unknown predicates evaluate to empty; warn (or fail in strict mode).
    for (const Atom& a : q.atoms) {
        if (a.pred == "top") continue;
        bool known = false;
        for (const Atom& f : db.facts)
            if (f.pred == a.pred) known = true;
        if (!known && sig) {
            const auto* info = sig->find(a.pred);
            known = info && info->ns == Namespace::Source;
        }
        if (!known) {
            if (strict) throw input_error("unknown source predicate " + a.pred);
            std::fprintf(stderr, "warning: unknown source predicate %s evaluates to empty\n",
                         a.pred.c_str());
        }
    }

    return eval_cq(q, AtomIndex(facts));
}

std::set<std::string> grounding_constants(const SkolemProgram& program,
                                          const DatabaseInstance& db) {
    std::set<std::string> dom = db.active_domain();
    std::function<void(const Term&)> visit = [&](const Term& t) {
        if (t.is_constant()) dom.insert(t.name());
        for (const Term& a : t.args()) visit(a);
    };
    auto visit_atoms = [&](const std::vector<Atom>& atoms) {
        for (const Atom& a : atoms)
            for (const Term& t : a.args) visit(t);
    };
    for (const MappingRule& r : program.rules) {
        if (r.head) visit_atoms(r.head->atoms);
        for (const CQ& j : r.neg_justs) visit_atoms(j.atoms);
        for (const UCQ& j : r.pos_justs)
            for (const CQ& d : j.disjuncts) visit_atoms(d.atoms);
        visit_atoms(r.source_query.atoms);
    }
    return dom;
}

std::string GroundRule::str() const {
    std::ostringstream os;
    if (!head) {
        os << "bot";
    } else {
        std::vector<Atom> hs = *head;
        std::sort(hs.begin(), hs.end());
        for (std::size_t i = 0; i < hs.size(); ++i) {
            if (i) os << ", ";
            os << hs[i].str();
        }
    }
    os << " <- ";
    std::vector<std::string> parts;
    for (const CQ& j : neg_justs) parts.push_back("not (" + j.str() + ")");
    for (const UCQ& j : pos_justs) parts.push_back("(" + j.str() + ")");
    std::sort(parts.begin(), parts.end());
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) os << ", ";
        os << parts[i];
    }
    if (!source_certified && !source_query.atoms.empty()) {
        if (!parts.empty()) os << ", ";
        os << "@(" << source_query.str() << ")";
    }
    os << ".";
    return os.str();
}

std::size_t PartialGroundProgram::count_neg_justs() const {
    std::size_t n = 0;
    for (const GroundRule& r : rules) n += r.neg_justs.size();
    return n;
}

std::size_t PartialGroundProgram::count_pos_justs() const {
    std::size_t n = 0;
    for (const GroundRule& r : rules) n += r.pos_justs.size();
    return n;
}

namespace {

GroundRule instantiate(const MappingRule& rule, std::size_t origin, const Binding& binding,
                       bool certified) {
    GroundRule g;
    g.origin = origin;
    g.binding = binding;
    g.source_certified = certified;
    if (rule.head) {
        std::vector<Atom> head;
        for (const Atom& a : rule.head->atoms) {
            Atom ground = substitute(a, binding);
            if (!ground.is_ground())
                throw internal_error("head atom " + ground.str() + " not ground after binding");
            head.push_back(std::move(ground));
        }
        std::sort(head.begin(), head.end());
        head.erase(std::unique(head.begin(), head.end()), head.end());
        g.head = std::move(head);
    }
    for (const CQ& j : rule.neg_justs) g.neg_justs.push_back(substitute(j, binding));
    for (const UCQ& j : rule.pos_justs) g.pos_justs.push_back(substitute(j, binding));
    g.source_query = substitute(rule.source_query, binding);
    return g;
}

} // namespace

PartialGroundProgram partial_ground(const SkolemProgram& program, const DatabaseInstance& db,
                                    GroundMode mode, const Limits& limits) {
    PartialGroundProgram out;
    out.mode = mode;
    std::set<std::string> dom = grounding_constants(program, db);
    for (std::size_t i = 0; i < program.rules.size(); ++i) {
        const MappingRule& rule = program.rules[i];
        std::vector<Binding> bindings;
        if (mode == GroundMode::Relevant) {
            bindings = eval_source(rule.source_query, db);
        } else {
            // All tuples over the grounding constants for the source answer
            // variables; negative-justification existentials stay unground.
            const auto& vars = rule.source_query.answer_vars;
            Binding b;
            std::function<void(std::size_t)> rec = [&](std::size_t k) {
                if (k == vars.size()) {
                    bindings.push_back(b);
                    return;
                }
                for (const std::string& c : dom) {
                    b.insert_or_assign(vars[k], Term::constant(c));
                    rec(k + 1);
                }
            };
            rec(0);
        }
        for (const Binding& b : bindings) {
            if (out.rules.size() >= limits.ground_cap)
                throw cap_error("partial grounding exceeds cap of " +
                                std::to_string(limits.ground_cap) + " rules");
            out.rules.push_back(instantiate(rule, i, b, mode == GroundMode::Relevant));
        }
    }
    std::stable_sort(out.rules.begin(), out.rules.end(),
                     [](const GroundRule& a, const GroundRule& b) {
                         if (a.origin != b.origin) return a.origin < b.origin;
                         return a.str() < b.str();
                     });
    return out;
}

std::set<Atom> herbrand_base(const SkolemProgram& program, const DatabaseInstance& db,
                             const Limits& limits) {
    std::map<std::string, std::size_t> preds;
    auto collect = [&](const std::vector<Atom>& atoms) {
        for (const Atom& a : atoms)
            if (a.ns == Namespace::Ontology) preds[a.pred] = a.args.size();
    };
    for (const MappingRule& r : program.rules) {
        if (r.head) collect(r.head->atoms);
        for (const CQ& j : r.neg_justs) collect(j.atoms);
        for (const UCQ& j : r.pos_justs)
            for (const CQ& d : j.disjuncts) collect(d.atoms);
    }

    std::set<std::string> dom = grounding_constants(program, db);
    std::vector<Term> terms;
    for (const std::string& c : dom) terms.push_back(Term::constant(c));
    for (const auto& [id, vars] : program.skolem_symbols) {
        std::vector<Term> args(vars.size(), Term::constant("?"));
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (i == vars.size()) {
                terms.push_back(Term::skolem(id, args));
                return;
            }
            for (const std::string& c : dom) {
                args[i] = Term::constant(c);
                rec(i + 1);
            }
        };
        if (vars.empty() || !dom.empty()) rec(0);
    }

    std::set<Atom> base;
    for (const auto& [pred, arity] : preds) {
        std::vector<Term> args(arity, Term::constant("?"));
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (i == arity) {
                if (base.size() >= limits.herbrand_cap)
                    throw cap_error("Herbrand base exceeds cap of " +
                                    std::to_string(limits.herbrand_cap) + " atoms");
                base.insert(Atom{pred, Namespace::Ontology, args});
                return;
            }
            for (const Term& t : terms) {
                args[i] = t;
                rec(i + 1);
            }
        };
        if (arity == 0)
            base.insert(Atom{pred, Namespace::Ontology, {}});
        else if (!terms.empty())
            rec(0);
    }
    return base;
}

} // namespace mpr
