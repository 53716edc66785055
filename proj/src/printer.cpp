#include <sstream>

#include "mpr/frontend.hpp"

namespace mpr {

namespace {

/// Existential variables must carry the `_` prefix in the printed syntax.
Binding underscore_rename(const CQ& q) {
    Binding rename;
    std::set<std::string> taken = q.existential_vars;
    for (const std::string& v : q.answer_vars) taken.insert(v);
    for (const std::string& v : q.existential_vars) {
        if (v[0] == '_') continue;
        std::string nv = "_" + v;
        while (taken.count(nv)) nv = "_" + nv;
        taken.insert(nv);
        rename.emplace(v, Term::variable(nv));
    }
    return rename;
}

std::string cq_body(const CQ& q) {
    Binding rename = underscore_rename(q);
    std::ostringstream os;
    for (std::size_t i = 0; i < q.atoms.size(); ++i) {
        if (i) os << ", ";
        os << substitute(q.atoms[i], rename).str();
    }
    return os.str();
}

std::string head_atom(const Atom& a, const std::set<std::string>& existentials,
                      std::set<std::string>& announced) {
    std::ostringstream os;
    os << a.pred;
    if (a.args.empty()) return os.str();
    os << '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) os << ", ";
        const Term& t = a.args[i];
        if (t.is_variable() && existentials.count(t.name()) && t.name()[0] != '_' &&
            announced.insert(t.name()).second)
            os << "exists " << t.name();
        else
            os << t.str();
    }
    os << ')';
    return os.str();
}

} // namespace

std::string print_axiom(const OntologyAxiom& axiom) { return axiom.str() + "."; }

std::string print_rule(const MappingRule& rule) {
    std::ostringstream os;
    if (!rule.label.empty()) os << rule.label << ": ";
    if (!rule.head) {
        os << "bot";
    } else {
        std::set<std::string> announced;
        for (std::size_t i = 0; i < rule.head->atoms.size(); ++i) {
            if (i) os << ", ";
            os << head_atom(rule.head->atoms[i], rule.head->existential_vars, announced);
        }
    }
    os << " <- ";
    std::vector<std::string> parts;
    for (const CQ& j : rule.neg_justs) {
        if (j.atoms.size() == 1)
            parts.push_back("not " + cq_body(j));
        else
            parts.push_back("not (" + cq_body(j) + ")");
    }
    for (const UCQ& j : rule.pos_justs) {
        if (j.disjuncts.size() == 1 && j.disjuncts.front().atoms.size() == 1) {
            parts.push_back(cq_body(j.disjuncts.front()));
        } else {
            std::string s = "(";
            for (std::size_t i = 0; i < j.disjuncts.size(); ++i) {
                if (i) s += " | ";
                s += cq_body(j.disjuncts[i]);
            }
            parts.push_back(s + ")");
        }
    }
    {
        Binding rename = underscore_rename(rule.source_query);
        for (const Atom& a : rule.source_query.atoms) {
            Atom r = substitute(a, rename);
            parts.push_back(r.pred == "top" ? r.str() : "@" + r.str());
        }
    }
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) os << ", ";
        os << parts[i];
    }
    os << ".";
    return os.str();
}

std::string print_spec(const GeneralizedObdaSpec& spec) {
    std::ostringstream os;
    bool declared = false;
    for (const auto& [name, info] : spec.signature.preds)
        if (info.declared) declared = true;
    if (declared) {
        os << "%signature\n";
        for (const auto& [name, info] : spec.signature.preds)
            if (info.declared)
                os << (info.ns == Namespace::Source ? "source " : "ontology ") << name << "/"
                   << info.arity << ".\n";
        os << "\n";
    }
    if (!spec.ontology.empty()) {
        os << "%ontology\n";
        for (const OntologyAxiom& ax : spec.ontology.axioms) os << print_axiom(ax) << "\n";
        os << "\n";
    }
    if (!spec.rules.empty()) {
        os << "%mapping\n";
        for (const MappingRule& r : spec.rules) os << print_rule(r) << "\n";
        os << "\n";
    }
    if (!spec.database.facts.empty()) {
        os << "%database\n";
        for (const Atom& f : spec.database.facts) os << f.str() << ".\n";
    }
    return os.str();
}

} // namespace mpr
