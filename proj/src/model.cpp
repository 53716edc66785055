#include "mpr/model.hpp"

#include <algorithm>
#include <sstream>

namespace mpr {

std::string BasicConcept::str() const {
    if (!is_exists) return name;
    return "exists " + name + (inverse ? "-" : "");
}

std::string RoleExpr::str() const { return name + (inverse ? "-" : ""); }

OntologyAxiom OntologyAxiom::concept_inclusion(BasicConcept lhs, BasicConcept rhs) {
    OntologyAxiom ax;
    ax.kind = Kind::ConceptInclusion;
    ax.clhs = std::move(lhs);
    ax.crhs = std::move(rhs);
    return ax;
}

OntologyAxiom OntologyAxiom::concept_disjointness(BasicConcept lhs, BasicConcept rhs) {
    OntologyAxiom ax;
    ax.kind = Kind::ConceptDisjointness;
    ax.clhs = std::move(lhs);
    ax.crhs = std::move(rhs);
    return ax;
}

OntologyAxiom OntologyAxiom::role_inclusion(RoleExpr lhs, RoleExpr rhs) {
    OntologyAxiom ax;
    ax.kind = Kind::RoleInclusion;
    ax.rlhs = std::move(lhs);
    ax.rrhs = std::move(rhs);
    return ax;
}

std::string OntologyAxiom::str() const {
    switch (kind) {
    case Kind::ConceptInclusion: return clhs.str() + " [= " + crhs.str();
    case Kind::ConceptDisjointness: return clhs.str() + " [= not " + crhs.str();
    case Kind::RoleInclusion: return rlhs.str() + " [= " + rrhs.str();
    }
    return "?";
}

std::set<std::string> DatabaseInstance::active_domain() const {
    std::set<std::string> dom;
    for (const Atom& f : facts)
        for (const Term& t : f.args)
            if (t.is_constant()) dom.insert(t.name());
    return dom;
}

void DatabaseInstance::add(Atom fact) {
    if (fact.ns != Namespace::Source)
        throw input_error("database fact " + fact.str() + " is not in the source namespace");
    if (!fact.is_ground())
        throw input_error("database fact " + fact.str() + " is not ground");
    for (const Term& t : fact.args)
        if (t.is_skolem())
            throw input_error("database fact " + fact.str() + " contains a Skolem term");
    facts.insert(std::move(fact));
}

void MappingRule::validate() const {
    source_query.validate();
    for (const Atom& a : source_query.atoms)
        if (a.ns != Namespace::Source)
            throw input_error("rule " + label + ": source query atom " + a.str() +
                              " is not in the source namespace");
    std::set<std::string> x(source_query.answer_vars.begin(), source_query.answer_vars.end());
    auto check_free = [&](const std::vector<std::string>& vars, const std::string& what) {
        for (const std::string& v : vars)
            if (!x.count(v))
                throw input_error("rule " + label + ": free variable " + v + " of " + what +
                                  " is not answered by the source query");
    };
    auto check_ontology = [&](const std::vector<Atom>& atoms, const std::string& what) {
        for (const Atom& a : atoms)
            if (a.ns != Namespace::Ontology)
                throw input_error("rule " + label + ": " + what + " atom " + a.str() +
                                  " is not in the ontology namespace");
    };
    if (head) {
        head->validate();
        check_free(head->answer_vars, "the head");
        check_ontology(head->atoms, "head");
    }
    for (const CQ& j : neg_justs) {
        j.validate();
        check_free(j.answer_vars, "a negative justification");
        check_ontology(j.atoms, "negative justification");
    }
    for (const UCQ& j : pos_justs) {
        j.validate();
        check_free(j.answer_vars, "a positive justification");
        for (const CQ& d : j.disjuncts) check_ontology(d.atoms, "positive justification");
    }
}

MappingInterpretation MappingInterpretation::without(const Atom& a) const {
    MappingInterpretation out{atoms};
    out.atoms.erase(a);
    return out;
}

std::string MappingInterpretation::str() const {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (const Atom& a : atoms) {
        if (!first) os << ", ";
        os << a.str();
        first = false;
    }
    os << '}';
    return os.str();
}

void MappingInterpretation::validate() const {
    for (const Atom& a : atoms) {
        if (a.ns != Namespace::Ontology)
            throw input_error("interpretation atom " + a.str() + " is not an ontology atom");
        if (!a.is_ground())
            throw input_error("interpretation atom " + a.str() + " is not ground");
        for (const Term& t : a.args)
            if (t.is_skolem())
                for (const Term& arg : t.args())
                    if (!arg.is_constant())
                        throw input_error("Skolem term " + t.str() + " has a non-constant argument");
    }
}

void Signature::declare(const std::string& name, std::size_t arity, Namespace ns, bool declared) {
    auto it = preds.find(name);
    if (it != preds.end()) {
        if (it->second.arity != arity || it->second.ns != ns)
            throw input_error("predicate " + name + " redeclared with different arity or namespace");
        it->second.declared = it->second.declared || declared;
        return;
    }
    preds[name] = PredInfo{arity, ns, declared};
}

const Signature::PredInfo* Signature::find(const std::string& name) const {
    auto it = preds.find(name);
    return it == preds.end() ? nullptr : &it->second;
}

void GeneralizedObdaSpec::validate() const {
    for (const MappingRule& r : rules) r.validate();
    auto check_sig = [&](const Atom& a) {
        if (const auto* info = signature.find(a.pred)) {
            if (info->arity != a.args.size())
                throw input_error("atom " + a.str() + " does not match declared arity of " + a.pred);
            if (info->ns != a.ns)
                throw input_error("atom " + a.str() + " uses " + a.pred + " in the wrong namespace");
        }
    };
    for (const Atom& f : database.facts) check_sig(f);
    for (const MappingRule& r : rules) {
        if (r.head)
            for (const Atom& a : r.head->atoms) check_sig(a);
        for (const CQ& j : r.neg_justs)
            for (const Atom& a : j.atoms) check_sig(a);
        for (const UCQ& j : r.pos_justs)
            for (const CQ& d : j.disjuncts)
                for (const Atom& a : d.atoms) check_sig(a);
        for (const Atom& a : r.source_query.atoms)
            if (a.pred != "top") check_sig(a);
    }
}

} // namespace mpr
