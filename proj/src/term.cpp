#include "mpr/term.hpp"

#include <sstream>

namespace mpr {

std::string to_string(Namespace ns) {
    switch (ns) {
    case Namespace::Source: return "source";
    case Namespace::Ontology: return "ontology";
    case Namespace::Aux: return "aux";
    }
    return "?";
}

Term Term::constant(std::string name) {
    if (name.empty()) throw input_error("empty constant name");
    if (name.rfind("sk_", 0) == 0)
        throw input_error("constant name '" + name + "' collides with the Skolem namespace");
    return Term(Kind::Constant, std::move(name), {});
}

Term Term::variable(std::string name) {
    if (name.empty()) throw input_error("empty variable name");
    return Term(Kind::Variable, std::move(name), {});
}

Term Term::skolem(std::string id, std::vector<Term> args) {
    if (id.rfind("sk_", 0) != 0)
        throw input_error("Skolem id '" + id + "' must start with 'sk_'");
    for (const Term& a : args) {
        if (a.is_skolem())
            throw input_error("Skolem terms never nest: " + id + " applied to " + a.str());
    }
    return Term(Kind::Skolem, std::move(id), std::move(args));
}

bool Term::is_ground() const {
    if (kind_ == Kind::Variable) return false;
    for (const Term& a : args_)
        if (!a.is_ground()) return false;
    return true;
}

std::string Term::str() const {
    if (kind_ != Kind::Skolem) return name_;
    std::ostringstream os;
    os << name_ << '(';
    for (std::size_t i = 0; i < args_.size(); ++i) {
        if (i) os << ',';
        os << args_[i].str();
    }
    os << ')';
    return os.str();
}

int Term::cmp(const Term& o) const {
    if (kind_ != o.kind_) return kind_ < o.kind_ ? -1 : 1;
    if (int c = name_.compare(o.name_)) return c < 0 ? -1 : 1;
    if (args_.size() != o.args_.size()) return args_.size() < o.args_.size() ? -1 : 1;
    for (std::size_t i = 0; i < args_.size(); ++i)
        if (int c = args_[i].cmp(o.args_[i])) return c;
    return 0;
}

bool Atom::is_ground() const {
    for (const Term& t : args)
        if (!t.is_ground()) return false;
    return true;
}

std::string Atom::str() const {
    std::ostringstream os;
    os << pred;
    if (!args.empty()) {
        os << '(';
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (i) os << ',';
            os << args[i].str();
        }
        os << ')';
    }
    return os.str();
}

int Atom::cmp(const Atom& o) const {
    if (ns != o.ns) return ns < o.ns ? -1 : 1;
    if (int c = pred.compare(o.pred)) return c < 0 ? -1 : 1;
    if (args.size() != o.args.size()) return args.size() < o.args.size() ? -1 : 1;
    for (std::size_t i = 0; i < args.size(); ++i)
        if (int c = args[i].cmp(o.args[i])) return c;
    return 0;
}

} // namespace mpr
