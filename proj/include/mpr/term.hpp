#pragma once

#include <string>
#include <vector>

#include "mpr/error.hpp"

namespace mpr {

/// Predicate namespaces. Source and ontology signatures are disjoint; Aux is
/// reserved for predicates introduced by the classical-ASP reduction.
enum class Namespace { Source, Ontology, Aux };

std::string to_string(Namespace ns);

/// A first-order term: constant, variable, or Skolem term over constants and
/// variables. Skolem terms never nest; constants never start with "sk_", so
/// constant names and Skolem ids live in disjoint namespaces.
class Term {
public:
    enum class Kind { Constant, Variable, Skolem };

    static Term constant(std::string name);
    static Term variable(std::string name);
    static Term skolem(std::string id, std::vector<Term> args);

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    const std::vector<Term>& args() const { return args_; }

    bool is_constant() const { return kind_ == Kind::Constant; }
    bool is_variable() const { return kind_ == Kind::Variable; }
    bool is_skolem() const { return kind_ == Kind::Skolem; }
    bool is_ground() const;

    std::string str() const;

    int cmp(const Term& o) const;
    bool operator==(const Term& o) const { return cmp(o) == 0; }
    bool operator!=(const Term& o) const { return cmp(o) != 0; }
    bool operator<(const Term& o) const { return cmp(o) < 0; }

private:
    Term(Kind k, std::string n, std::vector<Term> a)
        : kind_(k), name_(std::move(n)), args_(std::move(a)) {}

    Kind kind_;
    std::string name_;
    std::vector<Term> args_;
};

struct Atom {
    std::string pred;
    Namespace ns = Namespace::Ontology;
    std::vector<Term> args;

    bool is_ground() const;
    std::string str() const;

    int cmp(const Atom& o) const;
    bool operator==(const Atom& o) const { return cmp(o) == 0; }
    bool operator!=(const Atom& o) const { return cmp(o) != 0; }
    bool operator<(const Atom& o) const { return cmp(o) < 0; }
};

} // namespace mpr
