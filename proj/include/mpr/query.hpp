#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "mpr/term.hpp"

namespace mpr {

using Binding = std::map<std::string, Term>;

/// Conjunctive query. Every variable in `atoms` is either an answer variable
/// (free) or an existential variable; the two sets are disjoint. A fully
/// substituted CQ has empty answer_vars and is evaluated as a boolean query.
struct CQ {
    std::vector<std::string> answer_vars;
    std::set<std::string> existential_vars;
    std::vector<Atom> atoms;

    bool is_boolean() const { return answer_vars.empty(); }
    bool is_ground() const;
    std::set<std::string> variables() const;
    void validate() const; // checks the variable partition invariant

    /// Canonical form: atoms sorted, existential variables renamed _e0,_e1,...
    /// in order of appearance. Used for caching, dedup, and printing.
    CQ canonical() const;
    std::string str() const;

    bool operator==(const CQ& o) const { return str() == o.str(); }
    bool operator<(const CQ& o) const { return str() < o.str(); }
};

/// Union of conjunctive queries; all disjuncts share answer_vars.
struct UCQ {
    std::vector<std::string> answer_vars;
    std::vector<CQ> disjuncts;

    void validate() const;
    std::string str() const;
};

/// Capture-avoiding substitution of answer variables. Binding an existential
/// variable is an error; bound variables are removed from answer_vars.
CQ substitute(const CQ& q, const Binding& binding);
UCQ substitute(const UCQ& q, const Binding& binding);
Atom substitute(const Atom& a, const Binding& binding);
Term substitute(const Term& t, const Binding& binding);

/// Immutable set of ground atoms indexed by predicate, used as the database
/// a (U)CQ is evaluated over.
class AtomIndex {
public:
    AtomIndex() = default;
    explicit AtomIndex(const std::set<Atom>& atoms);
    explicit AtomIndex(const std::vector<Atom>& atoms);

    const std::vector<Atom>& with_pred(Namespace ns, const std::string& pred) const;
    const std::set<Term>& terms() const { return terms_; }
    bool contains(const Atom& a) const;
    std::size_t size() const { return size_; }

private:
    void add(const Atom& a);
    std::map<std::pair<Namespace, std::string>, std::vector<Atom>> by_pred_;
    std::set<Term> terms_;
    std::size_t size_ = 0;
};

/// All answer-variable bindings under which q holds in db.
std::vector<Binding> eval_cq(const CQ& q, const AtomIndex& db);
/// Boolean evaluation; q's answer variables must already be substituted away.
bool holds(const CQ& q, const AtomIndex& db);
bool holds(const UCQ& q, const AtomIndex& db);
/// All homomorphism images of a boolean CQ into db (as ground atom sets),
/// with dominated (superset) images removed.
std::vector<std::set<Atom>> hom_images(const CQ& q, const AtomIndex& db);

/// True if there is a homomorphism from q1 into q2 fixing answer variables
/// and constants (q1 subsumes q2, i.e. q2 implies q1).
bool subsumes(const CQ& q1, const CQ& q2);

} // namespace mpr
