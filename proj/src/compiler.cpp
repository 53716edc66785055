#include "mpr/compiler.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mpr {

namespace {

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

void collect_vars(const Term& t, std::set<std::string>& out) {
    if (t.is_variable()) out.insert(t.name());
    for (const Term& a : t.args()) collect_vars(a, out);
}

std::set<std::string> atom_vars(const std::vector<Atom>& atoms) {
    std::set<std::string> vars;
    for (const Atom& a : atoms)
        for (const Term& t : a.args) collect_vars(t, vars);
    return vars;
}

/// Keep one representative per equivalence class, drop strictly subsumed
/// disjuncts, canonical order.
std::vector<CQ> prune_disjuncts(std::vector<CQ> disjuncts) {
    for (CQ& d : disjuncts) d = d.canonical();
    std::sort(disjuncts.begin(), disjuncts.end());
    disjuncts.erase(std::unique(disjuncts.begin(), disjuncts.end()), disjuncts.end());
    std::vector<char> dead(disjuncts.size(), 0);
    for (std::size_t i = 0; i < disjuncts.size(); ++i) {
        if (dead[i]) continue;
        for (std::size_t j = 0; j < disjuncts.size(); ++j) {
            if (i == j || dead[j]) continue;
            if (!subsumes(disjuncts[j], disjuncts[i])) continue;
            // j is at least as general as i; drop i unless they are
            // equivalent and i comes first.
            if (subsumes(disjuncts[i], disjuncts[j]) && i < j) continue;
            dead[i] = 1;
            break;
        }
    }
    std::vector<CQ> out;
    for (std::size_t i = 0; i < disjuncts.size(); ++i)
        if (!dead[i]) out.push_back(std::move(disjuncts[i]));
    return out;
}

UCQ rewrite_ucq_union(const UCQ& q, const Ontology& ontology) {
    std::vector<CQ> disjuncts;
    for (const CQ& d : q.disjuncts) {
        UCQ r = rewrite_ucq(d, ontology);
        for (CQ& rd : r.disjuncts) disjuncts.push_back(std::move(rd));
    }
    UCQ out;
    out.answer_vars = q.answer_vars;
    out.disjuncts = prune_disjuncts(std::move(disjuncts));
    return out;
}

/// Split a disjunct into connected components along shared existential
/// variables; answer variables and constants do not connect atoms.
std::vector<CQ> split_components(const CQ& d) {
    const std::size_t n = d.atoms.size();
    if (n <= 1) return {d};
    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::map<std::string, std::size_t> seen;
    for (std::size_t i = 0; i < n; ++i) {
        std::set<std::string> vars;
        for (const Term& t : d.atoms[i].args) collect_vars(t, vars);
        for (const std::string& v : vars) {
            if (!d.existential_vars.count(v)) continue;
            auto [it, fresh] = seen.emplace(v, i);
            if (!fresh) parent[find(i)] = find(it->second);
        }
    }
    std::map<std::size_t, std::vector<Atom>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(d.atoms[i]);
    std::vector<CQ> out;
    for (auto& [root, atoms] : groups) {
        CQ c;
        std::set<std::string> vars = atom_vars(atoms);
        for (const std::string& v : d.answer_vars)
            if (vars.count(v)) c.answer_vars.push_back(v);
        for (const std::string& v : d.existential_vars)
            if (vars.count(v)) c.existential_vars.insert(v);
        c.atoms = std::move(atoms);
        out.push_back(std::move(c));
    }
    return out;
}

bool ucq_contained(const UCQ& u1, const UCQ& u2) {
    for (const CQ& d1 : u1.disjuncts) {
        bool covered = false;
        for (const CQ& d2 : u2.disjuncts)
            if (subsumes(d2, d1)) {
                covered = true;
                break;
            }
        if (!covered) return false;
    }
    return true;
}

bool ucq_equivalent(const UCQ& u1, const UCQ& u2) {
    return ucq_contained(u1, u2) && ucq_contained(u2, u1);
}

std::string binding_key(const Binding& b) {
    std::ostringstream os;
    for (const auto& [v, t] : b) os << v << '=' << t.str() << ';';
    return os.str();
}

/// Constants plus all ground Skolem instantiations, shared by the Herbrand
/// base and the aux-definition groundings.
std::vector<Term> domain_terms(const SkolemProgram& program, const DatabaseInstance& db) {
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
    return terms;
}

bool top_contains(const std::vector<Term>& args, const DatabaseInstance& db) {
    std::set<std::string> dom = db.active_domain();
    if (args.size() == 1) return args[0].is_constant() && dom.count(args[0].name());
    bool arity_seen = false;
    for (const Atom& f : db.facts)
        if (f.args.size() == args.size()) {
            arity_seen = true;
            if (f.args == args) return true;
        }
    if (arity_seen) return false;
    for (const Term& t : args)
        if (!t.is_constant() || !dom.count(t.name())) return false;
    return true;
}

} // namespace

MappingRule rewrite_rule(const MappingRule& rule, const Ontology& ontology) {
    MappingRule out = rule;
    out.neg_justs.clear();
    for (const CQ& j : rule.neg_justs) {
        UCQ r = rewrite_ucq(j, ontology);
        // not (φ1 ∨ ... ∨ φn) = not φ1, ..., not φn
        for (CQ& d : r.disjuncts) out.neg_justs.push_back(std::move(d));
    }
    out.pos_justs.clear();
    for (const UCQ& j : rule.pos_justs) out.pos_justs.push_back(rewrite_ucq_union(j, ontology));
    return out;
}

RewrittenProgram rewrite_program(const SkolemProgram& program, const Ontology& ontology) {
    RewrittenProgram out;
    out.program.skolem_symbols = program.skolem_symbols;
    for (std::size_t i = 0; i < program.rules.size(); ++i) {
        MappingRule rw = rewrite_rule(program.rules[i], ontology);
        // One rule copy per combination of positive disjuncts, each disjunct
        // split into its connected components.
        std::vector<MappingRule> copies;
        MappingRule base = rw;
        base.pos_justs.clear();
        copies.push_back(base);
        for (const UCQ& j : rw.pos_justs) {
            std::vector<MappingRule> next;
            for (const MappingRule& c : copies)
                for (const CQ& d : j.disjuncts) {
                    MappingRule ext = c;
                    for (const CQ& comp : split_components(d)) {
                        UCQ one;
                        one.answer_vars = comp.answer_vars;
                        one.disjuncts.push_back(comp);
                        ext.pos_justs.push_back(std::move(one));
                    }
                    next.push_back(std::move(ext));
                }
            copies = std::move(next);
        }
        for (std::size_t k = 0; k < copies.size(); ++k) {
            if (copies.size() > 1 && !copies[k].label.empty())
                copies[k].label += "." + std::to_string(k + 1);
            out.program.rules.push_back(std::move(copies[k]));
            out.source_rule.push_back(i);
        }
    }
    return out;
}

bool reduct_commutes_check(const SkolemProgram& program, const Ontology& ontology,
                           const DatabaseInstance& db, const MappingInterpretation& A,
                           const Limits& limits) {
    EntailmentOracle with_t(ontology);
    EntailmentOracle empty_t(Ontology{});

    // Rewriting without distribution keeps rules aligned one-to-one.
    SkolemProgram rewritten;
    rewritten.skolem_symbols = program.skolem_symbols;
    for (const MappingRule& r : program.rules) rewritten.rules.push_back(rewrite_rule(r, ontology));

    PositiveReduct red1 = make_reduct(partial_ground(rewritten, db, GroundMode::Full, limits),
                                      empty_t, A);
    PositiveReduct red2 = make_reduct(partial_ground(program, db, GroundMode::Full, limits),
                                      with_t, A);

    auto key = [](const GroundRule& r) {
        return std::to_string(r.origin) + "|" + binding_key(r.binding);
    };
    std::map<std::string, const GroundRule*> survivors1;
    for (const GroundRule& r : red1.rules) survivors1[key(r)] = &r;
    std::map<std::string, const GroundRule*> survivors2;
    for (const GroundRule& r : red2.rules) survivors2[key(r)] = &r;
    if (survivors1.size() != survivors2.size()) return false;

    for (const auto& [k, r2] : survivors2) {
        auto it = survivors1.find(k);
        if (it == survivors1.end()) return false;
        const GroundRule* r1 = it->second;
        if (r1->pos_justs.size() != r2->pos_justs.size()) return false;
        for (std::size_t i = 0; i < r2->pos_justs.size(); ++i) {
            // Rewrite the surviving original justification at ground level.
            UCQ ground_rw = rewrite_ucq_union(r2->pos_justs[i], ontology);
            UCQ u1;
            u1.answer_vars = r1->pos_justs[i].answer_vars;
            u1.disjuncts = prune_disjuncts(r1->pos_justs[i].disjuncts);
            if (!ucq_equivalent(u1, ground_rw)) return false;
        }
    }
    return true;
}

std::string ExistsRule::str() const {
    std::ostringstream os;
    if (head.empty()) {
        os << "bot";
    } else {
        for (std::size_t i = 0; i < head.size(); ++i) {
            if (i) os << ", ";
            os << head[i].str();
        }
    }
    os << " <- ";
    bool first = true;
    for (const Atom& a : pos_body) {
        if (!first) os << ", ";
        first = false;
        os << a.str();
    }
    for (const CQ& c : neg_bodies) {
        if (!first) os << ", ";
        first = false;
        os << "not (" << c.str() << ")";
    }
    os << ".";
    return os.str();
}

ExistsAspProgram to_exists_asp(const RewrittenProgram& program, const DatabaseInstance& db,
                               GroundMode mode, const Limits& limits) {
    ExistsAspProgram out;
    out.domain = domain_terms(program.program, db);
    std::set<std::string> constants = grounding_constants(program.program, db);

    for (const Atom& f : db.facts) out.rules.push_back(ExistsRule{{f}, {}, {}});

    for (const MappingRule& rule : program.program.rules) {
        std::vector<Binding> bindings;
        if (mode == GroundMode::Relevant) {
            bindings = eval_source(rule.source_query, db);
        } else {
            const auto& vars = rule.source_query.answer_vars;
            Binding b;
            std::function<void(std::size_t)> rec = [&](std::size_t k) {
                if (k == vars.size()) {
                    bindings.push_back(b);
                    return;
                }
                for (const std::string& c : constants) {
                    b.insert_or_assign(vars[k], Term::constant(c));
                    rec(k + 1);
                }
            };
            rec(0);
        }
        for (const Binding& b : bindings) {
            // Body atoms still holding variables after the source binding:
            // source-query existentials and positive-justification
            // existentials, ground below. Justification variables are renamed
            // apart per justification.
            std::vector<Atom> body;
            std::set<std::string> source_vars;
            for (const Atom& a : rule.source_query.atoms) {
                Atom g = substitute(a, b);
                for (const Term& t : g.args) collect_vars(t, source_vars);
                body.push_back(std::move(g));
            }
            std::size_t n_source = body.size();
            for (std::size_t k = 0; k < rule.pos_justs.size(); ++k) {
                const CQ& d = rule.pos_justs[k].disjuncts.front();
                CQ g = substitute(d, b);
                Binding apart;
                for (const std::string& v : g.existential_vars)
                    apart.emplace(v, Term::variable("j" + std::to_string(k) + "_" + v));
                for (const Atom& a : g.atoms) body.push_back(substitute(a, apart));
            }

            std::vector<std::string> evars;
            for (const std::string& v : atom_vars(body)) evars.push_back(v);

            std::vector<Atom> head;
            if (rule.head)
                for (const Atom& a : rule.head->atoms) {
                    Atom g = substitute(a, b);
                    if (!g.is_ground())
                        throw internal_error("head atom " + g.str() + " not ground");
                    head.push_back(std::move(g));
                }
            std::vector<CQ> neg;
            for (const CQ& j : rule.neg_justs) neg.push_back(substitute(j, b));

            Binding theta;
            std::function<void(std::size_t)> ground = [&](std::size_t k) {
                if (k == evars.size()) {
                    ExistsRule er;
                    er.head = head;
                    er.neg_bodies = neg;
                    for (std::size_t i = 0; i < body.size(); ++i) {
                        Atom g = substitute(body[i], theta);
                        if (g.pred == "top" && i < n_source) {
                            if (!top_contains(g.args, db)) return;
                        } else {
                            er.pos_body.push_back(std::move(g));
                        }
                    }
                    if (out.rules.size() >= limits.ground_cap)
                        throw cap_error("existential ASP program exceeds cap of " +
                                        std::to_string(limits.ground_cap) + " rules");
                    out.rules.push_back(std::move(er));
                    return;
                }
                // Source variables only ever match database constants.
                bool src = source_vars.count(evars[k]) != 0;
                for (const Term& t : out.domain) {
                    if (src && !t.is_constant()) continue;
                    theta.insert_or_assign(evars[k], t);
                    ground(k + 1);
                }
            };
            ground(0);
        }
    }
    return out;
}

std::string ClassicalRule::str() const {
    std::ostringstream os;
    if (head) os << head->str();
    bool any = !pos.empty() || !neg.empty();
    if (any || !head) {
        os << (head ? " :- " : ":- ");
        bool first = true;
        for (const Atom& a : pos) {
            if (!first) os << ", ";
            first = false;
            os << a.str();
        }
        for (const Atom& a : neg) {
            if (!first) os << ", ";
            first = false;
            os << "not " << a.str();
        }
    }
    os << ".";
    return os.str();
}

ClassicalAspProgram exists_to_classical(const ExistsAspProgram& p, const Limits& limits) {
    ClassicalAspProgram out;

    struct Pattern {
        std::string name;
        CQ abstract;                        // ground terms replaced by g<i> variables
        std::vector<std::string> params;    // g<i> in order
    };
    std::map<std::string, Pattern> patterns; // keyed by abstract canonical form
    std::set<std::string> defined;           // "name|args" pairs already defined
    std::vector<ClassicalRule> aux_defs;

    auto check_cap = [&](std::size_t extra) {
        if (out.rules.size() + aux_defs.size() + extra > limits.ground_cap)
            throw cap_error("classical ASP program exceeds cap of " +
                            std::to_string(limits.ground_cap) + " rules");
    };

    for (const ExistsRule& er : p.rules) {
        std::vector<Atom> neg;
        for (const CQ& c : er.neg_bodies) {
            CQ canon = c.canonical();
            if (canon.atoms.size() == 1 && canon.existential_vars.empty()) {
                neg.push_back(canon.atoms.front()); // single ground atom shortcut
                continue;
            }
            // Abstract the ground terms, first occurrence order.
            std::map<std::string, std::string> term_to_param;
            std::vector<Term> args;
            Pattern pat;
            for (const Atom& a : canon.atoms) {
                Atom abs = a;
                for (Term& t : abs.args) {
                    if (t.is_variable()) continue;
                    auto [it, fresh] =
                        term_to_param.emplace(t.str(), "g" + std::to_string(term_to_param.size()));
                    if (fresh) {
                        pat.params.push_back(it->second);
                        args.push_back(t);
                    }
                    t = Term::variable(it->second);
                }
                pat.abstract.atoms.push_back(std::move(abs));
            }
            pat.abstract.existential_vars = canon.existential_vars;
            for (const std::string& g : pat.params) pat.abstract.answer_vars.push_back(g);
            std::string key = pat.abstract.str();
            auto it = patterns.find(key);
            if (it == patterns.end()) {
                pat.name = "aux_" + std::to_string(patterns.size());
                it = patterns.emplace(key, pat).first;
                out.aux_preds.insert(it->second.name);
            }
            const Pattern& use = it->second;
            Atom aux{use.name, Namespace::Aux, args};
            std::string use_key = use.name + "|" + aux.str();
            if (defined.insert(use_key).second) {
                // aux(args) <- body θ for every grounding θ of the
                // existential variables over the combined domain.
                Binding param_bind;
                for (std::size_t i = 0; i < use.params.size(); ++i)
                    param_bind.emplace(use.params[i], args[i]);
                std::vector<std::string> evars(use.abstract.existential_vars.begin(),
                                               use.abstract.existential_vars.end());
                Binding theta;
                std::function<void(std::size_t)> ground = [&](std::size_t k) {
                    if (k == evars.size()) {
                        ClassicalRule def;
                        def.head = aux;
                        for (const Atom& a : use.abstract.atoms)
                            def.pos.push_back(substitute(substitute(a, param_bind), theta));
                        check_cap(1);
                        aux_defs.push_back(std::move(def));
                        return;
                    }
                    for (const Term& t : p.domain) {
                        theta.insert_or_assign(evars[k], t);
                        ground(k + 1);
                    }
                };
                ground(0);
            }
            neg.push_back(std::move(aux));
        }
        if (er.head.empty()) {
            check_cap(1);
            out.rules.push_back(ClassicalRule{std::nullopt, er.pos_body, neg});
        } else {
            for (const Atom& h : er.head) {
                check_cap(1);
                out.rules.push_back(ClassicalRule{h, er.pos_body, neg});
            }
        }
    }
    for (ClassicalRule& r : aux_defs) out.rules.push_back(std::move(r));
    return out;
}

std::set<Atom> project_aux(const std::set<Atom>& answer_set, const std::set<std::string>& aux_preds) {
    std::set<Atom> out;
    for (const Atom& a : answer_set)
        if (a.ns != Namespace::Aux && !aux_preds.count(a.pred)) out.insert(a);
    return out;
}

namespace {

std::optional<std::set<Atom>> classical_candidate(std::uint64_t mask,
                                                  const ClassicalAspProgram& p,
                                                  const std::vector<Atom>& neg_atoms) {
    auto in_guess = [&](const Atom& a) {
        for (std::size_t i = 0; i < neg_atoms.size(); ++i)
            if (neg_atoms[i] == a) return bool(mask >> i & 1);
        return false;
    };
    std::vector<const ClassicalRule*> kept;
    for (const ClassicalRule& r : p.rules) {
        bool blocked = false;
        for (const Atom& a : r.neg)
            if (in_guess(a)) {
                blocked = true;
                break;
            }
        if (!blocked) kept.push_back(&r);
    }
    std::set<Atom> model;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const ClassicalRule* r : kept) {
            if (!r->head || model.count(*r->head)) continue;
            bool fires = true;
            for (const Atom& a : r->pos)
                if (!model.count(a)) {
                    fires = false;
                    break;
                }
            if (fires) {
                model.insert(*r->head);
                changed = true;
            }
        }
    }
    for (const ClassicalRule* r : kept) {
        if (r->head) continue;
        bool fires = true;
        for (const Atom& a : r->pos)
            if (!model.count(a)) {
                fires = false;
                break;
            }
        if (fires) return std::nullopt;
    }
    for (std::size_t i = 0; i < neg_atoms.size(); ++i)
        if (bool(model.count(neg_atoms[i])) != bool(mask >> i & 1)) return std::nullopt;
    return model;
}

} // namespace

std::vector<std::set<Atom>> solve_classical(const ClassicalAspProgram& p, const Limits& limits,
                                            Execution exec) {
    std::set<Atom> neg_set;
    for (const ClassicalRule& r : p.rules)
        for (const Atom& a : r.neg) neg_set.insert(a);
    std::vector<Atom> neg_atoms(neg_set.begin(), neg_set.end());
    if (neg_atoms.size() > limits.enumeration_cap)
        throw cap_error("classical solving over " + std::to_string(neg_atoms.size()) +
                        " negative atoms exceeds cap of " + std::to_string(limits.enumeration_cap));

    const std::uint64_t total = std::uint64_t(1) << neg_atoms.size();
    std::vector<std::set<Atom>> found;

    if (exec == Execution::Parallel) {
#ifdef _OPENMP
        std::vector<std::vector<std::set<Atom>>> per_thread(
            static_cast<std::size_t>(omp_get_max_threads()));
#pragma omp parallel for schedule(dynamic, 16)
        for (std::int64_t mask = 0; mask < static_cast<std::int64_t>(total); ++mask) {
            auto m = classical_candidate(static_cast<std::uint64_t>(mask), p, neg_atoms);
            if (m) per_thread[static_cast<std::size_t>(omp_get_thread_num())].push_back(std::move(*m));
        }
        for (auto& v : per_thread)
            for (auto& m : v) found.push_back(std::move(m));
#else
        for (std::uint64_t mask = 0; mask < total; ++mask) {
            auto m = classical_candidate(mask, p, neg_atoms);
            if (m) found.push_back(std::move(*m));
        }
#endif
    } else {
        for (std::uint64_t mask = 0; mask < total; ++mask) {
            auto m = classical_candidate(mask, p, neg_atoms);
            if (m) found.push_back(std::move(*m));
        }
    }

    std::sort(found.begin(), found.end(), [](const std::set<Atom>& a, const std::set<Atom>& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    });
    return found;
}

namespace {

std::string mangle_term(const Term& t, std::map<std::string, std::string>* mangling) {
    if (t.is_constant()) return lower(t.name());
    if (t.is_skolem()) {
        std::string id = t.name();
        if (id.rfind("sk_", 0) == 0) id = id.substr(3);
        std::string out = "skf_" + lower(id);
        for (const Term& a : t.args()) out += "_" + mangle_term(a, nullptr);
        if (mangling) mangling->emplace(out, t.str());
        return out;
    }
    throw internal_error("cannot emit non-ground term " + t.str());
}

std::string mangle_atom(const Atom& a, std::map<std::string, std::string>* mangling) {
    std::string out = lower(a.pred);
    if (!a.args.empty()) {
        out += "(";
        for (std::size_t i = 0; i < a.args.size(); ++i) {
            if (i) out += ", ";
            out += mangle_term(a.args[i], mangling);
        }
        out += ")";
    }
    return out;
}

} // namespace

std::string emit_asp_text(const ClassicalAspProgram& p) {
    std::map<std::string, std::string> mangling;
    std::vector<std::string> lines;
    for (const ClassicalRule& r : p.rules) {
        std::ostringstream os;
        std::vector<std::string> body;
        for (const Atom& a : r.pos) body.push_back(mangle_atom(a, &mangling));
        for (const Atom& a : r.neg) body.push_back("not " + mangle_atom(a, &mangling));
        if (r.head) {
            os << mangle_atom(*r.head, &mangling);
            if (!body.empty()) os << " :- ";
        } else {
            os << ":- ";
        }
        for (std::size_t i = 0; i < body.size(); ++i) {
            if (i) os << ", ";
            os << body[i];
        }
        os << ".";
        lines.push_back(os.str());
    }
    std::sort(lines.begin(), lines.end());
    lines.erase(std::unique(lines.begin(), lines.end()), lines.end());

    std::ostringstream out;
    out << "% ground classical ASP program\n";
    for (const auto& [mangled, original] : mangling)
        out << "% " << mangled << " = " << original << "\n";
    if (!p.aux_preds.empty()) {
        out << "% auxiliary predicates:";
        for (const std::string& a : p.aux_preds) out << " " << a;
        out << "\n";
    }
    for (const std::string& l : lines) out << l << "\n";
    return out.str();
}

ClassicalAspProgram compile_classical(const SkolemProgram& program, const Ontology& ontology,
                                      const DatabaseInstance& db, GroundMode mode,
                                      const Limits& limits) {
    return exists_to_classical(to_exists_asp(rewrite_program(program, ontology), db, mode, limits),
                               limits);
}

} // namespace mpr
