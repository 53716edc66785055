#include <cctype>
#include <cstdio>
#include <sstream>

#include "mpr/frontend.hpp"

namespace mpr {

namespace {

enum class Tok { Ident, LParen, RParen, Comma, Dot, Colon, Pipe, At, Minus, Slash, Subsumes, Arrow, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    int line = 0, col = 0;
};

[[noreturn]] void fail(const Token& at, const std::string& msg) {
    throw input_error("line " + std::to_string(at.line) + ", column " + std::to_string(at.col) +
                      ": " + msg);
}

std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto push = [&](Tok k, std::string t, int l, int c) { out.push_back(Token{k, std::move(t), l, c}); };
    while (i < text.size()) {
        char c = text[i];
        if (c == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++col;
            ++i;
            continue;
        }
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') ++i;
            continue;
        }
        int l = line, cl = col;
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '%') {
            std::size_t j = i;
            if (c == '%') ++j; // section keyword
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                ++j;
            push(Tok::Ident, text.substr(i, j - i), l, cl);
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        if (c == '[' && i + 1 < text.size() && text[i + 1] == '=') {
            push(Tok::Subsumes, "[=", l, cl);
            i += 2;
            col += 2;
            continue;
        }
        if (c == '<' && i + 1 < text.size() && text[i + 1] == '-') {
            push(Tok::Arrow, "<-", l, cl);
            i += 2;
            col += 2;
            continue;
        }
        Tok k;
        switch (c) {
            case '(': k = Tok::LParen; break;
            case ')': k = Tok::RParen; break;
            case ',': k = Tok::Comma; break;
            case '.': k = Tok::Dot; break;
            case ':': k = Tok::Colon; break;
            case '|': k = Tok::Pipe; break;
            case '@': k = Tok::At; break;
            case '-': k = Tok::Minus; break;
            case '/': k = Tok::Slash; break;
            default:
                throw input_error("line " + std::to_string(l) + ", column " + std::to_string(cl) +
                                  ": unexpected character '" + std::string(1, c) + "'");
        }
        push(k, std::string(1, c), l, cl);
        ++i;
        ++col;
    }
    out.push_back(Token{Tok::End, "", line, col});
    return out;
}

bool is_variable_name(const std::string& s) {
    return !s.empty() && (s[0] == '_' || std::isupper(static_cast<unsigned char>(s[0])));
}

class Parser {
public:
    Parser(const std::string& text, ParseOptions opts)
        : tokens_(tokenize(text)), opts_(opts) {}

    GeneralizedObdaSpec parse() {
        enum class Section { None, Ontology, Mapping, Database, Signature } section = Section::None;
        while (!at(Tok::End)) {
            const Token& t = peek();
            if (t.kind == Tok::Ident && !t.text.empty() && t.text[0] == '%') {
                if (t.text == "%ontology") section = Section::Ontology;
                else if (t.text == "%mapping") section = Section::Mapping;
                else if (t.text == "%database") section = Section::Database;
                else if (t.text == "%signature") section = Section::Signature;
                else fail(t, "unknown section " + t.text);
                next();
                continue;
            }
            switch (section) {
                case Section::None: fail(t, "statement outside of a section");
                case Section::Ontology: parse_axiom(); break;
                case Section::Mapping: parse_rule(); break;
                case Section::Database: parse_fact(); break;
                case Section::Signature: parse_declaration(); break;
            }
        }
        finish_signature();
        spec_.validate();
        return std::move(spec_);
    }

    Atom parse_candidate_atom() {
        const Token& t = peek();
        Atom a = parse_atom(Namespace::Ontology, nullptr, nullptr, true);
        const auto* info = spec_ref_->signature.find(a.pred);
        if (!info) fail(t, "unknown predicate " + a.pred + " in candidate");
        a.ns = info->ns;
        if (info->arity != a.args.size())
            fail(t, "predicate " + a.pred + " used with arity " + std::to_string(a.args.size()) +
                        ", declared " + std::to_string(info->arity));
        if (!a.is_ground()) fail(t, "candidate atom " + a.str() + " is not ground");
        expect(Tok::Dot, "'.'");
        return a;
    }

    CQ parse_toplevel_query() {
        CQ q;
        std::set<std::string> marked;
        if (at(Tok::Ident) && peek().text == "exists" && tokens_[pos_ + 1].kind == Tok::Ident &&
            is_variable_name(tokens_[pos_ + 1].text)) {
            next();
            while (true) {
                const Token& v = expect(Tok::Ident, "variable");
                if (!is_variable_name(v.text)) fail(v, "expected a variable");
                marked.insert(v.text);
                if (at(Tok::Comma)) {
                    next();
                    continue;
                }
                break;
            }
            expect(Tok::Dot, "'.' after the exists prefix");
        }
        std::vector<std::string> order;
        while (true) {
            q.atoms.push_back(parse_atom(Namespace::Ontology, &order, nullptr, true));
            if (at(Tok::Comma)) {
                next();
                continue;
            }
            break;
        }
        if (at(Tok::Dot)) next();
        if (!at(Tok::End)) fail(peek(), "trailing input after query");
        std::set<std::string> seen;
        for (const std::string& v : order) {
            if (!seen.insert(v).second) continue;
            if (marked.count(v) || v[0] == '_')
                q.existential_vars.insert(v);
            else
                q.answer_vars.push_back(v);
        }
        q.validate();
        return q;
    }

    void use_spec(const GeneralizedObdaSpec* s) { spec_ref_ = s; }
    bool done() const { return at(Tok::End); }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& next() { return tokens_[pos_++]; }
    bool at(Tok k) const { return tokens_[pos_].kind == k; }

    const Token& expect(Tok k, const std::string& what) {
        if (!at(k)) fail(peek(), "expected " + what + ", got '" + peek().text + "'");
        return next();
    }

    void declare(const Token& at, const std::string& pred, std::size_t arity, Namespace ns,
                 bool declared) {
        if (pred == "top") {
            if (ns != Namespace::Source) fail(at, "top is a reserved source predicate");
            return;
        }
        auto it = spec_.signature.preds.find(pred);
        if (it == spec_.signature.preds.end()) {
            spec_.signature.declare(pred, arity, ns, declared);
            if (!declared) inferred_.push_back({pred, at.line, at.col});
            return;
        }
        if (it->second.arity != arity)
            fail(at, "predicate " + pred + " used with arity " + std::to_string(arity) +
                         ", previously " + std::to_string(it->second.arity));
        if (it->second.ns != ns)
            fail(at, "predicate " + pred + " used in the " + to_string(ns) +
                         " namespace, previously " + to_string(it->second.ns));
        if (declared) it->second.declared = true;
    }

    Term parse_term(std::vector<std::string>* var_order, std::set<std::string>* exists_marked) {
        if (at(Tok::Ident) && peek().text == "exists") {
            const Token& kw = next();
            if (!exists_marked) fail(kw, "'exists' marker is only allowed in rule heads");
            const Token& v = expect(Tok::Ident, "variable after 'exists'");
            if (!is_variable_name(v.text)) fail(v, "expected a variable after 'exists'");
            exists_marked->insert(v.text);
            if (var_order) var_order->push_back(v.text);
            return Term::variable(v.text);
        }
        const Token& t = expect(Tok::Ident, "term");
        if (t.text.rfind("sk_", 0) == 0 && at(Tok::LParen)) {
            next();
            std::vector<Term> args;
            if (!at(Tok::RParen)) {
                while (true) {
                    const Token& a = expect(Tok::Ident, "constant");
                    if (is_variable_name(a.text)) fail(a, "Skolem arguments must be constants");
                    args.push_back(Term::constant(a.text));
                    if (at(Tok::Comma)) {
                        next();
                        continue;
                    }
                    break;
                }
            }
            expect(Tok::RParen, "')'");
            return Term::skolem(t.text, std::move(args));
        }
        if (is_variable_name(t.text)) {
            if (var_order) var_order->push_back(t.text);
            return Term::variable(t.text);
        }
        return Term::constant(t.text);
    }

    Atom parse_atom(Namespace ns, std::vector<std::string>* var_order,
                    std::set<std::string>* exists_marked, bool skip_declare = false) {
        const Token& p = expect(Tok::Ident, "predicate");
        if (is_variable_name(p.text) && p.text.rfind("sk_", 0) != 0)
            ; // uppercase predicates are fine in predicate position
        Atom a;
        a.pred = p.text;
        a.ns = ns;
        if (at(Tok::LParen)) {
            next();
            if (!at(Tok::RParen)) {
                while (true) {
                    a.args.push_back(parse_term(var_order, exists_marked));
                    if (at(Tok::Comma)) {
                        next();
                        continue;
                    }
                    break;
                }
            }
            expect(Tok::RParen, "')'");
        }
        if (!skip_declare) declare(p, a.pred, a.args.size(), ns, false);
        return a;
    }

    BasicConcept parse_basic_concept() {
        BasicConcept b;
        if (at(Tok::Ident) && peek().text == "exists") {
            next();
            b.is_exists = true;
        }
        const Token& n = expect(Tok::Ident, "concept or role name");
        b.name = n.text;
        if (at(Tok::Minus)) {
            next();
            if (!b.is_exists) fail(n, "inverse marker '-' requires an exists restriction");
            b.inverse = true;
        }
        declare(n, b.name, b.is_exists ? 2 : 1, Namespace::Ontology, false);
        return b;
    }

    void parse_axiom() {
        // Role inclusion when a side carries a bare inverse marker or the
        // name is already declared with arity 2.
        std::size_t start = pos_;
        const Token& lhs_tok = expect(Tok::Ident, "axiom");
        bool lhs_exists = lhs_tok.text == "exists";
        pos_ = start;
        bool role = false;
        if (!lhs_exists) {
            const auto* info = spec_.signature.find(lhs_tok.text);
            if (info && info->arity == 2) role = true;
            if (tokens_[pos_ + 1].kind == Tok::Minus) role = true;
        }
        if (role) {
            RoleExpr lhs = parse_role_expr();
            expect(Tok::Subsumes, "'[='");
            RoleExpr rhs = parse_role_expr();
            expect(Tok::Dot, "'.'");
            spec_.ontology.axioms.push_back(OntologyAxiom::role_inclusion(lhs, rhs));
            return;
        }
        BasicConcept lhs = parse_basic_concept();
        expect(Tok::Subsumes, "'[='");
        bool neg = false;
        if (at(Tok::Ident) && peek().text == "not") {
            next();
            neg = true;
        }
        BasicConcept rhs = parse_basic_concept();
        expect(Tok::Dot, "'.'");
        spec_.ontology.axioms.push_back(neg ? OntologyAxiom::concept_disjointness(lhs, rhs)
                                            : OntologyAxiom::concept_inclusion(lhs, rhs));
    }

    RoleExpr parse_role_expr() {
        const Token& n = expect(Tok::Ident, "role name");
        RoleExpr r;
        r.name = n.text;
        if (at(Tok::Minus)) {
            next();
            r.inverse = true;
        }
        declare(n, r.name, 2, Namespace::Ontology, false);
        return r;
    }

    void parse_fact() {
        const Token& t = peek();
        Atom a = parse_atom(Namespace::Source, nullptr, nullptr);
        expect(Tok::Dot, "'.'");
        if (!a.is_ground()) fail(t, "database fact " + a.str() + " is not ground");
        spec_.database.add(std::move(a));
    }

    void parse_declaration() {
        const Token& kind = expect(Tok::Ident, "'source' or 'ontology'");
        Namespace ns;
        if (kind.text == "source") ns = Namespace::Source;
        else if (kind.text == "ontology") ns = Namespace::Ontology;
        else fail(kind, "expected 'source' or 'ontology'");
        const Token& name = expect(Tok::Ident, "predicate name");
        expect(Tok::Slash, "'/'");
        const Token& arity = expect(Tok::Ident, "arity");
        std::size_t n = 0;
        for (char c : arity.text) {
            if (!std::isdigit(static_cast<unsigned char>(c))) fail(arity, "expected a number");
            n = n * 10 + static_cast<std::size_t>(c - '0');
        }
        expect(Tok::Dot, "'.'");
        declare(name, name.text, n, ns, true);
    }

    void parse_rule() {
        MappingRule rule;
        if (at(Tok::Ident) && tokens_[pos_ + 1].kind == Tok::Colon) {
            rule.label = next().text;
            next();
        }

        std::set<std::string> exists_marked;
        std::vector<Atom> head_atoms;
        std::vector<std::string> head_vars;
        bool constraint = false;
        if (at(Tok::Ident) && peek().text == "bot") {
            next();
            constraint = true;
        } else {
            while (true) {
                head_atoms.push_back(
                    parse_atom(Namespace::Ontology, &head_vars, &exists_marked));
                if (at(Tok::Comma)) {
                    next();
                    continue;
                }
                break;
            }
        }
        expect(Tok::Arrow, "'<-'");

        std::vector<Atom> source_atoms;
        std::vector<std::string> source_vars;
        while (true) {
            if (at(Tok::Ident) && peek().text == "not") {
                next();
                rule.neg_justs.push_back(parse_conjunct_cq());
            } else if (at(Tok::At)) {
                next();
                source_atoms.push_back(parse_atom(Namespace::Source, &source_vars, nullptr));
            } else if (at(Tok::LParen)) {
                rule.pos_justs.push_back(parse_pos_ucq());
            } else {
                const Token& t = peek();
                if (t.kind == Tok::Ident && t.text == "top") {
                    source_atoms.push_back(parse_atom(Namespace::Source, &source_vars, nullptr));
                } else {
                    std::vector<std::string> order;
                    Atom a = parse_atom(Namespace::Ontology, &order, nullptr);
                    UCQ j;
                    j.disjuncts.push_back(make_cq({std::move(a)}, order));
                    j.answer_vars = j.disjuncts.front().answer_vars;
                    rule.pos_justs.push_back(std::move(j));
                }
            }
            if (at(Tok::Comma)) {
                next();
                continue;
            }
            break;
        }
        const Token& end = expect(Tok::Dot, "'.'");

        std::vector<std::string> src_answer;
        std::set<std::string> src_exist, seen;
        for (const std::string& v : source_vars) {
            if (!seen.insert(v).second) continue;
            if (v[0] == '_')
                src_exist.insert(v);
            else
                src_answer.push_back(v);
        }
        rule.source_query.answer_vars = src_answer;
        rule.source_query.existential_vars = std::move(src_exist);
        rule.source_query.atoms = std::move(source_atoms);

        if (!constraint) {
            CQ head;
            std::set<std::string> head_seen;
            for (const std::string& v : head_vars) {
                if (!head_seen.insert(v).second) continue;
                if (exists_marked.count(v) || v[0] == '_')
                    head.existential_vars.insert(v);
                else
                    head.answer_vars.push_back(v);
            }
            head.atoms = std::move(head_atoms);
            rule.head = std::move(head);
        }
        try {
            rule.validate();
        } catch (const Error& e) {
            fail(end, std::string(e.what()) + (rule.label.empty() ? "" : " (rule " + rule.label + ")"));
        }
        spec_.rules.push_back(std::move(rule));
    }

    CQ make_cq(std::vector<Atom> atoms, const std::vector<std::string>& var_order) {
        CQ q;
        std::set<std::string> seen;
        for (const std::string& v : var_order) {
            if (!seen.insert(v).second) continue;
            if (v[0] == '_')
                q.existential_vars.insert(v);
            else
                q.answer_vars.push_back(v);
        }
        q.atoms = std::move(atoms);
        return q;
    }

    /// `not A(X, _Y)` or `not (A(X), B(X, _Y))`.
    CQ parse_conjunct_cq() {
        std::vector<Atom> atoms;
        std::vector<std::string> order;
        if (at(Tok::LParen)) {
            next();
            while (true) {
                atoms.push_back(parse_atom(Namespace::Ontology, &order, nullptr));
                if (at(Tok::Comma)) {
                    next();
                    continue;
                }
                break;
            }
            expect(Tok::RParen, "')'");
        } else {
            atoms.push_back(parse_atom(Namespace::Ontology, &order, nullptr));
        }
        return make_cq(std::move(atoms), order);
    }

    /// `(A(X), B(X, _Y) | C(X))`.
    UCQ parse_pos_ucq() {
        expect(Tok::LParen, "'('");
        UCQ j;
        while (true) {
            std::vector<Atom> atoms;
            std::vector<std::string> order;
            while (true) {
                atoms.push_back(parse_atom(Namespace::Ontology, &order, nullptr));
                if (at(Tok::Comma)) {
                    next();
                    continue;
                }
                break;
            }
            j.disjuncts.push_back(make_cq(std::move(atoms), order));
            if (at(Tok::Pipe)) {
                next();
                continue;
            }
            break;
        }
        expect(Tok::RParen, "')'");
        // All disjuncts share the union of the free variables.
        std::vector<std::string> shared;
        std::set<std::string> seen;
        for (const CQ& d : j.disjuncts)
            for (const std::string& v : d.answer_vars)
                if (seen.insert(v).second) shared.push_back(v);
        j.answer_vars = shared;
        for (CQ& d : j.disjuncts) d.answer_vars = shared;
        return j;
    }

    void finish_signature() {
        bool has_declared = false;
        for (const auto& [name, info] : spec_.signature.preds)
            if (info.declared) has_declared = true;
        if (!has_declared) return;
        for (const auto& [pred, line, col] : inferred_) {
            const auto* info = spec_.signature.find(pred);
            if (info && info->declared) continue;
            if (opts_.strict)
                throw input_error("line " + std::to_string(line) + ", column " +
                                  std::to_string(col) + ": undeclared predicate " + pred);
            std::fprintf(stderr, "warning: predicate %s (line %d) is not declared\n", pred.c_str(),
                         line);
        }
    }

    struct Inferred {
        std::string pred;
        int line, col;
    };

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    ParseOptions opts_;
    GeneralizedObdaSpec spec_;
    const GeneralizedObdaSpec* spec_ref_ = nullptr;
    std::vector<Inferred> inferred_;
};

} // namespace

GeneralizedObdaSpec parse_spec(const std::string& text, const ParseOptions& opts) {
    return Parser(text, opts).parse();
}

MappingInterpretation parse_candidate(const std::string& text, const GeneralizedObdaSpec& spec) {
    Parser p(text, {});
    p.use_spec(&spec);
    MappingInterpretation A;
    while (!p.done()) {
        Atom a = p.parse_candidate_atom();
        if (a.ns == Namespace::Source) {
            if (!spec.database.facts.count(a))
                throw input_error("candidate echoes source atom " + a.str() +
                                  " that is not a database fact");
            continue;
        }
        A.atoms.insert(std::move(a));
    }
    A.validate();
    return A;
}

CQ parse_query(const std::string& text) { return Parser(text, {}).parse_toplevel_query(); }

void load_csv_facts(GeneralizedObdaSpec& spec, const std::string& relation,
                    const std::string& csv_text) {
    std::istringstream in(csv_text);
    std::string line;
    bool header = true;
    std::size_t arity = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) {
            std::size_t b = cell.find_first_not_of(" \t");
            std::size_t e = cell.find_last_not_of(" \t");
            cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
        }
        if (header) {
            header = false;
            arity = cells.size();
            continue;
        }
        if (cells.size() != arity)
            throw input_error("CSV row for " + relation + " has " +
                              std::to_string(cells.size()) + " cells, header has " +
                              std::to_string(arity));
        Atom a;
        a.pred = relation;
        a.ns = Namespace::Source;
        for (const std::string& c : cells) a.args.push_back(Term::constant(c));
        spec.database.add(std::move(a));
    }
    auto it = spec.signature.preds.find(relation);
    if (it == spec.signature.preds.end())
        spec.signature.declare(relation, arity, Namespace::Source, true);
    else if (it->second.arity != arity)
        throw input_error("CSV arity for " + relation + " conflicts with the signature");
}

} // namespace mpr
