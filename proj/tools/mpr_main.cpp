#include <cctype>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mpr/compiler.hpp"
#include "mpr/frontend.hpp"

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw mpr::input_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string display_atom(const mpr::Atom& a) {
    mpr::Atom d = a;
    d.pred = lower(d.pred);
    return d.str();
}

/// Answer sets are displayed with the database echoed in front, lowercase
/// predicate names throughout.
std::string display_answer_set(const mpr::MappingInterpretation& A, const mpr::DatabaseInstance& db) {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (const mpr::Atom& f : db.facts) {
        if (!first) os << ", ";
        first = false;
        os << display_atom(f);
    }
    for (const mpr::Atom& a : A.atoms) {
        if (!first) os << ", ";
        first = false;
        os << display_atom(a);
    }
    os << '}';
    return os.str();
}

json answer_set_json(const mpr::MappingInterpretation& A, const mpr::DatabaseInstance& db) {
    json atoms = json::array();
    for (const mpr::Atom& f : db.facts) atoms.push_back(display_atom(f));
    for (const mpr::Atom& a : A.atoms) atoms.push_back(display_atom(a));
    return atoms;
}

struct Pipeline {
    mpr::GeneralizedObdaSpec spec;
    mpr::SkolemProgram skolem;
    mpr::PartialGroundProgram pg;
    mpr::EntailmentOracle oracle;

    Pipeline(mpr::GeneralizedObdaSpec s, mpr::GroundMode mode, const mpr::Limits& limits)
        : spec(std::move(s)),
          skolem(mpr::skolemize(spec.rules)),
          pg(mpr::partial_ground(skolem, spec.database, mode, limits)),
          oracle(spec.ontology) {}
};

struct CommonOpts {
    std::string spec_path;
    std::vector<std::string> facts;
    std::string mode = "relevant";
    bool strict = false;
    bool json_out = false;
    bool serial = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_mode = true) {
    cmd->add_option("spec", o.spec_path, "specification file")->required();
    cmd->add_option("--facts", o.facts, "CSV facts, one relation per file: name=path");
    if (with_mode)
        cmd->add_option("--mode", o.mode, "grounding mode: relevant or full")
            ->check(CLI::IsMember({"relevant", "full"}));
    cmd->add_flag("--strict", o.strict, "treat undeclared predicates as errors");
    cmd->add_flag("--json", o.json_out, "JSON output");
    cmd->add_flag("--serial", o.serial, "disable parallel enumeration");
}

mpr::GeneralizedObdaSpec load_spec(const CommonOpts& o) {
    mpr::ParseOptions popts;
    popts.strict = o.strict;
    mpr::GeneralizedObdaSpec spec = mpr::parse_spec(read_file(o.spec_path), popts);
    for (const std::string& f : o.facts) {
        auto eq = f.find('=');
        if (eq == std::string::npos) throw mpr::input_error("--facts expects name=path, got " + f);
        mpr::load_csv_facts(spec, f.substr(0, eq), read_file(f.substr(eq + 1)));
    }
    return spec;
}

mpr::GroundMode ground_mode(const CommonOpts& o) {
    return o.mode == "full" ? mpr::GroundMode::Full : mpr::GroundMode::Relevant;
}

const char* status_name(mpr::VerifyStatus s) {
    switch (s) {
        case mpr::VerifyStatus::AnswerSet: return "answer-set";
        case mpr::VerifyStatus::Inconsistent: return "inconsistent";
        case mpr::VerifyStatus::Unsatisfied: return "unsatisfied";
        case mpr::VerifyStatus::NotMinimal: return "not-minimal";
    }
    return "?";
}

int run(int argc, char** argv) {
    CLI::App app{"reasoner and compiler for OBDA mapping programs"};
    app.require_subcommand(1);
    mpr::Limits limits;
    app.add_option("--herbrand-cap", limits.herbrand_cap, "Herbrand base size cap");
    app.add_option("--ground-cap", limits.ground_cap, "ground program size cap");
    app.add_option("--enumeration-cap", limits.enumeration_cap,
                   "cap on candidate atoms during enumeration");

    CommonOpts check_o, solve_o, query_o, ground_o, rewrite_o, compile_o, stats_o;
    std::string candidate_path, stats_candidate_path, query_text, rewrite_query, out_path;
    std::size_t limit = static_cast<std::size_t>(-1);
    bool brave = false, cautious = false;

    auto* check = app.add_subcommand("check", "verify a candidate interpretation");
    add_common(check, check_o);
    check->add_option("candidate", candidate_path, "candidate interpretation file")->required();

    auto* solve = app.add_subcommand("solve", "enumerate all answer sets");
    add_common(solve, solve_o);
    solve->add_option("--limit", limit, "maximum number of answer sets to report");

    auto* query = app.add_subcommand("query", "brave or cautious query answering");
    add_common(query, query_o);
    query->add_option("query", query_text, "boolean conjunctive query")->required();
    query->add_flag("--brave", brave, "true in some answer set");
    query->add_flag("--cautious", cautious, "true in every answer set");

    auto* ground = app.add_subcommand("ground", "print the partially ground program");
    add_common(ground, ground_o);

    auto* rewrite = app.add_subcommand("rewrite", "print the UCQ rewriting of a query");
    add_common(rewrite, rewrite_o, false);
    rewrite->add_option("query", rewrite_query, "conjunctive query")->required();

    auto* compile = app.add_subcommand("compile", "emit the ground classical ASP program");
    add_common(compile, compile_o);
    compile->add_option("-o,--output", out_path, "output file (default: stdout)");

    auto* stats = app.add_subcommand("stats", "verify and report oracle-call accounting");
    add_common(stats, stats_o);
    stats->add_option("candidate", stats_candidate_path, "candidate interpretation file")
        ->required();

    CLI11_PARSE(app, argc, argv);

    auto exec = [&](const CommonOpts& o) {
        return o.serial ? mpr::Execution::Serial : mpr::Execution::Parallel;
    };

    if (check->parsed()) {
        Pipeline p(load_spec(check_o), ground_mode(check_o), limits);
        mpr::MappingInterpretation A = mpr::parse_candidate(read_file(candidate_path), p.spec);
        mpr::VerifyResult r = mpr::verify(p.oracle, p.pg, p.spec.database, A);
        if (check_o.json_out) {
            json j{{"status", status_name(r.status)}, {"answer_set", r.ok}};
            if (!r.detail.empty()) j["detail"] = r.detail;
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << status_name(r.status);
            if (!r.detail.empty()) std::cout << ": " << r.detail;
            std::cout << "\n";
        }
        if (r.ok) return 0;
        return r.status == mpr::VerifyStatus::Inconsistent ? 2 : 1;
    }

    if (solve->parsed()) {
        Pipeline p(load_spec(solve_o), ground_mode(solve_o), limits);
        auto r = mpr::enumerate_answer_sets(p.oracle, p.pg, p.spec.database, limit, limits,
                                            exec(solve_o));
        if (solve_o.json_out) {
            json sets = json::array();
            for (const auto& a : r.answer_sets)
                sets.push_back(answer_set_json(a.interpretation, p.spec.database));
            std::cout << json{{"answer_sets", sets}, {"truncated", r.truncated}}.dump(2) << "\n";
        } else {
            for (const auto& a : r.answer_sets)
                std::cout << display_answer_set(a.interpretation, p.spec.database) << "\n";
            if (r.answer_sets.empty()) std::cout << "no answer sets\n";
            if (r.truncated) std::cout << "(limit reached, more answer sets exist)\n";
        }
        return 0;
    }

    if (query->parsed()) {
        if (brave == cautious) throw mpr::input_error("pass exactly one of --brave, --cautious");
        Pipeline p(load_spec(query_o), ground_mode(query_o), limits);
        mpr::CQ q = mpr::parse_query(query_text);
        if (!q.answer_vars.empty())
            throw mpr::input_error("query answering expects a boolean query; mark variables "
                                   "existential with an 'exists' prefix");
        bool ans = brave ? mpr::brave_entails(p.oracle, p.pg, p.spec.database, q, limits)
                         : mpr::cautious_entails(p.oracle, p.pg, p.spec.database, q, limits);
        if (query_o.json_out)
            std::cout << json{{"mode", brave ? "brave" : "cautious"}, {"entailed", ans}}.dump(2)
                      << "\n";
        else
            std::cout << (ans ? "true" : "false") << "\n";
        return 0;
    }

    if (ground->parsed()) {
        Pipeline p(load_spec(ground_o), ground_mode(ground_o), limits);
        if (ground_o.json_out) {
            json rules = json::array();
            for (const auto& r : p.pg.rules) rules.push_back(r.str());
            std::cout << json{{"rules", rules}}.dump(2) << "\n";
        } else {
            for (const auto& r : p.pg.rules) std::cout << r.str() << "\n";
        }
        return 0;
    }

    if (rewrite->parsed()) {
        mpr::GeneralizedObdaSpec spec = load_spec(rewrite_o);
        mpr::CQ q = mpr::parse_query(rewrite_query);
        mpr::UCQ u = mpr::rewrite_ucq(q, spec.ontology);
        if (rewrite_o.json_out) {
            json disjuncts = json::array();
            for (const auto& d : u.disjuncts) disjuncts.push_back(d.str());
            std::cout << json{{"disjuncts", disjuncts}}.dump(2) << "\n";
        } else {
            for (const auto& d : u.disjuncts) std::cout << d.str() << "\n";
        }
        return 0;
    }

    if (compile->parsed()) {
        mpr::GeneralizedObdaSpec spec = load_spec(compile_o);
        mpr::SkolemProgram sk = mpr::skolemize(spec.rules);
        auto classical = mpr::compile_classical(sk, spec.ontology, spec.database,
                                                ground_mode(compile_o), limits);
        std::string text = mpr::emit_asp_text(classical);
        if (out_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) throw mpr::input_error("cannot write " + out_path);
            out << text;
        }
        return 0;
    }

    if (stats->parsed()) {
        Pipeline p(load_spec(stats_o), ground_mode(stats_o), limits);
        mpr::MappingInterpretation A = mpr::parse_candidate(read_file(stats_candidate_path), p.spec);
        mpr::VerifyResult r = mpr::verify(p.oracle, p.pg, p.spec.database, A);
        auto rep = mpr::solve_stats_report(r.stats, p.pg, r.reduct, A.atoms.size());
        if (stats_o.json_out) {
            json j{{"status", status_name(r.status)},
                   {"make_reduct_neg_calls", r.stats.make_reduct_neg_calls},
                   {"check_sat_pos_calls", r.stats.check_sat_pos_calls},
                   {"check_sat_head_calls", r.stats.check_sat_head_calls},
                   {"check_min_check_sat_invocations", r.stats.check_min_check_sat_invocations},
                   {"check_min_pos_calls", r.stats.check_min_pos_calls},
                   {"check_min_head_calls", r.stats.check_min_head_calls},
                   {"bound_make_reduct", rep.bound_make_reduct()},
                   {"bound_check_sat", rep.bound_check_sat()},
                   {"bound_check_min", rep.bound_check_min()},
                   {"within_bounds", rep.within_bounds()}};
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "status: " << status_name(r.status) << "\n" << rep.str() << "\n";
        }
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const mpr::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == mpr::Error::Kind::Cap ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
