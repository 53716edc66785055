// Compares the serial reference enumeration against the OpenMP-parallel path
// on a family of even-loop programs with a growing candidate pool.

#include <chrono>
#include <cstdio>
#include <string>

#include "mpr/solver.hpp"

using namespace mpr;

namespace {

// n source facts, two mutually exclusive concepts per constant: the pool has
// 2n atoms and the program has 2^n answer sets.
GeneralizedObdaSpec even_loops(int n) {
    GeneralizedObdaSpec spec;
    for (int i = 0; i < n; ++i)
        spec.database.add(Atom{"s", Namespace::Source, {Term::constant("c" + std::to_string(i))}});

    auto rule = [](const std::string& label, const std::string& head, const std::string& blocker) {
        MappingRule r;
        r.label = label;
        CQ h;
        h.answer_vars = {"X"};
        h.atoms.push_back(Atom{head, Namespace::Ontology, {Term::variable("X")}});
        r.head = h;
        CQ neg;
        neg.answer_vars = {"X"};
        neg.atoms.push_back(Atom{blocker, Namespace::Ontology, {Term::variable("X")}});
        r.neg_justs.push_back(neg);
        r.source_query.answer_vars = {"X"};
        r.source_query.atoms.push_back(Atom{"s", Namespace::Source, {Term::variable("X")}});
        return r;
    };
    spec.rules.push_back(rule("m1", "P", "Q"));
    spec.rules.push_back(rule("m2", "Q", "P"));
    return spec;
}

double run(const EntailmentOracle& oracle, const PartialGroundProgram& pg,
           const DatabaseInstance& db, Execution exec, std::size_t& found) {
    auto t0 = std::chrono::steady_clock::now();
    EnumerationResult r = enumerate_answer_sets(oracle, pg, db, static_cast<std::size_t>(-1),
                                                Limits{}, exec);
    auto t1 = std::chrono::steady_clock::now();
    found = r.answer_sets.size();
    return std::chrono::duration<double>(t1 - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    int max_n = argc > 1 ? std::atoi(argv[1]) : 9;
    std::printf("%6s %10s %12s %12s %12s %8s\n", "pool", "answers", "serial [s]", "parallel [s]",
                "speedup", "match");
    for (int n = 6; n <= max_n; ++n) {
        GeneralizedObdaSpec spec = even_loops(n);
        EntailmentOracle oracle(spec.ontology);
        PartialGroundProgram pg = partial_ground(skolemize(spec.rules), spec.database);

        std::size_t serial_found = 0, parallel_found = 0;
        double ts = run(oracle, pg, spec.database, Execution::Serial, serial_found);
        double tp = run(oracle, pg, spec.database, Execution::Parallel, parallel_found);
        std::printf("%6d %10zu %12.3f %12.3f %12.2fx %8s\n", 2 * n, serial_found, ts, tp,
                    tp > 0 ? ts / tp : 0.0, serial_found == parallel_found ? "yes" : "NO");
        if (serial_found != parallel_found) return 1;
    }
    return 0;
}
