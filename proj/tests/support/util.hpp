#pragma once

#include <fstream>
#include <sstream>

#include "mpr/compiler.hpp"
#include "mpr/frontend.hpp"

namespace mpr::testing {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline GeneralizedObdaSpec jobs_spec() {
    return parse_spec(read_file(std::string(FIXTURES_DIR) + "/jobs.spec"));
}

inline std::vector<std::set<Atom>> as_sets(const EnumerationResult& r) {
    std::vector<std::set<Atom>> out;
    for (const AnswerSet& a : r.answer_sets) out.push_back(a.interpretation.atoms);
    return out;
}

inline Atom oatom(const std::string& pred, const std::vector<Term>& args) {
    return Atom{pred, Namespace::Ontology, args};
}

inline Term c(const std::string& name) { return Term::constant(name); }
inline Term v(const std::string& name) { return Term::variable(name); }

} // namespace mpr::testing
