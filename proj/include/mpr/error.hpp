#pragma once

#include <stdexcept>
#include <string>

namespace mpr {

// All library errors derive from Error; `kind` drives CLI exit codes.
class Error : public std::runtime_error {
public:
    enum class Kind {
        Input,        // malformed input, arity/namespace violations
        Cap,          // a configured resource cap was exceeded
        Inconsistent, // operation refused on a T-inconsistent interpretation
        Internal
    };

    Error(Kind kind, std::string msg) : std::runtime_error(std::move(msg)), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

inline Error input_error(std::string msg) { return Error(Error::Kind::Input, std::move(msg)); }
inline Error cap_error(std::string msg) { return Error(Error::Kind::Cap, std::move(msg)); }
inline Error inconsistent_error(std::string msg) { return Error(Error::Kind::Inconsistent, std::move(msg)); }
inline Error internal_error(std::string msg) { return Error(Error::Kind::Internal, std::move(msg)); }

} // namespace mpr
