// error.hpp: exception type shared by every module.
//
// Precondition and contract violations carry a short machine-readable code
// ("not_majorized", "non_unitary", ...) plus a human-readable detail string.
// The CLI maps Error to exit code 2 and anything else to exit code 1.

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace thermo {

class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& detail)
        : std::runtime_error(detail), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

// A broken internal invariant, not a caller mistake.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace thermo
