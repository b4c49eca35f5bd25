#pragma once

#include <stdexcept>
#include <string>

namespace bsk {

// Invalid parameters / malformed configuration.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A configured size or budget cap was exceeded.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotFoundError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Evaluation produced non-finite or otherwise unusable values.
struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A computation finished but its result is ambiguous; carries diagnostics.
struct DiagnosticError : std::runtime_error {
    explicit DiagnosticError(const std::string& what, std::string payload_json = "")
        : std::runtime_error(what), payload(std::move(payload_json)) {}
    std::string payload;
};

}  // namespace bsk
