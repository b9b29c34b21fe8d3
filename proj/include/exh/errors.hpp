#pragma once

#include <stdexcept>
#include <string>

namespace exh {

/// Raised when a rule enumeration or combinatorial sweep would exceed its
/// configured step budget. Callers can either retry with a larger budget or
/// treat the result as inconclusive.
struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Raised by the config front end; carries the offending document path.
struct ConfigError : std::runtime_error {
    std::string path;
    ConfigError(std::string path_, const std::string& what)
        : std::runtime_error(path_ + ": " + what), path(std::move(path_)) {}
};

} // namespace exh
