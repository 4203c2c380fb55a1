#pragma once

#include <stdexcept>
#include <string>

namespace fuss {

/// Raised for invalid configs, spec strings, and parameter ranges.
/// The CLI maps it to exit code 1; all other exceptions map to 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace fuss
