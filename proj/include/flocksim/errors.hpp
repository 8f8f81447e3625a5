#pragma once

#include <stdexcept>
#include <string>

namespace flocksim {

/// Invalid model or integrator configuration (bad agent count, delay bound, ...).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Scenario file could not be parsed or validated; message carries the key path.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// The integration produced a non-finite state or an unserviceable lookup.
struct IntegrationError : std::runtime_error {
    explicit IntegrationError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace flocksim
