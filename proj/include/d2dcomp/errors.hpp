#pragma once

#include <stdexcept>
#include <string>

namespace d2dcomp {

/// Raised when a config file violates the schema; `field` is the offending
/// JSON path (e.g. "network.alpha").
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Raised when a numerical routine fails to converge or produces an
/// unusable value (quadrature breakdown, bracket failure, undefined rate).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace d2dcomp
