#pragma once

#include <stdexcept>
#include <string>

namespace tjsolve {

/// Inner traces do not sum to zero, so the three sheets cannot share a spine.
class CompatibilityViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Induced metric of a sheet is (numerically) degenerate.
class DegenerateMetric : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace tjsolve
