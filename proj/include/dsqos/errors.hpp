#pragma once

#include <stdexcept>
#include <string>

namespace dsqos {

/// Invalid or inconsistent configuration. The message names the offending key.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A buffer plan that cannot fit the requested sessions into the router buffer.
class InfeasiblePlanError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller broke an API precondition (e.g. scheduling an event in the past).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace dsqos
