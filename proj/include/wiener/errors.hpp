#pragma once

#include <stdexcept>
#include <string>

namespace wiener {

// Input outside an operation's domain (bad times, non-finite values, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Caller broke a documented precondition, e.g. a grid missing a breakpoint.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Request refused because it exceeds a configured limit.
class RefusalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The numerics broke a property they must satisfy (e.g. alpha grew with refinement).
// Signals a kernel bug rather than bad user input.
class InternalConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace wiener
