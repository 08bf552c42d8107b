#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracsys {

/// Argument outside the mathematical domain of an operation (e.g. a gamma
/// pole in the numerator, a non-positive step, an order outside (0,1]).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A finite computation whose result does not fit in a double.
class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// A solver produced a non-finite state; `step()` is the first offending index.
class NonFiniteError : public std::runtime_error {
public:
    NonFiniteError(std::size_t step, const std::string& what)
        : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

    [[nodiscard]] std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// Truncated infinite series did not reach its tolerance within the term budget.
class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Configuration value failed validation. `key()` is the dotted key path.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string key, const std::string& reason)
        : std::invalid_argument(key + ": " + reason), key_(std::move(key)) {}

    [[nodiscard]] const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace fracsys
