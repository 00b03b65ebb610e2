#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pvaudit {

// Argument outside the mathematical domain of a function (|r| >= 1, n <= 3,
// negative chi-square statistic, non-finite z, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Caller misuse that is not about a numeric domain: empty inputs, family
// size smaller than the supplied list, mismatched plot/adjustment pairs.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed input data. Carries the 1-based data row (0 = header / file level).
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::size_t row, const std::string& message)
        : std::runtime_error(row == 0 ? message : "row " + std::to_string(row) + ": " + message),
          row_(row) {}

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

// Missing or unusable header columns.
class SchemaError : public ValidationError {
public:
    explicit SchemaError(const std::string& message) : ValidationError(0, message) {}
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace pvaudit
