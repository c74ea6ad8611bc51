#pragma once

#include <stdexcept>
#include <string>

namespace qfractal {

/// Input outside the mathematical domain of an operation (e.g. |q| >= 1).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A value failed a structural check (non-Hermitian matrix, det != 1, ...).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace qfractal
