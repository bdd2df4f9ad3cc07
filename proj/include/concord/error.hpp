#pragma once

#include <stdexcept>
#include <string>

namespace concord {

// Precondition or invariant violated by the caller's input.
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Input is valid but exceeds a hard size limit (e.g. LP column count).
class CapacityError : public DomainError {
public:
    explicit CapacityError(const std::string& what) : DomainError(what) {}
};

// A computation produced something it cannot report honestly: a non-finite
// integrand, a zero-variance sample, an LP certificate that fails re-substitution.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace concord
