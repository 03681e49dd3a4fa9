#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mmbid {

// Malformed distribution or strategy spec, or invalid constructor arguments.
class SpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation (x, t, h outside [0,1]).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// The value distribution is the point mass at zero; bidding zero is optimal and
// the minimax regret is zero.
class DegenerateDistribution : public std::runtime_error {
public:
    DegenerateDistribution()
        : std::runtime_error("value distribution is a point mass at 0 (always bid 0, regret 0)") {}
};

// A documented precondition of an operation does not hold for its input.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An operation was called on an object that does not satisfy its contract,
// e.g. a non-strict quantile strategy passed where strictness is required.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class SolverFailure : public std::runtime_error {
public:
    SolverFailure(const std::string& what, std::size_t step)
        : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

}  // namespace mmbid
