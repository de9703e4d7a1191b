#pragma once

#include <stdexcept>
#include <string>

namespace qphase {

// Violated precondition or invalid argument (bad indices, malformed weights,
// out-of-range transmissivities). Maps to CLI exit code 2.
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Failure inside a numeric routine (e.g. an eigensolver not converging).
// Maps to CLI exit code 3.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qphase
