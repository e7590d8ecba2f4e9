#pragma once

#include <stdexcept>
#include <string>

namespace bmlab {

// Bad user input or configuration (CLI exit code 3).
class validation_error : public std::invalid_argument {
public:
    explicit validation_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Numerical failure: quadrature non-convergence, embedding failure,
// divergent lattice sums, feasibility guards (CLI exit code 4).
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace bmlab
