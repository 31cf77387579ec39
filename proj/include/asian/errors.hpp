#pragma once

#include <stdexcept>
#include <string>

namespace asian {

// Invalid parameters or an estimator/model combination that is not supported.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A price outside the no-arbitrage bounds handed to an inversion routine.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Factorisation failures, non-finite path values, non-convergent extrapolation.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace asian
