#pragma once

#include <stdexcept>

namespace syncarena {

// Input vectors disagree in length, or a required vector is empty.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A configuration value is out of its documented domain.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A bound was requested outside the hypotheses under which it is defined.
struct HypothesisError : std::domain_error {
    using std::domain_error::domain_error;
};

// The adaptive integrator could not satisfy its error control.
struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace syncarena
