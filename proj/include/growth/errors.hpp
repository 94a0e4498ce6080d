#pragma once

#include <stdexcept>
#include <string>

namespace growth {

// Invalid or out-of-range sampler/model parameters. The CLI maps this to exit 1.
struct parameter_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Inputs outside an operation's domain (NaN samples, growth <= -1, ...).
struct domain_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Mismatched lengths between paired sequences.
struct shape_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Too few samples for the requested estimate.
struct insufficient_data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Samples carry no usable variation (all equal, zero variance).
struct degenerate_data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A numeric routine failed to converge to its tolerance.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem failures. The CLI maps this to exit 2.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parameters outside the validity regime of a closed-form prediction.
struct regime_error : parameter_error {
    using parameter_error::parameter_error;
};

} // namespace growth
