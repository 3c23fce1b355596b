#ifndef ENCOUNTER_ERROR_HPP
#define ENCOUNTER_ERROR_HPP

#include <stdexcept>
#include <string>

namespace enc {

// Base class for all library errors. Subclasses map onto the CLI exit
// codes and the C API status codes.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad values or malformed in-memory inputs (exit code 1).
class invalid_input_error : public error {
public:
    using error::error;
};

// Bad configuration: impossible dims, k > N, missing model (exit code 1).
class config_error : public error {
public:
    using error::error;
};

// Two trajectories share fewer than two grid points.
class no_overlap_error : public invalid_input_error {
public:
    using invalid_input_error::invalid_input_error;
};

// Scenario parameters cannot satisfy the proximity envelope.
class infeasible_spec_error : public invalid_input_error {
public:
    using invalid_input_error::invalid_input_error;
};

// Validity metrics are undefined for the given clustering (k < 2, N == J).
class undefined_metric_error : public invalid_input_error {
public:
    using invalid_input_error::invalid_input_error;
};

// Malformed file contents: bad CSV row, bad magic, truncated payload (exit code 1).
class format_error : public error {
public:
    using error::error;
};

// Filesystem failures: unreadable path, failed rename (exit code 2).
class io_error : public error {
public:
    using error::error;
};

// Numerical failure: diverged training, degenerate metrics (exit code 3).
class numeric_error : public error {
public:
    using error::error;
};

class training_diverged_error : public numeric_error {
public:
    using numeric_error::numeric_error;
};

class degenerate_metric_error : public numeric_error {
public:
    using numeric_error::numeric_error;
};

} // namespace enc

#endif
