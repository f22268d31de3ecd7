#pragma once

#include <stdexcept>
#include <string>

namespace inoue {

// Numeric values are shared with the C API status codes.
enum class ErrorCode {
    ok = 0,
    not_unimodular = 1,
    wrong_spectrum = 2,
    not_hyperbolic = 3,
    zero_r = 4,
    non_convergent = 5,
    singular_metric = 6,
    bad_kind = 7,
    not_strongly_flat = 8,
    positivity_loss = 9,
    step_failure = 10,
    invalid_initial_data = 11,
    insufficient_data = 12,
    disconnected = 13,
    schema_violation = 14,
    missing_series = 15,
    io_error = 16,
    invalid_argument = 17,
    internal = 18,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace inoue
