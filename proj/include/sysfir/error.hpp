#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sysfir {

enum class ErrorCode {
    invalid_band,
    invalid_spec,
    index_out_of_range,
    magnitude_overflow,
    shift_infeasible,
    asymmetric,
    odd_taps,
    invalid_breaks,
    unsupported_variant,
    insufficient_dsp,
    invalid_width,
    input_out_of_range,
    arithmetic_range,
    width_mismatch,
    unsupported_dialect,
    config_invalid,
    file_io,
    parse_error,
};

std::string_view to_string(ErrorCode code);

/// Domain error raised by every module; the code drives CLI exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace sysfir
