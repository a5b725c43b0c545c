#include "sysfir/error.hpp"

namespace sysfir {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::invalid_band: return "invalid_band";
    case ErrorCode::invalid_spec: return "invalid_spec";
    case ErrorCode::index_out_of_range: return "index_out_of_range";
    case ErrorCode::magnitude_overflow: return "magnitude_overflow";
    case ErrorCode::shift_infeasible: return "shift_infeasible";
    case ErrorCode::asymmetric: return "asymmetric";
    case ErrorCode::odd_taps: return "odd_taps";
    case ErrorCode::invalid_breaks: return "invalid_breaks";
    case ErrorCode::unsupported_variant: return "unsupported_variant";
    case ErrorCode::insufficient_dsp: return "insufficient_dsp";
    case ErrorCode::invalid_width: return "invalid_width";
    case ErrorCode::input_out_of_range: return "input_out_of_range";
    case ErrorCode::arithmetic_range: return "arithmetic_range";
    case ErrorCode::width_mismatch: return "width_mismatch";
    case ErrorCode::unsupported_dialect: return "unsupported_dialect";
    case ErrorCode::config_invalid: return "config_invalid";
    case ErrorCode::file_io: return "file_io";
    case ErrorCode::parse_error: return "parse_error";
    }
    return "unknown";
}

} // namespace sysfir
