#pragma once

// The reference 180-tap filter from configs/reference_180.json, built once per binary.

#include <string>

#include "sysfir/config.hpp"
#include "sysfir/design.hpp"
#include "sysfir/quant.hpp"

namespace fixtures {

inline std::string source_path(const std::string& relative) { return std::string(SYSFIR_SOURCE_DIR) + "/" + relative; }

inline const sysfir::ProjectConfig& reference_config()
{
    static const sysfir::ProjectConfig config = sysfir::load_config(source_path("configs/reference_180.json"));
    return config;
}

inline const sysfir::CoefficientSet& reference_coefficients()
{
    static const sysfir::CoefficientSet set = sysfir::design_lowpass(reference_config().spec);
    return set;
}

inline const sysfir::QuantizationPlan& reference_plain_plan()
{
    static const sysfir::QuantizationPlan plan =
        sysfir::build_plain_plan(reference_coefficients().folded(), reference_config().bit_width);
    return plan;
}

inline const sysfir::QuantizationPlan& reference_shift_plan()
{
    const auto& config = reference_config();
    const auto precision = config.precision_setup();
    static const sysfir::QuantizationPlan plan =
        sysfir::build_shift_plan(reference_coefficients().folded(), config.bit_width, precision.input_width,
                                 precision.widths.w_c, config.q_limit_mode);
    return plan;
}

} // namespace fixtures
