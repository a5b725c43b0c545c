#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>

#include "sysfir/design.hpp"
#include "sysfir/quant.hpp"
#include "sysfir/structure.hpp"

namespace sysfir {

inline constexpr int config_version = 1;

/// Widths and sample width of the shift-normalized precision experiment.
struct PrecisionSetup {
    int input_width{};
    WidthConfig widths;
};

/// File-driven project description. Widths and bit width have no defaults.
struct ProjectConfig {
    int version{config_version};
    FilterSpec spec;
    std::optional<std::filesystem::path> coefficients;
    int bit_width{};
    int input_width{};
    WidthConfig widths;
    Variant variant{Variant::min_delay};
    BreakSpec breaks;
    std::optional<std::filesystem::path> device_profile;
    bool shift_normalization{false};
    QLimitMode q_limit_mode{QLimitMode::safe};
    std::size_t grid_size{4096};
    std::optional<PrecisionSetup> precision;

    /// Precision setup, falling back to the structure widths.
    PrecisionSetup precision_setup() const;
};

/// Relative paths resolve against the config file's directory. Throws config_invalid / file_io.
ProjectConfig load_config(const std::filesystem::path& path);
ProjectConfig parse_config(const std::string& text, const std::filesystem::path& base_dir);

} // namespace sysfir
