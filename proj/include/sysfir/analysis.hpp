#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sysfir/design.hpp"
#include "sysfir/quant.hpp"
#include "sysfir/structure.hpp"
#include "sysfir/wide.hpp"

namespace sysfir {

inline constexpr double attenuation_cap_db = 400.0;
inline constexpr std::size_t default_grid_size = 4096;

/// Folded symmetric direct form: y[n] = sum_k h[k] (x[n-k] + x[n-M+k]), x[<0] = 0.
/// Throws asymmetric / odd_taps.
std::vector<double> direct_form_reference(std::span<const double> h, std::span<const double> x);

/// Plain integer convolution y[n] = sum_t taps[t] x[n-t], output length = input length.
std::vector<wide_int> convolve(std::span<const wide_int> taps, std::span<const std::int64_t> x);

struct FrequencyResponse {
    std::vector<double> grid;
    std::vector<std::complex<double>> values;
    double reference_gain{};

    std::vector<double> magnitude_db() const;
};

/// Direct DFT on F points uniformly spanning [0, 0.5].
FrequencyResponse frequency_response(std::span<const double> h, std::size_t grid_size = default_grid_size);

/// 20 log10(reference / max |H(f)|, f >= f_stop), capped at attenuation_cap_db.
double stopband_attenuation(const FrequencyResponse& resp, double f_stop);

/// 20 log10(max / min |H(f)|, f <= f_pass).
double passband_ripple(const FrequencyResponse& resp, double f_pass);

struct RepresentationResult {
    std::string name;
    std::vector<double> coefficients;
    FrequencyResponse response;
    double stopband_db{};
    double ripple_db{};
    double max_coefficient_error{};
};

struct ComparisonReport {
    FilterSpec spec;
    int bit_width{};
    std::size_t taps{};
    std::size_t systolic_elements{};
    QuantizationPlan plain_plan;
    QuantizationPlan shift_plan;
    RepresentationResult double_precision;
    RepresentationResult plain_fixed;
    RepresentationResult shift_normalized;
    bool simulation_verified{};

    /// shift_normalized minus plain stopband attenuation.
    double margin_db() const { return shift_normalized.stopband_db - plain_fixed.stopband_db; }
};

struct CompareOptions {
    int input_width{};
    QLimitMode q_limit_mode{QLimitMode::safe};
    std::size_t grid_size{default_grid_size};
};

/// Designs the filter, quantizes it plainly and shift-normalized, checks both
/// against the bit-exact simulator, and evaluates all three responses.
ComparisonReport compare_representations(const FilterSpec& spec, int bit_width, const WidthConfig& widths,
                                         const CompareOptions& options);

} // namespace sysfir
