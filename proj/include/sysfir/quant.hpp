#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sysfir {

/// How much left shift the pre-adder may absorb for a given input width.
enum class QLimitMode {
    safe,          ///< w_c - input_width - 1: the sum of two shifted samples must fit
    paper_faithful ///< w_c - input_width: one bit more, can overflow the pre-adder at full scale
};

struct PlanEntry {
    double h{};
    std::int64_t integer{};
    int q_raw{};
    int q_clamped{};
    int shift{};
};

/// Per-coefficient bit compression normalized to a common base C:
/// for every entry q_clamped + shift == common_base.
struct QuantizationPlan {
    int bit_width{};
    int q_limit{};
    int common_base{};
    std::vector<PlanEntry> entries;

    bool has_negative_q() const;
};

/// round(h * 2^(b-1)), half away from zero. Throws magnitude_overflow when the
/// result leaves the signed b-bit range, unless saturate is set.
std::int64_t quantize_plain(double h, int bit_width, bool saturate = false);

/// I / 2^(b-1+q).
double dequantize(std::int64_t integer, int bit_width, int q);

/// floor(log2(2^(b-1)/|h|) - (b-1)) capped at q_limit; q_limit for h == 0.
int compute_q(double h, int bit_width, int q_limit);

int q_limit_for(int input_width, int w_c, QLimitMode mode);

/// Shift-normalized plan over the folded coefficient half.
QuantizationPlan build_shift_plan(std::span<const double> folded, int bit_width, int input_width, int w_c,
                                  QLimitMode mode = QLimitMode::safe);

/// Plain fixed-point plan: every entry at Q = 0, no shifts.
QuantizationPlan build_plain_plan(std::span<const double> folded, int bit_width);

/// Direct-form h_eff over the folded half, mirrored to full length.
std::vector<double> effective_coefficients(const QuantizationPlan& plan);

} // namespace sysfir
