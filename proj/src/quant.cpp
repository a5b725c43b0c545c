#include "sysfir/quant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sysfir/error.hpp"

namespace sysfir {

namespace {

void check_bit_width(int bit_width)
{
    if (bit_width < 2 || bit_width > 63) {
        throw Error(ErrorCode::invalid_width, "coefficient bit width must lie in [2, 63], got " + std::to_string(bit_width));
    }
}

bool fits_signed(double value, int bits)
{
    const double hi = std::ldexp(1.0, bits - 1);
    return value >= -hi && value <= hi - 1.0;
}

// Exact for |h| < 2^(63 - b) because scaling by a power of two is exact.
double scaled_round(double h, int exponent) { return std::round(std::ldexp(h, exponent)); }

int raw_q(double h, int bit_width, int q_limit)
{
    return h == 0.0 ? q_limit : compute_q(h, bit_width, std::numeric_limits<int>::max());
}

} // namespace

bool QuantizationPlan::has_negative_q() const
{
    return std::any_of(entries.begin(), entries.end(), [](const PlanEntry& e) { return e.q_raw < 0; });
}

std::int64_t quantize_plain(double h, int bit_width, bool saturate)
{
    check_bit_width(bit_width);
    if (!std::isfinite(h)) {
        throw Error(ErrorCode::magnitude_overflow, "coefficient is not finite");
    }
    const double value = scaled_round(h, bit_width - 1);
    if (fits_signed(value, bit_width)) {
        return static_cast<std::int64_t>(value);
    }
    if (!saturate) {
        throw Error(ErrorCode::magnitude_overflow,
                    "coefficient " + std::to_string(h) + " overflows signed " + std::to_string(bit_width) + "-bit range");
    }
    const std::int64_t hi = (std::int64_t{1} << (bit_width - 1)) - 1;
    return value > 0 ? hi : -hi - 1;
}

double dequantize(std::int64_t integer, int bit_width, int q)
{
    return std::ldexp(static_cast<double>(integer), -(bit_width - 1 + q));
}

int compute_q(double h, int bit_width, int q_limit)
{
    check_bit_width(bit_width);
    if (h == 0.0) {
        return q_limit;
    }
    // log2(2^(b-1)/|h|) - (b-1) = -log2|h|; with |h| = f * 2^e, f in [0.5, 1),
    // the floor is -e, except f == 0.5 where the log is the integer 1 - e.
    int exponent = 0;
    const double fraction = std::frexp(std::abs(h), &exponent);
    const int q = fraction == 0.5 ? 1 - exponent : -exponent;
    return std::min(q, q_limit);
}

int q_limit_for(int input_width, int w_c, QLimitMode mode)
{
    const int limit = w_c - input_width - (mode == QLimitMode::safe ? 1 : 0);
    if (limit < 0) {
        throw Error(ErrorCode::invalid_width, "pre-adder width " + std::to_string(w_c) +
                                                  " cannot hold input width " + std::to_string(input_width));
    }
    return limit;
}

QuantizationPlan build_shift_plan(std::span<const double> folded, int bit_width, int input_width, int w_c,
                                  QLimitMode mode)
{
    check_bit_width(bit_width);
    QuantizationPlan plan;
    plan.bit_width = bit_width;
    plan.q_limit = q_limit_for(input_width, w_c, mode);
    plan.entries.reserve(folded.size());

    for (const double h : folded) {
        if (!std::isfinite(h)) {
            throw Error(ErrorCode::magnitude_overflow, "coefficient is not finite");
        }
        PlanEntry entry;
        entry.h = h;
        entry.q_raw = raw_q(h, bit_width, plan.q_limit);
        entry.q_clamped = std::min(entry.q_raw, plan.q_limit);
        double value = scaled_round(h, bit_width - 1 + entry.q_clamped);
        while (!fits_signed(value, bit_width)) {
            --entry.q_clamped;
            value = scaled_round(h, bit_width - 1 + entry.q_clamped);
        }
        entry.integer = static_cast<std::int64_t>(value);
        plan.entries.push_back(entry);
    }

    if (plan.entries.empty()) {
        return plan;
    }
    plan.common_base =
        std::max_element(plan.entries.begin(), plan.entries.end(), [](const auto& a, const auto& b) {
            return a.q_clamped < b.q_clamped;
        })->q_clamped;
    for (auto& entry : plan.entries) {
        entry.shift = plan.common_base - entry.q_clamped;
        if (entry.shift > plan.q_limit) {
            throw Error(ErrorCode::shift_infeasible, "input shift " + std::to_string(entry.shift) +
                                                         " exceeds limit " + std::to_string(plan.q_limit) +
                                                         " for coefficient " + std::to_string(entry.h));
        }
    }
    return plan;
}

QuantizationPlan build_plain_plan(std::span<const double> folded, int bit_width)
{
    QuantizationPlan plan;
    plan.bit_width = bit_width;
    plan.q_limit = 0;
    plan.common_base = 0;
    for (const double h : folded) {
        plan.entries.push_back({h, quantize_plain(h, bit_width), raw_q(h, bit_width, 0), 0, 0});
    }
    return plan;
}

std::vector<double> effective_coefficients(const QuantizationPlan& plan)
{
    std::vector<double> full;
    full.reserve(plan.entries.size() * 2);
    for (const auto& e : plan.entries) {
        full.push_back(dequantize(e.integer, plan.bit_width, e.q_clamped));
    }
    const std::vector<double> half = full;
    full.insert(full.end(), half.rbegin(), half.rend());
    return full;
}

} // namespace sysfir
