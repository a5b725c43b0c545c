#include "sysfir/design.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sysfir/error.hpp"

namespace sysfir {

namespace {

void check_band(double f_pass, double f_stop)
{
    if (!(f_pass > 0.0 && f_pass < f_stop && f_stop <= 0.5)) {
        throw Error(ErrorCode::invalid_band,
                    "band edges must satisfy 0 < f_pass < f_stop <= 0.5 (got f_pass=" + std::to_string(f_pass) +
                        ", f_stop=" + std::to_string(f_stop) + ")");
    }
}

} // namespace

double FilterSpec::cutoff_frequency() const
{
    return cutoff == CutoffPlacement::passband_edge ? f_pass : 0.5 * (f_pass + f_stop);
}

void FilterSpec::validate() const
{
    check_band(f_pass, f_stop);
    if (!(a_stop > 0.0)) {
        throw Error(ErrorCode::invalid_spec, "stopband attenuation must be positive");
    }
    if (taps && (*taps < 2 || *taps % 2 != 0)) {
        throw Error(ErrorCode::odd_taps, "tap count must be even and >= 2, got " + std::to_string(*taps));
    }
}

std::vector<double> CoefficientSet::folded() const
{
    if (h.size() < 2 || h.size() % 2 != 0) {
        throw Error(ErrorCode::odd_taps, "folding needs an even tap count, got " + std::to_string(h.size()));
    }
    if (!symmetric) {
        throw Error(ErrorCode::asymmetric, "folding needs a symmetric coefficient set");
    }
    return {h.begin(), h.begin() + static_cast<std::ptrdiff_t>(h.size() / 2)};
}

CoefficientSet CoefficientSet::from_folded(std::span<const double> half)
{
    CoefficientSet set;
    set.h.assign(half.begin(), half.end());
    set.h.insert(set.h.end(), half.rbegin(), half.rend());
    set.symmetric = true;
    return set;
}

CoefficientSet CoefficientSet::from_values(std::vector<double> h)
{
    CoefficientSet set{std::move(h), false};
    const std::size_t n = set.h.size();
    bool sym = n > 0;
    for (std::size_t k = 0; k < n / 2 && sym; ++k) {
        sym = set.h[k] == set.h[n - 1 - k];
    }
    set.symmetric = sym;
    return set;
}

std::size_t estimate_taps(double a_stop, double f_pass, double f_stop)
{
    check_band(f_pass, f_stop);
    if (!(a_stop > 0.0)) {
        throw Error(ErrorCode::invalid_band, "stopband attenuation must be positive");
    }
    const double estimate = a_stop / (22.0 * (f_stop - f_pass));
    // 11 / (22 * 0.05) lands a hair above 10 in binary; snap near-integers first.
    const double nearest = std::round(estimate);
    if (std::abs(estimate - nearest) <= 1e-9 * nearest) {
        return static_cast<std::size_t>(nearest);
    }
    return static_cast<std::size_t>(std::ceil(estimate));
}

double nuttall_window(std::size_t n, std::size_t length)
{
    if (length < 2 || n >= length) {
        throw Error(ErrorCode::index_out_of_range,
                    "window index " + std::to_string(n) + " out of range for length " + std::to_string(length));
    }
    const auto [a0, a1, a2, a3] = nuttall_coefficients;
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(n) / static_cast<double>(length - 1);
    return a0 - a1 * std::cos(phase) + a2 * std::cos(2.0 * phase) - a3 * std::cos(3.0 * phase);
}

double window_weight(WindowKind kind, std::size_t n, std::size_t length)
{
    if (kind == WindowKind::nuttall) {
        return nuttall_window(n, length);
    }
    if (n >= length) {
        throw Error(ErrorCode::index_out_of_range, "window index out of range");
    }
    return 1.0;
}

double sinc(double x)
{
    if (x == 0.0) {
        return 1.0;
    }
    const double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

CoefficientSet design_lowpass(const FilterSpec& spec)
{
    spec.validate();
    if (!spec.taps) {
        throw Error(ErrorCode::invalid_spec, "design_lowpass needs an explicit tap count");
    }
    const std::size_t taps = *spec.taps;
    const double fc = spec.cutoff_frequency();
    if (!(fc > 0.0 && fc < 0.5)) {
        throw Error(ErrorCode::invalid_band, "degenerate cutoff frequency " + std::to_string(fc));
    }
    const double centre = 0.5 * static_cast<double>(taps - 1);

    std::vector<double> half(taps / 2);
    for (std::size_t k = 0; k < half.size(); ++k) {
        const double offset = static_cast<double>(k) - centre;
        half[k] = 2.0 * fc * sinc(2.0 * fc * offset) * window_weight(spec.window, k, taps);
    }
    return CoefficientSet::from_folded(half);
}

} // namespace sysfir
