#include "sysfir/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sysfir/error.hpp"
#include "sysfir/sim.hpp"

namespace sysfir {

namespace {

// e^{-i pi m / (F-1)} for m in [0, 2(F-1)), exact at multiples of pi/2.
std::vector<std::complex<double>> twiddles(std::size_t grid_size)
{
    const std::size_t half = grid_size - 1;
    std::vector<std::complex<double>> table(2 * half);
    for (std::size_t m = 0; m < table.size(); ++m) {
        if (m == 0) {
            table[m] = {1.0, 0.0};
        } else if (2 * m == half) {
            table[m] = {0.0, -1.0};
        } else if (m == half) {
            table[m] = {-1.0, 0.0};
        } else if (2 * m == 3 * half) {
            table[m] = {0.0, 1.0};
        } else {
            const double angle = std::numbers::pi * static_cast<double>(m) / static_cast<double>(half);
            table[m] = {std::cos(angle), -std::sin(angle)};
        }
    }
    return table;
}

double to_db(double ratio) { return std::min(20.0 * std::log10(ratio), attenuation_cap_db); }

RepresentationResult evaluate(std::string name, std::vector<double> coefficients, std::span<const double> reference,
                              const FilterSpec& spec, std::size_t grid_size)
{
    RepresentationResult r;
    r.name = std::move(name);
    r.response = frequency_response(coefficients, grid_size);
    r.stopband_db = stopband_attenuation(r.response, spec.f_stop);
    r.ripple_db = passband_ripple(r.response, spec.f_pass);
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        r.max_coefficient_error = std::max(r.max_coefficient_error, std::abs(coefficients[k] - reference[k]));
    }
    r.coefficients = std::move(coefficients);
    return r;
}

// Impulse response of the plan's structure rescaled by 2^(b-1+C) must equal h_eff exactly.
bool simulation_matches(const QuantizationPlan& plan, const WidthConfig& widths)
{
    const auto graph = build_structure(plan, Variant::min_delay);
    const auto response = impulse_response(graph, widths, 1);
    const auto expected = effective_coefficients(plan);
    if (response.size() != expected.size()) {
        return false;
    }
    for (std::size_t t = 0; t < expected.size(); ++t) {
        const double scaled = std::ldexp(expected[t], plan.bit_width - 1 + plan.common_base);
        if (scaled != std::trunc(scaled) || static_cast<wide_int>(scaled) != response[t]) {
            return false;
        }
    }
    return true;
}

} // namespace

std::vector<double> direct_form_reference(std::span<const double> h, std::span<const double> x)
{
    const auto set = CoefficientSet::from_values({h.begin(), h.end()});
    if (h.size() % 2 != 0 || h.empty()) {
        throw Error(ErrorCode::odd_taps, "folded direct form needs an even tap count");
    }
    if (!set.symmetric) {
        throw Error(ErrorCode::asymmetric, "folded direct form needs symmetric coefficients");
    }
    const std::size_t order = h.size() - 1;
    const auto sample = [&](std::size_t n, std::size_t delay) { return n >= delay ? x[n - delay] : 0.0; };
    std::vector<double> y(x.size(), 0.0);
    for (std::size_t n = 0; n < x.size(); ++n) {
        double acc = 0.0;
        for (std::size_t k = 0; k <= (order - 1) / 2; ++k) {
            acc += h[k] * (sample(n, k) + sample(n, order - k));
        }
        y[n] = acc;
    }
    return y;
}

std::vector<wide_int> convolve(std::span<const wide_int> taps, std::span<const std::int64_t> x)
{
    std::vector<wide_int> y(x.size(), 0);
    for (std::size_t n = 0; n < x.size(); ++n) {
        wide_int acc = 0;
        for (std::size_t t = 0; t < taps.size() && t <= n; ++t) {
            acc = checked_add(acc, checked_mul(taps[t], x[n - t]));
        }
        y[n] = acc;
    }
    return y;
}

std::vector<double> FrequencyResponse::magnitude_db() const
{
    std::vector<double> db(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double ratio = std::abs(values[i]) / reference_gain;
        db[i] = ratio == 0.0 ? -attenuation_cap_db : std::max(20.0 * std::log10(ratio), -attenuation_cap_db);
    }
    return db;
}

FrequencyResponse frequency_response(std::span<const double> h, std::size_t grid_size)
{
    if (grid_size < 2) {
        throw Error(ErrorCode::invalid_spec, "frequency grid needs at least two points");
    }
    const auto table = twiddles(grid_size);
    const std::size_t period = table.size();

    FrequencyResponse resp;
    resp.grid.resize(grid_size);
    resp.values.resize(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i) {
        resp.grid[i] = i + 1 == grid_size ? 0.5 : 0.5 * static_cast<double>(i) / static_cast<double>(grid_size - 1);
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t k = 0; k < h.size(); ++k) {
            acc += h[k] * table[(i * k) % period];
        }
        resp.values[i] = acc;
    }
    resp.reference_gain = std::abs(resp.values.front());
    return resp;
}

double stopband_attenuation(const FrequencyResponse& resp, double f_stop)
{
    double peak = -1.0;
    for (std::size_t i = 0; i < resp.grid.size(); ++i) {
        if (resp.grid[i] >= f_stop) {
            peak = std::max(peak, std::abs(resp.values[i]));
        }
    }
    if (peak < 0.0) {
        throw Error(ErrorCode::invalid_band, "no grid points at or above f_stop " + std::to_string(f_stop));
    }
    if (peak == 0.0) {
        return attenuation_cap_db;
    }
    return to_db(resp.reference_gain / peak);
}

double passband_ripple(const FrequencyResponse& resp, double f_pass)
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t i = 0; i < resp.grid.size() && resp.grid[i] <= f_pass; ++i) {
        const double mag = std::abs(resp.values[i]);
        lo = std::min(lo, mag);
        hi = std::max(hi, mag);
    }
    if (hi == 0.0) {
        return 0.0;
    }
    return lo == 0.0 ? attenuation_cap_db : to_db(hi / lo);
}

ComparisonReport compare_representations(const FilterSpec& spec, int bit_width, const WidthConfig& widths,
                                         const CompareOptions& options)
{
    widths.validate();
    if (widths.w_d != bit_width) {
        throw Error(ErrorCode::width_mismatch, "coefficient port width w_d=" + std::to_string(widths.w_d) +
                                                   " must equal bit width " + std::to_string(bit_width));
    }
    const auto design = design_lowpass(spec);
    const auto folded = design.folded();

    ComparisonReport report;
    report.spec = spec;
    report.bit_width = bit_width;
    report.taps = design.taps();
    report.systolic_elements = folded.size();
    report.plain_plan = build_plain_plan(folded, bit_width);
    report.shift_plan = build_shift_plan(folded, bit_width, options.input_width, widths.w_c, options.q_limit_mode);

    report.simulation_verified =
        simulation_matches(report.plain_plan, widths) && simulation_matches(report.shift_plan, widths);

    report.double_precision = evaluate("double_precision", design.h, design.h, spec, options.grid_size);
    report.plain_fixed =
        evaluate("plain_fixed", effective_coefficients(report.plain_plan), design.h, spec, options.grid_size);
    report.shift_normalized =
        evaluate("shift_normalized", effective_coefficients(report.shift_plan), design.h, spec, options.grid_size);
    return report;
}

} // namespace sysfir
