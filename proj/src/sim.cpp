#include "sysfir/sim.hpp"

#include <algorithm>
#include <string>

#include "sysfir/error.hpp"

namespace sysfir {

namespace {

void require_in_range(wide_int value, int width, const char* port)
{
    if (!fits_width(value, width)) {
        throw Error(ErrorCode::input_out_of_range, std::string("value ") + to_string(value) + " on port " + port +
                                                       " exceeds signed " + std::to_string(width) + "-bit range");
    }
}

wide_int store(wide_int value, int width, ArithmeticMode mode, bool& overflow)
{
    overflow = !fits_width(value, width);
    return mode == ArithmeticMode::wrap ? wrap_to_width(value, width) : value;
}

DspResult evaluate(wide_int a, wide_int b, wide_int d, wide_int f, const WidthConfig& widths, ArithmeticMode mode)
{
    DspResult r;
    r.c = store(checked_add(a, b), widths.w_c, mode, r.c_overflow);
    r.e = store(checked_mul(r.c, d), widths.w_e, mode, r.e_overflow);
    r.y = store(checked_add(r.e, f), widths.w_f, mode, r.y_overflow);
    return r;
}

} // namespace

std::string_view to_string(SimNode node)
{
    switch (node) {
    case SimNode::pre_adder: return "pre_adder";
    case SimNode::multiplier: return "multiplier";
    case SimNode::accumulator: return "accumulator";
    }
    return "unknown";
}

DspResult dsp_eval(wide_int a, wide_int b, wide_int d, wide_int f, const WidthConfig& widths, ArithmeticMode mode)
{
    require_in_range(a, widths.w_a, "A");
    require_in_range(b, widths.w_b, "B");
    require_in_range(d, widths.w_d, "D");
    require_in_range(f, widths.w_f, "F");
    return evaluate(a, b, d, f, widths, mode);
}

Simulator::Simulator(StructureGraph graph, WidthConfig widths, ArithmeticMode mode, int input_width)
    : graph_(std::move(graph)), widths_(widths), mode_(mode), input_width_(input_width)
{
    widths_.validate();
    check_graph(graph_);
    if (input_width_ == 0) {
        input_width_ = std::min(widths_.w_a, widths_.w_b);
    }
    if (input_width_ < 2 || input_width_ > 64 || input_width_ > std::min(widths_.w_a, widths_.w_b)) {
        throw Error(ErrorCode::invalid_width, "input width " + std::to_string(input_width_) +
                                                  " must lie in [2, min(w_a, w_b)]");
    }
    for (const auto& e : graph_.elements) {
        require_in_range(e.coefficient, widths_.w_d, "D");
    }
    history_.assign(graph_.max_tap_delay() + 1, 0);
    accumulate_.resize(graph_.elements.size());
    for (std::size_t k = 1; k < graph_.elements.size(); ++k) {
        accumulate_[k].assign(graph_.elements[k].accumulate_registers, 0);
    }
}

SimResult Simulator::run(std::span<const std::int64_t> input)
{
    SimResult result;
    result.output.reserve(input.size());
    const std::size_t count = graph_.elements.size();
    std::vector<wide_int> y(count, 0);

    for (const std::int64_t sample : input) {
        if (!fits_width(sample, input_width_)) {
            throw Error(ErrorCode::input_out_of_range, "input sample " + std::to_string(sample) + " at cycle " +
                                                           std::to_string(cycle_) + " exceeds signed " +
                                                           std::to_string(input_width_) + "-bit range");
        }
        history_.pop_back();
        history_.push_front(sample);

        for (std::size_t k = 0; k < count; ++k) {
            const auto& e = graph_.elements[k];
            const wide_int a = checked_shl(history_[e.tap_delay_a], e.input_shift);
            const wide_int b = checked_shl(history_[e.tap_delay_b], e.input_shift);
            // Register output of the accumulate pipeline (value stored r cycles ago).
            const wide_int f = k == 0 ? 0 : accumulate_[k].back();
            require_in_range(a, widths_.w_a, "A");
            require_in_range(b, widths_.w_b, "B");
            // F carries the previous element's output, already flagged if out of range.
            const DspResult r = evaluate(a, b, e.coefficient, f, widths_, mode_);
            y[k] = r.y;
            if (r.c_overflow) {
                result.diagnostics.overflows.push_back({cycle_, k, SimNode::pre_adder, r.c, widths_.w_c});
            }
            if (r.e_overflow) {
                result.diagnostics.overflows.push_back({cycle_, k, SimNode::multiplier, r.e, widths_.w_e});
            }
            if (r.y_overflow) {
                result.diagnostics.overflows.push_back({cycle_, k, SimNode::accumulator, r.y, widths_.w_f});
            }
        }
        result.output.push_back(y[count - 1]);

        // Clock edge: shift every accumulate pipeline by one register.
        for (std::size_t k = 1; k < count; ++k) {
            accumulate_[k].pop_back();
            accumulate_[k].push_front(y[k - 1]);
        }
        ++cycle_;
    }
    return result;
}

SimResult simulate(const StructureGraph& graph, std::span<const std::int64_t> input, const WidthConfig& widths,
                   ArithmeticMode mode, int input_width)
{
    Simulator sim(graph, widths, mode, input_width);
    return sim.run(input);
}

std::vector<wide_int> impulse_response(const StructureGraph& graph, const WidthConfig& widths, std::int64_t amplitude,
                                       ArithmeticMode mode)
{
    std::vector<std::int64_t> input(latency(graph) + graph.taps, 0);
    input.front() = amplitude;
    return simulate(graph, input, widths, mode).output;
}

std::vector<std::int64_t> worst_case_stimulus(const StructureGraph& graph, std::int64_t amplitude, bool positive)
{
    const auto taps = effective_integer_taps(graph);
    const std::size_t delay = latency(graph);
    const std::size_t length = delay + taps.size();
    std::vector<std::int64_t> input(length, 0);
    // y[length-1] = sum_t g[t] x[length-1-t] with g[t] = taps[t - delay].
    for (std::size_t t = delay; t < length; ++t) {
        const wide_int g = taps[t - delay];
        const std::int64_t sign = g > 0 ? 1 : (g < 0 ? -1 : 0);
        input[length - 1 - t] = (positive ? 1 : -1) * sign * amplitude;
    }
    return input;
}

} // namespace sysfir
