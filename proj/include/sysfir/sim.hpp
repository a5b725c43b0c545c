#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "sysfir/structure.hpp"
#include "sysfir/wide.hpp"

namespace sysfir {

/// check: keep exact values and report out-of-width nodes.
/// wrap: reduce every stored node to its two's-complement residue.
enum class ArithmeticMode { check, wrap };

enum class SimNode { pre_adder, multiplier, accumulator };

std::string_view to_string(SimNode node);

struct OverflowEvent {
    std::size_t cycle{};
    std::size_t element{};
    SimNode node{};
    wide_int value{};
    int width{};

    bool operator==(const OverflowEvent&) const = default;
};

struct SimDiagnostics {
    std::vector<OverflowEvent> overflows;

    bool clean() const { return overflows.empty(); }
};

struct DspResult {
    wide_int c{};
    wide_int e{};
    wide_int y{};
    bool c_overflow{};
    bool e_overflow{};
    bool y_overflow{};

    bool flagged() const { return c_overflow || e_overflow || y_overflow; }
};

/// One pre-adder / multiplier / post-adder evaluation: c = a + b, e = c * d, y = e + f.
/// Out-of-range inputs throw input_out_of_range.
DspResult dsp_eval(wide_int a, wide_int b, wide_int d, wide_int f, const WidthConfig& widths, ArithmeticMode mode);

struct SimResult {
    std::vector<wide_int> output;
    SimDiagnostics diagnostics;
};

/// Streaming cycle-accurate model of a StructureGraph. State persists across
/// run() calls; flushing needs latency + taps zero samples.
class Simulator {
public:
    /// input_width 0 means min(w_a, w_b).
    Simulator(StructureGraph graph, WidthConfig widths, ArithmeticMode mode, int input_width = 0);

    SimResult run(std::span<const std::int64_t> input);

    std::size_t cycle() const { return cycle_; }
    const StructureGraph& graph() const { return graph_; }
    int input_width() const { return input_width_; }

private:
    StructureGraph graph_;
    WidthConfig widths_;
    ArithmeticMode mode_;
    int input_width_;
    std::size_t cycle_{0};
    // Tap line; history_[t] = x[n - t] once the current sample is pushed.
    std::deque<std::int64_t> history_;
    // Accumulate-path register pipelines, one per element (index 0 unused).
    std::vector<std::deque<wide_int>> accumulate_;
};

SimResult simulate(const StructureGraph& graph, std::span<const std::int64_t> input, const WidthConfig& widths,
                   ArithmeticMode mode, int input_width = 0);

/// simulate([amplitude, 0, 0, ...]) truncated to latency + taps samples.
std::vector<wide_int> impulse_response(const StructureGraph& graph, const WidthConfig& widths, std::int64_t amplitude,
                                       ArithmeticMode mode = ArithmeticMode::check);

/// Input ending at the sample that drives the output to +/- amplitude * sum|g|,
/// g being the graph's delayed integer impulse response.
std::vector<std::int64_t> worst_case_stimulus(const StructureGraph& graph, std::int64_t amplitude, bool positive);

} // namespace sysfir
