#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sysfir/quant.hpp"
#include "sysfir/wide.hpp"

namespace sysfir {

/// max_delay: Y_k = z^-1 Y_{k-1} + h_k (z^-2k + z^-M) X
/// min_delay: Y_k = z^-1 Y_{k-1} + h_{(M-1)/2-k} (z^-b_k + z^-(1+2k+b_k)) X
enum class Variant { max_delay, min_delay };

/// Break registers injected on the accumulate path; b_k counts registers before position k.
struct BreakSpec {
    enum class Kind { none, partial, full, explicit_counts };

    Kind kind{Kind::none};
    std::size_t position{};
    std::size_t stride{};
    std::vector<std::size_t> counts;

    static BreakSpec none() { return {}; }
    static BreakSpec partial(std::size_t position) { return {Kind::partial, position, 0, {}}; }
    static BreakSpec full(std::size_t stride) { return {Kind::full, 0, stride, {}}; }
    static BreakSpec explicit_counts(std::vector<std::size_t> counts)
    {
        return {Kind::explicit_counts, 0, 0, std::move(counts)};
    }

    /// Cumulative counts b_0..b_{elements-1}; throws invalid_breaks.
    std::vector<std::size_t> resolve(std::size_t elements) const;
};

struct SystolicElement {
    std::size_t coeff_index{};
    std::int64_t coefficient{};
    std::size_t tap_delay_a{};
    std::size_t tap_delay_b{};
    int input_shift{};
    /// 1 baseline register plus the break registers injected before this position.
    std::size_t accumulate_registers{1};

    bool operator==(const SystolicElement&) const = default;
};

struct StructureGraph {
    Variant variant{Variant::min_delay};
    std::size_t taps{};
    std::vector<SystolicElement> elements;
    std::size_t model_latency{};

    std::size_t order() const { return taps - 1; }
    /// b_k reconstructed from the accumulate registers.
    std::vector<std::size_t> break_counts() const;
    std::size_t max_tap_delay() const;

    bool operator==(const StructureGraph&) const = default;
};

/// DSP datapath widths: A/B sample ports, C pre-adder, D coefficient, E product, F accumulator.
struct WidthConfig {
    int w_a{};
    int w_b{};
    int w_c{};
    int w_d{};
    int w_e{};
    int w_f{};

    void validate() const;
    bool operator==(const WidthConfig&) const = default;
};

struct DeviceProfile {
    std::string name;
    std::vector<std::size_t> chain_lengths;

    std::size_t total_dsp() const;
    void validate() const;
};

/// Graph from integer folded coefficients (index j = 0..N/2-1), no shifts.
StructureGraph build_structure(std::span<const std::int64_t> folded, Variant variant,
                               const BreakSpec& breaks = BreakSpec::none());

/// Graph from a plan: coefficient I_j and input shift d_j per element.
StructureGraph build_structure(const QuantizationPlan& plan, Variant variant,
                               const BreakSpec& breaks = BreakSpec::none());

/// Forces at least one break register at every chain boundary.
StructureGraph map_to_device(const StructureGraph& graph, const DeviceProfile& profile);

std::size_t latency(const StructureGraph& graph);

/// Checks every structural invariant; throws on violation.
void check_graph(const StructureGraph& graph);

enum class NodeKind { port_a, port_b, coefficient, pre_adder, multiplier, accumulator };

std::string_view to_string(NodeKind kind);

struct NodeBound {
    std::size_t element{};
    NodeKind node{};
    wide_int min{};
    wide_int max{};
    int width{};
    int required_width{};
    bool pass{};
};

struct WidthReport {
    int input_width{};
    std::vector<NodeBound> nodes;
    WidthConfig minimal;
    bool pass{};

    std::vector<NodeBound> failures() const;
};

/// Smallest signed two's-complement width holding [lo, hi] (at least 2).
int required_signed_width(wide_int lo, wide_int hi);

/// Exact worst-case range of every node over all inputs of input_width bits.
WidthReport validate_widths(const StructureGraph& graph, const WidthConfig& widths, int input_width);

struct ResourceSummary {
    std::size_t dsp_elements{};
    std::size_t injected_registers{};
    std::size_t tap_line_registers{};
    std::size_t shifters{};
};

ResourceSummary resource_summary(const StructureGraph& graph);

/// Direct-form integer impulse response (length N) the graph realizes, shifts folded in.
std::vector<wide_int> effective_integer_taps(const StructureGraph& graph);

} // namespace sysfir
