#include "sysfir/structure.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "sysfir/error.hpp"

namespace sysfir {

namespace {

void check_element_count(std::size_t count)
{
    if (count == 0) {
        throw Error(ErrorCode::odd_taps, "structure needs at least one folded coefficient (two taps)");
    }
}

void check_counts(const std::vector<std::size_t>& counts)
{
    if (!counts.empty() && counts.front() != 0) {
        throw Error(ErrorCode::invalid_breaks, "break counts must start at b_0 = 0");
    }
    if (!std::is_sorted(counts.begin(), counts.end())) {
        throw Error(ErrorCode::invalid_breaks, "break counts must be non-decreasing");
    }
}

struct Coefficient {
    std::int64_t integer;
    int shift;
};

StructureGraph assemble(const std::vector<Coefficient>& folded, Variant variant, const BreakSpec& breaks)
{
    check_element_count(folded.size());
    const std::size_t count = folded.size();
    const std::size_t order = 2 * count - 1;

    if (variant == Variant::max_delay && breaks.kind != BreakSpec::Kind::none) {
        const auto resolved = breaks.resolve(count);
        if (resolved.back() != 0) {
            throw Error(ErrorCode::unsupported_variant, "break registers are only supported on the min_delay variant");
        }
    }
    const auto b = variant == Variant::min_delay ? breaks.resolve(count) : std::vector<std::size_t>(count, 0);

    StructureGraph graph;
    graph.variant = variant;
    graph.taps = 2 * count;
    graph.elements.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        SystolicElement e;
        if (variant == Variant::min_delay) {
            e.coeff_index = count - 1 - k;
            e.tap_delay_a = b[k];
            e.tap_delay_b = 1 + 2 * k + b[k];
        } else {
            e.coeff_index = k;
            e.tap_delay_a = 2 * k;
            e.tap_delay_b = order;
        }
        e.coefficient = folded[e.coeff_index].integer;
        e.input_shift = folded[e.coeff_index].shift;
        e.accumulate_registers = 1 + (k == 0 ? 0 : b[k] - b[k - 1]);
        graph.elements.push_back(e);
    }
    graph.model_latency = variant == Variant::min_delay ? b.back() : (order - 1) / 2;
    return graph;
}

} // namespace

std::vector<std::size_t> BreakSpec::resolve(std::size_t elements) const
{
    std::vector<std::size_t> b(elements, 0);
    switch (kind) {
    case Kind::none:
        break;
    case Kind::partial:
        if (position == 0 || position >= elements) {
            throw Error(ErrorCode::invalid_breaks, "partial break position " + std::to_string(position) +
                                                       " must lie in [1, " + std::to_string(elements) + ")");
        }
        for (std::size_t k = position; k < elements; ++k) {
            b[k] = 1;
        }
        break;
    case Kind::full:
        if (stride == 0) {
            throw Error(ErrorCode::invalid_breaks, "full break stride must be positive");
        }
        for (std::size_t k = 0; k < elements; ++k) {
            b[k] = stride * k;
        }
        break;
    case Kind::explicit_counts:
        if (counts.size() != elements) {
            throw Error(ErrorCode::invalid_breaks, "explicit break counts need " + std::to_string(elements) +
                                                       " entries, got " + std::to_string(counts.size()));
        }
        check_counts(counts);
        b = counts;
        break;
    }
    return b;
}

std::vector<std::size_t> StructureGraph::break_counts() const
{
    std::vector<std::size_t> b(elements.size(), 0);
    for (std::size_t k = 1; k < elements.size(); ++k) {
        b[k] = b[k - 1] + elements[k].accumulate_registers - 1;
    }
    return b;
}

std::size_t StructureGraph::max_tap_delay() const
{
    std::size_t delay = 0;
    for (const auto& e : elements) {
        delay = std::max({delay, e.tap_delay_a, e.tap_delay_b});
    }
    return delay;
}

void WidthConfig::validate() const
{
    for (const int w : {w_a, w_b, w_c, w_d, w_e, w_f}) {
        if (w < 2 || w > max_datapath_width) {
            throw Error(ErrorCode::invalid_width,
                        "datapath widths must lie in [2, " + std::to_string(max_datapath_width) + "], got " +
                            std::to_string(w));
        }
    }
}

std::size_t DeviceProfile::total_dsp() const
{
    return std::accumulate(chain_lengths.begin(), chain_lengths.end(), std::size_t{0});
}

void DeviceProfile::validate() const
{
    if (chain_lengths.empty() ||
        std::any_of(chain_lengths.begin(), chain_lengths.end(), [](std::size_t n) { return n == 0; })) {
        throw Error(ErrorCode::config_invalid, "device profile '" + name + "' needs positive chain lengths");
    }
}

StructureGraph build_structure(std::span<const std::int64_t> folded, Variant variant, const BreakSpec& breaks)
{
    std::vector<Coefficient> coeffs;
    coeffs.reserve(folded.size());
    for (const auto value : folded) {
        coeffs.push_back({value, 0});
    }
    return assemble(coeffs, variant, breaks);
}

StructureGraph build_structure(const QuantizationPlan& plan, Variant variant, const BreakSpec& breaks)
{
    std::vector<Coefficient> coeffs;
    coeffs.reserve(plan.entries.size());
    for (const auto& entry : plan.entries) {
        coeffs.push_back({entry.integer, entry.shift});
    }
    return assemble(coeffs, variant, breaks);
}

StructureGraph map_to_device(const StructureGraph& graph, const DeviceProfile& profile)
{
    profile.validate();
    if (graph.variant != Variant::min_delay) {
        throw Error(ErrorCode::unsupported_variant, "device mapping inserts break registers; needs min_delay variant");
    }
    const std::size_t count = graph.elements.size();
    if (count > profile.total_dsp()) {
        throw Error(ErrorCode::insufficient_dsp, std::to_string(count) + " systolic elements exceed the " +
                                                     std::to_string(profile.total_dsp()) + " DSP blocks of '" +
                                                     profile.name + "'");
    }

    std::vector<std::size_t> injected(count, 0);
    for (std::size_t k = 1; k < count; ++k) {
        injected[k] = graph.elements[k].accumulate_registers - 1;
    }
    std::size_t boundary = 0;
    for (std::size_t c = 0; c + 1 < profile.chain_lengths.size(); ++c) {
        boundary += profile.chain_lengths[c];
        if (boundary >= count) {
            break;
        }
        injected[boundary] = std::max<std::size_t>(injected[boundary], 1);
    }

    std::vector<std::size_t> b(count, 0);
    for (std::size_t k = 1; k < count; ++k) {
        b[k] = b[k - 1] + injected[k];
    }

    // Rebuild from the folded coefficients held by the elements.
    std::vector<Coefficient> coeffs(count);
    for (const auto& e : graph.elements) {
        coeffs[e.coeff_index] = {e.coefficient, e.input_shift};
    }
    return assemble(coeffs, graph.variant, BreakSpec::explicit_counts(std::move(b)));
}

std::size_t latency(const StructureGraph& graph) { return graph.model_latency; }

void check_graph(const StructureGraph& graph)
{
    const std::size_t count = graph.elements.size();
    if (count == 0 || graph.taps != 2 * count) {
        throw Error(ErrorCode::odd_taps, "graph needs taps = 2 x element count");
    }
    const std::size_t order = graph.taps - 1;
    std::vector<bool> seen(count, false);
    for (const auto& e : graph.elements) {
        if (e.coeff_index >= count || seen[e.coeff_index]) {
            throw Error(ErrorCode::invalid_breaks, "coefficient indices must be a permutation of 0..N/2-1");
        }
        seen[e.coeff_index] = true;
        if (e.accumulate_registers == 0 || e.input_shift < 0) {
            throw Error(ErrorCode::invalid_breaks, "accumulate registers must be positive and shifts non-negative");
        }
    }
    if (graph.elements.front().accumulate_registers != 1) {
        throw Error(ErrorCode::invalid_breaks, "first element cannot carry break registers");
    }
    const auto b = graph.break_counts();
    for (std::size_t k = 0; k < count; ++k) {
        const auto& e = graph.elements[k];
        const bool ok = graph.variant == Variant::min_delay
                            ? e.coeff_index == count - 1 - k && e.tap_delay_a == b[k] && e.tap_delay_b == 1 + 2 * k + b[k]
                            : e.coeff_index == k && e.tap_delay_a == 2 * k && e.tap_delay_b == order && b[k] == 0;
        if (!ok) {
            throw Error(ErrorCode::invalid_breaks, "element " + std::to_string(k) + " violates the tap-delay layout");
        }
    }
    const std::size_t expected = graph.variant == Variant::min_delay ? b.back() : (order - 1) / 2;
    if (graph.model_latency != expected) {
        throw Error(ErrorCode::invalid_breaks, "model latency " + std::to_string(graph.model_latency) +
                                                   " does not match " + std::to_string(expected));
    }
}

std::string_view to_string(NodeKind kind)
{
    switch (kind) {
    case NodeKind::port_a: return "port_a";
    case NodeKind::port_b: return "port_b";
    case NodeKind::coefficient: return "coefficient";
    case NodeKind::pre_adder: return "pre_adder";
    case NodeKind::multiplier: return "multiplier";
    case NodeKind::accumulator: return "accumulator";
    }
    return "unknown";
}

std::vector<NodeBound> WidthReport::failures() const
{
    std::vector<NodeBound> out;
    std::copy_if(nodes.begin(), nodes.end(), std::back_inserter(out), [](const NodeBound& n) { return !n.pass; });
    return out;
}

int required_signed_width(wide_int lo, wide_int hi)
{
    int width = 2;
    while (!(fits_width(lo, width) && fits_width(hi, width))) {
        ++width;
    }
    return width;
}

WidthReport validate_widths(const StructureGraph& graph, const WidthConfig& widths, int input_width)
{
    widths.validate();
    if (input_width < 2 || input_width > 62 || input_width > std::min(widths.w_a, widths.w_b)) {
        throw Error(ErrorCode::invalid_width, "input width " + std::to_string(input_width) +
                                                  " must lie in [2, min(w_a, w_b)]");
    }
    const wide_int x_lo = signed_min(input_width);
    const wide_int x_hi = signed_max(input_width);

    WidthReport report;
    report.input_width = input_width;
    report.minimal = {2, 2, 2, 2, 2, 2};
    auto record = [&](std::size_t element, NodeKind node, wide_int lo, wide_int hi, int width, int& minimal) {
        NodeBound bound{element, node, lo, hi, width, required_signed_width(lo, hi), false};
        bound.pass = bound.required_width <= width;
        minimal = std::max(minimal, bound.required_width);
        report.nodes.push_back(bound);
    };

    wide_int acc_lo = 0;
    wide_int acc_hi = 0;
    for (std::size_t k = 0; k < graph.elements.size(); ++k) {
        const auto& e = graph.elements[k];
        const wide_int s_lo = checked_shl(x_lo, e.input_shift);
        const wide_int s_hi = checked_shl(x_hi, e.input_shift);
        record(k, NodeKind::port_a, s_lo, s_hi, widths.w_a, report.minimal.w_a);
        record(k, NodeKind::port_b, s_lo, s_hi, widths.w_b, report.minimal.w_b);
        record(k, NodeKind::coefficient, e.coefficient, e.coefficient, widths.w_d, report.minimal.w_d);

        const wide_int c_lo = checked_add(s_lo, s_lo);
        const wide_int c_hi = checked_add(s_hi, s_hi);
        record(k, NodeKind::pre_adder, c_lo, c_hi, widths.w_c, report.minimal.w_c);

        const wide_int p1 = checked_mul(c_lo, e.coefficient);
        const wide_int p2 = checked_mul(c_hi, e.coefficient);
        const wide_int e_lo = std::min(p1, p2);
        const wide_int e_hi = std::max(p1, p2);
        record(k, NodeKind::multiplier, e_lo, e_hi, widths.w_e, report.minimal.w_e);

        // Every tap feeding a partial sum is a distinct input sample, so the
        // per-element extremes are jointly attainable.
        acc_lo = checked_add(acc_lo, e_lo);
        acc_hi = checked_add(acc_hi, e_hi);
        record(k, NodeKind::accumulator, acc_lo, acc_hi, widths.w_f, report.minimal.w_f);
    }
    report.pass = std::all_of(report.nodes.begin(), report.nodes.end(), [](const NodeBound& n) { return n.pass; });
    return report;
}

ResourceSummary resource_summary(const StructureGraph& graph)
{
    ResourceSummary summary;
    summary.dsp_elements = graph.taps / 2;
    for (const auto& e : graph.elements) {
        summary.injected_registers += e.accumulate_registers - 1;
        summary.shifters += e.input_shift > 0 ? 1 : 0;
    }
    summary.tap_line_registers = graph.max_tap_delay();
    return summary;
}

std::vector<wide_int> effective_integer_taps(const StructureGraph& graph)
{
    const std::size_t count = graph.elements.size();
    std::vector<wide_int> taps(2 * count, 0);
    for (const auto& e : graph.elements) {
        const wide_int value = checked_shl(e.coefficient, e.input_shift);
        taps[e.coeff_index] = value;
        taps[2 * count - 1 - e.coeff_index] = value;
    }
    return taps;
}

} // namespace sysfir
