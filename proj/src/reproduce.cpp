#include "sysfir/reproduce.hpp"

#include <algorithm>
#include <random>

#include <fmt/format.h>

#include "sysfir/analysis.hpp"
#include "sysfir/error.hpp"
#include "sysfir/hdlgen.hpp"
#include "sysfir/sim.hpp"

namespace sysfir {

namespace {

struct NamedVariant {
    std::string name;
    Variant variant;
    BreakSpec breaks;
};

std::vector<std::int64_t> random_stream(std::mt19937_64& rng, std::size_t length, int width)
{
    std::uniform_int_distribution<std::int64_t> dist(static_cast<std::int64_t>(signed_min(width)),
                                                     static_cast<std::int64_t>(signed_max(width)));
    std::vector<std::int64_t> x(length);
    std::generate(x.begin(), x.end(), [&] { return dist(rng); });
    return x;
}

// |I - h 2^(b-1+q)| <= 1/2, evaluated exactly in binary floating point.
bool within_half_ulp(const PlanEntry& e, int bit_width)
{
    const double scaled = std::ldexp(e.h, bit_width - 1 + e.q_clamped);
    const auto integer = static_cast<double>(e.integer);
    return scaled >= integer - 0.5 && scaled <= integer + 0.5;
}

bool matches_oracle(const StructureGraph& graph, std::span<const std::int64_t> x, const WidthConfig& widths,
                    int input_width)
{
    const auto taps = effective_integer_taps(graph);
    const auto expected = convolve(taps, x);
    const auto got = simulate(graph, x, widths, ArithmeticMode::check, input_width).output;
    const std::size_t delay = latency(graph);
    for (std::size_t n = 0; n < x.size(); ++n) {
        const wide_int want = n >= delay ? expected[n - delay] : 0;
        if (got[n] != want) {
            return false;
        }
    }
    return true;
}

std::size_t count_occurrences(const std::string& text, std::string_view needle)
{
    std::size_t count = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + needle.size())) {
        ++count;
    }
    return count;
}

} // namespace

bool ReproduceResult::pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

ReproduceResult reproduce_paper(const ProjectConfig& config, const std::optional<DeviceProfile>& profile,
                                const ReproduceOptions& options)
{
    ReproduceResult result;
    auto check = [&](std::string name, bool pass, json detail) {
        result.checks.push_back({std::move(name), pass, std::move(detail)});
    };
    std::mt19937_64 rng(options.seed);

    // Tap budget.
    FilterSpec spec = config.spec;
    const std::size_t estimate = estimate_taps(spec.a_stop, spec.f_pass, spec.f_stop);
    const std::size_t taps = spec.taps.value_or(estimate + estimate % 2);
    spec.taps = taps;
    json budget{{"estimate", estimate}, {"taps", taps}};
    bool budget_ok = taps % 2 == 0 && taps <= estimate + 1;
    if (profile) {
        budget["dsp_available"] = profile->total_dsp();
        budget_ok = budget_ok && taps / 2 <= profile->total_dsp();
    }
    check("tap_budget", budget_ok, budget);

    const auto design = design_lowpass(spec);
    const auto folded = design.folded();
    double dc_gain = 0.0;
    for (const double v : design.h) {
        dc_gain += v;
    }
    check("design_symmetric", design.symmetric, {{"taps", design.taps()}, {"dc_gain", dc_gain}});
    result.artifacts["coefficients.json"] = format_coefficients_json(design.h);
    result.artifacts["coefficients.txt"] = format_coefficients_text(design.h);

    const auto plain = build_plain_plan(folded, config.bit_width);
    result.artifacts["plan_plain.json"] = json(plain).dump(2) + "\n";

    // Structure variants of the straightforward / partial / full breaks.
    const std::size_t count = folded.size();
    std::size_t partial_at = count / 2;
    if (profile && profile->chain_lengths.size() > 1 && profile->chain_lengths.front() < count) {
        partial_at = profile->chain_lengths.front();
    }
    std::vector<NamedVariant> variants{
        {"straightforward", Variant::min_delay, BreakSpec::none()},
        {"partial_break_z1", Variant::min_delay, count > 1 ? BreakSpec::partial(partial_at) : BreakSpec::none()},
        {"full_break_z1", Variant::min_delay, BreakSpec::full(1)},
        {"full_break_z2", Variant::min_delay, BreakSpec::full(2)},
        {"max_delay", Variant::max_delay, BreakSpec::none()},
    };

    const int input_width = config.input_width;
    const auto random_x = random_stream(rng, options.random_samples, input_width);
    const std::int64_t full_scale = static_cast<std::int64_t>(signed_max(input_width));

    json resources = json::object();
    std::optional<StructureGraph> straightforward;
    for (const auto& v : variants) {
        auto graph = build_structure(plain, v.variant, v.breaks);
        if (profile && v.variant == Variant::min_delay) {
            graph = map_to_device(graph, *profile);
        }
        const auto summary = resource_summary(graph);
        resources[v.name] = json(summary);
        resources[v.name]["latency"] = latency(graph);
        result.artifacts["graph_" + v.name + ".json"] = json(graph).dump(2) + "\n";

        check("dsp_count_" + v.name, summary.dsp_elements == count,
              {{"dsp_elements", summary.dsp_elements}, {"expected", count}});

        const auto oracle_x = random_stream(rng, options.oracle_samples, input_width);
        check("oracle_equivalence_" + v.name, matches_oracle(graph, oracle_x, config.widths, input_width),
              {{"samples", oracle_x.size()}, {"latency", latency(graph)}});

        Simulator sim(graph, config.widths, ArithmeticMode::check, input_width);
        std::size_t flags = sim.run(random_x).diagnostics.overflows.size();
        for (const bool positive : {true, false}) {
            const auto stimulus = worst_case_stimulus(graph, full_scale, positive);
            flags += sim.run(stimulus).diagnostics.overflows.size();
        }
        check("overflow_free_" + v.name, flags == 0,
              {{"random_samples", random_x.size()}, {"adversarial_runs", 2}, {"overflow_events", flags}});

        if (v.name == "straightforward") {
            straightforward = graph;
        }
    }
    result.artifacts["resources.json"] = resources.dump(2) + "\n";

    const auto report = validate_widths(*straightforward, config.widths, input_width);
    result.artifacts["width_report.json"] = json(report).dump(2) + "\n";
    check("width_validation", report.pass, {{"widths", config.widths}, {"minimal", report.minimal}});

    // Precision experiment.
    const auto precision = config.precision_setup();
    const auto cmp = compare_representations(spec, config.bit_width, precision.widths,
                                             {precision.input_width, config.q_limit_mode, config.grid_size});
    result.artifacts["plan_shift.json"] = json(cmp.shift_plan).dump(2) + "\n";
    result.artifacts["comparison.json"] = comparison_to_json(cmp).dump(2) + "\n";
    result.artifacts["comparison.csv"] = comparison_csv(cmp);
    check("simulation_matches_effective_coefficients", cmp.simulation_verified, json::object());

    bool plain_bounded = true;
    for (const auto& e : plain.entries) {
        plain_bounded = plain_bounded && within_half_ulp(e, plain.bit_width);
    }
    bool shift_bounded = true;
    for (const auto& e : cmp.shift_plan.entries) {
        shift_bounded = shift_bounded && within_half_ulp(e, cmp.shift_plan.bit_width);
    }
    check("quantization_bounds", plain_bounded && shift_bounded,
          {{"plain_max_error", cmp.plain_fixed.max_coefficient_error},
           {"shift_max_error", cmp.shift_normalized.max_coefficient_error}});

    const double att_double = cmp.double_precision.stopband_db;
    const double att_shift = cmp.shift_normalized.stopband_db;
    const double att_plain = cmp.plain_fixed.stopband_db;
    check("stopband_ordering", att_double >= att_shift && att_shift > att_plain,
          {{"double_db", att_double}, {"shift_db", att_shift}, {"plain_db", att_plain}, {"margin_db", cmp.margin_db()}});

    const auto shift_graph = build_structure(cmp.shift_plan, Variant::min_delay);
    const auto precision_report = validate_widths(shift_graph, precision.widths, precision.input_width);
    result.artifacts["width_report_precision.json"] = json(precision_report).dump(2) + "\n";
    check("precision_width_validation", precision_report.pass,
          {{"widths", precision.widths}, {"minimal", precision_report.minimal}});

    // (I, d) against (I * 2^d, 0) on one shared stream.
    {
        std::vector<std::int64_t> unshifted;
        int max_shift = 0;
        for (const auto& e : cmp.shift_plan.entries) {
            unshifted.push_back(e.integer << e.shift);
            max_shift = std::max(max_shift, e.shift);
        }
        const auto plain_graph = build_structure(unshifted, Variant::min_delay);
        WidthConfig wide = precision.widths;
        wide.w_d += max_shift;
        const auto x = random_stream(rng, options.oracle_samples, precision.input_width);
        const auto a = simulate(shift_graph, x, wide, ArithmeticMode::wrap, precision.input_width).output;
        const auto b = simulate(plain_graph, x, wide, ArithmeticMode::wrap, precision.input_width).output;
        check("shift_identity", a == b, {{"samples", x.size()}});
    }

    // Structural HDL of the straightforward graph.
    const auto netlist = build_netlist(*straightforward, config.widths, "systolic_fir", input_width);
    const std::string vhdl = emit_hdl(netlist, HdlDialect::vhdl);
    const std::string verilog = emit_hdl(netlist, HdlDialect::verilog);
    result.artifacts["netlist.json"] = json(netlist).dump(2) + "\n";
    result.artifacts["systolic_fir.vhd"] = vhdl;
    result.artifacts["systolic_fir.v"] = verilog;
    const std::size_t constants = count_occurrences(vhdl, "constant COEF_");
    check("netlist_invariants",
          netlist.count(InstanceKind::dsp_element) == count && constants == count && cycles_are_registered(netlist) &&
              vhdl == emit_hdl(netlist, HdlDialect::vhdl),
          {{"dsp_elements", netlist.count(InstanceKind::dsp_element)},
           {"coefficient_constants", constants},
           {"tap_registers", netlist.count(InstanceKind::register_, "tap")}});

    json checks = json::array();
    for (const auto& c : result.checks) {
        checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    }
    json summary{{"pass", result.pass()},
                 {"tap_estimate", estimate},
                 {"taps", taps},
                 {"systolic_elements", count},
                 {"stopband_attenuation_db", {{"double", att_double}, {"shift_normalized", att_shift}, {"plain", att_plain}}},
                 {"shift_minus_plain_db", cmp.margin_db()},
                 {"checks", std::move(checks)}};
    result.artifacts["report.json"] = summary.dump(2) + "\n";
    return result;
}

} // namespace sysfir
