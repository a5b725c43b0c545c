#include "sysfir/cli.hpp"

#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "sysfir/analysis.hpp"
#include "sysfir/config.hpp"
#include "sysfir/error.hpp"
#include "sysfir/hdlgen.hpp"
#include "sysfir/io.hpp"
#include "sysfir/reproduce.hpp"
#include "sysfir/sim.hpp"

namespace sysfir::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
    std::string command;
    std::string config;
    std::string input;
    std::string output;
    std::string graph;
    std::string mode{"check"};
    std::string dialect{"vhdl"};
    std::string name{"systolic_fir"};
    std::size_t grid{0};
    bool binary{false};
};

std::shared_ptr<spdlog::logger> logger()
{
    static auto log = [] {
        auto l = spdlog::stderr_color_mt("sysfir");
        const char* level = std::getenv("SYSFIR_LOG");
        l->set_level(level != nullptr ? spdlog::level::from_str(level) : spdlog::level::warn);
        return l;
    }();
    return log;
}

int exit_code_for(ErrorCode code)
{
    switch (code) {
    case ErrorCode::config_invalid:
    case ErrorCode::parse_error: return config_invalid;
    case ErrorCode::file_io: return file_io;
    default: return module_error;
    }
}

void report_error(std::ostream& err, std::string_view code, const std::string& message, int exit)
{
    err << json{{"error", code}, {"message", message}, {"exit_code", exit}}.dump() << "\n";
}

ProjectConfig require_config(const Options& o)
{
    if (o.config.empty()) {
        throw Error(ErrorCode::config_invalid, "--config is required for '" + o.command + "'");
    }
    auto config = load_config(o.config);
    if (o.grid != 0) {
        config.grid_size = o.grid;
    }
    return config;
}

std::optional<DeviceProfile> load_profile(const ProjectConfig& c)
{
    if (!c.device_profile) {
        return std::nullopt;
    }
    try {
        return json::parse(read_file(*c.device_profile)).get<DeviceProfile>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::config_invalid, std::string("device profile: ") + e.what());
    }
}

FilterSpec spec_with_taps(const ProjectConfig& c)
{
    FilterSpec spec = c.spec;
    if (!spec.taps) {
        const std::size_t estimate = estimate_taps(spec.a_stop, spec.f_pass, spec.f_stop);
        spec.taps = estimate + estimate % 2;
        logger()->info("estimated {} taps, using {}", estimate, *spec.taps);
    }
    return spec;
}

CoefficientSet coefficients(const ProjectConfig& c)
{
    if (c.coefficients) {
        return CoefficientSet::from_values(parse_coefficients(read_file(*c.coefficients)));
    }
    return design_lowpass(spec_with_taps(c));
}

QuantizationPlan plan_for(const ProjectConfig& c, const CoefficientSet& set)
{
    const auto folded = set.folded();
    if (c.shift_normalization) {
        return build_shift_plan(folded, c.bit_width, c.input_width, c.widths.w_c, c.q_limit_mode);
    }
    return build_plain_plan(folded, c.bit_width);
}

StructureGraph graph_for(const ProjectConfig& c)
{
    auto graph = build_structure(plan_for(c, coefficients(c)), c.variant, c.breaks);
    if (const auto profile = load_profile(c)) {
        graph = map_to_device(graph, *profile);
    }
    return graph;
}

StructureGraph graph_from(const Options& o, const std::optional<ProjectConfig>& c)
{
    if (!o.graph.empty()) {
        try {
            return json::parse(read_file(o.graph)).get<StructureGraph>();
        } catch (const json::exception& e) {
            throw Error(ErrorCode::parse_error, std::string("graph file: ") + e.what());
        }
    }
    return graph_for(*c);
}

fs::path output_dir(const Options& o) { return o.output.empty() ? fs::path("out") : fs::path(o.output); }

void write(const Options& o, const std::string& name, const std::string& content, std::ostream& out)
{
    const auto path = output_dir(o) / name;
    write_file(path, content);
    out << path.string() << "\n";
}

int cmd_design(const Options& o, std::ostream& out)
{
    const auto c = require_config(o);
    const auto set = coefficients(c);
    write(o, "coefficients.json", format_coefficients_json(set.h), out);
    write(o, "coefficients.txt", format_coefficients_text(set.h), out);
    return ok;
}

int cmd_quantize(const Options& o, std::ostream& out)
{
    const auto c = require_config(o);
    write(o, "plan.json", json(plan_for(c, coefficients(c))).dump(2) + "\n", out);
    return ok;
}

int cmd_build(const Options& o, std::ostream& out)
{
    const auto c = require_config(o);
    const auto graph = graph_for(c);
    write(o, "graph.json", json(graph).dump(2) + "\n", out);
    json summary = resource_summary(graph);
    summary["latency"] = latency(graph);
    write(o, "resources.json", summary.dump(2) + "\n", out);
    return ok;
}

int cmd_simulate(const Options& o, std::istream& in, std::ostream& out, std::ostream& err)
{
    const std::optional<ProjectConfig> c = require_config(o);
    const auto graph = graph_from(o, c);
    const std::string raw = o.input.empty() || o.input == "-" ? read_stream(in) : read_file(o.input);
    const auto samples = o.binary ? parse_samples_binary(raw) : parse_samples(raw);

    Simulator sim(graph, c->widths, parse_arithmetic_mode(o.mode), c->input_width);
    const auto result = sim.run(samples);

    std::string diagnostics;
    for (const auto& e : result.diagnostics.overflows) {
        diagnostics += json(e).dump() + "\n";
    }
    const std::string stream =
        o.binary ? format_samples_binary(result.output) : format_samples_text(result.output);
    if (o.output.empty()) {
        out << stream;
        err << diagnostics;
    } else {
        write(o, o.binary ? "output.bin" : "output.txt", stream, err);
        write(o, "diagnostics.jsonl", diagnostics, err);
    }
    logger()->info("simulated {} samples, {} overflow events", samples.size(), result.diagnostics.overflows.size());
    return ok;
}

int cmd_analyze(const Options& o, std::ostream& out)
{
    const auto c = require_config(o);
    const auto set = coefficients(c);
    const auto plan = plan_for(c, set);
    const auto effective = effective_coefficients(plan);
    const auto response = frequency_response(effective, c.grid_size);
    const auto reference = frequency_response(set.h, c.grid_size);

    json metrics{{"taps", set.taps()},
                 {"representation", c.shift_normalization ? "shift_normalized" : "plain_fixed"},
                 {"grid_size", c.grid_size},
                 {"stopband_attenuation_db", stopband_attenuation(response, c.spec.f_stop)},
                 {"passband_ripple_db", passband_ripple(response, c.spec.f_pass)},
                 {"double_stopband_attenuation_db", stopband_attenuation(reference, c.spec.f_stop)},
                 {"dc_gain", response.reference_gain}};
    write(o, "frequency.csv", frequency_csv(response), out);
    write(o, "metrics.json", metrics.dump(2) + "\n", out);
    return ok;
}

int cmd_compare(const Options& o, std::ostream& out)
{
    const auto c = require_config(o);
    const auto p = c.precision_setup();
    FilterSpec spec = spec_with_taps(c);
    const auto report = compare_representations(spec, c.bit_width, p.widths, {p.input_width, c.q_limit_mode, c.grid_size});
    write(o, "comparison.csv", comparison_csv(report), out);
    write(o, "comparison.json", comparison_to_json(report).dump(2) + "\n", out);
    return ok;
}

int cmd_emit_hdl(const Options& o, std::ostream& out)
{
    const auto c = require_config(o);
    const auto dialect = parse_dialect(o.dialect);
    const auto graph = graph_from(o, c);
    const auto netlist = build_netlist(graph, c.widths, o.name, c.input_width);
    for (const auto& w : netlist.warnings) {
        logger()->warn("{}", w);
    }
    write(o, "netlist.json", json(netlist).dump(2) + "\n", out);
    write(o, o.name + (dialect == HdlDialect::vhdl ? ".vhd" : ".v"), emit_hdl(netlist, dialect), out);
    return ok;
}

int cmd_validate(const Options& o, std::ostream& out)
{
    const auto c = require_config(o);
    const auto graph = graph_from(o, c);
    const auto report = validate_widths(graph, c.widths, c.input_width);
    write(o, "width_report.json", json(report).dump(2) + "\n", out);
    return report.pass ? ok : check_failed;
}

int cmd_reproduce(const Options& o, std::ostream& out)
{
    const auto c = require_config(o);
    const auto result = reproduce_paper(c, load_profile(c));
    for (const auto& [name, content] : result.artifacts) {
        write(o, name, content, out);
    }
    for (const auto& check : result.checks) {
        logger()->info("{} {}", check.pass ? "PASS" : "FAIL", check.name);
    }
    return result.pass() ? ok : check_failed;
}

} // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Systolic FIR structure compiler and bit-exact simulator", "sysfir"};
    app.require_subcommand(1, 1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "project config (JSON)");
        sub->add_option("--output", o.output, "output directory");
        sub->add_option("--grid", o.grid, "frequency grid size");
    };
    const std::vector<std::pair<std::string, std::string>> commands{
        {"design", "write designed coefficients"},
        {"quantize", "write the quantization plan"},
        {"build", "write the structure graph"},
        {"simulate", "stream samples through the structure"},
        {"analyze", "frequency response and metrics"},
        {"compare", "double / plain / shift-normalized comparison"},
        {"emit-hdl", "write netlist and HDL"},
        {"validate", "worst-case width report"},
        {"reproduce-paper", "end-to-end reference pipeline"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        add_common(sub);
        if (name == "simulate" || name == "emit-hdl" || name == "validate") {
            sub->add_option("--graph", o.graph, "structure graph JSON instead of building from the config");
        }
        if (name == "simulate") {
            sub->add_option("--input", o.input, "sample stream path or - for stdin");
            sub->add_option("--mode", o.mode, "check | wrap")->check(CLI::IsMember({"check", "wrap"}));
            sub->add_flag("--binary", o.binary, "little-endian int64 frames instead of text");
        }
        if (name == "emit-hdl") {
            sub->add_option("--dialect", o.dialect, "vhdl | verilog");
            sub->add_option("--name", o.name, "top-level unit name");
        }
        sub->callback([&o, name = name] { o.command = name; });
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        report_error(err, "usage", e.what(), usage);
        return usage;
    }

    try {
        if (o.command == "design") return cmd_design(o, out);
        if (o.command == "quantize") return cmd_quantize(o, out);
        if (o.command == "build") return cmd_build(o, out);
        if (o.command == "simulate") return cmd_simulate(o, in, out, err);
        if (o.command == "analyze") return cmd_analyze(o, out);
        if (o.command == "compare") return cmd_compare(o, out);
        if (o.command == "emit-hdl") return cmd_emit_hdl(o, out);
        if (o.command == "validate") return cmd_validate(o, out);
        if (o.command == "reproduce-paper") return cmd_reproduce(o, out);
    } catch (const Error& e) {
        const int code = exit_code_for(e.code());
        report_error(err, to_string(e.code()), e.what(), code);
        return code;
    } catch (const std::exception& e) {
        report_error(err, "internal", e.what(), module_error);
        return module_error;
    }
    report_error(err, "usage", "unknown subcommand", usage);
    return usage;
}

} // namespace sysfir::cli
