#include "sysfir/hdlgen.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include <fmt/format.h>

#include "sysfir/error.hpp"

namespace sysfir {

namespace {

constexpr std::string_view top = "top";

std::string tap_source_id(std::size_t delay) { return fmt::format("tap_{}", delay); }

Endpoint tap_source(std::size_t delay)
{
    return delay == 0 ? Endpoint{std::string(top), "x_in"} : Endpoint{tap_source_id(delay), "q"};
}

bool is_input_port(const Instance& inst, std::string_view port)
{
    switch (inst.kind) {
    case InstanceKind::register_: return port == "d";
    case InstanceKind::shifter: return port == "a_in" || port == "b_in";
    case InstanceKind::dsp_element: return port == "a" || port == "b" || (port == "f" && inst.role != "head");
    }
    return false;
}

bool is_output_port(const Instance& inst, std::string_view port)
{
    switch (inst.kind) {
    case InstanceKind::register_: return port == "q";
    case InstanceKind::shifter: return port == "a_out" || port == "b_out";
    case InstanceKind::dsp_element: return port == "y";
    }
    return false;
}

std::vector<std::string_view> input_ports(const Instance& inst)
{
    switch (inst.kind) {
    case InstanceKind::register_: return {"d"};
    case InstanceKind::shifter: return {"a_in", "b_in"};
    case InstanceKind::dsp_element:
        if (inst.role == "head") {
            return {"a", "b"};
        }
        return {"a", "b", "f"};
    }
    return {};
}

std::string signal_name(const Endpoint& e)
{
    if (e.instance == top) {
        return e.port;
    }
    return fmt::format("{}_{}", e.instance, e.port);
}

// Minimal two's-complement bit string of value.
std::string twos_complement_bits(std::int64_t value)
{
    int width = 2;
    while (!fits_width(value, width)) {
        ++width;
    }
    std::string bits;
    for (int i = width - 1; i >= 0; --i) {
        bits.push_back(((static_cast<std::uint64_t>(value) >> i) & 1U) ? '1' : '0');
    }
    return bits;
}

std::string verilog_literal(std::int64_t value)
{
    if (value < 0) {
        return fmt::format("-64'sd{}", -static_cast<__int128>(value) == (static_cast<__int128>(1) << 63)
                                           ? std::string("9223372036854775808")
                                           : std::to_string(-value));
    }
    return fmt::format("64'sd{}", value);
}

struct Driven {
    std::map<std::pair<std::string, std::string>, Endpoint> source;

    const Endpoint& of(const std::string& instance, const std::string& port) const
    {
        return source.at({instance, port});
    }
};

Driven drivers(const Netlist& n)
{
    Driven d;
    for (const auto& c : n.connections) {
        d.source[{c.sink.instance, c.sink.port}] = c.source;
    }
    return d;
}

std::string header_comment(const Netlist& n, std::string_view prefix)
{
    return fmt::format("{0} {1}: systolic symmetric FIR, {2} variant, {3} taps, {4} DSP elements, model latency {5}\n"
                       "{0} Generated by sysfir; all registers start at zero.\n",
                       prefix, n.name, n.variant == Variant::min_delay ? "min_delay" : "max_delay", n.taps,
                       n.count(InstanceKind::dsp_element), n.latency);
}

std::string emit_vhdl(const Netlist& n)
{
    const Driven src = drivers(n);
    const auto& w = n.widths;
    std::string out = header_comment(n, "--");
    out += "library ieee;\nuse ieee.std_logic_1164.all;\nuse ieee.numeric_std.all;\n\n";
    out += fmt::format("entity {} is\n  generic (\n", n.name);
    out += fmt::format("    W_A : positive := {};\n    W_B : positive := {};\n    W_C : positive := {};\n"
                       "    W_D : positive := {};\n    W_E : positive := {};\n    W_F : positive := {}\n  );\n",
                       w.w_a, w.w_b, w.w_c, w.w_d, w.w_e, w.w_f);
    out += "  port (\n    clk   : in  std_logic;\n    x_in  : in  signed(W_A - 1 downto 0);\n"
           "    y_out : out signed(W_F - 1 downto 0)\n  );\n";
    out += fmt::format("end entity {};\n\n", n.name);

    out += fmt::format("architecture rtl of {} is\n", n.name);
    out += "  -- Two's-complement residue of v in w bits.\n"
           "  function wrap(v : signed; w : positive) return signed is\n"
           "    variable x : signed(v'length - 1 downto 0) := v;\n"
           "    variable r : signed(w - 1 downto 0);\n"
           "  begin\n"
           "    if v'length >= w then\n"
           "      r := x(w - 1 downto 0);\n"
           "    else\n"
           "      r := resize(x, w);\n"
           "    end if;\n"
           "    return r;\n"
           "  end function wrap;\n\n";

    std::string body;
    std::string clocked;
    std::size_t element = 0;
    for (const auto& inst : n.instances) {
        switch (inst.kind) {
        case InstanceKind::register_: {
            const char* width = inst.role == "tap" ? "W_A" : "W_F";
            out += fmt::format("  signal {}_q : signed({} - 1 downto 0) := (others => '0');\n", inst.id, width);
            clocked += fmt::format("      {}_q <= {};\n", inst.id, signal_name(src.of(inst.id, "d")));
            break;
        }
        case InstanceKind::shifter:
            out += fmt::format("  signal {0}_a_out, {0}_b_out : signed(W_A - 1 downto 0);\n", inst.id);
            body += fmt::format("  {}_a_out <= shift_left({}, {});\n", inst.id, signal_name(src.of(inst.id, "a_in")),
                                inst.shift);
            body += fmt::format("  {}_b_out <= shift_left({}, {});\n", inst.id, signal_name(src.of(inst.id, "b_in")),
                                inst.shift);
            break;
        case InstanceKind::dsp_element: {
            out += fmt::format("  constant COEF_{} : signed(W_D - 1 downto 0) := resize(signed'(\"{}\"), W_D); -- {}\n",
                               element, twos_complement_bits(inst.coefficient), inst.coefficient);
            out += fmt::format("  signal {}_c : signed(W_C - 1 downto 0);\n", inst.id);
            out += fmt::format("  signal {}_e : signed(W_E - 1 downto 0);\n", inst.id);
            out += fmt::format("  signal {}_y : signed(W_F - 1 downto 0);\n", inst.id);
            const std::string a = signal_name(src.of(inst.id, "a"));
            const std::string b = signal_name(src.of(inst.id, "b"));
            body += fmt::format("  {}_c <= wrap({}, W_C) + wrap({}, W_C);\n", inst.id, a, b);
            body += fmt::format("  {0}_e <= wrap({0}_c * COEF_{1}, W_E);\n", inst.id, element);
            if (inst.role == "head") {
                body += fmt::format("  {0}_y <= wrap({0}_e, W_F);\n", inst.id);
            } else {
                out += fmt::format("  signal {}_f : signed(W_F - 1 downto 0) := (others => '0');\n", inst.id);
                body += fmt::format("  {0}_y <= wrap({0}_e, W_F) + {0}_f;\n", inst.id);
                clocked += fmt::format("      {}_f <= {};\n", inst.id, signal_name(src.of(inst.id, "f")));
            }
            ++element;
            break;
        }
        }
    }
    out += "begin\n";
    out += body;
    out += fmt::format("  y_out <= {};\n\n", signal_name(src.of(std::string(top), "y_out")));
    out += "  registers : process (clk)\n  begin\n    if rising_edge(clk) then\n";
    out += clocked;
    out += "    end if;\n  end process registers;\n";
    out += "end architecture rtl;\n";
    return out;
}

std::string emit_verilog(const Netlist& n)
{
    const Driven src = drivers(n);
    const auto& w = n.widths;
    std::string out = header_comment(n, "//");
    out += fmt::format("module {} #(\n", n.name);
    out += fmt::format("    parameter integer W_A = {},\n    parameter integer W_B = {},\n"
                       "    parameter integer W_C = {},\n    parameter integer W_D = {},\n"
                       "    parameter integer W_E = {},\n    parameter integer W_F = {}\n) (\n",
                       w.w_a, w.w_b, w.w_c, w.w_d, w.w_e, w.w_f);
    out += "    input  wire                  clk,\n    input  wire signed [W_A-1:0] x_in,\n"
           "    output wire signed [W_F-1:0] y_out\n);\n\n";

    std::string clocked;
    std::size_t element = 0;
    for (const auto& inst : n.instances) {
        switch (inst.kind) {
        case InstanceKind::register_: {
            const char* width = inst.role == "tap" ? "W_A" : "W_F";
            out += fmt::format("    reg  signed [{}-1:0] {}_q = 0;\n", width, inst.id);
            clocked += fmt::format("        {}_q <= {};\n", inst.id, signal_name(src.of(inst.id, "d")));
            break;
        }
        case InstanceKind::shifter:
            out += fmt::format("    wire signed [W_A-1:0] {}_a_out = {} <<< {};\n", inst.id,
                               signal_name(src.of(inst.id, "a_in")), inst.shift);
            out += fmt::format("    wire signed [W_A-1:0] {}_b_out = {} <<< {};\n", inst.id,
                               signal_name(src.of(inst.id, "b_in")), inst.shift);
            break;
        case InstanceKind::dsp_element:
            out += fmt::format("    localparam signed [W_D-1:0] COEF_{} = {};\n", element,
                               verilog_literal(inst.coefficient));
            out += fmt::format("    wire signed [W_C-1:0] {}_c = {} + {};\n", inst.id,
                               signal_name(src.of(inst.id, "a")), signal_name(src.of(inst.id, "b")));
            out += fmt::format("    wire signed [W_E-1:0] {0}_e = {0}_c * COEF_{1};\n", inst.id, element);
            if (inst.role == "head") {
                out += fmt::format("    wire signed [W_F-1:0] {0}_y = {0}_e;\n", inst.id);
            } else {
                out += fmt::format("    reg  signed [W_F-1:0] {}_f = 0;\n", inst.id);
                out += fmt::format("    wire signed [W_F-1:0] {0}_y = {0}_e + {0}_f;\n", inst.id);
                clocked += fmt::format("        {}_f <= {};\n", inst.id, signal_name(src.of(inst.id, "f")));
            }
            ++element;
            break;
        }
    }
    out += fmt::format("\n    assign y_out = {};\n\n", signal_name(src.of(std::string(top), "y_out")));
    out += "    always @(posedge clk) begin\n";
    out += clocked;
    out += "    end\nendmodule\n";
    return out;
}

} // namespace

std::string_view to_string(InstanceKind kind)
{
    switch (kind) {
    case InstanceKind::dsp_element: return "dsp_element";
    case InstanceKind::register_: return "register";
    case InstanceKind::shifter: return "shifter";
    }
    return "unknown";
}

std::size_t Netlist::count(InstanceKind kind, std::string_view role) const
{
    return static_cast<std::size_t>(std::count_if(instances.begin(), instances.end(), [&](const Instance& i) {
        return i.kind == kind && (role.empty() || i.role == role);
    }));
}

const Instance* Netlist::find(std::string_view id) const
{
    const auto it = std::find_if(instances.begin(), instances.end(), [&](const Instance& i) { return i.id == id; });
    return it == instances.end() ? nullptr : &*it;
}

int port_width(const Netlist& netlist, const Endpoint& endpoint)
{
    const auto& w = netlist.widths;
    if (endpoint.instance == top) {
        if (endpoint.port == "x_in") {
            return w.w_a;
        }
        if (endpoint.port == "y_out") {
            return w.w_f;
        }
        throw Error(ErrorCode::width_mismatch, "unknown entity port " + endpoint.port);
    }
    const Instance* inst = netlist.find(endpoint.instance);
    if (inst == nullptr) {
        throw Error(ErrorCode::width_mismatch, "connection names missing instance " + endpoint.instance);
    }
    if (!is_input_port(*inst, endpoint.port) && !is_output_port(*inst, endpoint.port)) {
        throw Error(ErrorCode::width_mismatch, "instance " + inst->id + " has no port " + endpoint.port);
    }
    switch (inst->kind) {
    case InstanceKind::register_:
    case InstanceKind::shifter: return inst->width;
    case InstanceKind::dsp_element:
        if (endpoint.port == "a") {
            return w.w_a;
        }
        if (endpoint.port == "b") {
            return w.w_b;
        }
        return w.w_f;
    }
    return 0;
}

Netlist build_netlist(const StructureGraph& graph, const WidthConfig& widths, std::string name, int input_width)
{
    check_graph(graph);
    widths.validate();
    if (widths.w_a != widths.w_b) {
        throw Error(ErrorCode::width_mismatch, "a shared tap line needs w_a == w_b (got " + std::to_string(widths.w_a) +
                                                   ", " + std::to_string(widths.w_b) + ")");
    }

    Netlist n;
    n.name = std::move(name);
    n.variant = graph.variant;
    n.taps = graph.taps;
    n.latency = latency(graph);
    n.widths = widths;

    const auto report = validate_widths(graph, widths, input_width == 0 ? widths.w_a : input_width);
    if (!report.pass) {
        n.warnings.push_back(fmt::format("width validation failed at {} node(s)", report.failures().size()));
    }

    auto connect = [&](Endpoint source, Endpoint sink, int width) {
        n.connections.push_back({std::move(source), std::move(sink), width});
    };

    const std::size_t depth = graph.max_tap_delay();
    for (std::size_t t = 1; t <= depth; ++t) {
        n.instances.push_back({InstanceKind::register_, tap_source_id(t), "tap", widths.w_a, 0, 0, {t}});
        connect(tap_source(t - 1), {tap_source_id(t), "d"}, widths.w_a);
    }

    std::string previous;
    for (std::size_t k = 0; k < graph.elements.size(); ++k) {
        const auto& e = graph.elements[k];
        const std::string dsp = fmt::format("dsp_{}", k);
        Endpoint a = tap_source(e.tap_delay_a);
        Endpoint b = tap_source(e.tap_delay_b);
        if (e.input_shift > 0) {
            const std::string shl = fmt::format("shl_{}", k);
            n.instances.push_back({InstanceKind::shifter, shl, "shift", widths.w_a, e.input_shift, 0, {}});
            connect(a, {shl, "a_in"}, widths.w_a);
            connect(b, {shl, "b_in"}, widths.w_a);
            a = {shl, "a_out"};
            b = {shl, "b_out"};
        }
        if (k > 0) {
            Endpoint acc{previous, "y"};
            for (std::size_t r = 1; r < e.accumulate_registers; ++r) {
                const std::string brk = fmt::format("brk_{}_{}", k, r);
                n.instances.push_back({InstanceKind::register_, brk, "break", widths.w_f, 0, 0, {r}});
                connect(acc, {brk, "d"}, widths.w_f);
                acc = {brk, "q"};
            }
            connect(acc, {dsp, "f"}, widths.w_f);
        }
        n.instances.push_back({InstanceKind::dsp_element, dsp, k == 0 ? "head" : "element", widths.w_f,
                               e.input_shift, e.coefficient,
                               {e.coeff_index, e.tap_delay_a, e.tap_delay_b, e.accumulate_registers}});
        connect(a, {dsp, "a"}, widths.w_a);
        connect(b, {dsp, "b"}, widths.w_b);
        previous = dsp;
    }
    connect({previous, "y"}, {std::string(top), "y_out"}, widths.w_f);

    check_netlist(n);
    return n;
}

void check_netlist(const Netlist& netlist)
{
    std::set<std::string> ids;
    for (const auto& inst : netlist.instances) {
        if (inst.id == top || !ids.insert(inst.id).second) {
            throw Error(ErrorCode::width_mismatch, "duplicate or reserved instance id " + inst.id);
        }
    }
    std::set<std::pair<std::string, std::string>> driven;
    for (const auto& c : netlist.connections) {
        const int src = port_width(netlist, c.source);
        const int dst = port_width(netlist, c.sink);
        if (src != dst || src != c.width) {
            throw Error(ErrorCode::width_mismatch, fmt::format("width mismatch {}.{} ({}) -> {}.{} ({})",
                                                               c.source.instance, c.source.port, src, c.sink.instance,
                                                               c.sink.port, dst));
        }
        const bool source_ok = c.source.instance == top ? c.source.port == "x_in"
                                                        : is_output_port(*netlist.find(c.source.instance), c.source.port);
        const bool sink_ok = c.sink.instance == top ? c.sink.port == "y_out"
                                                    : is_input_port(*netlist.find(c.sink.instance), c.sink.port);
        if (!source_ok || !sink_ok) {
            throw Error(ErrorCode::width_mismatch, "connection direction invalid at " + c.source.instance + " -> " +
                                                       c.sink.instance);
        }
        if (!driven.insert({c.sink.instance, c.sink.port}).second) {
            throw Error(ErrorCode::width_mismatch, "multiple drivers on " + c.sink.instance + "." + c.sink.port);
        }
    }
    for (const auto& inst : netlist.instances) {
        for (const auto port : input_ports(inst)) {
            if (!driven.contains({inst.id, std::string(port)})) {
                throw Error(ErrorCode::width_mismatch, "undriven input " + inst.id + "." + std::string(port));
            }
        }
    }
    if (!driven.contains({std::string(top), "y_out"})) {
        throw Error(ErrorCode::width_mismatch, "entity output y_out is undriven");
    }
}

bool cycles_are_registered(const Netlist& netlist)
{
    // Kahn's algorithm over combinational edges only.
    std::map<std::string, std::vector<std::string>> edges;
    std::map<std::string, std::size_t> indegree;
    for (const auto& inst : netlist.instances) {
        indegree[inst.id];
    }
    for (const auto& c : netlist.connections) {
        if (c.source.instance == top || c.sink.instance == top) {
            continue;
        }
        const Instance* sink = netlist.find(c.sink.instance);
        const bool registered =
            sink->kind == InstanceKind::register_ || (sink->kind == InstanceKind::dsp_element && c.sink.port == "f");
        if (!registered) {
            edges[c.source.instance].push_back(c.sink.instance);
            ++indegree[c.sink.instance];
        }
    }
    std::queue<std::string> ready;
    for (const auto& [id, deg] : indegree) {
        if (deg == 0) {
            ready.push(id);
        }
    }
    std::size_t visited = 0;
    while (!ready.empty()) {
        const std::string id = ready.front();
        ready.pop();
        ++visited;
        for (const auto& next : edges[id]) {
            if (--indegree[next] == 0) {
                ready.push(next);
            }
        }
    }
    return visited == indegree.size();
}

HdlDialect parse_dialect(std::string_view text)
{
    if (text == "vhdl") {
        return HdlDialect::vhdl;
    }
    if (text == "verilog") {
        return HdlDialect::verilog;
    }
    throw Error(ErrorCode::unsupported_dialect, "unsupported HDL dialect '" + std::string(text) + "'");
}

std::string emit_hdl(const Netlist& netlist, HdlDialect dialect)
{
    check_netlist(netlist);
    switch (dialect) {
    case HdlDialect::vhdl: return emit_vhdl(netlist);
    case HdlDialect::verilog: return emit_verilog(netlist);
    }
    throw Error(ErrorCode::unsupported_dialect, "unsupported HDL dialect");
}

} // namespace sysfir
