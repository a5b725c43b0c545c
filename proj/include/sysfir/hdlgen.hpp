#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sysfir/structure.hpp"

namespace sysfir {

enum class InstanceKind { dsp_element, register_, shifter };

std::string_view to_string(InstanceKind kind);

/// role: "tap" / "break" for registers, "element" for DSP elements, "shift" for shifters.
struct Instance {
    InstanceKind kind{};
    std::string id;
    std::string role;
    int width{};
    int shift{};
    std::int64_t coefficient{};
    std::vector<std::size_t> delays;

    bool operator==(const Instance&) const = default;
};

/// instance "top" names the entity ports clk / x_in / y_out.
struct Endpoint {
    std::string instance;
    std::string port;

    bool operator==(const Endpoint&) const = default;
};

struct Connection {
    Endpoint source;
    Endpoint sink;
    int width{};

    bool operator==(const Connection&) const = default;
};

struct Netlist {
    std::string name{"systolic_fir"};
    Variant variant{Variant::min_delay};
    std::size_t taps{};
    std::size_t latency{};
    WidthConfig widths;
    std::vector<Instance> instances;
    std::vector<Connection> connections;
    std::vector<std::string> warnings;

    std::size_t count(InstanceKind kind, std::string_view role = {}) const;
    const Instance* find(std::string_view id) const;

    bool operator==(const Netlist&) const = default;
};

/// Width of an instance port, or of an entity port when instance == "top".
int port_width(const Netlist& netlist, const Endpoint& endpoint);

/// One dsp_element per systolic element on a shared tap line. input_width 0
/// validates against w_a. Throws width_mismatch when w_a != w_b.
Netlist build_netlist(const StructureGraph& graph, const WidthConfig& widths, std::string name = "systolic_fir",
                      int input_width = 0);

/// Throws width_mismatch on dangling endpoints, undriven inputs or unequal port widths.
void check_netlist(const Netlist& netlist);

/// True when every cycle in the connection graph passes a register
/// (register d inputs and the registered dsp f input).
bool cycles_are_registered(const Netlist& netlist);

enum class HdlDialect { vhdl, verilog };

HdlDialect parse_dialect(std::string_view text);

/// Deterministic structural text; coefficients as literal constants.
std::string emit_hdl(const Netlist& netlist, HdlDialect dialect);

} // namespace sysfir
