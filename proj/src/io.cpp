#include "sysfir/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "sysfir/error.hpp"

namespace sysfir {

namespace {

template <typename T>
T required(const json& j, const char* key)
{
    if (!j.contains(key)) {
        throw Error(ErrorCode::config_invalid, std::string("missing field '") + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::config_invalid, std::string("field '") + key + "': " + e.what());
    }
}

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

bool looks_like_json_array(const std::string& text)
{
    const auto t = trim(text);
    return !t.empty() && t.front() == '[';
}

json parse_json(const std::string& text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::parse_error, std::string("malformed JSON: ") + e.what());
    }
}

template <typename T, typename Parse>
std::vector<T> parse_lines(const std::string& text, Parse parse)
{
    std::vector<T> values;
    std::istringstream in(text);
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        // '#' starts a comment anywhere on the line.
        const auto t = trim(std::string_view(line).substr(0, line.find('#')));
        if (t.empty()) {
            continue;
        }
        try {
            values.push_back(parse(t));
        } catch (const Error&) {
            throw Error(ErrorCode::parse_error, "line " + std::to_string(number) + ": cannot parse '" +
                                                    std::string(t) + "'");
        }
    }
    return values;
}

double parse_double(std::string_view t)
{
    std::string copy(t);
    char* end = nullptr;
    const double value = std::strtod(copy.c_str(), &end);
    if (end != copy.c_str() + copy.size()) {
        throw Error(ErrorCode::parse_error, "bad real");
    }
    return value;
}

std::int64_t parse_int(std::string_view t)
{
    if (!t.empty() && t.front() == '+') {
        t.remove_prefix(1);
    }
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size()) {
        throw Error(ErrorCode::parse_error, "bad integer");
    }
    return value;
}

} // namespace

std::string_view to_string(Variant variant) { return variant == Variant::min_delay ? "min_delay" : "max_delay"; }

Variant parse_variant(std::string_view text)
{
    if (text == "min_delay") {
        return Variant::min_delay;
    }
    if (text == "max_delay") {
        return Variant::max_delay;
    }
    throw Error(ErrorCode::config_invalid, "unknown variant '" + std::string(text) + "'");
}

std::string_view to_string(WindowKind kind) { return kind == WindowKind::nuttall ? "nuttall" : "rectangular"; }

WindowKind parse_window(std::string_view text)
{
    if (text == "nuttall") {
        return WindowKind::nuttall;
    }
    if (text == "rectangular") {
        return WindowKind::rectangular;
    }
    throw Error(ErrorCode::config_invalid, "unknown window '" + std::string(text) + "'");
}

std::string_view to_string(CutoffPlacement placement)
{
    return placement == CutoffPlacement::passband_edge ? "passband_edge" : "band_center";
}

CutoffPlacement parse_cutoff(std::string_view text)
{
    if (text == "passband_edge") {
        return CutoffPlacement::passband_edge;
    }
    if (text == "band_center") {
        return CutoffPlacement::band_center;
    }
    throw Error(ErrorCode::config_invalid, "unknown cutoff placement '" + std::string(text) + "'");
}

std::string_view to_string(QLimitMode mode) { return mode == QLimitMode::safe ? "safe" : "paper_faithful"; }

QLimitMode parse_q_limit_mode(std::string_view text)
{
    if (text == "safe") {
        return QLimitMode::safe;
    }
    if (text == "paper_faithful") {
        return QLimitMode::paper_faithful;
    }
    throw Error(ErrorCode::config_invalid, "unknown q_limit_mode '" + std::string(text) + "'");
}

ArithmeticMode parse_arithmetic_mode(std::string_view text)
{
    if (text == "check") {
        return ArithmeticMode::check;
    }
    if (text == "wrap") {
        return ArithmeticMode::wrap;
    }
    throw Error(ErrorCode::config_invalid, "unknown arithmetic mode '" + std::string(text) + "'");
}

void to_json(json& j, const FilterSpec& spec)
{
    j = json{{"f_pass", spec.f_pass}, {"f_stop", spec.f_stop}, {"a_stop", spec.a_stop}};
    if (spec.taps) {
        j["taps"] = *spec.taps;
    }
    j["window"] = to_string(spec.window);
    j["cutoff"] = to_string(spec.cutoff);
}

void from_json(const json& j, FilterSpec& spec)
{
    spec.f_pass = required<double>(j, "f_pass");
    spec.f_stop = required<double>(j, "f_stop");
    spec.a_stop = required<double>(j, "a_stop");
    spec.taps.reset();
    if (j.contains("taps") && !j.at("taps").is_null()) {
        spec.taps = required<std::size_t>(j, "taps");
    }
    spec.window = parse_window(j.value("window", std::string("nuttall")));
    spec.cutoff = parse_cutoff(j.value("cutoff", std::string("passband_edge")));
}

void to_json(json& j, const WidthConfig& w)
{
    j = json{{"w_a", w.w_a}, {"w_b", w.w_b}, {"w_c", w.w_c}, {"w_d", w.w_d}, {"w_e", w.w_e}, {"w_f", w.w_f}};
}

void from_json(const json& j, WidthConfig& w)
{
    if (j.is_array()) {
        if (j.size() != 6) {
            throw Error(ErrorCode::config_invalid, "width vector needs six entries (W_A..W_F)");
        }
        w = {j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>(), j[4].get<int>(), j[5].get<int>()};
        return;
    }
    w.w_a = required<int>(j, "w_a");
    w.w_b = required<int>(j, "w_b");
    w.w_c = required<int>(j, "w_c");
    w.w_d = required<int>(j, "w_d");
    w.w_e = required<int>(j, "w_e");
    w.w_f = required<int>(j, "w_f");
}

void to_json(json& j, const BreakSpec& b)
{
    switch (b.kind) {
    case BreakSpec::Kind::none: j = json{{"kind", "none"}}; break;
    case BreakSpec::Kind::partial: j = json{{"kind", "partial"}, {"position", b.position}}; break;
    case BreakSpec::Kind::full: j = json{{"kind", "full"}, {"stride", b.stride}}; break;
    case BreakSpec::Kind::explicit_counts: j = json{{"kind", "explicit"}, {"counts", b.counts}}; break;
    }
}

void from_json(const json& j, BreakSpec& b)
{
    const auto kind = required<std::string>(j, "kind");
    if (kind == "none") {
        b = BreakSpec::none();
    } else if (kind == "partial") {
        b = BreakSpec::partial(required<std::size_t>(j, "position"));
    } else if (kind == "full") {
        b = BreakSpec::full(required<std::size_t>(j, "stride"));
    } else if (kind == "explicit") {
        b = BreakSpec::explicit_counts(required<std::vector<std::size_t>>(j, "counts"));
    } else {
        throw Error(ErrorCode::config_invalid, "unknown break kind '" + kind + "'");
    }
}

void to_json(json& j, const DeviceProfile& p) { j = json{{"name", p.name}, {"chain_lengths", p.chain_lengths}}; }

void from_json(const json& j, DeviceProfile& p)
{
    p.name = required<std::string>(j, "name");
    p.chain_lengths = required<std::vector<std::size_t>>(j, "chain_lengths");
    p.validate();
}

void to_json(json& j, const QuantizationPlan& plan)
{
    json entries = json::array();
    for (const auto& e : plan.entries) {
        entries.push_back(
            {{"h", e.h}, {"I", e.integer}, {"Q_raw", e.q_raw}, {"Q_clamped", e.q_clamped}, {"d", e.shift}});
    }
    j = json{{"b", plan.bit_width},
             {"q_limit", plan.q_limit},
             {"common_base", plan.common_base},
             {"entries", std::move(entries)}};
}

void from_json(const json& j, QuantizationPlan& plan)
{
    plan.bit_width = required<int>(j, "b");
    plan.q_limit = required<int>(j, "q_limit");
    plan.common_base = required<int>(j, "common_base");
    plan.entries.clear();
    for (const auto& e : required<json>(j, "entries")) {
        plan.entries.push_back({required<double>(e, "h"), required<std::int64_t>(e, "I"), required<int>(e, "Q_raw"),
                                required<int>(e, "Q_clamped"), required<int>(e, "d")});
    }
}

void to_json(json& j, const StructureGraph& g)
{
    json elements = json::array();
    for (const auto& e : g.elements) {
        elements.push_back({{"coeff_index", e.coeff_index},
                            {"I", e.coefficient},
                            {"d", e.input_shift},
                            {"tap_delay_a", e.tap_delay_a},
                            {"tap_delay_b", e.tap_delay_b},
                            {"accumulate_registers", e.accumulate_registers}});
    }
    j = json{{"variant", to_string(g.variant)},
             {"taps", g.taps},
             {"elements", std::move(elements)},
             {"latency", g.model_latency}};
}

void from_json(const json& j, StructureGraph& g)
{
    g.variant = parse_variant(required<std::string>(j, "variant"));
    g.taps = required<std::size_t>(j, "taps");
    g.model_latency = required<std::size_t>(j, "latency");
    g.elements.clear();
    for (const auto& e : required<json>(j, "elements")) {
        SystolicElement el;
        el.coeff_index = required<std::size_t>(e, "coeff_index");
        el.coefficient = required<std::int64_t>(e, "I");
        el.input_shift = required<int>(e, "d");
        el.tap_delay_a = required<std::size_t>(e, "tap_delay_a");
        el.tap_delay_b = required<std::size_t>(e, "tap_delay_b");
        el.accumulate_registers = required<std::size_t>(e, "accumulate_registers");
        g.elements.push_back(el);
    }
    check_graph(g);
}

void to_json(json& j, const ResourceSummary& s)
{
    j = json{{"dsp_elements", s.dsp_elements},
             {"injected_registers", s.injected_registers},
             {"tap_line_registers", s.tap_line_registers},
             {"shifters", s.shifters}};
}

json wide_to_json(wide_int value)
{
    if (fits_width(value, 64)) {
        return static_cast<std::int64_t>(value);
    }
    return to_string(value);
}

void to_json(json& j, const WidthReport& r)
{
    json failures = json::array();
    for (const auto& n : r.failures()) {
        failures.push_back({{"element", n.element},
                            {"node", to_string(n.node)},
                            {"min", wide_to_json(n.min)},
                            {"max", wide_to_json(n.max)},
                            {"width", n.width},
                            {"required_width", n.required_width}});
    }
    // Per-kind worst case over all elements.
    json worst = json::object();
    for (const auto kind : {NodeKind::port_a, NodeKind::port_b, NodeKind::coefficient, NodeKind::pre_adder,
                            NodeKind::multiplier, NodeKind::accumulator}) {
        const NodeBound* peak = nullptr;
        for (const auto& n : r.nodes) {
            if (n.node == kind && (peak == nullptr || n.required_width > peak->required_width)) {
                peak = &n;
            }
        }
        if (peak != nullptr) {
            worst[std::string(to_string(kind))] = {{"element", peak->element},
                                                   {"min", wide_to_json(peak->min)},
                                                   {"max", wide_to_json(peak->max)},
                                                   {"width", peak->width},
                                                   {"required_width", peak->required_width}};
        }
    }
    j = json{{"pass", r.pass},
             {"input_width", r.input_width},
             {"minimal_widths", r.minimal},
             {"worst_case", std::move(worst)},
             {"failures", std::move(failures)}};
}

void to_json(json& j, const OverflowEvent& e)
{
    j = json{{"cycle", e.cycle},
             {"element", e.element},
             {"node", to_string(e.node)},
             {"value", wide_to_json(e.value)},
             {"width", e.width}};
}

void to_json(json& j, const Netlist& n)
{
    json instances = json::array();
    for (const auto& i : n.instances) {
        instances.push_back({{"kind", to_string(i.kind)},
                             {"id", i.id},
                             {"role", i.role},
                             {"parameters",
                              {{"width", i.width}, {"shift", i.shift}, {"coefficient", i.coefficient}, {"delays", i.delays}}}});
    }
    json connections = json::array();
    for (const auto& c : n.connections) {
        connections.push_back({{"source", {c.source.instance, c.source.port}},
                               {"sink", {c.sink.instance, c.sink.port}},
                               {"width", c.width}});
    }
    j = json{{"name", n.name},
             {"variant", to_string(n.variant)},
             {"taps", n.taps},
             {"latency", n.latency},
             {"widths", n.widths},
             {"ports", {{"clk", 1}, {"x_in", n.widths.w_a}, {"y_out", n.widths.w_f}}},
             {"instances", std::move(instances)},
             {"connections", std::move(connections)},
             {"warnings", n.warnings}};
}

void from_json(const json& j, Netlist& n)
{
    n.name = required<std::string>(j, "name");
    n.variant = parse_variant(required<std::string>(j, "variant"));
    n.taps = required<std::size_t>(j, "taps");
    n.latency = required<std::size_t>(j, "latency");
    n.widths = required<WidthConfig>(j, "widths");
    n.instances.clear();
    for (const auto& i : required<json>(j, "instances")) {
        Instance inst;
        const auto kind = required<std::string>(i, "kind");
        if (kind == "dsp_element") {
            inst.kind = InstanceKind::dsp_element;
        } else if (kind == "register") {
            inst.kind = InstanceKind::register_;
        } else if (kind == "shifter") {
            inst.kind = InstanceKind::shifter;
        } else {
            throw Error(ErrorCode::parse_error, "unknown instance kind '" + kind + "'");
        }
        inst.id = required<std::string>(i, "id");
        inst.role = required<std::string>(i, "role");
        const auto& p = required<json>(i, "parameters");
        inst.width = required<int>(p, "width");
        inst.shift = required<int>(p, "shift");
        inst.coefficient = required<std::int64_t>(p, "coefficient");
        inst.delays = required<std::vector<std::size_t>>(p, "delays");
        n.instances.push_back(std::move(inst));
    }
    n.connections.clear();
    for (const auto& c : required<json>(j, "connections")) {
        const auto src = required<std::vector<std::string>>(c, "source");
        const auto dst = required<std::vector<std::string>>(c, "sink");
        if (src.size() != 2 || dst.size() != 2) {
            throw Error(ErrorCode::parse_error, "connection endpoints are [instance, port] pairs");
        }
        n.connections.push_back({{src[0], src[1]}, {dst[0], dst[1]}, required<int>(c, "width")});
    }
    n.warnings = j.value("warnings", std::vector<std::string>{});
}

json comparison_to_json(const ComparisonReport& r)
{
    auto representation = [](const RepresentationResult& rep) {
        return json{{"stopband_attenuation_db", rep.stopband_db},
                    {"passband_ripple_db", rep.ripple_db},
                    {"max_coefficient_error", rep.max_coefficient_error}};
    };
    return json{{"spec", r.spec},
                {"bit_width", r.bit_width},
                {"taps", r.taps},
                {"systolic_elements", r.systolic_elements},
                {"grid_size", r.double_precision.response.grid.size()},
                {"simulation_verified", r.simulation_verified},
                {"double_precision", representation(r.double_precision)},
                {"plain_fixed", representation(r.plain_fixed)},
                {"shift_normalized", representation(r.shift_normalized)},
                {"shift_minus_plain_db", r.margin_db()},
                {"shift_plan_q_limit", r.shift_plan.q_limit},
                {"shift_plan_common_base", r.shift_plan.common_base}};
}

std::string frequency_csv(const FrequencyResponse& response)
{
    const auto db = response.magnitude_db();
    std::string out = "freq,mag_db,phase_rad\n";
    for (std::size_t i = 0; i < response.grid.size(); ++i) {
        out += fmt::format("{},{},{}\n", response.grid[i], db[i], std::arg(response.values[i]));
    }
    return out;
}

std::string comparison_csv(const ComparisonReport& r)
{
    const auto d = r.double_precision.response.magnitude_db();
    const auto p = r.plain_fixed.response.magnitude_db();
    const auto s = r.shift_normalized.response.magnitude_db();
    std::string out = "freq,double_db,plain_db,shift_db\n";
    for (std::size_t i = 0; i < d.size(); ++i) {
        out += fmt::format("{},{},{},{}\n", r.double_precision.response.grid[i], d[i], p[i], s[i]);
    }
    return out;
}

std::vector<double> parse_coefficients(const std::string& text)
{
    if (looks_like_json_array(text)) {
        const json j = parse_json(text);
        try {
            return j.get<std::vector<double>>();
        } catch (const json::exception& e) {
            throw Error(ErrorCode::parse_error, std::string("coefficient array: ") + e.what());
        }
    }
    return parse_lines<double>(text, parse_double);
}

std::string format_real(double value) { return fmt::format("{}", value); }

std::string format_coefficients_text(const std::vector<double>& h)
{
    std::string out;
    for (const double v : h) {
        out += format_real(v);
        out += '\n';
    }
    return out;
}

std::string format_coefficients_json(const std::vector<double>& h) { return json(h).dump(2) + "\n"; }

std::vector<std::int64_t> parse_samples(const std::string& text)
{
    if (looks_like_json_array(text)) {
        const json j = parse_json(text);
        try {
            return j.get<std::vector<std::int64_t>>();
        } catch (const json::exception& e) {
            throw Error(ErrorCode::parse_error, std::string("sample array: ") + e.what());
        }
    }
    return parse_lines<std::int64_t>(text, parse_int);
}

std::string format_samples_text(const std::vector<wide_int>& samples)
{
    std::string out;
    for (const auto v : samples) {
        out += to_string(v);
        out += '\n';
    }
    return out;
}

std::vector<std::int64_t> parse_samples_binary(const std::string& bytes)
{
    if (bytes.size() % 8 != 0) {
        throw Error(ErrorCode::parse_error, "binary stream length is not a multiple of 8 bytes");
    }
    std::vector<std::int64_t> samples(bytes.size() / 8);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        std::uint64_t raw = 0;
        for (int b = 7; b >= 0; --b) {
            raw = (raw << 8) | static_cast<unsigned char>(bytes[i * 8 + static_cast<std::size_t>(b)]);
        }
        samples[i] = static_cast<std::int64_t>(raw);
    }
    return samples;
}

std::string format_samples_binary(const std::vector<wide_int>& samples)
{
    std::string out;
    out.reserve(samples.size() * 8);
    for (const auto v : samples) {
        if (!fits_width(v, 64)) {
            throw Error(ErrorCode::arithmetic_range, "output sample " + to_string(v) + " does not fit a 64-bit frame");
        }
        auto raw = static_cast<std::uint64_t>(static_cast<std::int64_t>(v));
        for (int b = 0; b < 8; ++b) {
            out.push_back(static_cast<char>(raw & 0xFFU));
            raw >>= 8;
        }
    }
    return out;
}

std::string read_stream(std::istream& in)
{
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::file_io, "cannot open " + path.string());
    }
    return read_stream(in);
}

void write_file(const std::filesystem::path& path, const std::string& content)
{
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !out.write(content.data(), static_cast<std::streamsize>(content.size()))) {
        throw Error(ErrorCode::file_io, "cannot write " + path.string());
    }
}

} // namespace sysfir
