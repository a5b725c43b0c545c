#include "sysfir/config.hpp"

#include "sysfir/error.hpp"
#include "sysfir/io.hpp"

namespace sysfir {

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value)
{
    std::filesystem::path p(value);
    if (p.is_relative()) {
        p = base / p;
    }
    if (!std::filesystem::exists(p)) {
        throw Error(ErrorCode::config_invalid, "referenced file does not exist: " + p.string());
    }
    return p;
}

} // namespace

PrecisionSetup ProjectConfig::precision_setup() const
{
    return precision ? *precision : PrecisionSetup{input_width, widths};
}

ProjectConfig parse_config(const std::string& text, const std::filesystem::path& base_dir)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::config_invalid, std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw Error(ErrorCode::config_invalid, "config must be a JSON object");
    }

    ProjectConfig c;
    try {
        c.version = j.at("version").get<int>();
        if (c.version != config_version) {
            throw Error(ErrorCode::config_invalid, "unsupported config version " + std::to_string(c.version));
        }
        c.spec = j.at("filter").get<FilterSpec>();
        c.bit_width = j.at("bit_width").get<int>();
        c.input_width = j.at("input_width").get<int>();
        c.widths = j.at("widths").get<WidthConfig>();
        c.variant = parse_variant(j.value("variant", std::string("min_delay")));
        if (j.contains("breaks")) {
            c.breaks = j.at("breaks").get<BreakSpec>();
        }
        if (j.contains("coefficients")) {
            c.coefficients = resolve(base_dir, j.at("coefficients").get<std::string>());
        }
        if (j.contains("device_profile")) {
            c.device_profile = resolve(base_dir, j.at("device_profile").get<std::string>());
        }
        c.shift_normalization = j.value("shift_normalization", false);
        c.q_limit_mode = parse_q_limit_mode(j.value("q_limit_mode", std::string("safe")));
        c.grid_size = j.value("grid_size", std::size_t{4096});
        if (j.contains("precision")) {
            const auto& p = j.at("precision");
            c.precision = PrecisionSetup{p.at("input_width").get<int>(), p.at("widths").get<WidthConfig>()};
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::config_invalid, std::string("config: ") + e.what());
    } catch (const Error& e) {
        throw Error(ErrorCode::config_invalid, e.what());
    }

    c.spec.validate();
    try {
        c.widths.validate();
        if (c.precision) {
            c.precision->widths.validate();
        }
    } catch (const Error& e) {
        throw Error(ErrorCode::config_invalid, e.what());
    }
    if (c.bit_width < 2 || c.bit_width > 63) {
        throw Error(ErrorCode::config_invalid, "bit_width must lie in [2, 63]");
    }
    if (c.grid_size < 2) {
        throw Error(ErrorCode::config_invalid, "grid_size must be at least 2");
    }
    return c;
}

ProjectConfig load_config(const std::filesystem::path& path)
{
    const std::string text = read_file(path);
    return parse_config(text, path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
}

} // namespace sysfir
