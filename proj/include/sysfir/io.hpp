#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "sysfir/analysis.hpp"
#include "sysfir/design.hpp"
#include "sysfir/hdlgen.hpp"
#include "sysfir/quant.hpp"
#include "sysfir/sim.hpp"
#include "sysfir/structure.hpp"

namespace sysfir {

using json = nlohmann::ordered_json;

// Enum text forms.
std::string_view to_string(Variant variant);
Variant parse_variant(std::string_view text);
std::string_view to_string(WindowKind kind);
WindowKind parse_window(std::string_view text);
std::string_view to_string(CutoffPlacement placement);
CutoffPlacement parse_cutoff(std::string_view text);
std::string_view to_string(QLimitMode mode);
QLimitMode parse_q_limit_mode(std::string_view text);
ArithmeticMode parse_arithmetic_mode(std::string_view text);

void to_json(json& j, const FilterSpec& spec);
void from_json(const json& j, FilterSpec& spec);
void to_json(json& j, const WidthConfig& widths);
void from_json(const json& j, WidthConfig& widths);
void to_json(json& j, const BreakSpec& breaks);
void from_json(const json& j, BreakSpec& breaks);
void to_json(json& j, const DeviceProfile& profile);
void from_json(const json& j, DeviceProfile& profile);
void to_json(json& j, const QuantizationPlan& plan);
void from_json(const json& j, QuantizationPlan& plan);
void to_json(json& j, const StructureGraph& graph);
void from_json(const json& j, StructureGraph& graph);
void to_json(json& j, const ResourceSummary& summary);
void to_json(json& j, const WidthReport& report);
void to_json(json& j, const OverflowEvent& event);
void to_json(json& j, const Netlist& netlist);
void from_json(const json& j, Netlist& netlist);

/// Integers beyond 64 bits are written as decimal strings.
json wide_to_json(wide_int value);

/// Report summary (coefficients and responses live in the CSV).
json comparison_to_json(const ComparisonReport& report);

/// freq,mag_db,phase_rad
std::string frequency_csv(const FrequencyResponse& response);

/// freq,double_db,plain_db,shift_db for external plotting.
std::string comparison_csv(const ComparisonReport& report);

/// JSON array of reals or one value per line; '#' starts a comment line.
std::vector<double> parse_coefficients(const std::string& text);
std::string format_coefficients_text(const std::vector<double>& h);
std::string format_coefficients_json(const std::vector<double>& h);

/// JSON array or one signed decimal integer per line.
std::vector<std::int64_t> parse_samples(const std::string& text);
std::string format_samples_text(const std::vector<wide_int>& samples);

/// Little-endian signed 64-bit frames.
std::vector<std::int64_t> parse_samples_binary(const std::string& bytes);
std::string format_samples_binary(const std::vector<wide_int>& samples);

std::string read_file(const std::filesystem::path& path);
std::string read_stream(std::istream& in);
void write_file(const std::filesystem::path& path, const std::string& content);

/// Full round-trip decimal for a double.
std::string format_real(double value);

} // namespace sysfir
