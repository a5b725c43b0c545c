#include <doctest.h>

#include <filesystem>
#include <random>

#include "fixtures.hpp"
#include "sysfir/config.hpp"
#include "sysfir/error.hpp"
#include "sysfir/io.hpp"

using namespace sysfir;

namespace {

ErrorCode code_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::file_io;
}

std::filesystem::path scratch(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / "sysfir_test_io";
    std::filesystem::create_directories(dir);
    return dir / name;
}

const char* minimal_config = R"({
  "version": 1,
  "filter": {"f_pass": 0.1, "f_stop": 0.125, "a_stop": 102, "taps": 180},
  "bit_width": 18,
  "input_width": 15,
  "widths": [15, 15, 16, 18, 34, 36]
})";

} // namespace

TEST_CASE("coefficient parsing")
{
    CHECK(parse_coefficients("[0.25, 0.5, 0.5, 0.25]") == std::vector<double>{0.25, 0.5, 0.5, 0.25});
    CHECK(parse_coefficients("# header\n0.25\n\n  0.5 \n0.5\n0.25 # tail\n") ==
          std::vector<double>{0.25, 0.5, 0.5, 0.25});
    CHECK(parse_coefficients("").empty());
    CHECK(code_of([] { parse_coefficients("0.1\nabc\n"); }) == ErrorCode::parse_error);
    CHECK(code_of([] { parse_coefficients("[0.1, \"x\"]"); }) == ErrorCode::parse_error);
    CHECK(code_of([] { parse_coefficients("[0.1,"); }) == ErrorCode::parse_error);

    // Text output round-trips every double exactly.
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> h(100);
    for (auto& v : h) {
        v = dist(rng) * std::ldexp(1.0, -static_cast<int>(rng() % 40));
    }
    CHECK(parse_coefficients(format_coefficients_text(h)) == h);
    CHECK(parse_coefficients(format_coefficients_json(h)) == h);
}

TEST_CASE("sample parsing")
{
    CHECK(parse_samples("1\n-2\n 3\n").size() == 3);
    CHECK(parse_samples("[1, -2, 3]") == std::vector<std::int64_t>{1, -2, 3});
    CHECK(parse_samples("").empty());
    CHECK(parse_samples("\n# nothing\n").empty());
    CHECK(code_of([] { parse_samples("1.5\n"); }) == ErrorCode::parse_error);
    CHECK(code_of([] { parse_samples("99999999999999999999\n"); }) == ErrorCode::parse_error);

    const std::vector<wide_int> out{0, -1, 42, (wide_int{1} << 62)};
    CHECK(format_samples_text(out) == "0\n-1\n42\n4611686018427387904\n");

    const auto bytes = format_samples_binary(out);
    CHECK(bytes.size() == 32);
    CHECK(static_cast<unsigned char>(bytes[8]) == 0xff);
    CHECK(static_cast<unsigned char>(bytes[16]) == 42);
    CHECK(parse_samples_binary(bytes) == std::vector<std::int64_t>{0, -1, 42, std::int64_t{1} << 62});
    CHECK(code_of([] { parse_samples_binary("1234567"); }) == ErrorCode::parse_error);
    CHECK(code_of([] { format_samples_binary({wide_int{1} << 64}); }) == ErrorCode::arithmetic_range);
}

TEST_CASE("wide integers in JSON")
{
    CHECK(wide_to_json(-5) == json(-5));
    CHECK(wide_to_json(wide_int{1} << 70) == json("1180591620717411303424"));
    CHECK(to_string(-(wide_int{1} << 70)) == "-1180591620717411303424");
}

TEST_CASE("plan and graph round trips")
{
    const auto& plan = fixtures::reference_shift_plan();
    const json pj = plan;
    CHECK(pj.at("b") == 18);
    CHECK(pj.at("entries").size() == 90);
    const auto plan_back = pj.get<QuantizationPlan>();
    CHECK(json(plan_back).dump() == pj.dump());

    for (const auto& breaks : {BreakSpec::none(), BreakSpec::full(2), BreakSpec::partial(3)}) {
        const auto g = build_structure(plan, Variant::min_delay, breaks);
        const json gj = g;
        CHECK(gj.at("latency") == latency(g));
        CHECK(gj.at("elements").at(0).contains("I"));
        CHECK(gj.get<StructureGraph>() == g);
    }
    const auto m = build_structure(plan, Variant::max_delay);
    CHECK(json(m).get<StructureGraph>() == m);

    json tampered = build_structure(plan, Variant::min_delay);
    tampered["elements"][5]["tap_delay_b"] = 1;
    CHECK_THROWS_AS(tampered.get<StructureGraph>(), Error);
}

TEST_CASE("spec, widths, breaks and profiles")
{
    FilterSpec spec;
    spec.f_pass = 0.1;
    spec.f_stop = 0.2;
    spec.a_stop = 60;
    spec.taps = 40;
    spec.window = WindowKind::rectangular;
    spec.cutoff = CutoffPlacement::band_center;
    const auto back = json(spec).get<FilterSpec>();
    CHECK(back.taps == spec.taps);
    CHECK(back.window == spec.window);
    CHECK(back.cutoff == spec.cutoff);

    const WidthConfig w{15, 15, 16, 18, 34, 36};
    CHECK(json(w).get<WidthConfig>() == w);
    CHECK(json::parse("[15, 15, 16, 18, 34, 36]").get<WidthConfig>() == w);
    CHECK(code_of([] { json::parse("[15, 15, 16]").get<WidthConfig>(); }) == ErrorCode::config_invalid);

    for (const auto& b : {BreakSpec::none(), BreakSpec::partial(4), BreakSpec::full(2),
                          BreakSpec::explicit_counts({0, 1, 1})}) {
        const auto r = json(b).get<BreakSpec>();
        CHECK(r.kind == b.kind);
        CHECK(r.resolve(3 + (b.kind == BreakSpec::Kind::partial ? 2 : 0)) ==
              b.resolve(3 + (b.kind == BreakSpec::Kind::partial ? 2 : 0)));
    }
    CHECK(code_of([] { json::parse(R"({"kind": "sometimes"})").get<BreakSpec>(); }) == ErrorCode::config_invalid);

    const auto profile = json::parse(read_file(fixtures::source_path("configs/profiles/two_column_45x2.json")))
                             .get<DeviceProfile>();
    CHECK(profile.chain_lengths == std::vector<std::size_t>{45, 45});

    CHECK(parse_variant("max_delay") == Variant::max_delay);
    CHECK(parse_q_limit_mode("paper_faithful") == QLimitMode::paper_faithful);
    CHECK(parse_arithmetic_mode("wrap") == ArithmeticMode::wrap);
    CHECK(code_of([] { parse_variant("fastest"); }) == ErrorCode::config_invalid);
}

TEST_CASE("project configuration")
{
    const auto& c = fixtures::reference_config();
    CHECK(c.bit_width == 18);
    CHECK(c.input_width == 15);
    CHECK(c.widths == WidthConfig{15, 15, 16, 18, 34, 36});
    CHECK(c.q_limit_mode == QLimitMode::paper_faithful);
    REQUIRE(c.device_profile.has_value());
    CHECK(std::filesystem::exists(*c.device_profile));
    CHECK(c.precision_setup().input_width == 16);

    const auto minimal = parse_config(minimal_config, ".");
    CHECK(minimal.variant == Variant::min_delay);
    CHECK(minimal.breaks.kind == BreakSpec::Kind::none);
    CHECK(minimal.q_limit_mode == QLimitMode::safe);
    CHECK(minimal.grid_size == 4096);
    CHECK(minimal.precision_setup().input_width == 15);
    CHECK(minimal.precision_setup().widths == minimal.widths);

    auto edit = [](const char* key, json value) {
        json j = json::parse(minimal_config);
        if (value.is_null()) {
            j.erase(key);
        } else {
            j[key] = value;
        }
        return j.dump();
    };
    CHECK(code_of([&] { parse_config(edit("version", 2), "."); }) == ErrorCode::config_invalid);
    CHECK(code_of([&] { parse_config(edit("widths", nullptr), "."); }) == ErrorCode::config_invalid);
    CHECK(code_of([&] { parse_config(edit("bit_width", nullptr), "."); }) == ErrorCode::config_invalid);
    CHECK(code_of([&] { parse_config(edit("bit_width", 64), "."); }) == ErrorCode::config_invalid);
    CHECK(code_of([&] { parse_config(edit("grid_size", 1), "."); }) == ErrorCode::config_invalid);
    CHECK(code_of([&] { parse_config(edit("coefficients", "missing.txt"), "."); }) == ErrorCode::config_invalid);
    CHECK(code_of([&] { parse_config("{", "."); }) == ErrorCode::config_invalid);
    CHECK(code_of([&] { parse_config("[]", "."); }) == ErrorCode::config_invalid);
    CHECK(code_of([] { load_config("/nonexistent/sysfir.json"); }) == ErrorCode::file_io);

    json bad_band = json::parse(minimal_config);
    bad_band["filter"]["f_stop"] = 0.05;
    CHECK(code_of([&] { parse_config(bad_band.dump(), "."); }) == ErrorCode::invalid_band);
}

TEST_CASE("file helpers")
{
    const auto path = scratch("nested/dir/out.txt");
    std::filesystem::remove_all(path.parent_path());
    write_file(path, "abc\n");
    CHECK(read_file(path) == "abc\n");
    CHECK(code_of([] { read_file("/nonexistent/file"); }) == ErrorCode::file_io);
}

TEST_CASE("CSV layouts")
{
    const std::vector<double> pair{0.5, 0.5};
    const auto csv = frequency_csv(frequency_response(pair, 3));
    CHECK(csv.rfind("freq,mag_db,phase_rad\n0,0,0\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}
