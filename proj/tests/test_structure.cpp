#include <doctest.h>

#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "sysfir/error.hpp"
#include "sysfir/structure.hpp"

using namespace sysfir;

namespace {

std::vector<std::int64_t> ramp(std::size_t half)
{
    std::vector<std::int64_t> folded(half);
    std::iota(folded.begin(), folded.end(), 1);
    return folded;
}

ErrorCode code_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::parse_error;
}

const WidthConfig reference_widths{15, 15, 16, 18, 34, 36};

} // namespace

TEST_CASE("break specs resolve to cumulative counts")
{
    CHECK(BreakSpec::none().resolve(4) == std::vector<std::size_t>{0, 0, 0, 0});
    CHECK(BreakSpec::partial(2).resolve(4) == std::vector<std::size_t>{0, 0, 1, 1});
    CHECK(BreakSpec::full(1).resolve(4) == std::vector<std::size_t>{0, 1, 2, 3});
    CHECK(BreakSpec::full(2).resolve(3) == std::vector<std::size_t>{0, 2, 4});
    CHECK(BreakSpec::explicit_counts({0, 0, 3}).resolve(3) == std::vector<std::size_t>{0, 0, 3});

    CHECK(code_of([] { BreakSpec::partial(0).resolve(4); }) == ErrorCode::invalid_breaks);
    CHECK(code_of([] { BreakSpec::partial(4).resolve(4); }) == ErrorCode::invalid_breaks);
    CHECK(code_of([] { BreakSpec::full(0).resolve(4); }) == ErrorCode::invalid_breaks);
    CHECK(code_of([] { BreakSpec::explicit_counts({1, 1}).resolve(2); }) == ErrorCode::invalid_breaks);
    CHECK(code_of([] { BreakSpec::explicit_counts({0, 2, 1}).resolve(3); }) == ErrorCode::invalid_breaks);
    CHECK(code_of([] { BreakSpec::explicit_counts({0, 1}).resolve(3); }) == ErrorCode::invalid_breaks);
}

TEST_CASE("N=4 min_delay layout")
{
    const std::vector<std::int64_t> folded{1, 2};
    const auto g = build_structure(folded, Variant::min_delay);
    REQUIRE(g.elements.size() == 2);
    CHECK(g.elements[0].coeff_index == 1);
    CHECK(g.elements[0].coefficient == 2);
    CHECK(g.elements[0].tap_delay_a == 0);
    CHECK(g.elements[0].tap_delay_b == 1);
    CHECK(g.elements[0].accumulate_registers == 1);
    CHECK(g.elements[1].coeff_index == 0);
    CHECK(g.elements[1].coefficient == 1);
    CHECK(g.elements[1].tap_delay_a == 0);
    CHECK(g.elements[1].tap_delay_b == 3);
    CHECK(latency(g) == 0);
    CHECK(g.order() == 3);
    check_graph(g);
}

TEST_CASE("N=4 max_delay layout")
{
    const std::vector<std::int64_t> folded{1, 2};
    const auto g = build_structure(folded, Variant::max_delay);
    REQUIRE(g.elements.size() == 2);
    CHECK(g.elements[0].coeff_index == 0);
    CHECK(g.elements[0].tap_delay_a == 0);
    CHECK(g.elements[0].tap_delay_b == 3);
    CHECK(g.elements[1].coeff_index == 1);
    CHECK(g.elements[1].tap_delay_a == 2);
    CHECK(g.elements[1].tap_delay_b == 3);
    CHECK(latency(g) == 1);
    check_graph(g);

    CHECK(code_of([&] { build_structure(folded, Variant::max_delay, BreakSpec::full(1)); }) ==
          ErrorCode::unsupported_variant);
}

TEST_CASE("N=180 full(1) layout")
{
    const auto g = build_structure(ramp(90), Variant::min_delay, BreakSpec::full(1));
    REQUIRE(g.elements.size() == 90);
    const auto b = g.break_counts();
    for (std::size_t k = 0; k < 90; ++k) {
        CHECK(b[k] == k);
        CHECK(g.elements[k].tap_delay_a == k);
        CHECK(g.elements[k].tap_delay_b == 1 + 2 * k + k);
        CHECK(g.elements[k].coeff_index == 89 - k);
        CHECK(g.elements[k].accumulate_registers == (k == 0 ? 1u : 2u));
    }
    CHECK(latency(g) == 89);
    CHECK(g.elements.back().tap_delay_b == 268);
    CHECK(g.max_tap_delay() == 268);
}

TEST_CASE("latency examples")
{
    for (std::size_t half : {1u, 2u, 17u, 90u}) {
        CHECK(latency(build_structure(ramp(half), Variant::min_delay)) == 0);
    }
    CHECK(latency(build_structure(ramp(90), Variant::min_delay, BreakSpec::full(2))) == 178);
    CHECK(latency(build_structure(ramp(90), Variant::max_delay)) == 89);
    CHECK(latency(build_structure(ramp(90), Variant::min_delay, BreakSpec::partial(45))) == 1);
}

TEST_CASE("invariants for random graphs")
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> half(1, 128);
    std::uniform_int_distribution<int> pick(0, 3);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = half(rng);
        BreakSpec breaks;
        auto variant = Variant::min_delay;
        switch (pick(rng)) {
        case 0: variant = Variant::max_delay; break;
        case 1: breaks = BreakSpec::full(1 + trial % 3); break;
        case 2:
            if (n > 1) {
                breaks = BreakSpec::partial(1 + trial % (n - 1));
            }
            break;
        default: break;
        }
        const auto g = build_structure(ramp(n), variant, breaks);
        CHECK_NOTHROW(check_graph(g));
        CHECK(g.taps == 2 * n);
        for (const auto& e : g.elements) {
            CHECK(e.tap_delay_a < e.tap_delay_b);
            CHECK(e.tap_delay_b <= g.order() + latency(g));
        }
        // Each coefficient appears exactly once.
        std::vector<int> seen(n, 0);
        for (const auto& e : g.elements) {
            ++seen[e.coeff_index];
        }
        CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
    }
}

TEST_CASE("check_graph rejects tampered graphs")
{
    auto g = build_structure(ramp(4), Variant::min_delay, BreakSpec::full(1));
    auto bad = g;
    bad.elements[2].tap_delay_b += 1;
    CHECK_THROWS_AS(check_graph(bad), Error);
    bad = g;
    bad.model_latency = 0;
    CHECK_THROWS_AS(check_graph(bad), Error);
    bad = g;
    bad.elements[1].accumulate_registers = 0;
    CHECK_THROWS_AS(check_graph(bad), Error);
}

TEST_CASE("map_to_device")
{
    const auto g = build_structure(ramp(90), Variant::min_delay);
    const DeviceProfile two{"two", {45, 45}};
    const auto mapped = map_to_device(g, two);
    const auto b = mapped.break_counts();
    for (std::size_t k = 0; k < 90; ++k) {
        CHECK(b[k] == (k >= 45 ? 1u : 0u));
    }
    CHECK(latency(mapped) == 1);

    const DeviceProfile one{"one", {90}};
    CHECK(map_to_device(g, one) == g);

    // Existing breaks are kept; boundaries only add where missing.
    const auto full = build_structure(ramp(90), Variant::min_delay, BreakSpec::full(1));
    CHECK(map_to_device(full, two) == full);

    CHECK(code_of([&] { map_to_device(build_structure(ramp(91), Variant::min_delay), one); }) ==
          ErrorCode::insufficient_dsp);
    CHECK(code_of([&] { map_to_device(build_structure(ramp(90), Variant::max_delay), one); }) ==
          ErrorCode::unsupported_variant);
}

TEST_CASE("resource summary")
{
    const auto reference = build_structure(fixtures::reference_plain_plan(), Variant::min_delay);
    const auto r = resource_summary(reference);
    CHECK(r.dsp_elements == 90);
    CHECK(r.injected_registers == 0);
    CHECK(r.tap_line_registers == 179);
    CHECK(r.shifters == 0);

    CHECK(resource_summary(build_structure(ramp(2), Variant::min_delay, BreakSpec::full(1))).injected_registers == 1);
    CHECK(resource_summary(build_structure(ramp(90), Variant::min_delay, BreakSpec::full(2))).injected_registers == 178);

    const auto shifted = build_structure(fixtures::reference_shift_plan(), Variant::min_delay);
    std::size_t nonzero = 0;
    for (const auto& e : shifted.elements) {
        nonzero += e.input_shift != 0 ? 1 : 0;
    }
    CHECK(resource_summary(shifted).shifters == nonzero);
}

TEST_CASE("effective integer taps")
{
    const std::vector<std::int64_t> folded{1, 2};
    for (auto variant : {Variant::min_delay, Variant::max_delay}) {
        const auto taps = effective_integer_taps(build_structure(folded, variant));
        CHECK(taps == std::vector<wide_int>{1, 2, 2, 1});
    }
    QuantizationPlan plan;
    plan.bit_width = 8;
    plan.entries.push_back({0.0, 3, 0, 0, 2});
    plan.entries.push_back({0.0, -5, 0, 0, 0});
    const auto taps = effective_integer_taps(build_structure(plan, Variant::min_delay));
    CHECK(taps == std::vector<wide_int>{12, -5, -5, 12});
}

TEST_CASE("required_signed_width")
{
    CHECK(required_signed_width(0, 0) == 2);
    CHECK(required_signed_width(-1, 0) == 2);
    CHECK(required_signed_width(-2, 1) == 2);
    CHECK(required_signed_width(0, 2) == 3);
    CHECK(required_signed_width(-16384, 16383) == 15);
    CHECK(required_signed_width(-16384, 16384) == 16);
    CHECK(required_signed_width(-16385, 0) == 16);
    const wide_int big = wide_int{1} << 100;
    CHECK(required_signed_width(-big, big - 1) == 101);
}

TEST_CASE("width validation on the reference filter")
{
    const auto g = build_structure(fixtures::reference_plain_plan(), Variant::min_delay);
    const auto report = validate_widths(g, reference_widths, 15);
    CHECK(report.pass);
    CHECK(report.failures().empty());
    CHECK(report.minimal.w_c == 16);
    CHECK(report.minimal.w_d <= 18);
    CHECK(report.minimal.w_e <= 34);
    CHECK(report.minimal.w_f <= 36);

    // A wider input leaves the pre-adder one bit short.
    WidthConfig wide = reference_widths;
    wide.w_a = wide.w_b = 16;
    const auto tight = validate_widths(g, wide, 16);
    CHECK_FALSE(tight.pass);
    bool pre_adder_flagged = false;
    for (const auto& f : tight.failures()) {
        pre_adder_flagged = pre_adder_flagged || f.node == NodeKind::pre_adder;
    }
    CHECK(pre_adder_flagged);

    WidthConfig narrow = reference_widths;
    narrow.w_c = 15;
    CHECK_FALSE(validate_widths(g, narrow, 15).pass);
}

TEST_CASE("width validation oracle on small graphs")
{
    // Pre-adder: two inputs of 4 bits -> [-16, 14]. Multiplier: times 3 and -5.
    const std::vector<std::int64_t> folded{3, -5};
    const auto g = build_structure(folded, Variant::min_delay);
    const WidthConfig widths{4, 4, 5, 4, 9, 10};
    const auto report = validate_widths(g, widths, 4);
    CHECK(report.pass);
    for (const auto& node : report.nodes) {
        if (node.node == NodeKind::pre_adder) {
            CHECK(node.min == -16);
            CHECK(node.max == 14);
        }
    }
    // Brute force over every pre-adder value; inputs are independent per element.
    wide_int e_lo = 0, e_hi = 0, f_lo = 0, f_hi = 0;
    for (std::int64_t coeff : folded) {
        wide_int lo = 0, hi = 0;
        for (int c = -16; c <= 14; ++c) {
            lo = std::min<wide_int>(lo, coeff * c);
            hi = std::max<wide_int>(hi, coeff * c);
        }
        e_lo = std::min(e_lo, lo);
        e_hi = std::max(e_hi, hi);
        f_lo += lo;
        f_hi += hi;
    }
    CHECK(e_lo == -70);
    CHECK(e_hi == 80);
    CHECK(report.minimal.w_e == required_signed_width(e_lo, e_hi));
    CHECK(report.minimal.w_f == required_signed_width(f_lo, f_hi));

    const std::vector<std::int64_t> zeros{0, 0, 0};
    const auto z = validate_widths(build_structure(zeros, Variant::min_delay), WidthConfig{4, 4, 5, 2, 2, 2}, 4);
    CHECK(z.pass);
    for (const auto& node : z.nodes) {
        if (node.node == NodeKind::multiplier || node.node == NodeKind::accumulator) {
            CHECK(node.max == 0);
        }
    }

    CHECK_THROWS_AS(validate_widths(g, widths, 5), Error);
    CHECK_THROWS_AS(validate_widths(g, WidthConfig{4, 4, 5, 4, 9, 1}, 4), Error);
}

TEST_CASE("device profile validation")
{
    CHECK(DeviceProfile{"x", {45, 45}}.total_dsp() == 90);
    CHECK_THROWS_AS((DeviceProfile{"x", {}}.validate()), Error);
    CHECK_THROWS_AS((DeviceProfile{"x", {0, 3}}.validate()), Error);
    CHECK_NOTHROW(WidthConfig{15, 15, 16, 18, 34, 36}.validate());
    CHECK_THROWS_AS((WidthConfig{1, 15, 16, 18, 34, 36}.validate()), Error);
    CHECK_THROWS_AS((WidthConfig{15, 15, 16, 18, 34, 127}.validate()), Error);
}
