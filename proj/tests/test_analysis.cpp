#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "sysfir/analysis.hpp"
#include "sysfir/error.hpp"
#include "sysfir/sim.hpp"

using namespace sysfir;

namespace {

std::vector<double> random_symmetric(std::mt19937_64& rng, std::size_t half)
{
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> h(2 * half);
    for (std::size_t k = 0; k < half; ++k) {
        h[k] = h[2 * half - 1 - k] = dist(rng);
    }
    return h;
}

double ulp(double x) { return std::nextafter(std::abs(x), INFINITY) - std::abs(x); }

} // namespace

TEST_CASE("direct form reference")
{
    const std::vector<double> h{1, 2, 2, 1};
    const std::vector<double> impulse{1, 0, 0, 0, 0, 0};
    CHECK(direct_form_reference(h, impulse) == std::vector<double>{1, 2, 2, 1, 0, 0});

    const std::vector<double> zeros(6, 0.0);
    const std::vector<double> x{0.3, -1, 2, 5, 0.25};
    for (double y : direct_form_reference(zeros, x)) {
        CHECK(y == 0.0);
    }

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto taps = random_symmetric(rng, 1 + static_cast<std::size_t>(trial) * 3);
        std::vector<double> input(200);
        for (auto& v : input) {
            v = dist(rng);
        }
        const auto y = direct_form_reference(taps, input);
        for (std::size_t n = 0; n < input.size(); ++n) {
            long double acc = 0;
            long double scale = 0;
            for (std::size_t k = 0; k < taps.size() && k <= n; ++k) {
                acc += static_cast<long double>(taps[k]) * input[n - k];
                scale += std::abs(static_cast<long double>(taps[k]) * input[n - k]);
            }
            CHECK(std::abs(y[n] - acc) <= 1e-12 * std::max<long double>(scale, 1e-300L));
        }
    }

    const std::vector<double> asymmetric{1, 2, 3, 4};
    const std::vector<double> odd{1, 2, 1};
    CHECK_THROWS_AS(direct_form_reference(asymmetric, impulse), Error);
    CHECK_THROWS_AS(direct_form_reference(odd, impulse), Error);
}

TEST_CASE("integer convolution")
{
    const std::vector<wide_int> taps{1, -2, 3};
    const std::vector<std::int64_t> x{1, 0, 0, 2};
    CHECK(convolve(taps, x) == std::vector<wide_int>{1, -2, 3, 2});
    CHECK(convolve(taps, std::span<const std::int64_t>{}).empty());
}

TEST_CASE("frequency response basics")
{
    const std::vector<double> pair{0.5, 0.5};
    const auto r = frequency_response(pair, 5);
    CHECK(r.grid == std::vector<double>{0.0, 0.125, 0.25, 0.375, 0.5});
    CHECK(r.values.front() == std::complex<double>(1.0, 0.0));
    CHECK(std::abs(r.values.back()) == 0.0);
    CHECK(r.reference_gain == 1.0);
    CHECK(stopband_attenuation(r, 0.5) == attenuation_cap_db);
    CHECK(passband_ripple(r, 0.25) == doctest::Approx(20 * std::log10(std::sqrt(2.0))));
    CHECK_THROWS_AS(stopband_attenuation(r, 0.6), Error);
    CHECK_THROWS_AS(frequency_response(pair, 1), Error);

    const auto full = frequency_response(pair);
    CHECK(full.grid.size() == default_grid_size);
    CHECK(full.grid.front() == 0.0);
    CHECK(full.grid.back() == 0.5);
    for (std::size_t i = 1; i < full.grid.size(); ++i) {
        CHECK(full.grid[i] > full.grid[i - 1]);
    }
    const auto db = full.magnitude_db();
    CHECK(db.front() == 0.0);
}

TEST_CASE("DC identity and linear phase")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const auto h = random_symmetric(rng, 1 + static_cast<std::size_t>(trial) * 5);
        const auto r = frequency_response(h, 513);
        double sum = 0.0;
        double magnitude = 0.0;
        for (double v : h) {
            sum += v;
            magnitude += std::abs(v);
        }
        CHECK(std::abs(r.values[0].real() - sum) <= 4 * ulp(sum));
        CHECK(r.values[0].imag() == 0.0);

        // Rotating by the group delay leaves a real amplitude, evaluated here in long double.
        const long double half_order = (h.size() - 1) / 2.0L;
        for (std::size_t i = 0; i < r.grid.size(); ++i) {
            long double amplitude = 0;
            for (std::size_t k = 0; k < h.size(); ++k) {
                amplitude += h[k] * std::cos(2 * std::numbers::pi_v<long double> * r.grid[i] * (k - half_order));
            }
            const std::complex<long double> rotated =
                std::complex<long double>(r.values[i]) *
                std::polar(1.0L, 2 * std::numbers::pi_v<long double> * r.grid[i] * half_order);
            CHECK(std::abs(rotated.real() - amplitude) <= 1e-12L * magnitude);
            CHECK(std::abs(rotated.imag()) <= 1e-12L * magnitude);
            if (std::abs(r.values[i]) > 1e-9) {
                const double phase = std::arg(r.values[i]) + 2 * std::numbers::pi * r.grid[i] * half_order;
                const double folded = std::remainder(phase, std::numbers::pi);
                CHECK(std::abs(folded) < 1e-6);
            }
        }
    }
}

TEST_CASE("attenuation is invariant under scaling")
{
    const auto& h = fixtures::reference_coefficients().h;
    const double base = stopband_attenuation(frequency_response(h), 0.125);
    for (double scale : {2.0, 0.25}) {
        std::vector<double> scaled(h);
        for (auto& v : scaled) {
            v *= scale;
        }
        CHECK(stopband_attenuation(frequency_response(scaled), 0.125) == base);
    }
    for (double scale : {3.0, 0.7, 1e-5}) {
        std::vector<double> scaled(h);
        for (auto& v : scaled) {
            v *= scale;
        }
        CHECK(stopband_attenuation(frequency_response(scaled), 0.125) == doctest::Approx(base).epsilon(1e-9));
    }
}

TEST_CASE("effective coefficients of the reference plans")
{
    const auto& h = fixtures::reference_coefficients().h;
    const auto plain = effective_coefficients(fixtures::reference_plain_plan());
    const auto shifted = effective_coefficients(fixtures::reference_shift_plan());
    REQUIRE(plain.size() == 180);
    REQUIRE(shifted.size() == 180);
    oracle::rational plain_max = 0, shift_max = 0;
    for (std::size_t j = 0; j < 180; ++j) {
        const auto exact_h = oracle::exact(h[j]);
        const auto plain_err = oracle::abs(oracle::exact(plain[j]) - exact_h);
        const auto shift_err = oracle::abs(oracle::exact(shifted[j]) - exact_h);
        const auto& entry = fixtures::reference_shift_plan().entries[j < 90 ? j : 179 - j];
        CHECK(shift_err <= oracle::pow2(-(18 + entry.q_clamped)));
        plain_max = std::max(plain_max, plain_err);
        shift_max = std::max(shift_max, shift_err);
    }
    CHECK(plain_max <= oracle::pow2(-18));
    CHECK(shift_max <= plain_max);
}

TEST_CASE("representation comparison on the reference filter")
{
    const auto& config = fixtures::reference_config();
    const auto precision = config.precision_setup();
    const auto report = compare_representations(config.spec, 18, precision.widths,
                                                {precision.input_width, config.q_limit_mode, config.grid_size});
    CHECK(report.taps == 180);
    CHECK(report.systolic_elements == 90);
    CHECK(report.simulation_verified);
    CHECK(report.double_precision.stopband_db >= report.plain_fixed.stopband_db);
    CHECK(report.shift_normalized.stopband_db > report.plain_fixed.stopband_db);
    CHECK(report.margin_db() > 0.0);
    CHECK(report.double_precision.max_coefficient_error == 0.0);
    CHECK(report.shift_normalized.max_coefficient_error <= report.plain_fixed.max_coefficient_error);
    CHECK(report.plain_fixed.response.grid == report.double_precision.response.grid);
    CHECK(report.shift_normalized.response.grid == report.double_precision.response.grid);

    // The simulator's integer impulse response rescales to the effective coefficients exactly.
    const auto graph = build_structure(report.shift_plan, Variant::min_delay);
    const auto response = impulse_response(graph, precision.widths, 1);
    const auto effective = effective_coefficients(report.shift_plan);
    for (std::size_t t = 0; t < 180; ++t) {
        const oracle::rational scaled = oracle::rational(oracle::cpp_int(to_string(response[t]))) /
                                        oracle::pow2(18 - 1 + report.shift_plan.common_base);
        CHECK(scaled == oracle::exact(effective[t]));
    }

    // Eight bits degrade the plain representation.
    WidthConfig narrow = precision.widths;
    narrow.w_d = 8;
    narrow.w_e = narrow.w_c + 8;
    const auto coarse = compare_representations(config.spec, 8, narrow,
                                                {precision.input_width, config.q_limit_mode, config.grid_size});
    CHECK(coarse.plain_fixed.stopband_db < report.plain_fixed.stopband_db);

    CHECK_THROWS_AS(compare_representations(config.spec, 17, precision.widths, {precision.input_width}), Error);
}

TEST_CASE("53-bit coefficients coincide with double precision")
{
    const auto& config = fixtures::reference_config();
    const WidthConfig widths{40, 40, 41, 53, 94, 102};
    const auto report = compare_representations(config.spec, 53, widths, {8, QLimitMode::safe, 1024});
    CHECK(report.simulation_verified);
    const double reference = report.double_precision.response.reference_gain;
    for (const auto* r : {&report.plain_fixed, &report.shift_normalized}) {
        for (std::size_t i = 0; i < r->response.values.size(); ++i) {
            CHECK(std::abs(r->response.values[i] - report.double_precision.response.values[i]) <= 1e-12 * reference);
        }
    }
}
