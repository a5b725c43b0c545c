#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace sysfir {

enum class WindowKind { nuttall, rectangular };

/// Where the ideal low-pass cutoff sits inside the transition band.
enum class CutoffPlacement {
    passband_edge, ///< f_c = f_pass
    band_center,   ///< f_c = (f_pass + f_stop) / 2
};

/// Low-pass requirements on normalized frequencies (cycles/sample).
struct FilterSpec {
    double f_pass{};
    double f_stop{};
    double a_stop{};
    std::optional<std::size_t> taps;
    WindowKind window{WindowKind::nuttall};
    CutoffPlacement cutoff{CutoffPlacement::passband_edge};

    double cutoff_frequency() const;
    /// Throws invalid_band / invalid_spec.
    void validate() const;
};

/// Real impulse response h[0..M]; symmetric sets satisfy h[k] == h[M-k] bit for bit.
struct CoefficientSet {
    std::vector<double> h;
    bool symmetric{false};

    std::size_t taps() const { return h.size(); }
    std::size_t order() const { return h.empty() ? 0 : h.size() - 1; }

    /// First half h[0..N/2-1]; requires an even symmetric set.
    std::vector<double> folded() const;

    /// Mirrors a folded half back to full length 2*half.size().
    static CoefficientSet from_folded(std::span<const double> half);

    /// Checks symmetry exactly and sets the flag accordingly.
    static CoefficientSet from_values(std::vector<double> h);
};

/// Minimum 4-term Nuttall coefficients (a0, a1, a2, a3).
inline constexpr std::array<double, 4> nuttall_coefficients{0.355768, 0.487396, 0.144232, 0.012604};

/// Tap-count estimate ceil(a_stop / (22 (f_stop - f_pass))).
std::size_t estimate_taps(double a_stop, double f_pass, double f_stop);

double nuttall_window(std::size_t n, std::size_t length);

/// Window weight of either kind.
double window_weight(WindowKind kind, std::size_t n, std::size_t length);

/// Normalized sinc, sin(pi x) / (pi x), with sinc(0) = 1.
double sinc(double x);

/// Windowed-sinc linear-phase low-pass. Requires spec.taps (even).
CoefficientSet design_lowpass(const FilterSpec& spec);

} // namespace sysfir
