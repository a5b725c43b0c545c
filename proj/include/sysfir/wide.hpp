#pragma once

#include <cstdint>
#include <string>

#include "sysfir/error.hpp"

namespace sysfir {

/// Internal datapath integer. Every operation is overflow-checked, so values
/// behave as unbounded integers for any configuration the width limits allow.
using wide_int = __int128;

inline constexpr int max_datapath_width = 126;

inline wide_int checked_add(wide_int a, wide_int b)
{
    wide_int r;
    if (__builtin_add_overflow(a, b, &r)) {
        throw Error(ErrorCode::arithmetic_range, "datapath sum exceeds 128-bit range");
    }
    return r;
}

inline wide_int checked_mul(wide_int a, wide_int b)
{
    wide_int r;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw Error(ErrorCode::arithmetic_range, "datapath product exceeds 128-bit range");
    }
    return r;
}

inline wide_int checked_shl(wide_int a, int shift)
{
    return checked_mul(a, static_cast<wide_int>(1) << shift);
}

inline wide_int signed_min(int width) { return -(static_cast<wide_int>(1) << (width - 1)); }
inline wide_int signed_max(int width) { return (static_cast<wide_int>(1) << (width - 1)) - 1; }

inline bool fits_width(wide_int value, int width)
{
    return value >= signed_min(width) && value <= signed_max(width);
}

/// Two's-complement residue of value in width bits.
inline wide_int wrap_to_width(wide_int value, int width)
{
    const auto modulus = static_cast<unsigned __int128>(1) << width;
    auto residue = static_cast<unsigned __int128>(value) & (modulus - 1);
    if (residue >> (width - 1)) {
        return static_cast<wide_int>(residue) - static_cast<wide_int>(modulus);
    }
    return static_cast<wide_int>(residue);
}

std::string to_string(wide_int value);

} // namespace sysfir
