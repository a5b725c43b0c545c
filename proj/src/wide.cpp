#include "sysfir/wide.hpp"

#include <algorithm>

namespace sysfir {

std::string to_string(wide_int value)
{
    if (value == 0) {
        return "0";
    }
    const bool negative = value < 0;
    auto magnitude = negative ? static_cast<unsigned __int128>(-(value + 1)) + 1 : static_cast<unsigned __int128>(value);
    std::string digits;
    while (magnitude != 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(magnitude % 10)));
        magnitude /= 10;
    }
    if (negative) {
        digits.push_back('-');
    }
    std::reverse(digits.begin(), digits.end());
    return digits;
}

} // namespace sysfir
