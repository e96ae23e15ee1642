#include "sevrel/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace sevrel {

namespace {

std::string non_finite(double value) {
    if (std::isnan(value)) return "nan";
    return value > 0 ? "inf" : "-inf";
}

}  // namespace

std::string format_general(double value, int significantDigits) {
    if (!std::isfinite(value)) return non_finite(value);
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                   std::chars_format::general, significantDigits);
    if (ec != std::errc{}) return non_finite(value);
    return {buf.data(), end};
}

std::string format_fixed(double value, int decimals) {
    if (!std::isfinite(value)) return non_finite(value);
    std::array<char, 512> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                   std::chars_format::fixed, decimals);
    if (ec != std::errc{}) return non_finite(value);
    return {buf.data(), end};
}

std::string format_shortest(double value) {
    if (!std::isfinite(value)) return non_finite(value);
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) return non_finite(value);
    return {buf.data(), end};
}

}  // namespace sevrel
