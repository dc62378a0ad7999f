#pragma once

#include <cctype>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "chi2qed/constants.hpp"

namespace chi2qed {

/// Unit-suffixed quantity parsing for the CLI boundary. The core library is
/// strictly SI; these helpers convert user input once, at the edge.
namespace units {

namespace detail {

struct SplitNumber {
    double value;
    std::string suffix;
};

inline SplitNumber split(const std::string& text, const char* what)
{
    const char* begin = text.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin)
        throw std::invalid_argument(std::string("cannot parse ") + what + ": '" + text + "'");
    std::string suffix(end);
    while (!suffix.empty() && std::isspace(static_cast<unsigned char>(suffix.front())))
        suffix.erase(suffix.begin());
    while (!suffix.empty() && std::isspace(static_cast<unsigned char>(suffix.back())))
        suffix.pop_back();
    return {value, suffix};
}

[[noreturn]] inline void bad_suffix(const char* what, const std::string& suffix)
{
    throw std::invalid_argument(std::string("unknown ") + what + " suffix '" + suffix + "'");
}

} // namespace detail

/// "9.5ps", "13.6 ps", "1e-9" (bare = seconds).
inline double parse_time(const std::string& text)
{
    auto [value, suffix] = detail::split(text, "time");
    if (suffix.empty() || suffix == "s") return value;
    if (suffix == "ms") return value * 1e-3;
    if (suffix == "us") return value * 1e-6;
    if (suffix == "ns") return value * 1e-9;
    if (suffix == "ps") return value * 1e-12;
    if (suffix == "fs") return value * 1e-15;
    detail::bad_suffix("time", suffix);
}

/// "1.5um", "930nm", "0.75e-6" (bare = meters).
inline double parse_length(const std::string& text)
{
    auto [value, suffix] = detail::split(text, "length");
    if (suffix.empty() || suffix == "m") return value;
    if (suffix == "mm") return value * 1e-3;
    if (suffix == "um") return value * 1e-6;
    if (suffix == "nm") return value * 1e-9;
    if (suffix == "pm") return value * 1e-12;
    detail::bad_suffix("length", suffix);
}

/// Angular frequency. Bare numbers and "rad/s" are rad/s; Hz-family suffixes
/// are ordinary frequencies and get multiplied by 2 pi.
inline double parse_angular_frequency(const std::string& text)
{
    auto [value, suffix] = detail::split(text, "frequency");
    if (suffix.empty() || suffix == "rad/s") return value;
    if (suffix == "Hz") return value * constants::two_pi;
    if (suffix == "kHz") return value * 1e3 * constants::two_pi;
    if (suffix == "MHz") return value * 1e6 * constants::two_pi;
    if (suffix == "GHz") return value * 1e9 * constants::two_pi;
    if (suffix == "THz") return value * 1e12 * constants::two_pi;
    detail::bad_suffix("frequency", suffix);
}

/// Second-order susceptibility: bare = m/V, or "pm/V".
inline double parse_chi2(const std::string& text)
{
    auto [value, suffix] = detail::split(text, "chi2");
    if (suffix.empty() || suffix == "m/V") return value;
    if (suffix == "pm/V") return value * 1e-12;
    detail::bad_suffix("chi2", suffix);
}

inline double parse_plain(const std::string& text, const char* what)
{
    auto [value, suffix] = detail::split(text, what);
    if (!suffix.empty())
        throw std::invalid_argument(std::string(what) + " must be a bare number, got '" +
                                    text + "'");
    return value;
}

} // namespace units
} // namespace chi2qed
