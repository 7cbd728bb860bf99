#include "nhq/units.hpp"

#include "nhq/error.hpp"

#include <array>
#include <numbers>
#include <utility>

namespace nhq {

Dimension dimension_of(Unit unit) noexcept
{
    switch (unit) {
    case Unit::MHz:
    case Unit::GHz:
    case Unit::RadPerS:
    case Unit::RadPerNs:
        return Dimension::AngularFrequency;
    case Unit::PerUs:
    case Unit::PerNs:
        return Dimension::Rate;
    case Unit::Ns:
    case Unit::Us:
        return Dimension::Time;
    }
    return Dimension::Time;
}

double to_canonical_factor(Unit unit) noexcept
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    switch (unit) {
    case Unit::MHz:      return two_pi * 1e-3;
    case Unit::GHz:      return two_pi;
    case Unit::RadPerS:  return 1e-9;
    case Unit::RadPerNs: return 1.0;
    case Unit::PerUs:    return 1e-3;
    case Unit::PerNs:    return 1.0;
    case Unit::Ns:       return 1.0;
    case Unit::Us:       return 1e3;
    }
    return 1.0;
}

double unit_convert(double value, Unit from, Unit to)
{
    if (dimension_of(from) != dimension_of(to)) {
        throw UnitError("cannot convert " + std::string(unit_name(from)) + " to " +
                        std::string(unit_name(to)) + ": dimension mismatch");
    }
    if (from == to) {
        return value;
    }
    return value * to_canonical_factor(from) / to_canonical_factor(to);
}

Unit parse_unit(std::string_view text)
{
    static const std::array<std::pair<std::string_view, Unit>, 14> table{{
        {"MHz", Unit::MHz},
        {"GHz", Unit::GHz},
        {"rad/s", Unit::RadPerS},
        {"rad/ns", Unit::RadPerNs},
        {"us^-1", Unit::PerUs},
        {"1/us", Unit::PerUs},
        {"\xC2\xB5s^-1", Unit::PerUs},
        {"ns^-1", Unit::PerNs},
        {"1/ns", Unit::PerNs},
        {"ns", Unit::Ns},
        {"us", Unit::Us},
        {"\xC2\xB5s", Unit::Us},
        {"\xCE\xBCs^-1", Unit::PerUs},
        {"\xCE\xBCs", Unit::Us},
    }};
    for (const auto& [name, unit] : table) {
        if (name == text) {
            return unit;
        }
    }
    throw UnitError("unknown unit '" + std::string(text) + "'");
}

std::string_view unit_name(Unit unit) noexcept
{
    switch (unit) {
    case Unit::MHz:      return "MHz";
    case Unit::GHz:      return "GHz";
    case Unit::RadPerS:  return "rad/s";
    case Unit::RadPerNs: return "rad/ns";
    case Unit::PerUs:    return "us^-1";
    case Unit::PerNs:    return "ns^-1";
    case Unit::Ns:       return "ns";
    case Unit::Us:       return "us";
    }
    return "?";
}

} // namespace nhq
