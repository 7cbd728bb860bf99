#pragma once

#include <string>
#include <string_view>

// Canonical internal units: time in ns, angular frequencies in rad/ns, rates in 1/ns.
// Conversions happen only at I/O boundaries.

namespace nhq {

enum class Unit {
    MHz,       // cycles per microsecond; converts to angular frequency with 2*pi
    GHz,       // cycles per nanosecond
    RadPerS,
    RadPerNs,
    PerUs,     // decay rate, 1/us
    PerNs,     // decay rate, 1/ns
    Ns,
    Us,
};

enum class Dimension { AngularFrequency, Rate, Time };

Dimension dimension_of(Unit unit) noexcept;

/// Value of one `unit` expressed in the canonical unit of its dimension.
double to_canonical_factor(Unit unit) noexcept;

/// Converts `value` between two units of the same dimension.
/// Throws UnitError on a dimension mismatch.
double unit_convert(double value, Unit from, Unit to);

inline double to_internal(double value, Unit from) { return value * to_canonical_factor(from); }
inline double from_internal(double value, Unit to) { return value / to_canonical_factor(to); }

/// Accepts "MHz", "GHz", "rad/s", "rad/ns", "us^-1", "1/us", "µs^-1", "ns^-1", "1/ns", "ns", "us", "µs".
/// Throws UnitError for anything else.
Unit parse_unit(std::string_view text);

std::string_view unit_name(Unit unit) noexcept;

} // namespace nhq
