#include "nhq/error.hpp"
#include "nhq/units.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace nhq;

constexpr double two_pi = 2.0 * std::numbers::pi;

TEST(Units, MegahertzCarriesTwoPi)
{
    EXPECT_DOUBLE_EQ(to_internal(1.0, Unit::MHz), two_pi * 1e-3);
    EXPECT_DOUBLE_EQ(to_internal(5.0, Unit::GHz), two_pi * 5.0);
    EXPECT_DOUBLE_EQ(from_internal(to_internal(0.47, Unit::MHz), Unit::MHz), 0.47);
}

TEST(Units, RatesHaveNoTwoPi)
{
    EXPECT_DOUBLE_EQ(to_internal(0.204, Unit::PerUs), 0.204e-3);
    EXPECT_DOUBLE_EQ(to_internal(0.1, Unit::PerNs), 0.1);
}

TEST(Units, RadPerSecond)
{
    EXPECT_DOUBLE_EQ(unit_convert(8.9e6, Unit::RadPerS, Unit::RadPerNs), 8.9e-3);
    EXPECT_DOUBLE_EQ(unit_convert(1.0, Unit::MHz, Unit::RadPerS), two_pi * 1e6);
}

TEST(Units, TimeConversion)
{
    EXPECT_DOUBLE_EQ(unit_convert(10.0, Unit::Us, Unit::Ns), 1e4);
    EXPECT_DOUBLE_EQ(unit_convert(250.0, Unit::Ns, Unit::Us), 0.25);
}

TEST(Units, DimensionMismatchThrows)
{
    EXPECT_THROW(unit_convert(1.0, Unit::MHz, Unit::PerUs), UnitError);
    EXPECT_THROW(unit_convert(1.0, Unit::Ns, Unit::GHz), UnitError);
    EXPECT_THROW(unit_convert(1.0, Unit::PerNs, Unit::Us), UnitError);
}

TEST(Units, ParseAcceptsSpellings)
{
    EXPECT_EQ(parse_unit("MHz"), Unit::MHz);
    EXPECT_EQ(parse_unit("GHz"), Unit::GHz);
    EXPECT_EQ(parse_unit("rad/s"), Unit::RadPerS);
    EXPECT_EQ(parse_unit("rad/ns"), Unit::RadPerNs);
    EXPECT_EQ(parse_unit("us^-1"), Unit::PerUs);
    EXPECT_EQ(parse_unit("1/us"), Unit::PerUs);
    EXPECT_EQ(parse_unit("\xC2\xB5s^-1"), Unit::PerUs);
    EXPECT_EQ(parse_unit("\xCE\xBCs^-1"), Unit::PerUs);
    EXPECT_EQ(parse_unit("ns^-1"), Unit::PerNs);
    EXPECT_EQ(parse_unit("1/ns"), Unit::PerNs);
    EXPECT_EQ(parse_unit("ns"), Unit::Ns);
    EXPECT_EQ(parse_unit("us"), Unit::Us);
}

TEST(Units, ParseRejectsUnknown)
{
    EXPECT_THROW(parse_unit("Hz"), UnitError);
    EXPECT_THROW(parse_unit(""), UnitError);
    EXPECT_THROW(parse_unit("mhz"), UnitError);
}

TEST(Units, NameRoundTrip)
{
    for (Unit u : {Unit::MHz, Unit::GHz, Unit::RadPerS, Unit::RadPerNs, Unit::PerUs, Unit::PerNs,
                   Unit::Ns, Unit::Us}) {
        EXPECT_EQ(parse_unit(unit_name(u)), u);
    }
}

TEST(Units, ConvertIsInvertible)
{
    for (double v : {0.0, 1e-9, 0.47, 3.0e6, -2.5}) {
        EXPECT_NEAR(unit_convert(unit_convert(v, Unit::MHz, Unit::RadPerS), Unit::RadPerS, Unit::MHz), v,
                    1e-15 * std::abs(v) + 1e-300);
    }
}
