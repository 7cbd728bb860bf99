#pragma once

#include "nhq/error.hpp"
#include "nhq/matrix2.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace nhq::detail {

/// cos(W t/2) and sin(W t/2)/W for complex W; the second factor tends to t/2 as W -> 0.
struct HalfAngle {
    cplx cos_half;
    cplx sin_over;
};

inline HalfAngle half_angle(cplx splitting, double t,
                            double max_exponent = std::numeric_limits<double>::infinity())
{
    const cplx arg = 0.5 * splitting * t;
    if (std::abs(arg.imag()) > max_exponent) {
        throw OverflowGuard("|Im(Omega t / 2)| = " + std::to_string(std::abs(arg.imag())) +
                            " exceeds bound " + std::to_string(max_exponent));
    }
    if (splitting == cplx(0.0, 0.0)) {
        return {cplx(1.0, 0.0), cplx(0.5 * t, 0.0)};
    }
    return {std::cos(arg), std::sin(arg) / splitting};
}

} // namespace nhq::detail
