#pragma once

#include "nhq/matrix2.hpp"
#include "nhq/params.hpp"

#include <functional>
#include <optional>

namespace nhq {

/// Non-Hermitian evolution generator G in i du/dt = G u, units rad/ns.
using Generator2 = Matrix2;

/// Pure evaluation function t -> G(t) plus what an integrator may assume about it.
struct TimeDependentGenerator {
    std::function<Generator2(double)> eval;
    bool constant = false;
    std::optional<double> period; ///< ns; set for periodically driven generators

    Generator2 operator()(double t) const { return eval(t); }

    static TimeDependentGenerator from_constant(const Generator2& g);
};

/// Lab-frame generator H - iW with H = [[w1, R0 cos(wt+phi)], [R0 cos(wt+phi), w0]]
/// and W = (1/2)[[g1, g01], [g01, g0]].
TimeDependentGenerator build_lab_frame(const QubitParams& params);

/// Rotating-wave generator (1/2)[[l0 + D - i g1, R0 e^{-i phi}], [R0 e^{i phi}, l0 - D - i g0]].
/// gamma01 does not enter unless `gamma01_override` is supplied, in which case
/// -i gamma01/2 is placed on both off-diagonals.
Generator2 build_rwa(const QubitParams& params, std::optional<double> gamma01_override = {});

/// Undriven generator [[w1 - i g1/2, -i g01/2], [-i g01/2, w0 - i g0/2]].
/// rabi0 is ignored; gamma01 comes from params unless overridden.
Generator2 build_zero_drive(const QubitParams& params, std::optional<double> gamma01_override = {});

/// Decay matrix W = i(G - G^dagger)/2, so that G = H - iW with H Hermitian.
Matrix2 anti_hermitian_part(const Generator2& g) noexcept;

/// Hermitian part H = (G + G^dagger)/2.
Matrix2 hermitian_part(const Generator2& g) noexcept;

} // namespace nhq
