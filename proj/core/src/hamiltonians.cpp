#include "nhq/hamiltonians.hpp"

#include <numbers>

namespace nhq {

TimeDependentGenerator TimeDependentGenerator::from_constant(const Generator2& g)
{
    return {[g](double) { return g; }, true, std::nullopt};
}

TimeDependentGenerator build_lab_frame(const QubitParams& params)
{
    params.validate();
    const cplx d11(params.omega1, -0.5 * params.gamma1);
    const cplx d00(params.omega0, -0.5 * params.gamma0);
    const double half_g01 = 0.5 * params.gamma01;
    const double rabi0 = params.rabi0;
    const double w = params.drive_freq;
    const double phi = params.drive_phase;

    TimeDependentGenerator gen;
    gen.eval = [=](double t) {
        const cplx coupling(rabi0 * std::cos(w * t + phi), -half_g01);
        return Generator2{{d11, coupling, coupling, d00}};
    };
    gen.constant = (rabi0 == 0.0 || w == 0.0);
    if (!gen.constant) {
        gen.period = 2.0 * std::numbers::pi / w;
    }
    return gen;
}

Generator2 build_rwa(const QubitParams& params, std::optional<double> gamma01_override)
{
    params.validate();
    const double l0 = params.lambda0();
    const double delta = params.detuning();
    const cplx coupling_10 = params.rabi0 * std::polar(1.0, -params.drive_phase);
    const cplx coupling_01 = params.rabi0 * std::polar(1.0, params.drive_phase);
    const cplx cross(0.0, -gamma01_override.value_or(0.0));
    return Generator2{{0.5 * cplx(l0 + delta, -params.gamma1), 0.5 * (coupling_10 + cross),
                       0.5 * (coupling_01 + cross), 0.5 * cplx(l0 - delta, -params.gamma0)}};
}

Generator2 build_zero_drive(const QubitParams& params, std::optional<double> gamma01_override)
{
    params.validate();
    const double g01 = gamma01_override.value_or(params.gamma01);
    const cplx cross(0.0, -0.5 * g01);
    return Generator2{{cplx(params.omega1, -0.5 * params.gamma1), cross, cross,
                       cplx(params.omega0, -0.5 * params.gamma0)}};
}

Matrix2 anti_hermitian_part(const Generator2& g) noexcept
{
    return (g - g.adjoint()) * cplx(0.0, 0.5);
}

Matrix2 hermitian_part(const Generator2& g) noexcept
{
    return (g + g.adjoint()) * cplx(0.5, 0.0);
}

} // namespace nhq
