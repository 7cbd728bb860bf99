#include "nhq/params.hpp"

#include "nhq/error.hpp"

#include <string>

namespace nhq {

namespace {

void require(bool ok, const std::string& message)
{
    if (!ok) {
        throw InvalidParams(message);
    }
}

} // namespace

void QubitParams::validate() const
{
    require(std::isfinite(omega0) && std::isfinite(omega1) && std::isfinite(gamma0) &&
                std::isfinite(gamma1) && std::isfinite(gamma01) && std::isfinite(rabi0) &&
                std::isfinite(drive_freq) && std::isfinite(drive_phase),
            "parameters must be finite");
    require(gamma0 >= 0.0, "gamma0 must be >= 0");
    require(gamma1 >= 0.0, "gamma1 must be >= 0");
    require(gamma01 >= 0.0, "gamma01 must be >= 0");
    require(rabi0 >= 0.0, "rabi0 must be >= 0");
    require(drive_freq >= 0.0, "drive_freq must be >= 0");
    // A few ulps of slack so that gamma01 = sqrt(gamma0*gamma1) always passes.
    const double bound = gamma0 * gamma1;
    require(gamma01 * gamma01 <= bound * (1.0 + 8e-16) + 1e-300,
            "gamma01^2 must not exceed gamma0*gamma1");
}

QubitParams params_from_rwa(double omega10, double detuning, double rabi0, double gamma_mean,
                            double gamma0, double drive_phase)
{
    QubitParams p;
    p.omega0 = -0.5 * omega10;
    p.omega1 = 0.5 * omega10;
    p.gamma0 = gamma0;
    p.gamma1 = 2.0 * gamma_mean - gamma0;
    p.gamma01 = p.physical_gamma01();
    p.rabi0 = rabi0;
    p.drive_freq = omega10 - detuning;
    p.drive_phase = drive_phase;
    p.validate();
    return p;
}

cplx branch_sqrt(cplx z) noexcept
{
    cplx r = std::sqrt(z);
    if (r.real() < 0.0 || (r.real() == 0.0 && r.imag() < 0.0)) {
        r = -r;
    }
    // Strip signed zeros so formatted output is stable.
    return {r.real() + 0.0, r.imag() + 0.0};
}

cplx complex_rabi_frequency(const QubitParams& params) noexcept
{
    const cplx shifted(params.detuning(), -(params.gamma_mean() - params.gamma0));
    return branch_sqrt(params.rabi0 * params.rabi0 + shifted * shifted);
}

RwaParams derive_rwa(const QubitParams& params)
{
    params.validate();
    RwaParams r;
    r.lambda0 = params.lambda0();
    r.omega10 = params.omega10();
    r.detuning = params.detuning();
    r.gamma_mean = params.gamma_mean();
    r.omega_c = complex_rabi_frequency(params);
    if (r.omega_c == cplx(0.0, 0.0)) {
        throw ExceptionalPoint("complex Rabi frequency is zero: RWA generator is not diagonalizable");
    }
    r.cos_theta = cplx(r.detuning, -(r.gamma_mean - params.gamma0)) / r.omega_c;
    r.sin_theta = params.rabi0 / r.omega_c;
    return r;
}

} // namespace nhq
