#pragma once

#include <cmath>
#include <complex>

namespace nhq {

using cplx = std::complex<double>;

/// Physical parameters of the qubit + continuum detector, in internal units
/// (rad/ns for frequencies, 1/ns for rates, radians for the drive phase).
///
/// gamma01 is stored independently of gamma0/gamma1: the physical value is
/// sqrt(gamma0 * gamma1) and zero models the neglected cross-channel term.
struct QubitParams {
    double omega0 = 0.0;      ///< energy of |0>
    double omega1 = 0.0;      ///< energy of |1>
    double gamma0 = 0.0;      ///< tunneling rate out of |0>
    double gamma1 = 0.0;      ///< tunneling rate out of |1>
    double gamma01 = 0.0;     ///< cross-channel rate, gamma01^2 <= gamma0*gamma1
    double rabi0 = 0.0;       ///< on-resonance Rabi amplitude
    double drive_freq = 0.0;  ///< microwave drive frequency
    double drive_phase = 0.0; ///< drive phase

    double omega10() const noexcept { return omega1 - omega0; }
    double lambda0() const noexcept { return omega0 + omega1; }
    double detuning() const noexcept { return omega10() - drive_freq; }
    double gamma_mean() const noexcept { return 0.5 * (gamma0 + gamma1); }
    double physical_gamma01() const noexcept { return std::sqrt(gamma0 * gamma1); }

    /// Copy with gamma01 replaced.
    QubitParams with_gamma01(double value) const noexcept
    {
        QubitParams p = *this;
        p.gamma01 = value;
        return p;
    }

    /// Throws InvalidParams if any invariant is violated.
    void validate() const;

    friend bool operator==(const QubitParams&, const QubitParams&) = default;
};

/// Builds parameters from the rotated-frame quantities the experiments quote:
/// detuning, mean decay rate Gamma = (gamma0 + gamma1)/2 and gamma0. Level
/// The energy zero sits midway between the levels (omega0 = -omega10/2), so
/// lambda0 = 0 and the rotating-frame generator carries no common phase.
/// gamma01 takes its physical value sqrt(gamma0*gamma1).
QubitParams params_from_rwa(double omega10, double detuning, double rabi0, double gamma_mean,
                            double gamma0, double drive_phase = 0.0);

/// Derived rotating-frame quantities.
struct RwaParams {
    double lambda0 = 0.0;
    double omega10 = 0.0;
    double detuning = 0.0;
    double gamma_mean = 0.0;
    cplx omega_c;   ///< complex Rabi frequency
    cplx cos_theta;
    cplx sin_theta;
};

/// Complex Rabi frequency sqrt(rabi0^2 + (detuning - i(Gamma - gamma0))^2) on the
/// fixed branch Re >= 0 (Im >= 0 when Re == 0). Never throws; may return 0.
cplx complex_rabi_frequency(const QubitParams& params) noexcept;

/// Throws InvalidParams on bad params and ExceptionalPoint when the complex
/// Rabi frequency is exactly zero.
RwaParams derive_rwa(const QubitParams& params);

/// Principal square root normalised to the branch used throughout the library.
cplx branch_sqrt(cplx z) noexcept;

} // namespace nhq
