#pragma once

#include "nhq/matrix2.hpp"
#include "nhq/oracle.hpp"
#include "nhq/params.hpp"
#include "nhq/state.hpp"

#include <string_view>
#include <vector>

namespace nhq {

/// Backend used to propagate a state.
enum class Mode {
    Rwa,          ///< closed-form rotating-wave solution
    ZeroDrive,    ///< exact exponential of the undriven generator (gamma01 retained)
    WeakCoupling, ///< decoupled-channel limit omega10 >> gamma1
    Numeric,      ///< adaptive integration of the RWA generator
    LabFrame,     ///< adaptive integration of the full driven lab-frame generator
};

std::string_view mode_name(Mode mode) noexcept;
/// Accepts rwa, zero-drive, weak, numeric, lab-frame. Throws ParseError otherwise.
Mode parse_mode(std::string_view text);

struct PropagatorOptions {
    /// Largest |Im(Omega t/2)| accepted by closed forms before OverflowGuard is thrown.
    double max_exponent = 700.0;
    /// Used by Numeric and LabFrame modes.
    IntegratorConfig integrator{};
};

// Closed-form rotating-wave solution. Written with sin(Omega t/2)/Omega so the
// exceptional point Omega = 0 takes the Jordan-block limit instead of 0/0.
QubitState rwa_amplitudes(const QubitState& initial, const QubitParams& params, double t,
                          const PropagatorOptions& opts = {});

Populations rwa_populations(const QubitState& initial, const QubitParams& params, double t,
                            const PropagatorOptions& opts = {});

/// Upper-level population for C1(0) = 0, |C0(0)| = 1:
/// exp(-Gamma t) rabi0^2/|Omega|^2 |sin(Omega t/2)|^2.
double upper_population_special(const QubitParams& params, double t,
                                const PropagatorOptions& opts = {});

/// Exact undriven propagation exp(-i G t) u0 with G = build_zero_drive(params).
QubitState zero_drive_amplitudes(const QubitState& initial, const QubitParams& params, double t,
                                 const PropagatorOptions& opts = {});

/// Alternative undriven closed form, kept only for
/// comparison against zero_drive_amplitudes. Its Omega is
/// sqrt(omega10^2 - 2i omega10 (Gamma - gamma0) - Gamma^2), which coincides
/// with the exact splitting only when gamma01 = sqrt(gamma0 gamma1).
QubitState zero_drive_amplitudes_closed_form(const QubitState& initial, const QubitParams& params,
                                         double t, const PropagatorOptions& opts = {});

/// Decoupled channels: C1(t) = e^{-i w1 t} e^{-g1 t/2} C1(0), C0(t) = e^{-i w0 t} e^{-g0 t/2} C0(0).
QubitState weak_coupling_state(const QubitState& initial, const QubitParams& params, double t) noexcept;

/// Propagates with the selected backend.
QubitState propagate(const QubitState& initial, const QubitParams& params, double t, Mode mode,
                     const PropagatorOptions& opts = {});

/// Raw 1 - rho11(t) - rho00(t); not clipped.
double escape_probability(const QubitState& initial, const QubitParams& params, double t, Mode mode,
                          const PropagatorOptions& opts = {});

/// 1 - rho11(0) e^{-g1 t} - (1 - rho11(0)) e^{-g0 t}.
double double_exponential_escape(double rho11_0, const QubitParams& params, double t);

/// Relative change of rho11 caused by the cross-channel term under zero drive:
/// (rho11[gamma01 = sqrt(g0 g1)] - rho11[gamma01 = 0]) / rho11[gamma01 = 0].
/// Throws UndefinedDeviation when the reference population is zero.
double deviation_F(const QubitState& initial, const QubitParams& params, double t,
                   const PropagatorOptions& opts = {});

/// Batch request over a time grid.
struct PropagationRequest {
    QubitState initial;
    QubitParams params;
    std::vector<double> t_grid; // ns, strictly increasing, t_grid[0] >= 0
    Mode mode = Mode::Rwa;

    /// Throws InvalidParams when the grid or initial state is invalid.
    void validate() const;
};

/// Propagates over the grid. Closed-form modes evaluate each point
/// independently; integrating modes march through the grid in order.
std::vector<QubitState> propagate_grid(const PropagationRequest& request,
                                       const PropagatorOptions& opts = {});

/// Same as propagate_grid, reduced to populations, escape and Bloch components.
TimeSeries simulate(const PropagationRequest& request, const PropagatorOptions& opts = {});

} // namespace nhq
