#include "nhq/propagators.hpp"

#include "nhq/error.hpp"
#include "nhq/hamiltonians.hpp"
#include "trig.hpp"

#include <cmath>
#include <string>

namespace nhq {

namespace {

constexpr cplx I(0.0, 1.0);

// e^{-i lambda~0 t/2} = e^{-i lambda0 t/2} e^{-Gamma t/2}
cplx common_factor(const QubitParams& p, double t)
{
    return std::polar(std::exp(-0.5 * p.gamma_mean() * t), -0.5 * p.lambda0() * t);
}

void require_time(double t)
{
    if (!std::isfinite(t)) {
        throw InvalidParams("time must be finite");
    }
}

struct RwaBrackets {
    cplx upper; // bracket multiplying e^{-i lambda~0 t/2} in C1(t)
    cplx lower; // same for C0(t)
};

RwaBrackets rwa_brackets(const QubitState& u0, const QubitParams& p, double t,
                         const PropagatorOptions& opts)
{
    p.validate();
    require_time(t);
    const cplx shifted(p.detuning(), -(p.gamma_mean() - p.gamma0)); // Omega cos(theta)
    const cplx omega = complex_rabi_frequency(p);
    const auto [c, s_over] = detail::half_angle(omega, t, opts.max_exponent);
    const cplx cos_sin = shifted * s_over;  // cos(theta) sin(Omega t/2)
    const cplx sin_sin = p.rabi0 * s_over;  // sin(theta) sin(Omega t/2)
    const cplx e_minus = std::polar(1.0, -p.drive_phase);
    const cplx e_plus = std::polar(1.0, p.drive_phase);
    return {(c - I * cos_sin) * u0.c1 - I * e_minus * sin_sin * u0.c0,
            (c + I * cos_sin) * u0.c0 - I * e_plus * sin_sin * u0.c1};
}

} // namespace

std::string_view mode_name(Mode mode) noexcept
{
    switch (mode) {
    case Mode::Rwa:          return "rwa";
    case Mode::ZeroDrive:    return "zero-drive";
    case Mode::WeakCoupling: return "weak";
    case Mode::Numeric:      return "numeric";
    case Mode::LabFrame:     return "lab-frame";
    }
    return "?";
}

Mode parse_mode(std::string_view text)
{
    for (Mode m : {Mode::Rwa, Mode::ZeroDrive, Mode::WeakCoupling, Mode::Numeric, Mode::LabFrame}) {
        if (mode_name(m) == text) {
            return m;
        }
    }
    throw ParseError(0, "unknown mode '" + std::string(text) +
                            "' (expected rwa, zero-drive, weak, numeric or lab-frame)");
}

QubitState rwa_amplitudes(const QubitState& initial, const QubitParams& params, double t,
                          const PropagatorOptions& opts)
{
    const auto b = rwa_brackets(initial, params, t, opts);
    const cplx f = common_factor(params, t);
    return {f * b.upper, f * b.lower};
}

Populations rwa_populations(const QubitState& initial, const QubitParams& params, double t,
                            const PropagatorOptions& opts)
{
    const auto b = rwa_brackets(initial, params, t, opts);
    const double decay = std::exp(-params.gamma_mean() * t);
    return {decay * std::norm(b.upper), decay * std::norm(b.lower)};
}

double upper_population_special(const QubitParams& params, double t, const PropagatorOptions& opts)
{
    params.validate();
    require_time(t);
    const cplx omega = complex_rabi_frequency(params);
    const auto [c, s_over] = detail::half_angle(omega, t, opts.max_exponent);
    (void)c;
    // rabi0^2 / |Omega|^2 |sin(Omega t/2)|^2 = rabi0^2 |sin(Omega t/2)/Omega|^2
    return std::exp(-params.gamma_mean() * t) * params.rabi0 * params.rabi0 * std::norm(s_over);
}

QubitState zero_drive_amplitudes(const QubitState& initial, const QubitParams& params, double t,
                                 const PropagatorOptions& opts)
{
    require_time(t);
    const Generator2 g = build_zero_drive(params);
    // Same overflow policy as the closed forms.
    detail::half_angle(eigen_splitting(g), t, opts.max_exponent);
    return expm_const(g, t).apply(initial);
}

QubitState zero_drive_amplitudes_closed_form(const QubitState& initial, const QubitParams& params,
                                         double t, const PropagatorOptions& opts)
{
    params.validate();
    require_time(t);
    const double w10 = params.omega10();
    const double gm = params.gamma_mean();
    const cplx omega = branch_sqrt(cplx(w10 * w10 - gm * gm, -2.0 * w10 * (gm - params.gamma0)));
    const auto [c, s_over] = detail::half_angle(omega, t, opts.max_exponent);
    const cplx ks = cplx(gm - params.gamma0, w10) * s_over; // ((G - G0 + i w10)/Omega) sin
    const cplx cross = params.gamma01 * s_over;               // (G01/Omega) sin
    const cplx f = common_factor(params, t);
    return {f * ((c - ks) * initial.c1 - cross * initial.c0),
            f * ((c + ks) * initial.c0 - cross * initial.c1)};
}

QubitState weak_coupling_state(const QubitState& initial, const QubitParams& params, double t) noexcept
{
    return {std::polar(std::exp(-0.5 * params.gamma1 * t), -params.omega1 * t) * initial.c1,
            std::polar(std::exp(-0.5 * params.gamma0 * t), -params.omega0 * t) * initial.c0};
}

QubitState propagate(const QubitState& initial, const QubitParams& params, double t, Mode mode,
                     const PropagatorOptions& opts)
{
    switch (mode) {
    case Mode::Rwa:
        return rwa_amplitudes(initial, params, t, opts);
    case Mode::ZeroDrive:
        return zero_drive_amplitudes(initial, params, t, opts);
    case Mode::WeakCoupling:
        params.validate();
        require_time(t);
        return weak_coupling_state(initial, params, t);
    case Mode::Numeric:
        return integrate(TimeDependentGenerator::from_constant(build_rwa(params)), initial, 0.0, t,
                         opts.integrator);
    case Mode::LabFrame:
        return integrate(build_lab_frame(params), initial, 0.0, t, opts.integrator);
    }
    throw InvalidParams("unknown propagation mode");
}

double escape_probability(const QubitState& initial, const QubitParams& params, double t, Mode mode,
                          const PropagatorOptions& opts)
{
    const auto pops = populations(propagate(initial, params, t, mode, opts));
    return 1.0 - pops.rho11 - pops.rho00;
}

double double_exponential_escape(double rho11_0, const QubitParams& params, double t)
{
    if (!(rho11_0 >= 0.0 && rho11_0 <= 1.0)) {
        throw InvalidParams("rho11(0) must lie in [0, 1]");
    }
    return 1.0 - rho11_0 * std::exp(-params.gamma1 * t) -
           (1.0 - rho11_0) * std::exp(-params.gamma0 * t);
}

double deviation_F(const QubitState& initial, const QubitParams& params, double t,
                   const PropagatorOptions& opts)
{
    const QubitParams coupled = params.with_gamma01(params.physical_gamma01());
    const QubitParams decoupled = params.with_gamma01(0.0);
    const double reference = std::norm(zero_drive_amplitudes(initial, decoupled, t, opts).c1);
    if (!(reference > 0.0)) {
        throw UndefinedDeviation("rho11 vanishes without the cross-channel term at t = " +
                                 std::to_string(t) + " ns; relative deviation undefined");
    }
    const double with_cross = std::norm(zero_drive_amplitudes(initial, coupled, t, opts).c1);
    return (with_cross - reference) / reference;
}

void PropagationRequest::validate() const
{
    params.validate();
    if (t_grid.empty()) {
        throw InvalidParams("time grid must not be empty");
    }
    if (!(t_grid.front() >= 0.0)) {
        throw InvalidParams("time grid must start at t >= 0");
    }
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > t_grid[i - 1])) {
            throw InvalidParams("time grid must be strictly increasing");
        }
    }
    if (!std::isfinite(t_grid.back())) {
        throw InvalidParams("time grid must be finite");
    }
    if (!std::isfinite(initial.norm2())) {
        throw InvalidParams("initial state must be finite");
    }
}

std::vector<QubitState> propagate_grid(const PropagationRequest& request,
                                       const PropagatorOptions& opts)
{
    request.validate();
    std::vector<QubitState> out;
    out.reserve(request.t_grid.size());

    if (request.mode == Mode::Numeric || request.mode == Mode::LabFrame) {
        const TimeDependentGenerator gen =
            request.mode == Mode::Numeric
                ? TimeDependentGenerator::from_constant(build_rwa(request.params))
                : build_lab_frame(request.params);
        QubitState u = request.initial;
        double t = 0.0;
        for (double target : request.t_grid) {
            u = integrate(gen, u, t, target, opts.integrator);
            t = target;
            out.push_back(u);
        }
        return out;
    }

    for (double t : request.t_grid) {
        out.push_back(propagate(request.initial, request.params, t, request.mode, opts));
    }
    return out;
}

TimeSeries simulate(const PropagationRequest& request, const PropagatorOptions& opts)
{
    const auto states = propagate_grid(request, opts);
    TimeSeries ts;
    ts.times.reserve(states.size());
    ts.rows.reserve(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        ts.push_back(request.t_grid[i], states[i]);
    }
    return ts;
}

} // namespace nhq
