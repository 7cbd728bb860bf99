#include "nhq/scenario.hpp"

#include "nhq/error.hpp"
#include "nhq/units.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

namespace nhq {

namespace {

constexpr double pi = std::numbers::pi;

// Level splitting used where the regime does not quote one. Only the global
// phase and the lab-frame drive depend on it.
constexpr double default_omega10_ghz = 5.0;

double parse_number(std::string_view text, const char* what)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw ParseError(0, std::string("invalid ") + what + " '" + std::string(text) + "'");
    }
    return v;
}

double quoted_field(const Scenario& s, const std::string& field)
{
    const QubitParams& p = s.params;
    if (field == "rabi0") return p.rabi0;
    if (field == "detuning") return p.detuning();
    if (field == "gamma") return p.gamma_mean();
    if (field == "gamma0") return p.gamma0;
    if (field == "gamma1") return p.gamma1;
    if (field == "omega10") return p.omega10();
    if (field == "drive_phase") return p.drive_phase;
    if (field == "gamma1_over_gamma0") return p.gamma1 / p.gamma0;
    throw InvalidParams("unknown quoted field '" + field + "'");
}

Preset bloch_spiral_preset()
{
    Preset pr;
    pr.description =
        "Bloch-vector spiral of a resonantly driven decaying qubit (Gamma = 0.035 ns^-1, "
        "rabi0/2pi = 80 MHz, detuning 0, phi = -pi/2)";
    Scenario& s = pr.scenario;
    s.name = "fig2-bloch";
    s.params = params_from_rwa(to_internal(default_omega10_ghz, Unit::GHz), 0.0,
                               to_internal(80.0, Unit::MHz), 0.035, 0.0, -pi / 2.0);
    // n(0) = (0, 1, -1)/sqrt(2)
    s.initial = {cplx(0.0, -std::sin(pi / 8.0)), cplx(std::cos(pi / 8.0), 0.0)};
    s.grid = {0.0, 100.0, 1001};
    s.mode = Mode::Rwa;
    s.outputs = {Output::Populations, Output::Escape, Output::Bloch};
    pr.quoted = {{"gamma", 0.035, "ns^-1"},
                 {"rabi0", 80.0, "MHz"},
                 {"detuning", 0.0, "MHz"},
                 {"drive_phase", -pi / 2.0, "rad"}};
    return pr;
}

Preset rabi_scan_preset()
{
    Preset pr;
    pr.description =
        "Detuned decaying Rabi oscillation of the upper-level population "
        "(rabi0/2pi = 0.47 MHz, detuning/2pi = 1.34 MHz, Gamma = 0.204 us^-1, gamma0 = 0.4e-3 us^-1)";
    Scenario& s = pr.scenario;
    s.name = "fig3-rabi";
    s.params = params_from_rwa(to_internal(default_omega10_ghz, Unit::GHz),
                               to_internal(1.34, Unit::MHz), to_internal(0.47, Unit::MHz),
                               to_internal(0.204, Unit::PerUs), to_internal(0.4e-3, Unit::PerUs));
    // 0.956|0> + 0.291|1>, renormalised: the quoted amplitudes are rounded.
    s.initial = normalized({cplx(0.291, 0.0), cplx(0.956, 0.0)});
    s.grid = {0.0, 10000.0, 2001};
    s.mode = Mode::Rwa;
    s.outputs = {Output::Populations, Output::Escape};
    pr.quoted = {{"rabi0", 0.47, "MHz"},
                 {"detuning", 1.34, "MHz"},
                 {"gamma", 0.204, "us^-1"},
                 {"gamma0", 0.4e-3, "us^-1"}};
    return pr;
}

Preset fast_readout_preset(bool excited)
{
    Preset pr;
    pr.description =
        "Zero-drive fast readout; relative change of rho11 from the cross-channel term "
        "(gamma1 = 0.1 ns^-1, omega10/2pi = 5 GHz, gamma1/gamma0 = 150)";
    Scenario& s = pr.scenario;
    s.name = excited ? "fig4-deviation-excited" : "fig4-deviation";
    QubitParams p;
    p.omega0 = 0.0;
    p.omega1 = to_internal(5.0, Unit::GHz);
    p.gamma1 = 0.1;
    p.gamma0 = p.gamma1 / 150.0;
    p.gamma01 = p.physical_gamma01();
    p.rabi0 = 0.0;
    p.drive_freq = 0.0;
    p.validate();
    s.params = p;
    const double h = 1.0 / std::sqrt(2.0);
    s.initial = excited ? QubitState{cplx(1.0), cplx(0.0)} : QubitState{cplx(h), cplx(h)};
    s.grid = {0.0, 3.0, 301};
    s.mode = Mode::ZeroDrive;
    s.outputs = {Output::Populations, Output::Escape, Output::Deviation};
    pr.quoted = {{"gamma1", 0.1, "ns^-1"},
                 {"omega10", 5.0, "GHz"},
                 {"gamma1_over_gamma0", 150.0, ""}};
    return pr;
}

} // namespace

std::vector<double> GridSpec::times() const
{
    validate();
    std::vector<double> t(count);
    const double step = (stop - start) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) t[i] = start + step * static_cast<double>(i);
    t.back() = stop;
    return t;
}

void GridSpec::validate() const
{
    if (count < 2) throw InvalidParams("grid needs at least 2 points");
    if (!(start >= 0.0) || !(stop > start) || !std::isfinite(stop)) {
        throw InvalidParams("grid must satisfy 0 <= t0 < t1");
    }
}

GridSpec parse_grid(std::string_view text)
{
    const auto a = text.find(':');
    const auto b = a == std::string_view::npos ? a : text.find(':', a + 1);
    if (b == std::string_view::npos) throw ParseError(0, "grid must look like t0:t1:n");
    GridSpec g;
    g.start = parse_number(text.substr(0, a), "grid start");
    g.stop = parse_number(text.substr(a + 1, b - a - 1), "grid stop");
    const auto n = text.substr(b + 1);
    std::size_t count = 0;
    const auto [ptr, ec] = std::from_chars(n.data(), n.data() + n.size(), count);
    if (ec != std::errc() || ptr != n.data() + n.size()) throw ParseError(0, "invalid grid count");
    g.count = count;
    g.validate();
    return g;
}

bool Scenario::wants(Output o) const
{
    return std::find(outputs.begin(), outputs.end(), o) != outputs.end();
}

void Scenario::validate() const
{
    if (name.empty()) throw InvalidParams("scenario needs a name");
    params.validate();
    grid.validate();
    require_normalized(initial);
}

std::vector<std::string> preset_names()
{
    return {"fig2-bloch", "fig3-rabi", "fig4-deviation", "fig4-deviation-excited"};
}

void check_quoted(const Scenario& scenario, const std::vector<QuotedValue>& quoted)
{
    for (const auto& q : quoted) {
        const double internal = quoted_field(scenario, q.field);
        const double shown = (q.unit.empty() || q.unit == "rad") ? internal
                                                                 : from_internal(internal, parse_unit(q.unit));
        const double tol = 1e-12 * std::max(1.0, std::abs(q.value));
        if (!(std::abs(shown - q.value) <= tol)) {
            throw InvalidParams("preset " + scenario.name + ": " + q.field + " = " +
                                std::to_string(shown) + " " + q.unit + ", expected " +
                                std::to_string(q.value));
        }
    }
}

Preset load_preset(std::string_view name)
{
    Preset pr;
    if (name == "fig2-bloch") pr = bloch_spiral_preset();
    else if (name == "fig3-rabi") pr = rabi_scan_preset();
    else if (name == "fig4-deviation") pr = fast_readout_preset(false);
    else if (name == "fig4-deviation-excited") pr = fast_readout_preset(true);
    else throw InvalidParams("unknown preset '" + std::string(name) + "'");
    pr.scenario.validate();
    check_quoted(pr.scenario, pr.quoted);
    return pr;
}

ScenarioRun run_scenario(const Scenario& scenario, const PropagatorOptions& opts)
{
    scenario.validate();
    PropagationRequest request{scenario.initial, scenario.params, scenario.grid.times(), scenario.mode};
    ScenarioRun run;
    run.series = simulate(request, opts);

    const auto& last = run.series.rows.back();
    run.summary["final_rho11"] = last.rho11;
    run.summary["final_rho00"] = last.rho00;
    run.summary["final_p_esc"] = last.p_esc;
    run.summary["final_n0"] = last.bloch.n0;

    if (scenario.wants(Output::Deviation)) {
        double worst = 0.0;
        double t_worst = request.t_grid.front();
        for (double t : request.t_grid) {
            const double f = deviation_F(scenario.initial, scenario.params, t, opts);
            run.series.deviation.push_back(f);
            if (std::abs(f) > worst) {
                worst = std::abs(f);
                t_worst = t;
            }
        }
        run.summary["max_abs_deviation"] = worst;
        run.summary["t_at_max_abs_deviation_ns"] = t_worst;
    }
    return run;
}

std::string_view backend_name(Backend b) noexcept
{
    switch (b) {
    case Backend::Rwa:              return "rwa";
    case Backend::Numeric:          return "numeric";
    case Backend::ZeroDrive:        return "zero-drive";
    case Backend::ZeroDriveClosedForm: return "zero-drive-closed";
    case Backend::Weak:             return "weak";
    case Backend::LabFrame:         return "lab-frame";
    }
    return "?";
}

Backend parse_backend(std::string_view text)
{
    for (Backend b : {Backend::Rwa, Backend::Numeric, Backend::ZeroDrive, Backend::ZeroDriveClosedForm,
                      Backend::Weak, Backend::LabFrame}) {
        if (backend_name(b) == text) return b;
    }
    throw ParseError(0, "unknown backend '" + std::string(text) + "'");
}

std::vector<QubitState> propagate_backend(const Scenario& scenario, Backend backend,
                                          const PropagatorOptions& opts)
{
    scenario.validate();
    PropagationRequest request{scenario.initial, scenario.params, scenario.grid.times(), Mode::Rwa};
    switch (backend) {
    case Backend::Rwa:       request.mode = Mode::Rwa; break;
    case Backend::Numeric:   request.mode = Mode::Numeric; break;
    case Backend::ZeroDrive: request.mode = Mode::ZeroDrive; break;
    case Backend::Weak:      request.mode = Mode::WeakCoupling; break;
    case Backend::LabFrame:  request.mode = Mode::LabFrame; break;
    case Backend::ZeroDriveClosedForm: {
        request.validate();
        std::vector<QubitState> out;
        for (double t : request.t_grid) {
            out.push_back(zero_drive_amplitudes_closed_form(scenario.initial, scenario.params, t, opts));
        }
        return out;
    }
    }
    return propagate_grid(request, opts);
}

ComparisonReport compare_backends(const Scenario& scenario, Backend first, Backend second,
                                  const PropagatorOptions& opts)
{
    ComparisonReport report;
    report.scenario = scenario.name;
    report.first = first;
    report.second = second;
    report.times = scenario.grid.times();
    const auto a = propagate_backend(scenario, first, opts);
    const auto b = propagate_backend(scenario, second, opts);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double amp = max_abs_diff(a[i], b[i]);
        const auto pa = populations(a[i]);
        const auto pb = populations(b[i]);
        const double pop = std::max(std::abs(pa.rho11 - pb.rho11), std::abs(pa.rho00 - pb.rho00));
        report.amplitude_deviation.push_back(amp);
        report.population_deviation.push_back(pop);
        report.max_amplitude_deviation = std::max(report.max_amplitude_deviation, amp);
        report.max_population_deviation = std::max(report.max_population_deviation, pop);
    }
    return report;
}

} // namespace nhq
