#pragma once

#include "nhq/params.hpp"
#include "nhq/propagators.hpp"
#include "nhq/state.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace nhq {

struct GridSpec {
    double start = 0.0; // ns
    double stop = 0.0;  // ns
    std::size_t count = 2;

    /// count evenly spaced points including both ends.
    std::vector<double> times() const;
    void validate() const;
};

/// Parses "t0:t1:n" with times in ns.
GridSpec parse_grid(std::string_view text);

enum class Output { Populations, Escape, Bloch, Deviation };

struct Scenario {
    std::string name;
    QubitParams params;
    QubitState initial;
    GridSpec grid;
    Mode mode = Mode::Rwa;
    std::vector<Output> outputs;

    bool wants(Output o) const;
    void validate() const;
};

/// A parameter quoted by the source regime, with the unit it was quoted in.
struct QuotedValue {
    std::string field;  ///< rabi0, detuning, gamma, gamma0, gamma1, omega10, drive_phase
    double value;
    std::string unit;   ///< unit tag understood by parse_unit, or "rad"
};

struct Preset {
    Scenario scenario;
    std::vector<QuotedValue> quoted;
    std::string description;
};

std::vector<std::string> preset_names();

/// Builds a preset and checks it against its quoted values (relative 1e-12).
/// Throws InvalidParams for an unknown name or a failed check.
Preset load_preset(std::string_view name);

/// Throws InvalidParams when the scenario params disagree with `quoted`.
void check_quoted(const Scenario& scenario, const std::vector<QuotedValue>& quoted);

struct ScenarioRun {
    TimeSeries series;
    std::map<std::string, double> summary;
};

/// Propagates the scenario over its grid. The deviation column and its summary
/// (max_abs_deviation, t_at_max_abs_deviation) are filled when requested.
/// Summary also carries final populations and escape probability.
ScenarioRun run_scenario(const Scenario& scenario, const PropagatorOptions& opts = {});

enum class Backend { Rwa, Numeric, ZeroDrive, ZeroDriveClosedForm, Weak, LabFrame };

std::string_view backend_name(Backend b) noexcept;
Backend parse_backend(std::string_view text);

struct ComparisonReport {
    std::string scenario;
    Backend first = Backend::Rwa;
    Backend second = Backend::Rwa;
    std::vector<double> times;
    std::vector<double> amplitude_deviation;  ///< max(|dC1|, |dC0|); frame dependent
    std::vector<double> population_deviation; ///< max(|d rho11|, |d rho00|)
    double max_amplitude_deviation = 0.0;
    double max_population_deviation = 0.0;
};

std::vector<QubitState> propagate_backend(const Scenario& scenario, Backend backend,
                                          const PropagatorOptions& opts = {});

ComparisonReport compare_backends(const Scenario& scenario, Backend first, Backend second,
                                  const PropagatorOptions& opts = {});

} // namespace nhq
