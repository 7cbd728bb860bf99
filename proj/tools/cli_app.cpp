#include "cli_app.hpp"

#include "nhq/nhq.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

namespace nhq::cli {

namespace {

using nlohmann::ordered_json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ScenarioOptions {
    std::string preset;
    std::string params_path;
    std::string initial;
    bool normalize = false;
    std::string grid;
    std::string mode;
};

struct ToleranceOptions {
    double rel_tol;
    double abs_tol;

    PropagatorOptions propagator() const
    {
        PropagatorOptions opts;
        opts.integrator.rel_tol = rel_tol;
        opts.integrator.abs_tol = abs_tol;
        opts.integrator.validate();
        return opts;
    }
};

void add_tolerance_options(CLI::App* cmd, ToleranceOptions& o)
{
    cmd->add_option("--rtol", o.rel_tol, "Relative tolerance of the integrating backends")->capture_default_str();
    cmd->add_option("--atol", o.abs_tol, "Absolute tolerance of the integrating backends")->capture_default_str();
}

struct OutputOptions {
    std::string format = "csv";
    std::string out_path;
};

void add_scenario_options(CLI::App* cmd, ScenarioOptions& o)
{
    cmd->add_option("--preset", o.preset, "Named scenario (see `presets`)");
    cmd->add_option("--params", o.params_path, "Parameter file (key = value [unit])");
    cmd->add_option("--initial", o.initial, "Initial amplitudes c1_re,c1_im,c0_re,c0_im");
    cmd->add_flag("--normalize", o.normalize, "Renormalise --initial instead of rejecting it");
    cmd->add_option("--grid", o.grid, "Time grid t0:t1:n in ns");
    cmd->add_option("--mode", o.mode, "rwa | zero-drive | weak | numeric | lab-frame");
}

void add_output_options(CLI::App* cmd, OutputOptions& o, const char* default_format)
{
    o.format = default_format;
    cmd->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", o.out_path, "Write to this file instead of stdout");
}

QubitState parse_initial(const std::string& text, bool normalize)
{
    std::vector<double> v;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(field, &used));
            if (used != field.size()) throw std::invalid_argument(field);
        } catch (const std::exception&) {
            throw ParseError(0, "invalid --initial component '" + field + "'");
        }
    }
    if (v.size() != 4) throw ParseError(0, "--initial needs 4 comma-separated numbers");
    QubitState s{cplx(v[0], v[1]), cplx(v[2], v[3])};
    return normalize ? normalized(s) : s;
}

Scenario build_scenario(const ScenarioOptions& o)
{
    Scenario s;
    if (!o.preset.empty() && !o.params_path.empty()) {
        throw UsageError("--preset and --params are mutually exclusive");
    }
    if (!o.preset.empty()) {
        s = load_preset(o.preset).scenario;
    } else if (!o.params_path.empty()) {
        s.name = std::filesystem::path(o.params_path).stem().string();
        s.params = load_params(o.params_path);
        s.initial = {cplx(0.0), cplx(1.0)};
        s.mode = Mode::Rwa;
        s.outputs = {Output::Populations, Output::Escape, Output::Bloch};
        if (o.grid.empty()) throw UsageError("--grid is required with --params");
    } else {
        throw UsageError("either --preset or --params is required");
    }
    if (!o.initial.empty()) s.initial = parse_initial(o.initial, o.normalize);
    if (!o.grid.empty()) s.grid = parse_grid(o.grid);
    if (!o.mode.empty()) s.mode = parse_mode(o.mode);
    s.validate();
    return s;
}

std::filesystem::path resolve_output(const std::string& path)
{
    std::filesystem::path p(path);
    if (p.is_relative()) {
        if (const char* dir = std::getenv(output_dir_env); dir && *dir) {
            p = std::filesystem::path(dir) / p;
        }
    }
    return p;
}

void emit(const std::string& payload, const OutputOptions& o, std::ostream& out)
{
    if (o.out_path.empty()) {
        out << payload;
        return;
    }
    const auto path = resolve_output(o.out_path);
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open output file '" + path.string() + "'");
    file << payload;
    if (!file) throw IoError("failed writing '" + path.string() + "'");
}

ordered_json params_json(const QubitParams& p)
{
    return {{"omega0", p.omega0},         {"omega1", p.omega1},   {"gamma0", p.gamma0},
            {"gamma1", p.gamma1},         {"gamma01", p.gamma01}, {"rabi0", p.rabi0},
            {"drive_freq", p.drive_freq}, {"drive_phase", p.drive_phase}};
}

// ---- simulate ---------------------------------------------------------------

struct SimulateOptions {
    ScenarioOptions scenario;
    OutputOptions output;
    ToleranceOptions tolerance{1e-10, 1e-12};
    bool deviation = false;
    std::string fit_column;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
    std::string time_unit = "ns";
};

int simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err)
{
    Scenario s = build_scenario(o.scenario);
    if (o.deviation && !s.wants(Output::Deviation)) s.outputs.push_back(Output::Deviation);
    if (!(o.noise_sigma >= 0.0)) throw UsageError("--noise-sigma must be >= 0");
    const ScenarioRun run = run_scenario(s, o.tolerance.propagator());

    std::ostringstream payload;
    if (!o.fit_column.empty()) {
        const Unit unit = parse_unit(o.time_unit);
        if (dimension_of(unit) != Dimension::Time) throw UsageError("--time-unit must be ns or us");
        std::mt19937_64 rng(o.seed);
        std::normal_distribution<double> noise(0.0, 1.0);
        std::vector<DataPoint> data;
        for (std::size_t i = 0; i < run.series.size(); ++i) {
            const auto& r = run.series.rows[i];
            double p = 0.0;
            if (o.fit_column == "rho11") p = r.rho11;
            else if (o.fit_column == "rho00") p = r.rho00;
            else if (o.fit_column == "p_esc") p = r.p_esc;
            else throw UsageError("--fit-data takes rho11, rho00 or p_esc");
            if (o.noise_sigma > 0.0) p += o.noise_sigma * noise(rng);
            data.push_back({run.series.times[i], p, 1.0});
        }
        write_fit_data(payload, data, unit);
    } else if (o.output.format == "json") {
        write_json(payload, run.series);
    } else {
        write_csv(payload, run.series);
    }
    emit(payload.str(), o.output, out);

    ordered_json summary;
    summary["scenario"] = s.name;
    summary["mode"] = std::string(mode_name(s.mode));
    summary["points"] = run.series.size();
    for (const auto& [k, v] : run.summary) summary["summary"][k] = v;
    err << ordered_json{{"summary", summary}}.dump() << '\n';
    return Ok;
}

// ---- fit ----------------------------------------------------------------------

struct FitOptionsCli {
    std::string data_path;
    std::string time_unit;
    std::string model = "eq10";
    std::string params_path;
    std::vector<std::string> fix;
    std::vector<std::string> free;
    int max_iterations = FitOptions{}.max_iterations;
    OutputOptions output;
};

std::pair<double, std::string> display_unit(const std::string& name, double value)
{
    if (name == "rabi0" || name == "detuning") return {from_internal(value, Unit::MHz), "MHz"};
    if (name == "gamma" || name == "gamma0") return {from_internal(value, Unit::PerUs), "us^-1"};
    if (name == "phase") return {value, "rad"};
    return {value, ""};
}

std::string internal_unit(const std::string& name)
{
    if (name == "rabi0" || name == "detuning") return "rad/ns";
    if (name == "gamma" || name == "gamma0") return "ns^-1";
    if (name == "phase") return "rad";
    return "";
}

double parse_fixed_value(const std::string& name, const std::string& text)
{
    std::istringstream tokens(text);
    std::string number, unit, extra;
    tokens >> number >> unit >> extra;
    if (!extra.empty()) throw ParseError(0, "--fix " + name + ": trailing text");
    double v = 0.0;
    try {
        std::size_t used = 0;
        v = std::stod(number, &used);
        if (used != number.size()) throw std::invalid_argument(number);
    } catch (const std::exception&) {
        throw ParseError(0, "--fix " + name + ": invalid number '" + number + "'");
    }
    if (unit.empty() || unit == "rad") return v;
    const Unit u = parse_unit(unit);
    const std::string iu = internal_unit(name);
    if (iu.empty() || iu == "rad" || dimension_of(u) != dimension_of(parse_unit(iu))) {
        throw UnitError("unit '" + unit + "' does not fit parameter '" + name + "'");
    }
    return to_internal(v, u);
}

int fit_command(const FitOptionsCli& o, std::ostream& out, std::ostream& err)
{
    const FitModel model = parse_model(o.model);
    std::optional<Unit> unit;
    if (!o.time_unit.empty()) unit = parse_unit(o.time_unit);
    auto data = load_fit_data(o.data_path, unit);

    FitProblem problem;
    problem.data = std::move(data);
    problem.model = model;
    problem.options.max_iterations = o.max_iterations;
    problem.fixed["scale"] = 1.0;
    if (model == FitModel::GeneralState) problem.fixed["phase"] = 0.0;
    if (!o.params_path.empty()) {
        const QubitParams p = load_params(o.params_path);
        problem.fixed["gamma"] = p.gamma_mean();
        problem.fixed["gamma0"] = p.gamma0;
    }
    const auto& names = model_parameters(model);
    auto known = [&](const std::string& n) { return std::find(names.begin(), names.end(), n) != names.end(); };
    for (const auto& f : o.fix) {
        const auto eq = f.find('=');
        if (eq == std::string::npos) throw UsageError("--fix expects name=value [unit]");
        const std::string name = f.substr(0, eq);
        if (!known(name)) throw UsageError("unknown fit parameter '" + name + "'");
        problem.fixed[name] = parse_fixed_value(name, f.substr(eq + 1));
    }
    for (const auto& name : o.free) {
        if (!known(name)) throw UsageError("unknown fit parameter '" + name + "'");
        problem.fixed.erase(name);
    }
    for (const char* required : {"gamma", "gamma0"}) {
        const bool freed = std::find(o.free.begin(), o.free.end(), required) != o.free.end();
        if (!problem.fixed.contains(required) && !freed) {
            throw UsageError(std::string(required) +
                             " must be fixed (--params or --fix) or freed explicitly with --free");
        }
    }

    const FitResult r = fit(problem);

    ordered_json j;
    j["model"] = std::string(model_name(model));
    j["converged"] = r.converged;
    j["degenerate"] = r.degenerate;
    j["degeneracy"] = r.degeneracy;
    j["iterations"] = r.iterations;
    j["seed_used"] = r.seed_used;
    j["seeds_tried"] = r.seeds_tried.size();
    j["residual_norm"] = r.residual_norm;
    j["free_parameters"] = r.free_parameters;
    for (const auto& name : names) {
        const double v = r.params_hat.at(name);
        const auto [dv, du] = display_unit(name, v);
        ordered_json e{{"value", v}, {"unit", internal_unit(name)}, {"display_value", dv},
                       {"display_unit", du}, {"fixed", problem.fixed.contains(name)}};
        const auto it = std::find(r.free_parameters.begin(), r.free_parameters.end(), name);
        if (it != r.free_parameters.end()) {
            const auto k = static_cast<std::size_t>(it - r.free_parameters.begin());
            e["std_error"] = std::sqrt(std::max(0.0, r.covariance[k][k]));
        }
        j["parameters"][name] = e;
    }
    j["covariance"] = r.covariance;
    emit(j.dump(2) + "\n", o.output, out);
    (void)err;
    return Ok;
}

// ---- compare ------------------------------------------------------------------

struct CompareOptions {
    ScenarioOptions scenario;
    OutputOptions output;
    // Comparisons verify closed forms, so the oracle runs tighter by default.
    ToleranceOptions tolerance{1e-12, 1e-14};
    std::string backends;
};

int compare_command(const CompareOptions& o, std::ostream& out, std::ostream&)
{
    const Scenario s = build_scenario(o.scenario);
    const auto comma = o.backends.find(',');
    if (comma == std::string::npos) throw UsageError("--backends expects two names: a,b");
    const Backend a = parse_backend(o.backends.substr(0, comma));
    const Backend b = parse_backend(o.backends.substr(comma + 1));
    const auto report = compare_backends(s, a, b, o.tolerance.propagator());

    ordered_json j;
    j["scenario"] = report.scenario;
    j["backends"] = {std::string(backend_name(a)), std::string(backend_name(b))};
    j["max_amplitude_deviation"] = report.max_amplitude_deviation;
    j["max_population_deviation"] = report.max_population_deviation;
    ordered_json samples = ordered_json::array();
    for (std::size_t i = 0; i < report.times.size(); ++i) {
        samples.push_back({{"t_ns", report.times[i]},
                           {"amplitude_deviation", report.amplitude_deviation[i]},
                           {"population_deviation", report.population_deviation[i]}});
    }
    j["samples"] = samples;
    emit(j.dump(2) + "\n", o.output, out);
    return Ok;
}

// ---- presets ------------------------------------------------------------------

int presets_command(std::ostream& out)
{
    ordered_json list = ordered_json::array();
    for (const auto& name : preset_names()) {
        const Preset p = load_preset(name);
        const Scenario& s = p.scenario;
        ordered_json quoted = ordered_json::array();
        for (const auto& q : p.quoted) quoted.push_back({{"field", q.field}, {"value", q.value}, {"unit", q.unit}});
        list.push_back({{"name", s.name},
                        {"description", p.description},
                        {"mode", std::string(mode_name(s.mode))},
                        {"grid", {{"start_ns", s.grid.start}, {"stop_ns", s.grid.stop}, {"count", s.grid.count}}},
                        {"initial", {s.initial.c1.real(), s.initial.c1.imag(), s.initial.c0.real(), s.initial.c0.imag()}},
                        {"params", params_json(s.params)},
                        {"quoted", quoted}});
    }
    out << list.dump(2) << '\n';
    return Ok;
}

int report_error(std::ostream& err, int code, const std::string& kind, const std::string& message,
                 std::optional<std::size_t> line = {}, const ordered_json& extra = {})
{
    ordered_json e{{"kind", kind}, {"message", message}, {"exit_code", code}};
    if (line && *line > 0) e["line"] = *line;
    if (!extra.is_null()) e["details"] = extra;
    err << ordered_json{{"error", e}}.dump() << '\n';
    return code;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Non-Hermitian phase-qubit measurement simulator", "nhq"};
    app.require_subcommand(1);

    SimulateOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Propagate a scenario and emit its time series");
    add_scenario_options(sim_cmd, sim.scenario);
    add_output_options(sim_cmd, sim.output, "csv");
    add_tolerance_options(sim_cmd, sim.tolerance);
    sim_cmd->add_flag("--deviation", sim.deviation, "Add the cross-channel deviation column");
    sim_cmd->add_option("--fit-data", sim.fit_column, "Emit t,p fit data from rho11 | rho00 | p_esc");
    sim_cmd->add_option("--noise-sigma", sim.noise_sigma, "Gaussian noise added to --fit-data");
    sim_cmd->add_option("--seed", sim.seed, "Noise seed (u64)");
    sim_cmd->add_option("--time-unit", sim.time_unit, "Time unit of --fit-data output (ns | us)");

    FitOptionsCli fo;
    auto* fit_cmd = app.add_subcommand("fit", "Fit a Rabi model to t,p data");
    fit_cmd->add_option("--data", fo.data_path, "CSV with header t,p[,weight]")->required();
    fit_cmd->add_option("--time-unit", fo.time_unit, "Overrides the file's time unit declaration");
    fit_cmd->add_option("--model", fo.model, "eq10 | eq8")->check(CLI::IsMember({"eq10", "eq8", "eq10_special", "eq8_general"}));
    fit_cmd->add_option("--params", fo.params_path, "Parameter file supplying gamma and gamma0");
    fit_cmd->add_option("--fix", fo.fix, "Fix a parameter: name=value [unit]");
    fit_cmd->add_option("--free", fo.free, "Free a parameter that is fixed by default");
    fit_cmd->add_option("--max-iterations", fo.max_iterations, "Iteration cap per seed")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    add_output_options(fit_cmd, fo.output, "json");

    CompareOptions co;
    auto* cmp_cmd = app.add_subcommand("compare", "Compare two propagation backends on a scenario");
    add_scenario_options(cmp_cmd, co.scenario);
    add_output_options(cmp_cmd, co.output, "json");
    add_tolerance_options(cmp_cmd, co.tolerance);
    cmp_cmd->add_option("--backends", co.backends,
                        "a,b from rwa, numeric, zero-drive, zero-drive-closed, weak, lab-frame")
        ->required();

    auto* presets_cmd = app.add_subcommand("presets", "List built-in scenarios as JSON");

    std::vector<const char*> argv{"nhq"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return Ok;
    } catch (const CLI::ParseError& e) {
        return report_error(err, Usage, "usage", e.what());
    }

    try {
        if (*sim_cmd) return simulate(sim, out, err);
        if (*fit_cmd) return fit_command(fo, out, err);
        if (*cmp_cmd) return compare_command(co, out, err);
        if (*presets_cmd) return presets_command(out);
        return report_error(err, Usage, "usage", "no subcommand");
    } catch (const UsageError& e) {
        return report_error(err, Usage, "usage", e.what());
    } catch (const IoError& e) {
        return report_error(err, Io, "io", e.what());
    } catch (const ParseError& e) {
        return report_error(err, Parse, "parse", e.what(), e.line());
    } catch (const UnitError& e) {
        return report_error(err, Parse, "unit", e.what());
    } catch (const FitError& e) {
        ordered_json seeds = ordered_json::array();
        for (const auto& d : e.diagnostics()) {
            seeds.push_back({{"seed", d.seed_index}, {"converged", d.converged}, {"failed", d.failed},
                             {"iterations", d.iterations}, {"message", d.message}});
        }
        return report_error(err, FitFailure, "fit", e.what(), {}, seeds);
    } catch (const Error& e) {
        return report_error(err, Model, "model", e.what());
    } catch (const std::exception& e) {
        return report_error(err, Model, "internal", e.what());
    }
}

} // namespace nhq::cli
