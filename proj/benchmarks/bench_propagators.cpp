#include "nhq/nhq.hpp"

#include <benchmark/benchmark.h>

#include <numbers>

using namespace nhq;

namespace {

QubitParams rabi_scan()
{
    return params_from_rwa(to_internal(5.0, Unit::GHz), to_internal(1.34, Unit::MHz),
                           to_internal(0.47, Unit::MHz), to_internal(0.204, Unit::PerUs),
                           to_internal(0.4e-3, Unit::PerUs));
}

const QubitState start = normalized({cplx(0.291), cplx(0.956)});

void BM_RwaAmplitudes(benchmark::State& state)
{
    const QubitParams p = rabi_scan();
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(rwa_amplitudes(start, p, t));
        t += 1.0;
    }
}
BENCHMARK(BM_RwaAmplitudes);

void BM_ZeroDriveAmplitudes(benchmark::State& state)
{
    QubitParams p;
    p.omega1 = to_internal(5.0, Unit::GHz);
    p.gamma1 = 0.1;
    p.gamma0 = p.gamma1 / 150.0;
    p.gamma01 = p.physical_gamma01();
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(zero_drive_amplitudes(start, p, t));
        t += 0.01;
    }
}
BENCHMARK(BM_ZeroDriveAmplitudes);

void BM_IntegrateRwa(benchmark::State& state)
{
    const QubitParams p = rabi_scan();
    const auto gen = TimeDependentGenerator::from_constant(build_rwa(p));
    IntegratorConfig cfg;
    cfg.rel_tol = std::pow(10.0, -static_cast<double>(state.range(0)));
    cfg.abs_tol = cfg.rel_tol * 1e-2;
    for (auto _ : state) benchmark::DoNotOptimize(integrate(gen, start, 0.0, 1e4, cfg));
}
BENCHMARK(BM_IntegrateRwa)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_IntegrateLabFrame(benchmark::State& state)
{
    const QubitParams p = params_from_rwa(to_internal(5.0, Unit::GHz), 0.0, to_internal(80.0, Unit::MHz),
                                          0.035, 0.0, -std::numbers::pi / 2.0);
    const auto gen = build_lab_frame(p);
    for (auto _ : state) benchmark::DoNotOptimize(integrate(gen, start, 0.0, 25.0));
}
BENCHMARK(BM_IntegrateLabFrame)->Unit(benchmark::kMillisecond);

void BM_SimulatePreset(benchmark::State& state)
{
    const Scenario s = load_preset("fig3-rabi").scenario;
    for (auto _ : state) benchmark::DoNotOptimize(run_scenario(s));
}
BENCHMARK(BM_SimulatePreset)->Unit(benchmark::kMicrosecond);

void BM_FitNoiseless(benchmark::State& state)
{
    const QubitParams p = rabi_scan();
    const std::map<std::string, double> truth{{"rabi0", p.rabi0}, {"detuning", p.detuning()},
                                              {"gamma", p.gamma_mean()}, {"gamma0", p.gamma0}, {"scale", 1.0}};
    std::vector<DataPoint> data;
    for (int i = 1; i <= 200; ++i) data.push_back({50.0 * i, model_value(FitModel::SpecialGround, truth, 50.0 * i)});
    const FitProblem problem = make_fit_problem(data, FitModel::SpecialGround, p.gamma_mean(), p.gamma0);
    for (auto _ : state) benchmark::DoNotOptimize(fit(problem));
}
BENCHMARK(BM_FitNoiseless)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
