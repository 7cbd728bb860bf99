#include "nhq/error.hpp"
#include "nhq/fitting.hpp"
#include "nhq/propagators.hpp"
#include "nhq/units.hpp"

#include "random.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace nhq;

namespace {

struct Truth {
    double rabi0 = to_internal(0.47, Unit::MHz);
    double detuning = to_internal(1.34, Unit::MHz);
    double gamma = to_internal(0.204, Unit::PerUs);
    double gamma0 = to_internal(0.4e-3, Unit::PerUs);

    std::map<std::string, double> values() const
    {
        return {{"rabi0", rabi0}, {"detuning", detuning}, {"gamma", gamma}, {"gamma0", gamma0}, {"scale", 1.0}};
    }
};

std::vector<DataPoint> synthetic(const Truth& truth, std::size_t n, double sigma, std::uint64_t seed)
{
    prop::Random r(seed);
    std::vector<DataPoint> data;
    const auto v = truth.values();
    for (std::size_t i = 0; i < n; ++i) {
        const double t = 1e4 * static_cast<double>(i + 1) / static_cast<double>(n);
        data.push_back({t, model_value(FitModel::SpecialGround, v, t) + sigma * r.normal(), 1.0});
    }
    return data;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double norm(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

} // namespace

TEST(Fit, NoiselessRoundTrip)
{
    const Truth truth;
    const auto problem = make_fit_problem(synthetic(truth, 200, 0.0, 1), FitModel::SpecialGround, truth.gamma,
                                          truth.gamma0);
    const FitResult r = fit(problem);
    ASSERT_TRUE(r.converged);
    EXPECT_LT(rel(r.params_hat.at("rabi0"), truth.rabi0), 1e-6);
    EXPECT_LT(rel(r.params_hat.at("detuning"), truth.detuning), 1e-6);
    EXPECT_LT(r.residual_norm, 1e-8);
    EXPECT_FALSE(r.degenerate);
    EXPECT_EQ(r.free_parameters, (std::vector<std::string>{"rabi0", "detuning"}));
}

TEST(Fit, NoisyRoundTripMedian)
{
    const Truth truth;
    std::vector<double> err_rabi, err_det;
    for (std::uint64_t s = 0; s < 25; ++s) {
        const auto problem = make_fit_problem(synthetic(truth, 200, 0.01, 100 + s), FitModel::SpecialGround,
                                              truth.gamma, truth.gamma0);
        const FitResult r = fit(problem);
        err_rabi.push_back(rel(r.params_hat.at("rabi0"), truth.rabi0));
        err_det.push_back(rel(r.params_hat.at("detuning"), truth.detuning));
    }
    std::nth_element(err_rabi.begin(), err_rabi.begin() + 12, err_rabi.end());
    std::nth_element(err_det.begin(), err_det.begin() + 12, err_det.end());
    EXPECT_LT(err_rabi[12], 0.02);
    EXPECT_LT(err_det[12], 0.02);
}

TEST(Fit, ZeroSignalIsDegenerate)
{
    std::vector<DataPoint> data;
    for (int i = 1; i <= 50; ++i) data.push_back({200.0 * i, 0.0, 1.0});
    const Truth truth;
    auto problem = make_fit_problem(data, FitModel::SpecialGround, truth.gamma, truth.gamma0);
    problem.seeds = {{{"rabi0", 0.003}, {"detuning", 0.008}}};
    const FitResult r = fit(problem);
    EXPECT_NEAR(r.params_hat.at("rabi0"), default_bounds("rabi0").lower, 1e-12);
    EXPECT_TRUE(r.degenerate);
    EXPECT_NE(r.degeneracy.find("detuning"), std::string::npos);
}

TEST(Fit, GeneralModelRecoversInitialPopulation)
{
    const Truth truth;
    auto v = truth.values();
    v["rho11_0"] = 0.0847;
    v["phase"] = 0.0;
    std::vector<DataPoint> data;
    for (int i = 1; i <= 200; ++i) {
        const double t = 50.0 * i;
        data.push_back({t, model_value(FitModel::GeneralState, v, t), 1.0});
    }
    const auto problem = make_fit_problem(data, FitModel::GeneralState, truth.gamma, truth.gamma0);
    const FitResult r = fit(problem);
    ASSERT_TRUE(r.converged);
    EXPECT_LT(rel(r.params_hat.at("rabi0"), truth.rabi0), 1e-6);
    EXPECT_LT(rel(r.params_hat.at("detuning"), truth.detuning), 1e-6);
    EXPECT_NEAR(r.params_hat.at("rho11_0"), 0.0847, 1e-7);
    EXPECT_EQ(r.params_hat.at("phase"), 0.0);
}

TEST(Fit, GeneralModelWithFreePhase)
{
    const Truth truth;
    auto v = truth.values();
    v["rho11_0"] = 0.3;
    v["phase"] = 0.8;
    std::vector<DataPoint> data;
    for (int i = 1; i <= 200; ++i) data.push_back({50.0 * i, model_value(FitModel::GeneralState, v, 50.0 * i), 1.0});
    auto problem = make_fit_problem(data, FitModel::GeneralState, truth.gamma, truth.gamma0);
    problem.fixed.erase("phase");
    const FitResult r = fit(problem);
    ASSERT_TRUE(r.converged);
    EXPECT_LT(r.residual_norm, 1e-7);
    EXPECT_NEAR(r.params_hat.at("rho11_0"), 0.3, 1e-6);
}

TEST(Fit, SpecialModelIsGeneralFromGround)
{
    prop::Random r(61);
    for (int i = 0; i < 200; ++i) {
        std::map<std::string, double> v{{"rabi0", r.uniform(0.0, 0.05)}, {"detuning", r.uniform(0.0, 0.05)},
                                        {"gamma", r.uniform(1e-4, 1e-3)}, {"gamma0", 0.0},
                                        {"scale", r.uniform(0.5, 1.5)}};
        v["gamma0"] = r.uniform(0.0, 2.0 * v["gamma"]);
        auto v8 = v;
        v8["rho11_0"] = 0.0;
        v8["phase"] = r.phase();
        const double t = r.uniform(0.0, 1e4);
        EXPECT_NEAR(model_value(FitModel::SpecialGround, v, t), model_value(FitModel::GeneralState, v8, t), 1e-12);
    }
}

TEST(Residuals, ZeroAtTruth)
{
    const Truth truth;
    const auto problem = make_fit_problem(synthetic(truth, 100, 0.0, 2), FitModel::SpecialGround, truth.gamma,
                                          truth.gamma0);
    for (double x : residuals(problem, {{"rabi0", truth.rabi0}, {"detuning", truth.detuning}})) {
        EXPECT_NEAR(x, 0.0, 1e-15);
    }
}

TEST(Residuals, ZeroWeightContributesNothing)
{
    const Truth truth;
    auto data = synthetic(truth, 10, 0.0, 3);
    data[4].p += 0.5;
    data[4].weight = 0.0;
    const auto problem = make_fit_problem(data, FitModel::SpecialGround, truth.gamma, truth.gamma0);
    const auto res = residuals(problem, {{"rabi0", truth.rabi0}, {"detuning", truth.detuning}});
    EXPECT_EQ(res[4], 0.0);
}

TEST(Residuals, PerturbationFollowsLinearisation)
{
    const Truth truth;
    const auto problem = make_fit_problem(synthetic(truth, 200, 0.0, 4), FitModel::SpecialGround, truth.gamma,
                                          truth.gamma0);
    const std::map<std::string, double> x{{"rabi0", truth.rabi0}, {"detuning", truth.detuning}};
    const auto jac = residual_jacobian(problem, x, 1e-6);
    const double dx = 0.01 * truth.rabi0;
    std::vector<double> lin;
    for (const auto& row : jac) lin.push_back(row[0] * dx);
    auto moved = x;
    moved["rabi0"] += dx;
    // Residuals vanish at the truth, so the 1% step is dominated by J dx.
    EXPECT_LT(rel(norm(residuals(problem, moved)), norm(lin)), 0.05);
}

TEST(Residuals, JacobianRichardsonConsistency)
{
    prop::Random r(62);
    const Truth truth;
    const auto problem = make_fit_problem(synthetic(truth, 60, 0.01, 5), FitModel::SpecialGround, truth.gamma,
                                          truth.gamma0);
    for (int i = 0; i < 20; ++i) {
        const std::map<std::string, double> x{{"rabi0", truth.rabi0 * r.uniform(0.5, 1.5)},
                                              {"detuning", truth.detuning * r.uniform(0.5, 1.5)}};
        const auto a = residual_jacobian(problem, x, 1e-6);
        const auto b = residual_jacobian(problem, x, 2e-6);
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            for (std::size_t j = 0; j < a[k].size(); ++j) {
                num = std::max(num, std::abs(a[k][j] - b[k][j]));
                den = std::max(den, std::abs(a[k][j]));
            }
        }
        EXPECT_LT(num / den, 1e-5);
    }
}

TEST(Fit, WeightScaleInvariance)
{
    const Truth truth;
    auto data = synthetic(truth, 200, 0.01, 6);
    auto problem = make_fit_problem(data, FitModel::SpecialGround, truth.gamma, truth.gamma0);
    const FitResult a = fit(problem);
    for (auto& d : problem.data) d.weight *= 7.5;
    const FitResult b = fit(problem);
    // Agreement is limited by the step-length stopping rule.
    const double tol = 100.0 * FitOptions{}.xtol;
    EXPECT_LT(rel(a.params_hat.at("rabi0"), b.params_hat.at("rabi0")), tol);
    EXPECT_LT(rel(a.params_hat.at("detuning"), b.params_hat.at("detuning")), tol);
}

TEST(Fit, RefitIsIdempotent)
{
    const Truth truth;
    const auto problem = make_fit_problem(synthetic(truth, 200, 0.01, 7), FitModel::SpecialGround, truth.gamma,
                                          truth.gamma0);
    const FitResult a = fit(problem);
    const FitResult b = fit_from(problem, {{"rabi0", a.params_hat.at("rabi0")},
                                           {"detuning", a.params_hat.at("detuning")}});
    EXPECT_TRUE(b.converged);
    EXPECT_LE(b.iterations, 2);
    EXPECT_LT(rel(a.params_hat.at("rabi0"), b.params_hat.at("rabi0")), 1e-10);
    EXPECT_LT(rel(a.params_hat.at("detuning"), b.params_hat.at("detuning")), 1e-10);
}

TEST(Fit, Deterministic)
{
    const Truth truth;
    const auto problem = make_fit_problem(synthetic(truth, 200, 0.01, 8), FitModel::SpecialGround, truth.gamma,
                                          truth.gamma0);
    const FitResult a = fit(problem);
    const FitResult b = fit(problem);
    EXPECT_EQ(a.params_hat, b.params_hat);
    EXPECT_EQ(a.seed_used, b.seed_used);
    EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Fit, ResultWithinBoundsAndCovariance)
{
    const Truth truth;
    auto problem = make_fit_problem(synthetic(truth, 200, 0.01, 9), FitModel::SpecialGround, truth.gamma,
                                    truth.gamma0);
    problem.bounds["rabi0"] = {0.0, 0.0029};
    const FitResult r = fit(problem);
    EXPECT_LE(r.params_hat.at("rabi0"), 0.0029);
    EXPECT_GE(r.residual_norm, 0.0);
    ASSERT_EQ(r.covariance.size(), 2u);
    EXPECT_GE(r.covariance[0][0], 0.0);
    EXPECT_GE(r.covariance[1][1], 0.0);
    EXPECT_DOUBLE_EQ(r.covariance[0][1], r.covariance[1][0]);
}

TEST(Fit, NoConvergenceCarriesDiagnostics)
{
    const Truth truth;
    auto problem = make_fit_problem(synthetic(truth, 200, 0.01, 10), FitModel::SpecialGround, truth.gamma,
                                    truth.gamma0);
    problem.options.max_iterations = 1;
    problem.seeds = {{{"rabi0", 0.001}, {"detuning", 0.02}}, {{"rabi0", 0.004}, {"detuning", 0.001}}};
    try {
        fit(problem);
        FAIL() << "expected FitError";
    } catch (const FitError& e) {
        ASSERT_EQ(e.diagnostics().size(), 2u);
        EXPECT_FALSE(e.diagnostics()[0].converged);
        EXPECT_EQ(e.diagnostics()[1].seed_index, 1u);
    }
}

TEST(FitProblem, Validation)
{
    const Truth truth;
    auto problem = make_fit_problem(synthetic(truth, 3, 0.0, 11), FitModel::SpecialGround, truth.gamma, truth.gamma0);
    EXPECT_THROW(problem.validate(), InvalidParams);

    problem = make_fit_problem(synthetic(truth, 10, 0.0, 11), FitModel::SpecialGround, truth.gamma, truth.gamma0);
    EXPECT_NO_THROW(problem.validate());
    problem.data[3].t = problem.data[2].t;
    EXPECT_THROW(problem.validate(), InvalidParams);

    problem = make_fit_problem(synthetic(truth, 10, 0.0, 11), FitModel::SpecialGround, truth.gamma, truth.gamma0);
    problem.data[1].weight = -1.0;
    EXPECT_THROW(problem.validate(), InvalidParams);

    problem = make_fit_problem(synthetic(truth, 10, 0.0, 11), FitModel::SpecialGround, truth.gamma, truth.gamma0);
    problem.fixed["rho11_0"] = 0.5;
    EXPECT_THROW(problem.validate(), InvalidParams);
}

TEST(FitModel, NamesAndParameters)
{
    EXPECT_EQ(parse_model("eq10"), FitModel::SpecialGround);
    EXPECT_EQ(parse_model("eq8_general"), FitModel::GeneralState);
    EXPECT_THROW(parse_model("quadratic"), ParseError);
    EXPECT_EQ(model_parameters(FitModel::SpecialGround).size(), 5u);
    EXPECT_EQ(model_parameters(FitModel::GeneralState).size(), 7u);
    EXPECT_EQ(default_bounds("rho11_0").upper, 1.0);
}

TEST(AutoSeeds, BracketTruePeriod)
{
    const Truth truth;
    const auto problem = make_fit_problem(synthetic(truth, 200, 0.01, 12), FitModel::SpecialGround, truth.gamma,
                                          truth.gamma0);
    const auto seeds = auto_seeds(problem);
    ASSERT_FALSE(seeds.empty());
    const double w = std::hypot(truth.rabi0, truth.detuning);
    double closest = 1e9;
    for (const auto& s : seeds) closest = std::min(closest, rel(std::hypot(s.at("rabi0"), s.at("detuning")), w));
    EXPECT_LT(closest, 0.1);
}
