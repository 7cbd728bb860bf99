#pragma once

#include "nhq/error.hpp"
#include "nhq/params.hpp"

#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace nhq {

/// Upper-level population models a time series can be fitted to.
enum class FitModel {
    /// scale * exp(-Gamma t) rabi0^2/|Omega|^2 |sin(Omega t/2)|^2 (system starts in |0>).
    SpecialGround,
    /// scale * rho11(t) of the rotating-wave solution from
    /// C1 = sqrt(rho11_0), C0 = sqrt(1 - rho11_0) e^{i phase}.
    GeneralState,
};

std::string_view model_name(FitModel model) noexcept;
FitModel parse_model(std::string_view text);

/// Parameter names a model depends on, in canonical order:
/// rabi0, detuning, gamma, gamma0, scale [, rho11_0, phase].
/// Frequencies are rad/ns, rates 1/ns.
const std::vector<std::string>& model_parameters(FitModel model);

struct DataPoint {
    double t = 0.0; // ns
    double p = 0.0;
    double weight = 1.0;
};

struct Bounds {
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
};

struct FitOptions {
    int max_iterations = 200;
    double ftol = 1e-14;   ///< relative cost reduction
    double xtol = 1e-10;   ///< relative step length (scaled)
    double gtol = 1e-12;   ///< cosine between residual and Jacobian columns
    double jacobian_step = 1e-6;
    double rank_tol = 1e-8; ///< relative singular value threshold for degeneracy
};

/// Every model parameter absent from `fixed` is free. Bounds default to
/// model_default_bounds(); seeds, if empty, are generated from the data.
struct FitProblem {
    std::vector<DataPoint> data;
    FitModel model = FitModel::SpecialGround;
    std::map<std::string, double> fixed;
    std::map<std::string, Bounds> bounds;
    std::vector<std::map<std::string, double>> seeds;
    FitOptions options;

    std::vector<std::string> free_parameters() const;
    Bounds bounds_for(const std::string& name) const;

    /// Throws InvalidParams when the data or parameter sets are inconsistent.
    void validate() const;
};

/// Default problem: gamma and gamma0 fixed at the given values, scale fixed to 1,
/// and for GeneralState the relative phase fixed to 0. rabi0 and detuning
/// (plus rho11_0 for GeneralState) are free.
FitProblem make_fit_problem(std::vector<DataPoint> data, FitModel model, double gamma_mean,
                            double gamma0);

Bounds default_bounds(const std::string& name);

/// Model value at time t for a complete parameter assignment.
double model_value(FitModel model, const std::map<std::string, double>& values, double t);

/// sqrt(w_i) (model(t_i) - p_i). `values` supplies the free parameters; fixed
/// ones come from the problem.
std::vector<double> residuals(const FitProblem& problem, const std::map<std::string, double>& values);

/// Jacobian of residuals() w.r.t. the free parameters (row-major, rows = data
/// points), central differences with step rel_step * max(|x|, typical).
std::vector<std::vector<double>> residual_jacobian(const FitProblem& problem,
                                                   const std::map<std::string, double>& values,
                                                   double rel_step);

struct SeedDiagnostics {
    std::size_t seed_index = 0;
    bool converged = false;
    bool failed = false; ///< threw before producing a result
    int iterations = 0;
    double residual_norm = std::numeric_limits<double>::quiet_NaN();
    std::string message;
};

struct FitResult {
    std::map<std::string, double> params_hat;       ///< all model parameters, internal units
    std::vector<std::string> free_parameters;
    double residual_norm = 0.0;                     ///< sqrt(sum w (model - p)^2)
    std::vector<std::vector<double>> covariance;    ///< free x free, Gauss-Newton estimate
    bool converged = false;
    bool degenerate = false;
    std::string degeneracy;                         ///< which parameters are unidentifiable
    int iterations = 0;
    std::size_t seed_used = 0;
    std::vector<std::map<std::string, double>> seeds_tried;
    std::vector<SeedDiagnostics> diagnostics;
};

/// Raised when no seed converges; carries per-seed diagnostics.
class FitError : public Error {
public:
    FitError(const std::string& what, std::vector<SeedDiagnostics> diagnostics)
        : Error(what), diagnostics_(std::move(diagnostics)) {}
    const std::vector<SeedDiagnostics>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<SeedDiagnostics> diagnostics_;
};

/// Seeds derived from the data: the oscillation period is estimated from the
/// spacing of successive extrema and expanded into a small grid over rabi0 and
/// detuning.
std::vector<std::map<std::string, double>> auto_seeds(const FitProblem& problem);

/// Multi-start damped Gauss-Newton (Levenberg-Marquardt) with box bounds.
/// The best converged seed wins, ties broken by residual norm then seed index.
FitResult fit(const FitProblem& problem);

/// Single local solve from one seed; exposed for tests.
FitResult fit_from(const FitProblem& problem, const std::map<std::string, double>& seed);

} // namespace nhq
