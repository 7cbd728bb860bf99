#include "nhq/fitting.hpp"

#include "nhq/propagators.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

namespace nhq {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

const std::vector<std::string> special_names{"rabi0", "detuning", "gamma", "gamma0", "scale"};
const std::vector<std::string> general_names{"rabi0", "detuning", "gamma", "gamma0",
                                         "scale", "rho11_0", "phase"};

double get(const std::map<std::string, double>& values, const std::string& name)
{
    const auto it = values.find(name);
    if (it == values.end()) {
        throw InvalidParams("missing fit parameter '" + name + "'");
    }
    return it->second;
}

// Model parameters. The level energies only enter through a global phase, so
// the transition is placed at |detuning| with the drive at the remainder.
QubitParams model_params(const std::map<std::string, double>& v)
{
    const double delta = get(v, "detuning");
    const double omega10 = std::max(delta, 0.0);
    return params_from_rwa(omega10, delta, get(v, "rabi0"), get(v, "gamma"), get(v, "gamma0"));
}

/// Free-parameter vector <-> full assignment.
struct Layout {
    const FitProblem* problem;
    std::vector<std::string> names;
    VectorXd lower;
    VectorXd upper;

    explicit Layout(const FitProblem& p) : problem(&p), names(p.free_parameters())
    {
        const auto n = static_cast<Eigen::Index>(names.size());
        lower.resize(n);
        upper.resize(n);
        for (Eigen::Index j = 0; j < n; ++j) {
            const Bounds b = p.bounds_for(names[static_cast<std::size_t>(j)]);
            lower[j] = b.lower;
            upper[j] = b.upper;
        }
    }

    Eigen::Index size() const { return static_cast<Eigen::Index>(names.size()); }

    std::map<std::string, double> assign(const VectorXd& x) const
    {
        std::map<std::string, double> v = problem->fixed;
        for (Eigen::Index j = 0; j < size(); ++j) {
            v[names[static_cast<std::size_t>(j)]] = x[j];
        }
        return v;
    }

    VectorXd extract(const std::map<std::string, double>& values) const
    {
        VectorXd x(size());
        for (Eigen::Index j = 0; j < size(); ++j) {
            x[j] = get(values, names[static_cast<std::size_t>(j)]);
        }
        return x;
    }

    VectorXd clamp(VectorXd x) const
    {
        for (Eigen::Index j = 0; j < size(); ++j) {
            x[j] = std::clamp(x[j], lower[j], upper[j]);
        }
        return x;
    }
};

VectorXd residual_vector(const FitProblem& problem, const std::map<std::string, double>& values)
{
    VectorXd r(static_cast<Eigen::Index>(problem.data.size()));
    for (std::size_t i = 0; i < problem.data.size(); ++i) {
        const auto& d = problem.data[i];
        r[static_cast<Eigen::Index>(i)] =
            std::sqrt(d.weight) * (model_value(problem.model, values, d.t) - d.p);
    }
    return r;
}

MatrixXd jacobian(const Layout& layout, const VectorXd& x, const VectorXd& typical, double rel_step)
{
    const FitProblem& problem = *layout.problem;
    MatrixXd J(static_cast<Eigen::Index>(problem.data.size()), layout.size());
    for (Eigen::Index j = 0; j < layout.size(); ++j) {
        const double h = rel_step * std::max(std::abs(x[j]), typical[j]);
        VectorXd xp = x;
        VectorXd xm = x;
        double span = 2.0 * h;
        if (x[j] + h > layout.upper[j]) {
            span = h;
            xm[j] = x[j] - h;
        } else if (x[j] - h < layout.lower[j]) {
            span = h;
            xp[j] = x[j] + h;
        } else {
            xp[j] = x[j] + h;
            xm[j] = x[j] - h;
        }
        J.col(j) = (residual_vector(problem, layout.assign(xp)) -
                    residual_vector(problem, layout.assign(xm))) /
                   span;
    }
    return J;
}

double safe_cost(const FitProblem& problem, const std::map<std::string, double>& values)
{
    try {
        const VectorXd r = residual_vector(problem, values);
        const double c = 0.5 * r.squaredNorm();
        return std::isfinite(c) ? c : std::numeric_limits<double>::infinity();
    } catch (const Error&) {
        return std::numeric_limits<double>::infinity();
    }
}

// Solves the damped normal equations on the inactive set. Components sitting on
// a bound whose unconstrained step points outward are frozen.
VectorXd bounded_step(const Layout& layout, const VectorXd& x, const MatrixXd& A, const VectorXd& g,
                      const VectorXd& D, double mu)
{
    const Eigen::Index n = layout.size();
    std::vector<bool> active(static_cast<std::size_t>(n), false);
    VectorXd step = VectorXd::Zero(n);
    for (int pass = 0; pass <= n; ++pass) {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!active[static_cast<std::size_t>(j)]) idx.push_back(j);
        }
        step.setZero();
        if (idx.empty()) break;
        const auto m = static_cast<Eigen::Index>(idx.size());
        MatrixXd Ar(m, m);
        VectorXd gr(m);
        for (Eigen::Index a = 0; a < m; ++a) {
            gr[a] = g[idx[static_cast<std::size_t>(a)]];
            for (Eigen::Index b = 0; b < m; ++b) {
                Ar(a, b) = A(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
            }
            Ar(a, a) += mu * D[idx[static_cast<std::size_t>(a)]];
        }
        const VectorXd sr = Ar.completeOrthogonalDecomposition().solve(-gr);
        for (Eigen::Index a = 0; a < m; ++a) step[idx[static_cast<std::size_t>(a)]] = sr[a];

        bool changed = false;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (active[static_cast<std::size_t>(j)]) continue;
            const bool at_lower = x[j] <= layout.lower[j] && step[j] < 0.0;
            const bool at_upper = x[j] >= layout.upper[j] && step[j] > 0.0;
            if (at_lower || at_upper) {
                active[static_cast<std::size_t>(j)] = true;
                changed = true;
            }
        }
        if (!changed) break;
    }
    return layout.clamp(x + step) - x;
}

// A direction is unidentifiable when its singular value is negligible against
// both the strongest direction and the data's own scale sqrt(sum w), which is
// the residual change a unit change of the model would cause.
std::string describe_degeneracy(const Layout& layout, const MatrixXd& J, const VectorXd& x,
                                const VectorXd& typical, double rank_tol, double data_scale)
{
    const Eigen::Index n = layout.size();
    if (n == 0) return {};
    MatrixXd Js = J;
    for (Eigen::Index j = 0; j < n; ++j) Js.col(j) *= std::max(std::abs(x[j]), typical[j]);
    Eigen::JacobiSVD<MatrixXd> svd(Js, Eigen::ComputeThinV);
    const VectorXd& s = svd.singularValues();
    const double smax = s.size() > 0 ? s[0] : 0.0;
    std::ostringstream os;
    if (s.size() < n || smax == 0.0 || s[s.size() - 1] <= rank_tol * std::max(smax, data_scale)) {
        // Report the parameters dominating the weakest direction.
        const VectorXd v = svd.matrixV().col(svd.matrixV().cols() - 1);
        os << "Jacobian is rank deficient; unidentifiable direction involves";
        for (Eigen::Index j = 0; j < n; ++j) {
            if (std::abs(v[j]) > 0.1 || smax == 0.0) os << ' ' << layout.names[static_cast<std::size_t>(j)];
        }
    }
    return os.str();
}

struct Extremum {
    double t;
    double value;
    bool is_max;
};

// Alternating extrema of a (lightly smoothed) series with hysteresis.
std::vector<Extremum> find_extrema(const std::vector<double>& t, const std::vector<double>& y)
{
    const std::size_t n = y.size();
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = std::min(n - 1, i + 1);
        double sum = 0.0;
        for (std::size_t k = lo; k <= hi; ++k) sum += y[k];
        s[i] = sum / static_cast<double>(hi - lo + 1);
    }
    const auto [mn, mx] = std::minmax_element(s.begin(), s.end());
    const double threshold = 0.2 * (*mx - *mn);
    std::vector<Extremum> out;
    if (threshold <= 0.0) return out;

    // Track a candidate extremum; confirm it when the series moves away by threshold.
    bool looking_for_max = true;
    std::size_t cand = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (looking_for_max) {
            if (s[i] > s[cand]) cand = i;
            else if (s[cand] - s[i] > threshold) {
                out.push_back({t[cand], s[cand], true});
                looking_for_max = false;
                cand = i;
            }
        } else {
            if (s[i] < s[cand]) cand = i;
            else if (s[i] - s[cand] > threshold) {
                out.push_back({t[cand], s[cand], false});
                looking_for_max = true;
                cand = i;
            }
        }
    }
    return out;
}

struct Oscillation {
    double omega = 0.0;
    double cos_amplitude = 0.0;
};

// Frequency scan: at each trial omega, least squares of y on e^{-gamma t} {1, cos, sin}.
Oscillation dominant_oscillation(const std::vector<double>& t, const std::vector<double>& y, double gamma)
{
    const double t_span = t.back() - t.front();
    const double dt = t_span / static_cast<double>(t.size() - 1);
    const double w_min = std::numbers::pi / t_span;
    const double w_max = std::numbers::pi / dt;
    const double w_step = std::numbers::pi / (4.0 * t_span);

    std::vector<double> env(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) env[i] = std::exp(-gamma * t[i]);

    Oscillation best;
    double best_rss = std::numeric_limits<double>::infinity();
    for (double w = w_min; w <= w_max; w += w_step) {
        Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
        Eigen::Vector3d b = Eigen::Vector3d::Zero();
        for (std::size_t i = 0; i < t.size(); ++i) {
            const Eigen::Vector3d f(env[i], env[i] * std::cos(w * t[i]), env[i] * std::sin(w * t[i]));
            A += f * f.transpose();
            b += f * y[i];
        }
        const Eigen::Vector3d c = A.ldlt().solve(b);
        const double rss = -c.dot(b);
        if (std::isfinite(rss) && rss < best_rss) {
            best_rss = rss;
            best.omega = w;
            best.cos_amplitude = std::hypot(c(1), c(2));
        }
    }
    if (best.omega == 0.0) best.omega = 2.0 * std::numbers::pi / t_span;
    return best;
}

} // namespace

std::string_view model_name(FitModel model) noexcept
{
    return model == FitModel::SpecialGround ? "eq10_special" : "eq8_general";
}

FitModel parse_model(std::string_view text)
{
    if (text == "eq10_special" || text == "eq10") return FitModel::SpecialGround;
    if (text == "eq8_general" || text == "eq8") return FitModel::GeneralState;
    throw ParseError(0, "unknown fit model '" + std::string(text) + "'");
}

const std::vector<std::string>& model_parameters(FitModel model)
{
    return model == FitModel::SpecialGround ? special_names : general_names;
}

Bounds default_bounds(const std::string& name)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (name == "rho11_0") return {0.0, 1.0};
    if (name == "phase") return {-std::numbers::pi, std::numbers::pi};
    // The model is even in detuning, so its sign cannot be identified.
    return {0.0, inf};
}

std::vector<std::string> FitProblem::free_parameters() const
{
    std::vector<std::string> out;
    for (const auto& name : model_parameters(model)) {
        if (!fixed.contains(name)) out.push_back(name);
    }
    return out;
}

Bounds FitProblem::bounds_for(const std::string& name) const
{
    const auto it = bounds.find(name);
    return it != bounds.end() ? it->second : default_bounds(name);
}

void FitProblem::validate() const
{
    const auto& names = model_parameters(model);
    for (const auto& [name, value] : fixed) {
        if (std::find(names.begin(), names.end(), name) == names.end()) {
            throw InvalidParams("'" + name + "' is not a parameter of model " +
                                std::string(model_name(model)));
        }
        if (!std::isfinite(value)) throw InvalidParams("fixed value of '" + name + "' is not finite");
    }
    for (const auto& [name, b] : bounds) {
        if (!(b.lower <= b.upper)) throw InvalidParams("empty bounds for '" + name + "'");
    }
    const std::size_t n_free = free_parameters().size();
    const std::size_t min_points = model == FitModel::SpecialGround ? std::max<std::size_t>(4, n_free + 1)
                                                                  : n_free + 1;
    if (data.size() < min_points) {
        throw InvalidParams("need at least " + std::to_string(min_points) + " data points, got " +
                            std::to_string(data.size()));
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& d = data[i];
        if (!std::isfinite(d.t) || !std::isfinite(d.p) || !std::isfinite(d.weight)) {
            throw InvalidParams("data point " + std::to_string(i) + " is not finite");
        }
        if (d.weight < 0.0) throw InvalidParams("data point " + std::to_string(i) + " has negative weight");
        if (i > 0 && !(d.t > data[i - 1].t)) {
            throw InvalidParams("data times must be strictly increasing (point " + std::to_string(i) + ")");
        }
    }
    if (n_free == 0) throw InvalidParams("no free parameters");
}

FitProblem make_fit_problem(std::vector<DataPoint> data, FitModel model, double gamma_mean,
                            double gamma0)
{
    FitProblem p;
    p.data = std::move(data);
    p.model = model;
    p.fixed["gamma"] = gamma_mean;
    p.fixed["gamma0"] = gamma0;
    p.fixed["scale"] = 1.0;
    if (model == FitModel::GeneralState) p.fixed["phase"] = 0.0;
    return p;
}

double model_value(FitModel model, const std::map<std::string, double>& values, double t)
{
    const QubitParams params = model_params(values);
    const double scale = get(values, "scale");
    if (model == FitModel::SpecialGround) {
        return scale * upper_population_special(params, t);
    }
    const double r = get(values, "rho11_0");
    if (!(r >= 0.0 && r <= 1.0)) throw InvalidParams("rho11_0 outside [0, 1]");
    const QubitState initial{cplx(std::sqrt(r), 0.0),
                             std::polar(std::sqrt(1.0 - r), get(values, "phase"))};
    return scale * rwa_populations(initial, params, t).rho11;
}

std::vector<double> residuals(const FitProblem& problem, const std::map<std::string, double>& values)
{
    std::map<std::string, double> full = problem.fixed;
    for (const auto& [k, v] : values) full[k] = v;
    const VectorXd r = residual_vector(problem, full);
    return {r.data(), r.data() + r.size()};
}

std::vector<std::vector<double>> residual_jacobian(const FitProblem& problem,
                                                   const std::map<std::string, double>& values,
                                                   double rel_step)
{
    const Layout layout(problem);
    std::map<std::string, double> full = problem.fixed;
    for (const auto& [k, v] : values) full[k] = v;
    const VectorXd x = layout.extract(full);
    const VectorXd typical = x.cwiseAbs().cwiseMax(1e-12);
    const MatrixXd J = jacobian(layout, x, typical, rel_step);
    std::vector<std::vector<double>> out(static_cast<std::size_t>(J.rows()));
    for (Eigen::Index i = 0; i < J.rows(); ++i) {
        for (Eigen::Index j = 0; j < J.cols(); ++j) out[static_cast<std::size_t>(i)].push_back(J(i, j));
    }
    return out;
}

std::vector<std::map<std::string, double>> auto_seeds(const FitProblem& problem)
{
    const auto free = problem.free_parameters();
    auto is_free = [&](const std::string& n) {
        return std::find(free.begin(), free.end(), n) != free.end();
    };
    auto value_or = [&](const std::string& n, double fallback) {
        const auto it = problem.fixed.find(n);
        return it != problem.fixed.end() ? it->second : fallback;
    };

    std::vector<double> t, y;
    for (const auto& d : problem.data) {
        t.push_back(d.t);
        y.push_back(d.p);
    }
    const double t_span = t.back() - t.front();

    // Decay rate: fixed value, else a log-linear fit through the maxima.
    double gamma = value_or("gamma", std::numeric_limits<double>::quiet_NaN());
    if (!std::isfinite(gamma)) {
        const auto ext = find_extrema(t, y);
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (const auto& e : ext) {
            if (!e.is_max || !(e.value > 0.0)) continue;
            sx += e.t;
            sy += std::log(e.value);
            sxx += e.t * e.t;
            sxy += e.t * std::log(e.value);
            ++n;
        }
        const double den = n * sxx - sx * sx;
        gamma = (n >= 2 && den > 0.0) ? std::max(0.0, -(n * sxy - sx * sy) / den) : 1.0 / t_span;
    }
    const double scale = value_or("scale", 1.0);

    const auto osc = dominant_oscillation(t, y, gamma);
    const double omega_est = osc.omega;
    double amp = 2.0 * osc.cos_amplitude / scale;
    if (problem.model == FitModel::GeneralState) {
        // Oscillation between rho11_0 and the far turning point; amplitude is not the mixing term.
        amp = std::max(amp, 0.5);
    }
    amp = std::clamp(amp, 1e-3, 1.0);

    std::vector<std::map<std::string, double>> seeds;
    const std::vector<double> omega_factors{1.0, 0.9, 1.1};
    const std::vector<double> amp_factors{1.0, 0.5, 2.0};
    std::vector<double> rho_seeds{std::clamp(y.front() / scale, 0.0, 1.0)};
    std::vector<double> phase_seeds{value_or("phase", 0.0)};
    if (is_free("phase")) phase_seeds = {0.0, std::numbers::pi / 2, -std::numbers::pi / 2, std::numbers::pi};

    for (double af : amp_factors) {
        const double a = std::min(1.0, amp * af);
        for (double of : omega_factors) {
            const double w = omega_est * of;
            for (double r0 : rho_seeds) {
                for (double ph : phase_seeds) {
                    std::map<std::string, double> s;
                    s["rabi0"] = std::sqrt(a) * w;
                    s["detuning"] = std::sqrt(std::max(0.0, 1.0 - a)) * w;
                    s["gamma"] = gamma;
                    s["gamma0"] = value_or("gamma0", 0.0);
                    s["scale"] = scale;
                    s["rho11_0"] = r0;
                    s["phase"] = ph;
                    std::map<std::string, double> seed;
                    for (const auto& name : free) seed[name] = s.at(name);
                    seeds.push_back(std::move(seed));
                }
            }
        }
    }
    return seeds;
}

FitResult fit_from(const FitProblem& problem, const std::map<std::string, double>& seed)
{
    problem.validate();
    const Layout layout(problem);
    const FitOptions& opt = problem.options;
    const Eigen::Index n = layout.size();

    std::map<std::string, double> start = problem.fixed;
    for (const auto& [k, v] : seed) start[k] = v;
    VectorXd x = layout.clamp(layout.extract(start));
    VectorXd typical = x.cwiseAbs();
    for (Eigen::Index j = 0; j < n; ++j) {
        if (!(typical[j] > 0.0)) {
            const Bounds b = problem.bounds_for(layout.names[static_cast<std::size_t>(j)]);
            typical[j] = std::isfinite(b.upper) && std::isfinite(b.lower) ? 1e-3 * (b.upper - b.lower) : 1e-6;
        }
    }

    VectorXd r = residual_vector(problem, layout.assign(x));
    double cost = 0.5 * r.squaredNorm();
    if (!std::isfinite(cost)) throw InvalidParams("model is not finite at the seed");

    FitResult result;
    result.free_parameters = layout.names;
    double mu = 1e-3;
    double nu = 2.0;
    VectorXd D = VectorXd::Zero(n);
    MatrixXd J;
    int iter = 0;
    bool converged = false;

    while (iter < opt.max_iterations) {
        ++iter;
        J = jacobian(layout, x, typical, opt.jacobian_step);
        const MatrixXd A = J.transpose() * J;
        const VectorXd g = J.transpose() * r;
        for (Eigen::Index j = 0; j < n; ++j) D[j] = std::max(D[j], A(j, j));

        if (cost == 0.0) {
            converged = true;
            break;
        }
        // Scaled gradient test: cosine between r and each column of J.
        double gmax = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            const double cn = J.col(j).norm();
            if (cn > 0.0) gmax = std::max(gmax, std::abs(g[j]) / (cn * r.norm()));
        }
        if (gmax <= opt.gtol) {
            converged = true;
            break;
        }

        bool accepted = false;
        for (int inner = 0; inner < 60 && !accepted; ++inner) {
            VectorXd Dfloor = D;
            for (Eigen::Index j = 0; j < n; ++j) if (!(Dfloor[j] > 0.0)) Dfloor[j] = 1.0 / (typical[j] * typical[j]);
            const VectorXd step = bounded_step(layout, x, A, g, Dfloor, mu);
            const VectorXd x_new = x + step;
            const double cost_new = safe_cost(problem, layout.assign(x_new));
            const double predicted = -(g.dot(step) + 0.5 * step.dot(A * step));
            const double actual = cost - cost_new;
            const double ratio = predicted > 0.0 ? actual / predicted : -1.0;

            double xscale = 0.0, sscale = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                const double dj = std::sqrt(Dfloor[j]);
                xscale += (dj * x[j]) * (dj * x[j]);
                sscale += (dj * step[j]) * (dj * step[j]);
            }
            const bool small_step = std::sqrt(sscale) <= opt.xtol * std::sqrt(xscale);

            if (ratio > 1e-4 && std::isfinite(cost_new)) {
                x = x_new;
                r = residual_vector(problem, layout.assign(x));
                const double old_cost = cost;
                cost = 0.5 * r.squaredNorm();
                mu *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * ratio - 1.0, 3));
                nu = 2.0;
                accepted = true;
                const bool small_reduction = (old_cost - cost) <= opt.ftol * old_cost &&
                                             predicted <= opt.ftol * old_cost && ratio <= 2.0;
                if (small_step || small_reduction) converged = true;
            } else {
                if (small_step) {
                    converged = true;
                    break;
                }
                mu *= nu;
                nu *= 2.0;
            }
        }
        if (converged) break;
        if (!accepted) break;
    }

    // Parameters that crawled up to a bound (a flat or quartic valley) are
    // placed on it when that does not raise the cost.
    for (Eigen::Index j = 0; j < n; ++j) {
        const Bounds b = problem.bounds_for(layout.names[static_cast<std::size_t>(j)]);
        for (double edge : {b.lower, b.upper}) {
            if (!std::isfinite(edge) || x[j] == edge || std::abs(x[j] - edge) > 1e-6 * typical[j]) continue;
            VectorXd snapped = x;
            snapped[j] = edge;
            const VectorXd rs = residual_vector(problem, layout.assign(snapped));
            if (0.5 * rs.squaredNorm() <= cost) {
                x = snapped;
                r = rs;
                cost = 0.5 * r.squaredNorm();
            }
        }
    }

    double weight_sum = 0.0;
    for (const auto& d : problem.data) weight_sum += d.weight;

    J = jacobian(layout, x, typical, opt.jacobian_step);
    result.params_hat = layout.assign(x);
    result.residual_norm = r.norm();
    result.converged = converged;
    result.iterations = iter;
    result.degeneracy = describe_degeneracy(layout, J, x, typical, opt.rank_tol, std::sqrt(weight_sum));
    result.degenerate = !result.degeneracy.empty();

    const auto m = static_cast<double>(problem.data.size());
    const double dof = m - static_cast<double>(n);
    const double s2 = dof > 0.0 ? 2.0 * cost / dof : std::numeric_limits<double>::quiet_NaN();
    const MatrixXd cov = (J.transpose() * J).completeOrthogonalDecomposition().pseudoInverse() * s2;
    result.covariance.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b)
            result.covariance[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = cov(a, b);
    return result;
}

FitResult fit(const FitProblem& problem)
{
    problem.validate();
    const auto seeds = problem.seeds.empty() ? auto_seeds(problem) : problem.seeds;

    std::vector<SeedDiagnostics> diagnostics;
    std::optional<FitResult> best;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        SeedDiagnostics d;
        d.seed_index = i;
        try {
            FitResult r = fit_from(problem, seeds[i]);
            r.seed_used = i;
            d.converged = r.converged;
            d.iterations = r.iterations;
            d.residual_norm = r.residual_norm;
            d.message = r.converged ? "converged" : "iteration limit reached";
            if (r.converged) {
                const bool better = !best || r.residual_norm < best->residual_norm;
                if (better) best = std::move(r);
            }
        } catch (const Error& e) {
            d.failed = true;
            d.message = e.what();
        }
        diagnostics.push_back(std::move(d));
    }
    if (!best) {
        throw FitError("no seed converged (" + std::to_string(seeds.size()) + " tried)",
                       std::move(diagnostics));
    }
    best->seeds_tried = seeds;
    best->diagnostics = std::move(diagnostics);
    return *best;
}

} // namespace nhq
