#include "nhq/oracle.hpp"

#include "nhq/error.hpp"
#include "nhq/params.hpp"
#include "trig.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>
#include <string>
#include <utility>

namespace nhq {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;

constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// 5th minus embedded 4th order weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

constexpr double safety = 0.9;
constexpr double min_factor = 0.2;
constexpr double max_factor = 5.0;

using Vec = std::array<cplx, 2>;

Vec rhs(const TimeDependentGenerator& gen, double t, const Vec& y)
{
    const Generator2 g = gen(t);
    const cplx minus_i(0.0, -1.0);
    return {minus_i * (g.m[0] * y[0] + g.m[1] * y[1]), minus_i * (g.m[2] * y[0] + g.m[3] * y[1])};
}

Vec axpy(const Vec& y, double h, std::initializer_list<std::pair<double, const Vec*>> terms)
{
    Vec out = y;
    for (const auto& [coef, k] : terms) {
        if (coef == 0.0) continue;
        out[0] += h * coef * (*k)[0];
        out[1] += h * coef * (*k)[1];
    }
    return out;
}

bool finite(const Vec& y)
{
    return std::isfinite(y[0].real()) && std::isfinite(y[0].imag()) && std::isfinite(y[1].real()) &&
           std::isfinite(y[1].imag());
}

} // namespace

void IntegratorConfig::validate() const
{
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
        throw InvalidParams("integrator tolerances must be positive");
    }
    if (max_steps == 0) {
        throw InvalidParams("integrator max_steps must be positive");
    }
    if (!(max_step > 0.0)) {
        throw InvalidParams("integrator max_step must be positive");
    }
    if (initial_step < 0.0) {
        throw InvalidParams("integrator initial_step must be >= 0");
    }
}

IntegrationResult integrate_with_stats(const TimeDependentGenerator& gen, const QubitState& initial,
                                       double t0, double t1, const IntegratorConfig& cfg)
{
    cfg.validate();
    if (!(t1 >= t0) || !std::isfinite(t0) || !std::isfinite(t1)) {
        throw IntegrationError(IntegrationError::Kind::InvalidInterval,
                               "integration interval must satisfy t0 <= t1");
    }
    IntegrationResult result{initial, {}};
    if (t1 == t0) {
        return result;
    }

    Vec y{initial.c1, initial.c0};
    double t = t0;
    Vec k1 = rhs(gen, t, y);
    ++result.stats.evaluations;

    double h = cfg.initial_step;
    if (h <= 0.0) {
        // Start with a step that rotates the state by a small angle.
        const double ynorm = std::max(std::abs(y[0]), std::abs(y[1]));
        const double fnorm = std::max(std::abs(k1[0]), std::abs(k1[1]));
        h = (fnorm > 0.0 && ynorm > 0.0) ? 0.01 * ynorm / fnorm : (t1 - t0);
    }
    h = std::min({h, cfg.max_step, t1 - t0});

    bool last_rejected = false;
    while (t < t1) {
        if (result.stats.accepted + result.stats.rejected >= cfg.max_steps) {
            throw IntegrationError(IntegrationError::Kind::StepLimit,
                                   "step limit reached at t = " + std::to_string(t));
        }
        if (t + h > t1 || t1 - (t + h) < 1e-14 * std::abs(t1)) {
            h = t1 - t;
        }
        if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0)) {
            throw IntegrationError(IntegrationError::Kind::StepUnderflow,
                                   "step size underflow at t = " + std::to_string(t));
        }

        const Vec k2 = rhs(gen, t + c2 * h, axpy(y, h, {{a21, &k1}}));
        const Vec k3 = rhs(gen, t + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
        const Vec k4 = rhs(gen, t + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const Vec k5 =
            rhs(gen, t + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const Vec k6 = rhs(gen, t + h,
                           axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const Vec y_new =
            axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        const double t_new = (h == t1 - t) ? t1 : t + h;
        const Vec k7 = rhs(gen, t_new, y_new);
        result.stats.evaluations += 6;

        if (!finite(y_new)) {
            throw IntegrationError(IntegrationError::Kind::NonFinite,
                                   "non-finite state at t = " + std::to_string(t));
        }

        double err = 0.0;
        for (std::size_t i = 0; i < 2; ++i) {
            const cplx e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                e7 * k7[i]);
            const double sc =
                cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            err = std::max(err, std::abs(e) / sc);
        }

        double factor = (err == 0.0) ? max_factor
                                     : std::clamp(safety * std::pow(err, -0.2), min_factor, max_factor);
        if (err <= 1.0) {
            ++result.stats.accepted;
            t = t_new;
            y = y_new;
            k1 = k7; // FSAL
            if (last_rejected) {
                factor = std::min(factor, 1.0);
            }
            last_rejected = false;
        } else {
            ++result.stats.rejected;
            factor = std::min(factor, 1.0);
            last_rejected = true;
        }
        h = std::min(h * factor, cfg.max_step);
    }

    result.state = {y[0], y[1]};
    return result;
}

QubitState integrate(const TimeDependentGenerator& gen, const QubitState& initial, double t0,
                     double t1, const IntegratorConfig& cfg)
{
    return integrate_with_stats(gen, initial, t0, t1, cfg).state;
}

cplx eigen_splitting(const Generator2& gen) noexcept
{
    const cplx half_diff = 0.5 * (gen.m[0] - gen.m[3]);
    return 2.0 * branch_sqrt(half_diff * half_diff + gen.m[1] * gen.m[2]);
}

Matrix2 expm_const(const Generator2& gen, double t)
{
    const cplx half_trace = 0.5 * gen.trace();
    const cplx splitting = eigen_splitting(gen);
    const auto [c, s_over] = detail::half_angle(splitting, t);
    const cplx phase = std::exp(cplx(0.0, -1.0) * half_trace * t);
    const cplx k = cplx(0.0, -2.0) * s_over;

    Matrix2 traceless = gen;
    traceless.m[0] -= half_trace;
    traceless.m[3] -= half_trace;

    Matrix2 out = Matrix2::identity() * c + traceless * k;
    return out * phase;
}

} // namespace nhq
