#include "nhq/state.hpp"

#include "nhq/error.hpp"

#include <cmath>
#include <string>

namespace nhq {

Populations populations(const QubitState& state) noexcept
{
    return {std::norm(state.c1), std::norm(state.c0)};
}

BlochState bloch(const QubitState& state) noexcept
{
    const double p1 = std::norm(state.c1);
    const double p0 = std::norm(state.c0);
    const cplx coherence = std::conj(state.c1) * state.c0;
    return {p1 + p0, 2.0 * coherence.real(), 2.0 * coherence.imag(), p1 - p0};
}

Matrix2 bloch_to_density(const BlochState& b) noexcept
{
    // sigma_x = [[0,1],[1,0]], sigma_y = [[0,-i],[i,0]], sigma_z = diag(1,-1)
    return {{cplx(0.5 * (b.n0 + b.nz), 0.0), cplx(0.5 * b.nx, -0.5 * b.ny),
             cplx(0.5 * b.nx, 0.5 * b.ny), cplx(0.5 * (b.n0 - b.nz), 0.0)}};
}

Matrix2 outer_product(const QubitState& s) noexcept
{
    return {{s.c1 * std::conj(s.c1), s.c1 * std::conj(s.c0), s.c0 * std::conj(s.c1),
             s.c0 * std::conj(s.c0)}};
}

void require_normalized(const QubitState& state, double tol)
{
    const double n2 = state.norm2();
    if (!(std::abs(n2 - 1.0) <= tol)) {
        throw InvalidParams("initial state must be normalized (|c1|^2 + |c0|^2 = " +
                            std::to_string(n2) + ")");
    }
}

QubitState normalized(const QubitState& state)
{
    const double n = std::sqrt(state.norm2());
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw InvalidParams("cannot normalize a zero or non-finite state");
    }
    return {state.c1 / n, state.c0 / n};
}

TimeSeriesRow make_row(const QubitState& state) noexcept
{
    const auto pops = populations(state);
    return {pops.rho11, pops.rho00, 1.0 - pops.rho11 - pops.rho00, bloch(state)};
}

void TimeSeries::push_back(double t, const QubitState& state)
{
    times.push_back(t);
    rows.push_back(make_row(state));
}

double clip_probability(double p, double tol) noexcept
{
    if (p < 0.0 && p >= -tol) {
        return 0.0;
    }
    if (p > 1.0 && p <= 1.0 + tol) {
        return 1.0;
    }
    return p;
}

} // namespace nhq
