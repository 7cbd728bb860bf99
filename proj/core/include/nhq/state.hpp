#pragma once

#include "nhq/matrix2.hpp"

#include <utility>
#include <vector>

namespace nhq {

/// Unnormalised Bloch representation of a pure state: n0 = <u|u>, n = <u|sigma|u>.
/// sigma_z = +1 on |1>, so nz = rho11 - rho00.
struct BlochState {
    double n0 = 0.0;
    double nx = 0.0;
    double ny = 0.0;
    double nz = 0.0;
};

struct Populations {
    double rho11 = 0.0;
    double rho00 = 0.0;
};

Populations populations(const QubitState& state) noexcept;

BlochState bloch(const QubitState& state) noexcept;

/// (n0 I + nx sx + ny sy + nz sz) / 2 in the (|1>, |0>) basis.
Matrix2 bloch_to_density(const BlochState& b) noexcept;

/// |u><u|.
Matrix2 outer_product(const QubitState& state) noexcept;

/// Throws InvalidParams unless |norm^2 - 1| <= tol.
void require_normalized(const QubitState& state, double tol = 1e-9);

QubitState normalized(const QubitState& state);

struct TimeSeriesRow {
    double rho11 = 0.0;
    double rho00 = 0.0;
    double p_esc = 0.0; ///< raw 1 - rho11 - rho00, may carry rounding dust below 0
    BlochState bloch;
};

/// Sampled trajectory. `deviation` is filled only when requested (same length as times).
struct TimeSeries {
    std::vector<double> times; // ns, strictly increasing
    std::vector<TimeSeriesRow> rows;
    std::vector<double> deviation;

    std::size_t size() const noexcept { return times.size(); }
    void push_back(double t, const QubitState& state);
};

/// Builds a row from a propagated state.
TimeSeriesRow make_row(const QubitState& state) noexcept;

/// Clips floating-point dust: values in [-tol, 0) map to 0 and (1, 1 + tol] map to 1.
/// Anything further out of range is returned unchanged.
double clip_probability(double p, double tol = 1e-12) noexcept;

} // namespace nhq
