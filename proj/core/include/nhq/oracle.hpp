#pragma once

#include "nhq/hamiltonians.hpp"
#include "nhq/matrix2.hpp"

#include <cstdint>
#include <limits>

namespace nhq {

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity(); // ns
    double initial_step = 0.0;                                 // ns; 0 picks one automatically
    std::uint64_t max_steps = 10'000'000;

    /// Throws InvalidParams for non-positive tolerances or max_steps == 0.
    void validate() const;
};

struct IntegrationStats {
    std::uint64_t accepted = 0;
    std::uint64_t rejected = 0;
    std::uint64_t evaluations = 0;
};

struct IntegrationResult {
    QubitState state;
    IntegrationStats stats;
};

/// Solves i du/dt = G(t) u from t0 to t1 with an adaptive Dormand-Prince 5(4)
/// pair. Deterministic for a fixed config. Throws IntegrationError on step
/// exhaustion, step-size underflow or a non-finite state.
IntegrationResult integrate_with_stats(const TimeDependentGenerator& gen, const QubitState& initial,
                                       double t0, double t1, const IntegratorConfig& cfg = {});

QubitState integrate(const TimeDependentGenerator& gen, const QubitState& initial, double t0,
                     double t1, const IntegratorConfig& cfg = {});

/// Exact propagator exp(-i G t) of a constant 2x2 generator, built from the
/// trace/traceless split
///   exp(-i tr t/2) [cos(W t/2) I - (2i/W) sin(W t/2) (G - tr/2 I)]
/// where W is the eigenvalue splitting. The Jordan-block limit W = 0 is exact.
Matrix2 expm_const(const Generator2& gen, double t);

/// Eigenvalue splitting lambda_+ - lambda_- on the library's sqrt branch.
cplx eigen_splitting(const Generator2& gen) noexcept;

} // namespace nhq
