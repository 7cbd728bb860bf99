#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace nhq {

using cplx = std::complex<double>;

/// Two complex amplitudes in the fixed (|1>, |0>) ordering.
struct QubitState {
    cplx c1; ///< amplitude of |1>
    cplx c0; ///< amplitude of |0>

    double norm2() const noexcept { return std::norm(c1) + std::norm(c0); }

    friend bool operator==(const QubitState&, const QubitState&) = default;
};

/// Dense 2x2 complex matrix in the (|1>, |0>) basis: row/column 0 is |1>.
struct Matrix2 {
    std::array<cplx, 4> m{}; // row-major: a11, a10, a01, a00

    static Matrix2 identity() noexcept { return {{cplx(1.0), cplx(0.0), cplx(0.0), cplx(1.0)}}; }
    static Matrix2 diagonal(cplx a11, cplx a00) noexcept { return {{a11, cplx(0.0), cplx(0.0), a00}}; }

    cplx& operator()(int row, int col) noexcept { return m[static_cast<std::size_t>(2 * row + col)]; }
    const cplx& operator()(int row, int col) const noexcept
    {
        return m[static_cast<std::size_t>(2 * row + col)];
    }

    cplx trace() const noexcept { return m[0] + m[3]; }
    cplx det() const noexcept { return m[0] * m[3] - m[1] * m[2]; }

    Matrix2 adjoint() const noexcept
    {
        return {{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}};
    }

    QubitState apply(const QubitState& s) const noexcept
    {
        return {m[0] * s.c1 + m[1] * s.c0, m[2] * s.c1 + m[3] * s.c0};
    }

    bool is_finite() const noexcept
    {
        for (const auto& z : m) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                return false;
            }
        }
        return true;
    }

    Matrix2& operator+=(const Matrix2& o) noexcept
    {
        for (std::size_t i = 0; i < 4; ++i) m[i] += o.m[i];
        return *this;
    }
    Matrix2& operator-=(const Matrix2& o) noexcept
    {
        for (std::size_t i = 0; i < 4; ++i) m[i] -= o.m[i];
        return *this;
    }
    Matrix2& operator*=(cplx s) noexcept
    {
        for (auto& z : m) z *= s;
        return *this;
    }

    friend Matrix2 operator+(Matrix2 a, const Matrix2& b) noexcept { return a += b; }
    friend Matrix2 operator-(Matrix2 a, const Matrix2& b) noexcept { return a -= b; }
    friend Matrix2 operator*(Matrix2 a, cplx s) noexcept { return a *= s; }
    friend Matrix2 operator*(cplx s, Matrix2 a) noexcept { return a *= s; }
    friend Matrix2 operator*(const Matrix2& a, const Matrix2& b) noexcept
    {
        return {{a.m[0] * b.m[0] + a.m[1] * b.m[2], a.m[0] * b.m[1] + a.m[1] * b.m[3],
                 a.m[2] * b.m[0] + a.m[3] * b.m[2], a.m[2] * b.m[1] + a.m[3] * b.m[3]}};
    }

    friend bool operator==(const Matrix2&, const Matrix2&) = default;
};

/// Largest entrywise modulus of a - b.
inline double max_abs_diff(const Matrix2& a, const Matrix2& b) noexcept
{
    double d = 0.0;
    for (std::size_t i = 0; i < 4; ++i) d = std::max(d, std::abs(a.m[i] - b.m[i]));
    return d;
}

inline double max_abs_diff(const QubitState& a, const QubitState& b) noexcept
{
    return std::max(std::abs(a.c1 - b.c1), std::abs(a.c0 - b.c0));
}

} // namespace nhq
