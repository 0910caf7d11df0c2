// Copyright 2026 The bellcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>

#include "bellcert/errors.hpp"

namespace bellcert {

using Complex = std::complex<double>;

template <std::size_t N>
using Vector = std::array<Complex, N>;

/// Dense complex N x N matrix, row-major. Everything in this toolkit is
/// 2x2 (one qubit) or 4x4 (two qubits), so the storage is a plain array.
template <std::size_t N>
class SquareMatrix {
  public:
    static_assert(N == 2 || N == 4, "only one- and two-qubit operators are supported");

    SquareMatrix() : e_{} {}

    static SquareMatrix zero() { return SquareMatrix{}; }

    static SquareMatrix identity() {
        SquareMatrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }

    Complex& operator()(std::size_t row, std::size_t col) { return e_[row * N + col]; }
    const Complex& operator()(std::size_t row, std::size_t col) const { return e_[row * N + col]; }

    static constexpr std::size_t dim() { return N; }

    SquareMatrix adjoint() const {
        SquareMatrix m;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) m(i, j) = std::conj((*this)(j, i));
        return m;
    }

    Complex trace() const {
        Complex t = 0.0;
        for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
        return t;
    }

    /// max_ij |A_ij - B_ij|
    double max_abs_diff(const SquareMatrix& other) const {
        double m = 0.0;
        for (std::size_t i = 0; i < N * N; ++i) m = std::max(m, std::abs(e_[i] - other.e_[i]));
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const Complex& v : e_) s += std::norm(v);
        return std::sqrt(s);
    }

    bool is_hermitian(double tol) const { return max_abs_diff(adjoint()) <= tol; }

    friend SquareMatrix operator+(const SquareMatrix& a, const SquareMatrix& b) {
        SquareMatrix m;
        for (std::size_t i = 0; i < N * N; ++i) m.e_[i] = a.e_[i] + b.e_[i];
        return m;
    }

    friend SquareMatrix operator-(const SquareMatrix& a, const SquareMatrix& b) {
        SquareMatrix m;
        for (std::size_t i = 0; i < N * N; ++i) m.e_[i] = a.e_[i] - b.e_[i];
        return m;
    }

    friend SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
        SquareMatrix m;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t k = 0; k < N; ++k) {
                const Complex aik = a(i, k);
                for (std::size_t j = 0; j < N; ++j) m(i, j) += aik * b(k, j);
            }
        return m;
    }

    friend SquareMatrix operator*(Complex s, const SquareMatrix& a) {
        SquareMatrix m;
        for (std::size_t i = 0; i < N * N; ++i) m.e_[i] = s * a.e_[i];
        return m;
    }

    friend SquareMatrix operator*(double s, const SquareMatrix& a) { return Complex(s, 0.0) * a; }

  private:
    std::array<Complex, N * N> e_;
};

using Mat2 = SquareMatrix<2>;
using Mat4 = SquareMatrix<4>;

template <std::size_t N>
Vector<N> operator*(const SquareMatrix<N>& m, const Vector<N>& v) {
    Vector<N> r{};
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) r[i] += m(i, j) * v[j];
    return r;
}

/// <a|b> with the physics convention (conjugate-linear in the first slot).
template <std::size_t N>
Complex inner(const Vector<N>& a, const Vector<N>& b) {
    Complex s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += std::conj(a[i]) * b[i];
    return s;
}

template <std::size_t N>
double norm_squared(const Vector<N>& a) {
    double s = 0.0;
    for (const Complex& v : a) s += std::norm(v);
    return s;
}

/// |a><b|
template <std::size_t N>
SquareMatrix<N> outer(const Vector<N>& a, const Vector<N>& b) {
    SquareMatrix<N> m;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) m(i, j) = a[i] * std::conj(b[j]);
    return m;
}

/// |v><v|
template <std::size_t N>
SquareMatrix<N> projector(const Vector<N>& v) {
    return outer(v, v);
}

inline Mat4 kron(const Mat2& a, const Mat2& b) {
    Mat4 m;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t l = 0; l < 2; ++l) m(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return m;
}

inline Vector<4> kron(const Vector<2>& a, const Vector<2>& b) {
    return {a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]};
}

/// Trace over the first tensor factor of a two-qubit operator.
inline Mat2 partial_trace_first(const Mat4& m) {
    Mat2 r;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) r(i, j) = m(0 + i, 0 + j) + m(2 + i, 2 + j);
    return r;
}

/// Trace over the second tensor factor of a two-qubit operator.
inline Mat2 partial_trace_second(const Mat4& m) {
    Mat2 r;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) r(i, j) = m(2 * i + 0, 2 * j + 0) + m(2 * i + 1, 2 * j + 1);
    return r;
}

inline double real_trace_product(const Mat4& a, const Mat4& b) {
    Complex t = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) t += a(i, j) * b(j, i);
    return t.real();
}

template <std::size_t N>
struct Eigensystem {
    std::array<double, N> values;  // ascending
    SquareMatrix<N> vectors;       // column k is the eigenvector of values[k]
};

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Each pivot (p, q) is annihilated by a phased plane rotation; sweeps repeat
/// until the off-diagonal Frobenius norm drops below 1e-13 (relative to the
/// matrix scale). The input must satisfy max|M - M^dagger| <= 1e-9.
template <std::size_t N>
Eigensystem<N> hermitian_eigensystem(const SquareMatrix<N>& m) {
    if (!m.is_hermitian(1e-9)) {
        throw NonHermitianInput("hermitian_eigensystem: matrix is not Hermitian within 1e-9");
    }

    // Symmetrize to kill representational noise below the Hermiticity tolerance.
    SquareMatrix<N> h;
    {
        const SquareMatrix<N> adj = m.adjoint();
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) h(i, j) = 0.5 * (m(i, j) + adj(i, j));
    }

    SquareMatrix<N> v = SquareMatrix<N>::identity();
    const double tol = 1e-13 * std::max(1.0, h.frobenius_norm());

    auto off_diagonal_norm = [](const SquareMatrix<N>& a) {
        double s = 0.0;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j)
                if (i != j) s += std::norm(a(i, j));
        return std::sqrt(s);
    };

    const int max_sweeps = 100;
    int sweep = 0;
    while (off_diagonal_norm(h) > tol) {
        if (++sweep > max_sweeps) {
            throw NoConvergence("hermitian_eigensystem: Jacobi sweeps did not converge");
        }
        for (std::size_t p = 0; p + 1 < N; ++p) {
            for (std::size_t q = p + 1; q < N; ++q) {
                const Complex hpq = h(p, q);
                const double r = std::abs(hpq);
                if (r < 1e-300) continue;

                const Complex phase = hpq / r;  // e^{i phi}
                const double d = h(p, p).real() - h(q, q).real();

                // Small-angle root of: r t^2 + d t - r = 0.
                double t;
                if (d == 0.0) {
                    t = 1.0;
                } else {
                    t = 2.0 * r * ((d > 0.0) ? 1.0 : -1.0) / (std::abs(d) + std::hypot(d, 2.0 * r));
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // Column mix: col_p' = c col_p + s conj(phase) col_q,
                //             col_q' = -s phase col_p + c col_q.
                for (std::size_t k = 0; k < N; ++k) {
                    const Complex hkp = h(k, p);
                    const Complex hkq = h(k, q);
                    h(k, p) = c * hkp + s * std::conj(phase) * hkq;
                    h(k, q) = -s * phase * hkp + c * hkq;

                    const Complex vkp = v(k, p);
                    const Complex vkq = v(k, q);
                    v(k, p) = c * vkp + s * std::conj(phase) * vkq;
                    v(k, q) = -s * phase * vkp + c * vkq;
                }
                // Row mix with the conjugate transpose of the same rotation.
                for (std::size_t k = 0; k < N; ++k) {
                    const Complex hpk = h(p, k);
                    const Complex hqk = h(q, k);
                    h(p, k) = c * hpk + s * phase * hqk;
                    h(q, k) = -s * std::conj(phase) * hpk + c * hqk;
                }
                h(p, q) = 0.5 * (h(p, q) + std::conj(h(q, p)));
                h(q, p) = std::conj(h(p, q));
            }
        }
    }

    std::array<std::size_t, N> order{};
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return h(a, a).real() < h(b, b).real(); });

    Eigensystem<N> out;
    for (std::size_t k = 0; k < N; ++k) {
        out.values[k] = h(order[k], order[k]).real();
        for (std::size_t i = 0; i < N; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

/// Eigenvalues only, sorted ascending.
template <std::size_t N>
std::array<double, N> hermitian_eigenvalues(const SquareMatrix<N>& m) {
    return hermitian_eigensystem(m).values;
}

}  // namespace bellcert
