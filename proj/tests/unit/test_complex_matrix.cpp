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

#include "bellcert/complex_matrix.hpp"

#include <cmath>

#include "doctest.h"

#include "bellcert/quantum.hpp"
#include "bellcert/rng.hpp"

using namespace bellcert;

namespace {

Mat4 random_hermitian(std::uint64_t seed, std::uint64_t index) {
    // G + G^dagger for a random complex G.
    Mat4 g;
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            const auto w = random_block(seed, 100, index * 16 + k++);
            g(i, j) = Complex(2.0 * to_unit_interval(w[0], w[1]) - 1.0, 2.0 * to_unit_interval(w[2], w[3]) - 1.0);
        }
    }
    return g + g.adjoint();
}

template <std::size_t N>
void check_eigensystem_reconstructs(const SquareMatrix<N>& m, double tol) {
    const auto eig = hermitian_eigensystem(m);
    SquareMatrix<N> rebuilt;
    for (std::size_t k = 0; k < N; ++k) {
        Vector<N> col{};
        for (std::size_t i = 0; i < N; ++i) col[i] = eig.vectors(i, k);
        rebuilt = rebuilt + eig.values[k] * projector(col);
    }
    CHECK(rebuilt.max_abs_diff(m) < tol);

    // columns orthonormal
    for (std::size_t a = 0; a < N; ++a) {
        for (std::size_t b = 0; b < N; ++b) {
            Vector<N> va{}, vb{};
            for (std::size_t i = 0; i < N; ++i) {
                va[i] = eig.vectors(i, a);
                vb[i] = eig.vectors(i, b);
            }
            const double expect = a == b ? 1.0 : 0.0;
            CHECK(std::abs(inner(va, vb) - Complex(expect, 0.0)) < tol);
        }
    }
}

}  // namespace

TEST_CASE("eigenvalues of a diagonal matrix come out sorted") {
    Mat4 m;
    m(0, 0) = 3.0;
    m(1, 1) = 1.0;
    m(2, 2) = 2.0;
    m(3, 3) = 0.0;
    const auto eig = hermitian_eigenvalues(m);
    CHECK(eig[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(eig[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eig[2] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(eig[3] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("sigma_x eigenvalues are -1, 1") {
    const auto eig = hermitian_eigenvalues(pauli(PauliAxis::X));
    CHECK(std::abs(eig[0] + 1.0) < 1e-12);
    CHECK(std::abs(eig[1] - 1.0) < 1e-12);
}

TEST_CASE("sigma_y (complex entries) diagonalizes correctly") {
    const auto eig = hermitian_eigensystem(pauli(PauliAxis::Y));
    CHECK(std::abs(eig.values[0] + 1.0) < 1e-12);
    CHECK(std::abs(eig.values[1] - 1.0) < 1e-12);
    check_eigensystem_reconstructs(pauli(PauliAxis::Y), 1e-12);
}

TEST_CASE("non-Hermitian input is rejected") {
    Mat2 m;
    m(0, 1) = 1.0;  // strictly upper triangular
    CHECK_THROWS_AS((void)hermitian_eigenvalues(m), NonHermitianInput);
}

TEST_CASE("CHSH operator spectrum matches the closed form at (1.0, 0.7)") {
    const double alpha = 1.0;
    const double beta = 0.7;
    const auto eig = hermitian_eigenvalues(chsh_operator(alpha, beta));
    const double inner_root = 2.0 * std::sqrt(1.0 - std::sin(alpha) * std::sin(beta));
    const double outer_root = 2.0 * std::sqrt(1.0 + std::sin(alpha) * std::sin(beta));
    CHECK(std::abs(eig[0] + outer_root) < 1e-11);
    CHECK(std::abs(eig[1] + inner_root) < 1e-11);
    CHECK(std::abs(eig[2] - inner_root) < 1e-11);
    CHECK(std::abs(eig[3] - outer_root) < 1e-11);
}

TEST_CASE("eigenvalue sum equals the trace") {
    for (std::uint64_t i = 0; i < 30; ++i) {
        const Mat4 m = random_hermitian(42, i);
        const auto eig = hermitian_eigenvalues(m);
        const double sum = eig[0] + eig[1] + eig[2] + eig[3];
        CHECK(std::abs(sum - m.trace().real()) < 1e-10);
    }
}

TEST_CASE("eigensystem reconstructs random and degenerate matrices") {
    for (std::uint64_t i = 0; i < 20; ++i) {
        check_eigensystem_reconstructs(random_hermitian(7, i), 1e-11);
    }
    check_eigensystem_reconstructs(Mat4::identity(), 1e-12);  // fully degenerate
    Mat4 half_degenerate;
    half_degenerate(0, 0) = 1.0;
    half_degenerate(1, 1) = 1.0;
    check_eigensystem_reconstructs(half_degenerate, 1e-12);
    check_eigensystem_reconstructs(werner_state(0.9).mat, 1e-12);
    check_eigensystem_reconstructs(kron(pauli(PauliAxis::X), Mat2::identity()), 1e-12);
    check_eigensystem_reconstructs(kron(pauli(PauliAxis::Y), pauli(PauliAxis::Y)), 1e-12);
}

TEST_CASE("kron and partial traces are mutually consistent") {
    const Mat2 a = direction_observable(0.3) + 2.0 * Mat2::identity();
    const Mat2 b = direction_observable(1.1) + 3.0 * Mat2::identity();
    const Mat4 ab = kron(a, b);
    CHECK(std::abs(ab.trace() - a.trace() * b.trace()) < 1e-12);
    CHECK(partial_trace_second(ab).max_abs_diff(b.trace().real() * a) < 1e-12);
    CHECK(partial_trace_first(ab).max_abs_diff(a.trace().real() * b) < 1e-12);
}

TEST_CASE("kron of kets matches kron of projectors") {
    const Vector<2> u = ket_plus_alpha(0.7);
    const Vector<2> v = ket_minus_alpha(2.1);
    const Mat4 lhs = projector(kron(u, v));
    const Mat4 rhs = kron(projector(u), projector(v));
    CHECK(lhs.max_abs_diff(rhs) < 1e-14);
}
