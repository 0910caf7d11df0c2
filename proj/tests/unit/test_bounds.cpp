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

#include "bellcert/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "doctest.h"

#include "bellcert/rng.hpp"

using namespace bellcert;

namespace {

double uniform(std::uint64_t seed, std::uint32_t stream, std::uint64_t index) {
    const auto w = random_block(seed, stream, index);
    return to_unit_interval(w[0], w[1]);
}

/// Random valid injection Choi matrix: PSD, partial trace (first factor) = I.
Mat4 random_choi(std::uint64_t index) {
    Mat4 g;
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            const auto w = random_block(0xC401, 7, index * 16 + k++);
            g(i, j) = Complex(2.0 * to_unit_interval(w[0], w[1]) - 1.0, 2.0 * to_unit_interval(w[2], w[3]) - 1.0);
        }
    }
    const Mat4 c0 = g * g.adjoint();
    const Mat2 r = partial_trace_first(c0);
    const auto eig = hermitian_eigensystem(r);
    Mat2 r_inv_sqrt;
    for (std::size_t k2 = 0; k2 < 2; ++k2) {
        Vector<2> col{eig.vectors(0, k2), eig.vectors(1, k2)};
        r_inv_sqrt = r_inv_sqrt + (1.0 / std::sqrt(eig.values[k2])) * projector(col);
    }
    const Mat4 t = kron(Mat2::identity(), r_inv_sqrt);
    return t * c0 * t.adjoint();
}

}  // namespace

TEST_CASE("threshold anchors of the two bounds") {
    CHECK(std::abs(singlet_fidelity_bound(SValue{state_selftest_threshold()}) - 0.5) < 1e-12);
    CHECK(std::abs(singlet_fidelity_bound(SValue{tsirelson_s_value()}) - 1.0) < 1e-12);
    CHECK(std::abs(measurement_fidelity_bound(SValue{2.0}) - (2.0 * std::sqrt(2.0) + 4.0) / 8.0) < 1e-12);
    CHECK(std::abs(measurement_fidelity_bound(SValue{tsirelson_s_value()}) - 1.0) < 1e-12);
}

TEST_CASE("certified working-point values") {
    CHECK(std::abs(singlet_fidelity_bound(SValue::checked(2.2351)) - 0.589) < 5e-4);
    CHECK(std::abs(measurement_fidelity_bound(SValue::checked(2.2357)) - 0.895) < 5e-4);
}

TEST_CASE("SValue range checking and the Tsirelson-point clamp") {
    CHECK_THROWS_AS((void)SValue::checked(1.9), OutOfRange);
    CHECK_THROWS_AS((void)SValue::checked(2.9), OutOfRange);
    const SValue clamped = SValue::checked(tsirelson_s_value() + 5e-10);
    CHECK(clamped.value == tsirelson_s_value());
    CHECK(std::abs(measurement_fidelity_bound(clamped) - 1.0) < 1e-12);
}

TEST_CASE("apparatus fidelity: anchors, symmetry, monotonicity") {
    CHECK(std::abs(qubit_apparatus_fidelity(kPi / 2.0) - 1.0) < 1e-12);
    CHECK(std::abs(qubit_apparatus_fidelity(0.0) - (2.0 + std::sqrt(2.0)) / 4.0) < 1e-12);

    for (int k = 0; k <= 100; ++k) {
        const double alpha = kPi * k / 100.0;
        CHECK(std::abs(qubit_apparatus_fidelity(alpha) - qubit_apparatus_fidelity(kPi - alpha)) < 1e-12);
    }
    for (int k = 0; k + 1 < 50; ++k) {
        const double a0 = (kPi / 2.0) * k / 50.0;
        const double a1 = (kPi / 2.0) * (k + 1) / 50.0;
        CHECK(qubit_apparatus_fidelity(a1) > qubit_apparatus_fidelity(a0));
    }
}

TEST_CASE("apparatus fidelity matches the brute-force injection search at alpha = 1.0") {
    const double alpha = 1.0;
    double best = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const double theta = -kPi + 2.0 * kPi * k / 10000.0;
        best = std::max(best, injection_fidelity_from_choi(InjectionMap{theta}.choi(), alpha));
    }
    CHECK(std::abs(best - qubit_apparatus_fidelity(alpha)) < 1e-6);
}

TEST_CASE("no random injection beats the closed-form fidelity") {
    for (const double alpha : {0.3, 1.0, 2.0}) {
        const double ceiling = qubit_apparatus_fidelity(alpha);
        for (std::uint64_t i = 0; i < 10000; ++i) {
            const Mat4 choi = random_choi(i);
            CHECK(injection_fidelity_from_choi(choi, alpha) <= ceiling + 1e-9);
        }
    }
}

TEST_CASE("random Choi matrices are valid injections") {
    for (std::uint64_t i = 0; i < 50; ++i) {
        const Mat4 choi = random_choi(i);
        CHECK(partial_trace_first(choi).max_abs_diff(Mat2::identity()) < 1e-12);
        CHECK(hermitian_eigenvalues(choi)[0] > -1e-12);
    }
}

TEST_CASE("apparatus ceiling: anchors and eigenvalue-sweep oracle at alpha = 0.8") {
    CHECK(std::abs(max_s_for_alpha(kPi / 2.0).value - tsirelson_s_value()) < 1e-12);
    CHECK(std::abs(max_s_for_alpha(0.0).value - 2.0) < 1e-12);

    const double alpha = 0.8;
    double best = 0.0;
    for (int j = 0; j < 2000; ++j) {
        const double beta = kPi * j / 2000.0;  // includes pi/2 at j = 1000
        best = std::max(best, hermitian_eigenvalues(chsh_operator(alpha, beta))[3]);
    }
    CHECK(std::abs(best - 2.0 * std::sqrt(2.0) * std::sin(0.4 + kPi / 4.0)) < 1e-9);
    CHECK(std::abs(best - max_s_for_alpha(alpha).value) < 1e-9);
}

TEST_CASE("alpha range: anchors, symmetry, bisection oracle") {
    const AlphaRange at_top = alpha_range_for_s(SValue{tsirelson_s_value()});
    CHECK(std::abs(at_top.lo - kPi / 2.0) < 1e-7);
    CHECK(std::abs(at_top.hi - kPi / 2.0) < 1e-7);

    const AlphaRange at_classical = alpha_range_for_s(SValue{2.0});
    CHECK(std::abs(at_classical.lo - 0.0) < 1e-12);
    CHECK(std::abs(at_classical.hi - kPi) < 1e-12);

    const SValue s{2.236};
    const AlphaRange range = alpha_range_for_s(s);
    CHECK(std::abs(range.lo + range.hi - kPi) < 1e-12);

    // invert max_s_for_alpha by bisection on [0, pi/2]
    double lo = 0.0, hi = kPi / 2.0;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        (max_s_for_alpha(mid).value < s.value ? lo : hi) = mid;
    }
    CHECK(std::abs(range.lo - 0.5 * (lo + hi)) < 1e-9);
}

TEST_CASE("dual certificate: anchors and feasibility across the grid") {
    const DualCertificate at_best = dual_certificate_check(kPi / 2.0);
    CHECK(std::abs(at_best.dual_value / 4.0 - 1.0) < 1e-12);
    CHECK(at_best.min_eigenvalue >= -1e-10);

    const DualCertificate at_zero = dual_certificate_check(0.0);
    CHECK(std::abs(at_zero.dual_value / 4.0 - (2.0 + std::sqrt(2.0)) / 4.0) < 1e-12);

    for (int k = 0; k < 200; ++k) {
        const double alpha = kPi * k / 199.0;
        const DualCertificate cert = dual_certificate_check(alpha);
        CHECK(cert.min_eigenvalue >= -1e-10);
        CHECK(std::abs(cert.dual_value / 4.0 - qubit_apparatus_fidelity(alpha)) < 1e-12);
    }
}

TEST_CASE("optimal injection: rotation angle anchors") {
    CHECK(std::abs(optimal_injection(kPi / 2.0).rotation_theta) < 1e-15);
    CHECK(std::abs(optimal_injection(0.0).rotation_theta - kPi / 8.0) < 1e-15);
}

TEST_CASE("optimal injection attains the closed-form fidelity with equal overlaps") {
    for (const double alpha : {0.0, 0.7, 1.2, kPi / 2.0, 2.5, kPi}) {
        const Mat4 choi = optimal_injection(alpha).choi();
        CHECK(std::abs(injection_fidelity_from_choi(choi, alpha) - qubit_apparatus_fidelity(alpha)) < 1e-9);

        const auto q = choi_overlaps(choi, alpha);
        const auto [mn, mx] = std::minmax_element(q.begin(), q.end());
        CHECK(*mx - *mn < 1e-9);

        CHECK(partial_trace_first(choi).max_abs_diff(Mat2::identity()) < 1e-12);
        CHECK(hermitian_eigenvalues(choi)[0] > -1e-12);
    }
}

TEST_CASE("brute-force minimum matches the closed-form measurement bound") {
    CHECK(std::abs(brute_force_min_measurement_fidelity(SValue{2.0}, 100000) - trivial_measurement_fidelity()) < 2e-6);
    CHECK(std::abs(brute_force_min_measurement_fidelity(SValue{tsirelson_s_value()}, 100000) - 1.0) < 2e-6);
    CHECK(std::abs(brute_force_min_measurement_fidelity(SValue{2.236}, 100000) - 0.89527) < 1e-5);

    for (int k = 0; k < 50; ++k) {
        const SValue s{2.0 + uniform(0xB0B0, 1, k) * (tsirelson_s_value() - 2.0)};
        CHECK(std::abs(brute_force_min_measurement_fidelity(s, 100000) - measurement_fidelity_bound(s)) < 2e-6);
    }
    CHECK_THROWS_AS((void)brute_force_min_measurement_fidelity(SValue{2.1}, 50), OutOfRange);
}

TEST_CASE("both bounds are affine: midpoint identity") {
    for (int k = 0; k < 100; ++k) {
        const SValue s1{2.0 + uniform(0xAFF1, 1, k) * (tsirelson_s_value() - 2.0)};
        const SValue s2{2.0 + uniform(0xAFF1, 2, k) * (tsirelson_s_value() - 2.0)};
        const SValue mid{0.5 * (s1.value + s2.value)};
        CHECK(std::abs(singlet_fidelity_bound(mid) -
                       0.5 * (singlet_fidelity_bound(s1) + singlet_fidelity_bound(s2))) < 1e-12);
        CHECK(std::abs(measurement_fidelity_bound(mid) -
                       0.5 * (measurement_fidelity_bound(s1) + measurement_fidelity_bound(s2))) < 1e-12);
    }
}
