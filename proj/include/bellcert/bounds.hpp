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

#include <array>
#include <cmath>
#include <cstddef>

#include "bellcert/complex_matrix.hpp"
#include "bellcert/errors.hpp"
#include "bellcert/quantum.hpp"

namespace bellcert {

/// Classical (local hidden variable) CHSH ceiling.
inline double lhv_s_value() { return 2.0; }

/// Quantum CHSH ceiling, 2 sqrt(2).
inline double tsirelson_s_value() { return 2.0 * std::sqrt(2.0); }

/// S-value below which the state bound degenerates to 1/2: (16 + 14 sqrt(2))/17.
inline double state_selftest_threshold() { return (16.0 + 14.0 * std::sqrt(2.0)) / 17.0; }

/// Measurement fidelity certified at S = 2: (2 sqrt(2) + 4)/8. Any qubit
/// apparatus admits an injection reaching this value.
inline double trivial_measurement_fidelity() { return (2.0 * std::sqrt(2.0) + 4.0) / 8.0; }

/// A CHSH S-value in the certification range [2, 2 sqrt(2)]. Values exceeding
/// the range by at most 1e-9 (floating noise at the Tsirelson point) are
/// clamped on construction.
struct SValue {
    double value = 2.0;

    static SValue checked(double s) {
        const double lo = 2.0;
        const double hi = tsirelson_s_value();
        if (s < lo - 1e-9 || s > hi + 1e-9) {
            throw OutOfRange("SValue: S must lie in [2, 2 sqrt(2)]");
        }
        return SValue{std::min(std::max(s, lo), hi)};
    }
};

/// Lower bound on the extractable singlet fidelity from an observed S-value:
/// 1/2 + 1/2 (S - S*)/(2 sqrt(2) - S*). Affine and increasing; equals 1/2 at
/// the threshold S* and 1 at the Tsirelson point.
inline double singlet_fidelity_bound(SValue s) {
    const double s_star = state_selftest_threshold();
    return 0.5 + 0.5 * (s.value - s_star) / (tsirelson_s_value() - s_star);
}

/// Lower bound on the measurement fidelity from an observed S-value:
/// (sqrt(2) S + 4)/8. Affine and increasing; 1 at the Tsirelson point.
inline double measurement_fidelity_bound(SValue s) {
    return (std::sqrt(2.0) * s.value + 4.0) / 8.0;
}

/// Fidelity of the one-parameter qubit apparatus whose second basis is tilted
/// by alpha from the first: (2 + sqrt(2) cos(alpha/2) + sqrt(2) sin(alpha/2))/4.
/// Symmetric about pi/2, increasing on [0, pi/2], maximum 1 at alpha = pi/2.
inline double qubit_apparatus_fidelity(double alpha) {
    return 0.25 * (2.0 + std::sqrt(2.0) * std::cos(alpha / 2.0) + std::sqrt(2.0) * std::sin(alpha / 2.0));
}

/// Largest CHSH value reachable by an apparatus with basis separation alpha:
/// 2 sqrt(2) sin(alpha/2 + pi/4) = 2 sqrt(1 + sin(alpha)).
inline SValue max_s_for_alpha(double alpha) {
    return SValue{2.0 * std::sqrt(2.0) * std::sin(alpha / 2.0 + kPi / 4.0)};
}

/// Closed interval of apparatus angles compatible with an S-value; symmetric
/// about pi/2 and collapsing to the point pi/2 at S = 2 sqrt(2).
struct AlphaRange {
    double lo = 0.0;
    double hi = kPi;

    bool contains(double alpha) const { return alpha >= lo && alpha <= hi; }
};

inline AlphaRange alpha_range_for_s(SValue s) {
    const double asin_term = 2.0 * std::asin(std::min(1.0, s.value / (2.0 * std::sqrt(2.0))));
    AlphaRange range{asin_term - kPi / 2.0, 1.5 * kPi - asin_term};
    if (range.lo > range.hi) {  // floating noise at the Tsirelson point
        range.lo = range.hi = kPi / 2.0;
    }
    return range;
}

/// The operator whose expectation against an injection's Choi matrix gives
/// four times the apparatus fidelity:
/// |00><00| + |11><11| + |+a +><+a +| + |-a -><-a -|.
inline Mat4 injection_overlap_operator(double alpha) {
    const Vector<2> plus = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    const Vector<2> minus = {1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0)};
    return projector(kron(ket_zero(), ket_zero())) + projector(kron(ket_one(), ket_one())) +
           projector(kron(ket_plus_alpha(alpha), plus)) + projector(kron(ket_minus_alpha(alpha), minus));
}

/// The real symmetric matrix 2 (M(alpha) - I), whose characteristic polynomial
/// is X^4 - 4 X^2 + 2 (1 + cos(2 alpha)) with roots +-sqrt(2 (1 +- sin(alpha))).
inline Mat4 injection_gap_matrix(double alpha) {
    Mat4 n;
    const double c = std::cos(alpha);
    const double s = std::sin(alpha);
    n(0, 0) = 1.0;
    n(1, 1) = -1.0;
    n(2, 2) = -1.0;
    n(3, 3) = 1.0;
    n(0, 1) = n(1, 0) = c;
    n(0, 3) = n(3, 0) = s;
    n(1, 2) = n(2, 1) = s;
    n(2, 3) = n(3, 2) = -c;
    return n;
}

struct DualCertificate {
    double min_eigenvalue = 0.0;  // of I (x) L - M(alpha); feasibility needs >= -1e-10
    double dual_value = 0.0;      // Tr(L); dual_value / 4 equals qubit_apparatus_fidelity
};

/// Feasibility check of the closed-form dual solution
/// L = 1/2 (2 + sqrt(2 (1 + sin(alpha)))) I of the injection optimization.
inline DualCertificate dual_certificate_check(double alpha) {
    const double g = std::sqrt(2.0 * (1.0 + std::sin(alpha)));
    const Mat2 l = (0.5 * (2.0 + g)) * Mat2::identity();
    const Mat4 slack = kron(Mat2::identity(), l) - injection_overlap_operator(alpha);
    const auto eig = hermitian_eigenvalues(slack);
    return DualCertificate{eig[0], l.trace().real()};
}

/// Planar rotation embedding an ideal qubit into the apparatus input space.
struct InjectionMap {
    double rotation_theta = 0.0;

    Mat2 matrix() const {
        Mat2 v;
        v(0, 0) = std::cos(rotation_theta);
        v(0, 1) = std::sin(rotation_theta);
        v(1, 0) = -std::sin(rotation_theta);
        v(1, 1) = std::cos(rotation_theta);
        return v;
    }

    /// Choi matrix 2 (V (x) I) |phi+><phi+| (V (x) I)^dagger. PSD with partial
    /// trace (over the first factor) equal to the identity.
    Mat4 choi() const {
        const Mat2 v = matrix();
        const Mat4 embed = kron(v, Mat2::identity());
        return 2.0 * (embed * projector(bell_phi_plus()) * embed.adjoint());
    }
};

/// The four diagnostic overlaps <00|C|00>, <11|C|11>, <+a +|C|+a +>,
/// <-a -|C|-a ->. At the optimal injection all four coincide.
inline std::array<double, 4> choi_overlaps(const Mat4& choi, double alpha) {
    const Vector<2> plus = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    const Vector<2> minus = {1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0)};
    const Vector<4> kets[4] = {
        kron(ket_zero(), ket_zero()),
        kron(ket_one(), ket_one()),
        kron(ket_plus_alpha(alpha), plus),
        kron(ket_minus_alpha(alpha), minus),
    };
    std::array<double, 4> q{};
    for (int i = 0; i < 4; ++i) q[i] = inner(kets[i], choi * kets[i]).real();
    return q;
}

/// Apparatus fidelity achieved by a (not necessarily optimal) injection with
/// Choi matrix `choi`: (sum_i sqrt(q_i))^2 / 16.
inline double injection_fidelity_from_choi(const Mat4& choi, double alpha) {
    const auto q = choi_overlaps(choi, alpha);
    double sum = 0.0;
    for (double qi : q) sum += std::sqrt(std::max(0.0, qi));
    return sum * sum / 16.0;
}

/// The rotation theta = -alpha/4 + pi/8, which attains
/// qubit_apparatus_fidelity(alpha) and equalizes the four Choi overlaps.
inline InjectionMap optimal_injection(double alpha) {
    return InjectionMap{-alpha / 4.0 + kPi / 8.0};
}

/// Grid minimization of the apparatus fidelity over the alpha range compatible
/// with S. Agrees with measurement_fidelity_bound within 2e-6 at
/// grid_size = 1e5; kept as an independent cross-check of the closed form.
inline double brute_force_min_measurement_fidelity(SValue s, std::size_t grid_size) {
    if (grid_size < 100) {
        throw OutOfRange("brute_force_min_measurement_fidelity: grid_size must be at least 100");
    }
    const AlphaRange range = alpha_range_for_s(s);
    double best = 1.0;
    for (std::size_t k = 0; k < grid_size; ++k) {
        const double alpha =
            range.lo + (range.hi - range.lo) * static_cast<double>(k) / static_cast<double>(grid_size - 1);
        best = std::min(best, qubit_apparatus_fidelity(alpha));
    }
    return best;
}

}  // namespace bellcert
