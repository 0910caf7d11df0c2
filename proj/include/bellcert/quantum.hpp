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

#include <cmath>
#include <string>
#include <utility>

#include "bellcert/complex_matrix.hpp"
#include "bellcert/errors.hpp"

namespace bellcert {

inline constexpr double kPi = 3.14159265358979323846;

enum class PauliAxis { X, Y, Z };

inline Mat2 pauli(PauliAxis axis) {
    Mat2 m;
    switch (axis) {
        case PauliAxis::X:
            m(0, 1) = 1.0;
            m(1, 0) = 1.0;
            break;
        case PauliAxis::Y:
            m(0, 1) = Complex(0.0, -1.0);
            m(1, 0) = Complex(0.0, 1.0);
            break;
        case PauliAxis::Z:
            m(0, 0) = 1.0;
            m(1, 1) = -1.0;
            break;
    }
    return m;
}

inline Vector<2> ket_zero() { return {1.0, 0.0}; }
inline Vector<2> ket_one() { return {0.0, 1.0}; }

/// cos(a/2)|0> + sin(a/2)|1>: the +1 eigenvector of cos(a) sz + sin(a) sx.
inline Vector<2> ket_plus_alpha(double angle) { return {std::cos(angle / 2.0), std::sin(angle / 2.0)}; }

/// sin(a/2)|0> - cos(a/2)|1>: the -1 eigenvector of cos(a) sz + sin(a) sx.
inline Vector<2> ket_minus_alpha(double angle) { return {std::sin(angle / 2.0), -std::cos(angle / 2.0)}; }

/// (|00> + |11>)/sqrt(2)
inline Vector<4> bell_phi_plus() {
    const double s = 1.0 / std::sqrt(2.0);
    return {s, 0.0, 0.0, s};
}

/// cos(angle) sz + sin(angle) sx: the measured observable for a basis
/// direction at `angle` in the z-x plane.
inline Mat2 direction_observable(double angle) {
    Mat2 m;
    m(0, 0) = std::cos(angle);
    m(1, 1) = -std::cos(angle);
    m(0, 1) = std::sin(angle);
    m(1, 0) = std::sin(angle);
    return m;
}

/// Projectors (P+, P-) of direction_observable(angle). Outcome bit 0 maps to
/// the +1 projector.
inline std::pair<Mat2, Mat2> direction_projectors(double angle) {
    return {projector(ket_plus_alpha(angle)), projector(ket_minus_alpha(angle))};
}

enum class Node { A, B };

/// One node's measurement apparatus: setting 0 measures along z, setting 1
/// along the direction angle_alpha in the z-x plane.
struct QubitMeasurement {
    double angle_alpha = kPi / 2.0;
    Node node = Node::A;
};

/// Rank-1 projector pair for the given setting; the pair sums to identity.
inline std::pair<Mat2, Mat2> measurement_projectors(const QubitMeasurement& m, int setting) {
    if (setting == 0) return {projector(ket_zero()), projector(ket_one())};
    return {projector(ket_plus_alpha(m.angle_alpha)), projector(ket_minus_alpha(m.angle_alpha))};
}

/// The two-qubit CHSH operator for apparatus angles (alpha, beta):
///   sz x sz + sz x B1 + A1 x sz - A1 x B1
/// with A1 = c_a sz + s_a sx, B1 = c_b sz + s_b sx. Its largest eigenvalue is
/// 2 sqrt(1 + sin(alpha) sin(beta)).
inline Mat4 chsh_operator(double alpha, double beta) {
    const Mat2 a0 = pauli(PauliAxis::Z);
    const Mat2 a1 = direction_observable(alpha);
    const Mat2 b0 = pauli(PauliAxis::Z);
    const Mat2 b1 = direction_observable(beta);
    return kron(a0, b0) + kron(a0, b1) + kron(a1, b0) - kron(a1, b1);
}

/// Two-qubit state: Hermitian, unit trace, positive semidefinite.
struct DensityMatrix {
    Mat4 mat;
    std::string label;

    void validate() const {
        if (std::abs(mat.trace() - Complex(1.0, 0.0)) > 1e-12) {
            throw DomainError("DensityMatrix '" + label + "': trace differs from 1 beyond 1e-12");
        }
        if (!mat.is_hermitian(1e-12)) {
            throw DomainError("DensityMatrix '" + label + "': not Hermitian within 1e-12");
        }
        const auto eig = hermitian_eigenvalues(mat);
        if (eig[0] < -1e-10) {
            throw DomainError("DensityMatrix '" + label + "': negative eigenvalue below -1e-10");
        }
    }
};

inline DensityMatrix pure_state(const Vector<4>& ket, std::string label) {
    return DensityMatrix{projector(ket), std::move(label)};
}

inline DensityMatrix maximally_mixed_state() {
    return DensityMatrix{0.25 * Mat4::identity(), "maximally mixed"};
}

/// Parameters of the noisy-state family used by the simulator: a mixture of
/// |phi+> with white noise, with exact fidelity control.
struct WernerParams {
    double target_fidelity = 1.0;  // fidelity to |phi+>, in [0.25, 1]
};

/// v |phi+><phi+| + (1-v) I/4 with v = (4 F - 1)/3, so that
/// <phi+| rho |phi+> = F exactly.
inline DensityMatrix werner_state(const WernerParams& params) {
    const double f = params.target_fidelity;
    if (f < 0.25 || f > 1.0) {
        throw DomainError("werner_state: target fidelity must lie in [0.25, 1]");
    }
    const double v = (4.0 * f - 1.0) / 3.0;
    const Mat4 rho = v * projector(bell_phi_plus()) + (0.25 * (1.0 - v)) * Mat4::identity();
    return DensityMatrix{rho, "werner"};
}

inline DensityMatrix werner_state(double target_fidelity) { return werner_state(WernerParams{target_fidelity}); }

/// <phi+| rho |phi+>
inline double state_fidelity_to_bell(const DensityMatrix& rho) {
    const Vector<4> phi = bell_phi_plus();
    return inner(phi, rho.mat * phi).real();
}

/// p(a,b|x,y) for one trial, indexed [x][y][a][b].
struct JointProbabilities {
    double p[2][2][2][2] = {};

    double prob(int x, int y, int a, int b) const { return p[x][y][a][b]; }

    /// <(-1)^a (-1)^b> under settings (x, y).
    double correlator(int x, int y) const {
        return p[x][y][0][0] - p[x][y][0][1] - p[x][y][1][0] + p[x][y][1][1];
    }

    /// E00 + E01 + E10 - E11
    double chsh_s() const { return correlator(0, 0) + correlator(0, 1) + correlator(1, 0) - correlator(1, 1); }

    double marginal_a(int x, int y, int a) const { return p[x][y][a][0] + p[x][y][a][1]; }
    double marginal_b(int x, int y, int b) const { return p[x][y][0][b] + p[x][y][1][b]; }
};

/// Born-rule outcome table for state `rho` with node A's apparatus `node_a`
/// and node B's apparatus `node_b` rotated by the basis offset angle `theta`.
///
/// Node B's directions are (theta, theta - beta): the clockwise orientation of
/// the pair is what lets the CHSH combination with the minus sign on
/// (x, y) = (1, 1) reach 2 sqrt(2) sin(alpha/2 + pi/4) at theta = alpha/2.
inline JointProbabilities joint_outcome_probs(const DensityMatrix& rho, const QubitMeasurement& node_a,
                                              const QubitMeasurement& node_b, double theta) {
    rho.validate();

    const std::pair<Mat2, Mat2> proj_a[2] = {measurement_projectors(node_a, 0), measurement_projectors(node_a, 1)};
    const std::pair<Mat2, Mat2> proj_b[2] = {direction_projectors(theta),
                                             direction_projectors(theta - node_b.angle_alpha)};

    JointProbabilities table;
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            const Mat2 pa[2] = {proj_a[x].first, proj_a[x].second};
            const Mat2 pb[2] = {proj_b[y].first, proj_b[y].second};
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    table.p[x][y][a][b] = real_trace_product(rho.mat, kron(pa[a], pb[b]));
                }
            }
        }
    }
    return table;
}

}  // namespace bellcert
