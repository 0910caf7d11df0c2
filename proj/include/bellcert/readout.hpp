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

#include "bellcert/errors.hpp"

namespace bellcert {

/// Per-node readout confusion: p_eg = p(e|g) is the probability of reading 1
/// when the qubit is 0, p_ge = p(g|e) the reverse. The readout fidelity is
/// F_r = 1 - p_eg - p_ge and must stay positive for the matrix to invert.
struct ConfusionMatrix {
    double p_eg = 0.0;
    double p_ge = 0.0;

    static ConfusionMatrix checked(double p_eg, double p_ge) {
        if (!(p_eg >= 0.0 && p_eg < 0.5) || !(p_ge >= 0.0 && p_ge < 0.5)) {
            throw DomainError("ConfusionMatrix: error rates must lie in [0, 0.5)");
        }
        return ConfusionMatrix{p_eg, p_ge};
    }

    double readout_fidelity() const { return 1.0 - p_eg - p_ge; }

    /// Observed distribution of a single bit given its true distribution.
    std::array<double, 2> apply(const std::array<double, 2>& true_dist) const {
        return {(1.0 - p_eg) * true_dist[0] + p_ge * true_dist[1],
                p_eg * true_dist[0] + (1.0 - p_ge) * true_dist[1]};
    }

    /// Inverse action, used for readout-error correction of estimated
    /// distributions. Throws when F_r <= 0.
    std::array<double, 2> unapply(const std::array<double, 2>& observed) const {
        const double fr = readout_fidelity();
        if (fr <= 0.0) throw SingularConfusion("ConfusionMatrix: readout fidelity <= 0, not invertible");
        return {((1.0 - p_ge) * observed[0] - p_ge * observed[1]) / fr,
                (-p_eg * observed[0] + (1.0 - p_eg) * observed[1]) / fr};
    }
};

/// Joint confusion of two independent nodes acting on a 4-outcome
/// distribution indexed 2a + b.
inline std::array<double, 4> apply_two_node_confusion(const ConfusionMatrix& node_a, const ConfusionMatrix& node_b,
                                                      const std::array<double, 4>& true_dist) {
    std::array<double, 4> out{};
    const double ta[2][2] = {{1.0 - node_a.p_eg, node_a.p_ge}, {node_a.p_eg, 1.0 - node_a.p_ge}};
    const double tb[2][2] = {{1.0 - node_b.p_eg, node_b.p_ge}, {node_b.p_eg, 1.0 - node_b.p_ge}};
    for (int a_obs = 0; a_obs < 2; ++a_obs)
        for (int b_obs = 0; b_obs < 2; ++b_obs)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) out[2 * a_obs + b_obs] += ta[a_obs][a] * tb[b_obs][b] * true_dist[2 * a + b];
    return out;
}

/// Inverse of apply_two_node_confusion.
inline std::array<double, 4> unapply_two_node_confusion(const ConfusionMatrix& node_a, const ConfusionMatrix& node_b,
                                                        const std::array<double, 4>& observed) {
    // Invert per node: (A (x) B)^-1 = A^-1 (x) B^-1.
    std::array<double, 4> half{};
    for (int b = 0; b < 2; ++b) {
        const auto col = node_a.unapply({observed[0 + b], observed[2 + b]});
        half[0 + b] = col[0];
        half[2 + b] = col[1];
    }
    std::array<double, 4> out{};
    for (int a = 0; a < 2; ++a) {
        const auto row = node_b.unapply({half[2 * a + 0], half[2 * a + 1]});
        out[2 * a + 0] = row[0];
        out[2 * a + 1] = row[1];
    }
    return out;
}

}  // namespace bellcert
