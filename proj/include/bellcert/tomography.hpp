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
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "bellcert/complex_matrix.hpp"
#include "bellcert/errors.hpp"
#include "bellcert/quantum.hpp"
#include "bellcert/readout.hpp"
#include "bellcert/rng.hpp"

namespace bellcert {

inline constexpr const char* kTomographyCountsFormat = "bellcert-tomography-counts/1";

inline constexpr std::array<PauliAxis, 3> kTomographyAxes = {PauliAxis::X, PauliAxis::Y, PauliAxis::Z};

inline char axis_letter(PauliAxis axis) {
    switch (axis) {
        case PauliAxis::X: return 'X';
        case PauliAxis::Y: return 'Y';
        case PauliAxis::Z: return 'Z';
    }
    return '?';
}

/// (+1, -1) eigenvectors of the given Pauli. Outcome bit 0 is the +1 result.
inline std::pair<Vector<2>, Vector<2>> pauli_eigenkets(PauliAxis axis) {
    const double s = 1.0 / std::sqrt(2.0);
    switch (axis) {
        case PauliAxis::X: return {{s, s}, {s, -s}};
        case PauliAxis::Y: return {{s, Complex(0.0, s)}, {s, Complex(0.0, -s)}};
        case PauliAxis::Z: return {{1.0, 0.0}, {0.0, 1.0}};
    }
    return {{1.0, 0.0}, {0.0, 1.0}};
}

/// Outcome counts of a full 9-setting (all Pauli pairs) tomography run.
/// Settings are indexed 3 * axis_a + axis_b in X, Y, Z order; outcomes are
/// indexed 2 a + b with 0 = +1 eigenvalue ("g").
struct TomographyCounts {
    std::uint64_t shots_per_setting = 0;
    std::array<std::array<std::uint64_t, 4>, 9> counts{};

    void validate() const {
        for (const auto& setting : counts) {
            std::uint64_t total = 0;
            for (const std::uint64_t c : setting) total += c;
            if (total != shots_per_setting) {
                throw DomainError("TomographyCounts: setting counts do not sum to shots_per_setting");
            }
        }
    }
};

/// Exact outcome distribution of one tomography setting, readout included.
inline std::array<double, 4> tomography_setting_distribution(const DensityMatrix& rho, PauliAxis basis_a,
                                                             PauliAxis basis_b, const ConfusionMatrix& confusion_a,
                                                             const ConfusionMatrix& confusion_b) {
    const auto [ka_plus, ka_minus] = pauli_eigenkets(basis_a);
    const auto [kb_plus, kb_minus] = pauli_eigenkets(basis_b);
    const Mat2 pa[2] = {projector(ka_plus), projector(ka_minus)};
    const Mat2 pb[2] = {projector(kb_plus), projector(kb_minus)};
    std::array<double, 4> born{};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) born[2 * a + b] = real_trace_product(rho.mat, kron(pa[a], pb[b]));
    return apply_two_node_confusion(confusion_a, confusion_b, born);
}

/// Samples `shots` outcomes per setting from the Born distribution composed
/// with the readout confusion. Deterministic in the seed; each setting uses
/// its own counter stream.
inline TomographyCounts simulate_tomography(const DensityMatrix& rho, std::uint64_t shots,
                                            const ConfusionMatrix& confusion_a, const ConfusionMatrix& confusion_b,
                                            std::uint64_t seed) {
    if (shots < 1) throw DomainError("simulate_tomography: shots must be at least 1");
    rho.validate();

    TomographyCounts counts;
    counts.shots_per_setting = shots;
    for (int ia = 0; ia < 3; ++ia) {
        for (int ib = 0; ib < 3; ++ib) {
            const int setting = 3 * ia + ib;
            const auto dist = tomography_setting_distribution(rho, kTomographyAxes[ia], kTomographyAxes[ib],
                                                              confusion_a, confusion_b);
            for (std::uint64_t shot = 0; shot < shots; ++shot) {
                const auto w = random_block(seed, kTomographyStreamBase + static_cast<std::uint32_t>(setting), shot);
                const double u = to_unit_interval(w[0], w[1]);
                int cell = 3;
                double cumulative = 0.0;
                for (int k = 0; k < 3; ++k) {
                    cumulative += dist[k];
                    if (u < cumulative) {
                        cell = k;
                        break;
                    }
                }
                ++counts.counts[setting][cell];
            }
        }
    }
    return counts;
}

namespace detail {

/// Linear inversion from per-setting outcome distributions. Two-qubit
/// correlators come from their own setting; single-qubit expectations are
/// averaged over the partner's three bases. The estimate is projected onto
/// the physical set by clipping negative eigenvalues and renormalizing.
inline DensityMatrix reconstruct_core(const std::array<std::array<double, 4>, 9>& dists) {
    double corr[3][3];
    double single_a[3] = {0.0, 0.0, 0.0};
    double single_b[3] = {0.0, 0.0, 0.0};
    for (int ia = 0; ia < 3; ++ia) {
        for (int ib = 0; ib < 3; ++ib) {
            const auto& d = dists[3 * ia + ib];
            corr[ia][ib] = d[0] - d[1] - d[2] + d[3];
            single_a[ia] += (d[0] + d[1] - d[2] - d[3]) / 3.0;
            single_b[ib] += (d[0] - d[1] + d[2] - d[3]) / 3.0;
        }
    }

    Mat4 estimate = 0.25 * Mat4::identity();
    const Mat2 eye = Mat2::identity();
    for (int i = 0; i < 3; ++i) {
        const Mat2 si = pauli(kTomographyAxes[i]);
        estimate = estimate + (0.25 * single_a[i]) * kron(si, eye);
        estimate = estimate + (0.25 * single_b[i]) * kron(eye, si);
        for (int j = 0; j < 3; ++j) {
            estimate = estimate + (0.25 * corr[i][j]) * kron(si, pauli(kTomographyAxes[j]));
        }
    }

    const auto eig = hermitian_eigensystem(estimate);
    double total = 0.0;
    for (const double v : eig.values) total += std::max(0.0, v);
    if (total <= 0.0) throw DomainError("reconstruct_state: estimate has no positive spectral weight");

    Mat4 rho;
    for (std::size_t k = 0; k < 4; ++k) {
        const double w = std::max(0.0, eig.values[k]) / total;
        if (w == 0.0) continue;
        Vector<4> col;
        for (std::size_t i = 0; i < 4; ++i) col[i] = eig.vectors(i, k);
        rho = rho + w * projector(col);
    }
    return DensityMatrix{rho, "tomography estimate"};
}

}  // namespace detail

/// Reconstruction from exact per-setting distributions (the infinite-shot
/// limit); the oracle the sampled path is checked against.
inline DensityMatrix reconstruct_from_probabilities(const std::array<std::array<double, 4>, 9>& dists,
                                                    bool correct_readout, const ConfusionMatrix& confusion_a,
                                                    const ConfusionMatrix& confusion_b) {
    if (correct_readout && (confusion_a.readout_fidelity() <= 0.0 || confusion_b.readout_fidelity() <= 0.0)) {
        throw SingularConfusion("reconstruct: readout fidelity <= 0, correction impossible");
    }
    std::array<std::array<double, 4>, 9> effective = dists;
    if (correct_readout) {
        for (auto& d : effective) d = unapply_two_node_confusion(confusion_a, confusion_b, d);
    }
    return detail::reconstruct_core(effective);
}

inline DensityMatrix reconstruct_state(const TomographyCounts& counts, bool correct_readout,
                                       const ConfusionMatrix& confusion_a, const ConfusionMatrix& confusion_b) {
    counts.validate();
    if (counts.shots_per_setting == 0) throw DomainError("reconstruct_state: empty counts");
    std::array<std::array<double, 4>, 9> dists{};
    for (int s = 0; s < 9; ++s) {
        for (int cell = 0; cell < 4; ++cell) {
            dists[s][cell] = static_cast<double>(counts.counts[s][cell]) /
                             static_cast<double>(counts.shots_per_setting);
        }
    }
    return reconstruct_from_probabilities(dists, correct_readout, confusion_a, confusion_b);
}

/// Lower bound on the tomographic measurement fidelity from the rotation
/// error eps_r and readout error eps_z:
///   1 - eps_r - eps_z - 2 sqrt(eps_r eps_z), clamped to [0, 1].
inline double tomographic_measurement_fidelity(double eps_r, double eps_z) {
    if (!(eps_r >= 0.0 && eps_r < 1.0) || !(eps_z >= 0.0 && eps_z < 1.0)) {
        throw DomainError("tomographic_measurement_fidelity: errors must lie in [0, 1)");
    }
    const double bound = 1.0 - eps_r - eps_z - 2.0 * std::sqrt(eps_r * eps_z);
    return std::min(1.0, std::max(0.0, bound));
}

/// Symmetric-readout error rate implied by a readout fidelity: (1 - F_r)/2.
inline double eps_z_from_readout_fidelity(double readout_fidelity) {
    if (!(readout_fidelity > 0.0 && readout_fidelity <= 1.0)) {
        throw DomainError("eps_z_from_readout_fidelity: readout fidelity must lie in (0, 1]");
    }
    return 0.5 * (1.0 - readout_fidelity);
}

/// For a bound valid on both nodes the smaller error rate may be assumed.
inline double combined_eps_z(double eps_z_a, double eps_z_b) { return std::min(eps_z_a, eps_z_b); }

/// Serializes counts in the `#`-header + CSV convention shared with trial logs.
inline void write_tomography_counts(std::ostream& out, const TomographyCounts& counts) {
    out << "# format=" << kTomographyCountsFormat << "\n";
    out << "# shots_per_setting=" << counts.shots_per_setting << "\n";
    for (int ia = 0; ia < 3; ++ia) {
        for (int ib = 0; ib < 3; ++ib) {
            const auto& c = counts.counts[3 * ia + ib];
            out << axis_letter(kTomographyAxes[ia]) << ',' << axis_letter(kTomographyAxes[ib]) << ',' << c[0] << ','
                << c[1] << ',' << c[2] << ',' << c[3] << "\n";
        }
    }
}

inline TomographyCounts read_tomography_counts(std::istream& in) {
    TomographyCounts counts;
    std::string line;
    std::uint64_t line_no = 0;
    int next_setting = 0;
    bool have_shots = false;

    auto axis_index = [](char c) {
        switch (c) {
            case 'X': return 0;
            case 'Y': return 1;
            case 'Z': return 2;
            default: return -1;
        }
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::size_t start = 1;
            while (start < line.size() && line[start] == ' ') ++start;
            const std::size_t eq = line.find('=', start);
            if (eq == std::string::npos) {
                throw ParseError("line " + std::to_string(line_no) + ": header line without '='", line_no);
            }
            const std::string key = line.substr(start, eq - start);
            if (key == "shots_per_setting") {
                counts.shots_per_setting = std::stoull(line.substr(eq + 1));
                have_shots = true;
            }
            continue;
        }
        char ca = 0, cb = 0;
        unsigned long long n0 = 0, n1 = 0, n2 = 0, n3 = 0;
        if (std::sscanf(line.c_str(), "%c,%c,%llu,%llu,%llu,%llu", &ca, &cb, &n0, &n1, &n2, &n3) != 6 ||
            axis_index(ca) < 0 || axis_index(cb) < 0) {
            throw ParseError("line " + std::to_string(line_no) + ": malformed counts record '" + line + "'", line_no);
        }
        if (next_setting >= 9 || 3 * axis_index(ca) + axis_index(cb) != next_setting) {
            throw ParseError("line " + std::to_string(line_no) + ": settings out of order", line_no);
        }
        counts.counts[next_setting] = {n0, n1, n2, n3};
        ++next_setting;
    }
    if (!have_shots) throw ParseError("tomography counts missing shots_per_setting header", 0);
    if (next_setting != 9) throw ParseError("tomography counts incomplete: expected 9 settings", 0);
    counts.validate();
    return counts;
}

}  // namespace bellcert
