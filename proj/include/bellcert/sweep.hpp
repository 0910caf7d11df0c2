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
#include <cmath>
#include <cstdint>
#include <vector>

#include "bellcert/errors.hpp"
#include "bellcert/simulator.hpp"

namespace bellcert {

/// One Bell test of the basis-offset sweep: four correlator estimates and the
/// CHSH combination at a fixed theta.
struct SweepPoint {
    double theta_rad = 0.0;
    std::uint64_t trials = 0;
    double correlators[2][2] = {};  // E_xy
    double s = 0.0;

    double abs_s() const { return std::abs(s); }
};

struct SweepPeak {
    std::size_t index = 0;
    double theta_rad = 0.0;
    double s = 0.0;
    double abs_s = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    SweepPeak peak_primary;
    SweepPeak peak_secondary;
    double separation_rad = 0.0;  // circular distance between the two peaks, in [0, pi]
};

namespace detail {

/// The two largest circular local maxima of |S|. A fixed-sign CHSH expression
/// is a single harmonic in theta, so its two optimal operating points show up
/// as the maximum and the minimum; |S| treats the two outcome-relabeling
/// conventions symmetrically, which is how both peaks exceed the thresholds.
inline void find_peaks(SweepResult& result) {
    const std::size_t n = result.points.size();
    std::vector<SweepPeak> maxima;
    for (std::size_t i = 0; i < n; ++i) {
        const double here = result.points[i].abs_s();
        const double prev = result.points[(i + n - 1) % n].abs_s();
        const double next = result.points[(i + 1) % n].abs_s();
        if ((n == 1) || (here >= prev && here > next) || (here > prev && here >= next)) {
            maxima.push_back(SweepPeak{i, result.points[i].theta_rad, result.points[i].s, here});
        }
    }
    if (maxima.size() < 2) {
        for (std::size_t i = 0; i < n; ++i) {
            maxima.push_back(SweepPeak{i, result.points[i].theta_rad, result.points[i].s, result.points[i].abs_s()});
        }
    }
    std::sort(maxima.begin(), maxima.end(), [](const SweepPeak& a, const SweepPeak& b) { return a.abs_s > b.abs_s; });
    result.peak_primary = maxima[0];
    result.peak_secondary = maxima.size() > 1 ? maxima[1] : maxima[0];

    double d = std::abs(result.peak_primary.theta_rad - result.peak_secondary.theta_rad);
    d = std::fmod(d, 2.0 * kPi);
    if (d > kPi) d = 2.0 * kPi - d;
    result.separation_rad = d;
}

}  // namespace detail

/// Runs one simulated Bell test per theta grid point and estimates the four
/// correlators and S from the sampled trials. Point k uses seed + k so the
/// tests are independent runs, as in a calibration scan.
inline SweepResult run_angle_sweep(const std::vector<double>& thetas_rad, std::uint64_t trials_per_point,
                                   const NoiseModel& base_noise, std::uint64_t seed) {
    if (thetas_rad.empty()) throw DomainError("run_angle_sweep: theta grid must be nonempty");
    if (trials_per_point < 1) throw DomainError("run_angle_sweep: trials_per_point must be at least 1");

    SweepResult result;
    result.points.reserve(thetas_rad.size());
    for (std::size_t k = 0; k < thetas_rad.size(); ++k) {
        ExperimentConfig config;
        config.n_trials = trials_per_point;
        config.block_size = trials_per_point;
        config.seed = seed + k;
        config.noise = base_noise;
        config.noise.theta_offset = thetas_rad[k];

        std::uint64_t counts[2][2] = {};
        std::int64_t parity_sums[2][2] = {};
        simulate(
            config,
            [&](const BlockSummary&, std::span<const TrialRecord> records) {
                for (const TrialRecord& r : records) {
                    ++counts[r.x][r.y];
                    parity_sums[r.x][r.y] += ((r.a ^ r.b) == 0) ? 1 : -1;
                }
            },
            1);

        SweepPoint point;
        point.theta_rad = thetas_rad[k];
        point.trials = trials_per_point;
        for (int x = 0; x < 2; ++x) {
            for (int y = 0; y < 2; ++y) {
                point.correlators[x][y] =
                    counts[x][y] == 0 ? 0.0
                                      : static_cast<double>(parity_sums[x][y]) / static_cast<double>(counts[x][y]);
            }
        }
        point.s = point.correlators[0][0] + point.correlators[0][1] + point.correlators[1][0] -
                  point.correlators[1][1];
        result.points.push_back(point);
    }
    detail::find_peaks(result);
    return result;
}

/// Evenly spaced cyclic grid over [start, stop): the usual full-circle scan.
inline std::vector<double> theta_grid(double start_rad, double stop_rad, std::size_t steps) {
    if (steps < 1) throw DomainError("theta_grid: need at least one step");
    std::vector<double> grid;
    grid.reserve(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        grid.push_back(start_rad + (stop_rad - start_rad) * static_cast<double>(k) / static_cast<double>(steps));
    }
    return grid;
}

}  // namespace bellcert
