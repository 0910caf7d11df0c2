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
#include <functional>
#include <span>
#include <thread>
#include <vector>

#include "bellcert/errors.hpp"
#include "bellcert/finite_stats.hpp"
#include "bellcert/quantum.hpp"
#include "bellcert/readout.hpp"
#include "bellcert/rng.hpp"

namespace bellcert {

/// Physical parameters of the simulated two-node experiment.
///
/// Node A measures along z (setting 0) or at alpha_a (setting 1). Node B's
/// pair is a fixed orthogonal pair globally rotated by theta_offset. Readout
/// errors act as per-node classical bit flips after the projective outcome.
/// Drift perturbs theta by drift_amplitude * sin(2 pi j / drift_period) where
/// j counts trials since the last recalibration (block start).
struct NoiseModel {
    double bell_fidelity = 1.0;       // fidelity of the shared state to |phi+>, in [0.25, 1]
    double alpha_a = kPi / 2.0;       // node A basis separation, radians
    double theta_offset = kPi / 4.0;  // measurement basis offset angle, radians
    double readout_eg_a = 0.0;        // p(e|g) node A
    double readout_ge_a = 0.0;        // p(g|e) node A
    double readout_eg_b = 0.0;        // p(e|g) node B
    double readout_ge_b = 0.0;        // p(g|e) node B
    double drift_amplitude = 0.0;     // radians; 0 disables drift
    std::uint64_t drift_period = 1;   // trials per drift cycle

    void validate() const {
        if (!(bell_fidelity >= 0.25 && bell_fidelity <= 1.0)) {
            throw DomainError("NoiseModel: bell_fidelity must lie in [0.25, 1]");
        }
        for (const double p : {readout_eg_a, readout_ge_a, readout_eg_b, readout_ge_b}) {
            if (!(p >= 0.0 && p < 0.5)) throw DomainError("NoiseModel: readout error rates must lie in [0, 0.5)");
        }
        if (drift_period < 1) throw DomainError("NoiseModel: drift_period must be at least 1");
        if (!(drift_amplitude >= 0.0)) throw DomainError("NoiseModel: drift_amplitude must be nonnegative");
    }

    ConfusionMatrix confusion_a() const { return ConfusionMatrix{readout_eg_a, readout_ge_a}; }
    ConfusionMatrix confusion_b() const { return ConfusionMatrix{readout_eg_b, readout_ge_b}; }
};

struct ExperimentConfig {
    std::uint64_t n_trials = 1u << 20;
    std::uint64_t block_size = 1u << 16;
    std::uint64_t seed = 1;
    NoiseModel noise;
    double repetition_rate_hz = 50000.0;  // metadata only

    void validate() const {
        if (n_trials < 1) throw DomainError("ExperimentConfig: n_trials must be at least 1");
        if (block_size < 1) throw DomainError("ExperimentConfig: block_size must be at least 1");
        if (n_trials % block_size != 0) {
            throw DomainError("ExperimentConfig: block_size must divide n_trials");
        }
        noise.validate();
    }

    std::uint64_t block_count() const { return n_trials / block_size; }
};

/// One Bell-test trial.
struct TrialRecord {
    std::uint64_t index = 0;
    std::uint8_t x = 0;
    std::uint8_t y = 0;
    std::uint8_t a = 0;
    std::uint8_t b = 0;
};

/// Outcome table p(a,b|x,y) at a given drift phase: Born probabilities of the
/// Werner state composed with the per-node readout confusion.
inline JointProbabilities trial_prob_table(const NoiseModel& noise, std::uint64_t trials_since_recalibration) {
    noise.validate();
    double theta = noise.theta_offset;
    if (noise.drift_amplitude != 0.0) {
        const double phase = static_cast<double>(trials_since_recalibration % noise.drift_period) /
                             static_cast<double>(noise.drift_period);
        theta += noise.drift_amplitude * std::sin(2.0 * kPi * phase);
    }

    const DensityMatrix rho = werner_state(noise.bell_fidelity);
    const QubitMeasurement node_a{noise.alpha_a, Node::A};
    const QubitMeasurement node_b{kPi / 2.0, Node::B};
    JointProbabilities born = joint_outcome_probs(rho, node_a, node_b, theta);

    const ConfusionMatrix ca = noise.confusion_a();
    const ConfusionMatrix cb = noise.confusion_b();
    JointProbabilities observed;
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            const std::array<double, 4> t = {born.p[x][y][0][0], born.p[x][y][0][1], born.p[x][y][1][0],
                                             born.p[x][y][1][1]};
            const std::array<double, 4> o = apply_two_node_confusion(ca, cb, t);
            observed.p[x][y][0][0] = o[0];
            observed.p[x][y][0][1] = o[1];
            observed.p[x][y][1][0] = o[2];
            observed.p[x][y][1][1] = o[3];
        }
    }
    return observed;
}

struct BlockSummary {
    std::uint64_t index = 0;
    std::uint64_t n = 0;
    std::uint64_t wins = 0;

    double s_estimate() const { return 8.0 * static_cast<double>(wins) / static_cast<double>(n) - 4.0; }
};

struct SimulationSummary {
    TrialTally tally;
    std::vector<BlockSummary> blocks;

    double s_measured() const { return tally.s_estimate(); }
};

/// Receives each finished block, in index order.
using TrialSink = std::function<void(const BlockSummary&, std::span<const TrialRecord>)>;

namespace detail {

inline TrialRecord generate_trial(const JointProbabilities& table, std::uint64_t seed, std::uint64_t index) {
    const TrialDraw draw = trial_draw(seed, index);
    const double* row = table.p[draw.x][draw.y][0];
    int a = 1;
    int b = 1;
    double cumulative = 0.0;
    for (int cell = 0; cell < 3; ++cell) {
        cumulative += row[cell];
        if (draw.u < cumulative) {
            a = cell >> 1;
            b = cell & 1;
            break;
        }
    }
    return TrialRecord{index, static_cast<std::uint8_t>(draw.x), static_cast<std::uint8_t>(draw.y),
                       static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)};
}

struct BlockBuffer {
    std::vector<TrialRecord> records;
    std::uint64_t wins = 0;
};

inline void generate_block(const ExperimentConfig& config, std::uint64_t block_index, BlockBuffer& out) {
    const std::uint64_t begin = block_index * config.block_size;
    const std::uint64_t end = begin + config.block_size;
    out.records.clear();
    out.records.reserve(config.block_size);
    out.wins = 0;

    const bool drifting = config.noise.drift_amplitude != 0.0;
    JointProbabilities table;
    if (!drifting) table = trial_prob_table(config.noise, 0);

    for (std::uint64_t i = begin; i < end; ++i) {
        if (drifting) table = trial_prob_table(config.noise, i - begin);
        const TrialRecord rec = generate_trial(table, config.seed, i);
        out.wins += win_condition(rec.x, rec.y, rec.a, rec.b) ? 1 : 0;
        out.records.push_back(rec);
    }
}

}  // namespace detail

/// Runs the full experiment: n_trials seeded Bell trials in recalibration
/// blocks, fanned out over worker threads a wave of blocks at a time. Trial
/// content is a pure function of (seed, trial index, noise model), so the log
/// is bitwise identical for any worker count. The sink sees blocks in index
/// order; a throwing sink aborts the run with a partial-progress report.
inline SimulationSummary simulate(const ExperimentConfig& config, const TrialSink& sink,
                                  unsigned n_workers = std::thread::hardware_concurrency()) {
    config.validate();
    if (n_workers < 1) n_workers = 1;

    const std::uint64_t n_blocks = config.block_count();
    SimulationSummary summary;
    summary.blocks.reserve(n_blocks);
    std::uint64_t wins_total = 0;
    std::uint64_t trials_delivered = 0;
    std::uint64_t blocks_delivered = 0;

    std::vector<detail::BlockBuffer> wave(std::min<std::uint64_t>(n_workers, n_blocks));
    for (std::uint64_t wave_start = 0; wave_start < n_blocks; wave_start += wave.size()) {
        const std::uint64_t wave_count = std::min<std::uint64_t>(wave.size(), n_blocks - wave_start);

        if (wave_count == 1) {
            detail::generate_block(config, wave_start, wave[0]);
        } else {
            std::vector<std::thread> workers;
            workers.reserve(wave_count);
            for (std::uint64_t w = 0; w < wave_count; ++w) {
                workers.emplace_back([&, w] { detail::generate_block(config, wave_start + w, wave[w]); });
            }
            for (auto& t : workers) t.join();
        }

        for (std::uint64_t w = 0; w < wave_count; ++w) {
            const std::uint64_t block_index = wave_start + w;
            const BlockSummary block{block_index, config.block_size, wave[w].wins};
            if (sink) {
                try {
                    sink(block, std::span<const TrialRecord>(wave[w].records));
                } catch (const std::exception& e) {
                    throw SinkFailure(std::string("trial sink failed: ") + e.what(), blocks_delivered,
                                      trials_delivered, wins_total);
                }
            }
            summary.blocks.push_back(block);
            wins_total += block.wins;
            trials_delivered += block.n;
            ++blocks_delivered;
        }
    }

    summary.tally = TrialTally::checked(config.n_trials, wins_total);
    return summary;
}

}  // namespace bellcert
