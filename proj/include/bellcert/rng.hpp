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
#include <cstdint>

#include "bellcert/quantum.hpp"

namespace bellcert {

/// Philox 4x32 counter-based generator, 10 rounds. Purely a function of
/// (key, counter), which is what makes trial generation shardable: any worker
/// can produce the randomness of any trial index without sequential state.
namespace philox {

inline constexpr std::uint32_t kWeylA = 0x9E3779B9u;
inline constexpr std::uint32_t kWeylB = 0xBB67AE85u;
inline constexpr std::uint32_t kMultA = 0xD2511F53u;
inline constexpr std::uint32_t kMultB = 0xCD9E8D57u;

inline void round_once(std::array<std::uint32_t, 4>& ctr, const std::array<std::uint32_t, 2>& key) {
    const std::uint64_t prod0 = static_cast<std::uint64_t>(kMultA) * ctr[0];
    const std::uint64_t prod1 = static_cast<std::uint64_t>(kMultB) * ctr[2];
    const auto lo0 = static_cast<std::uint32_t>(prod0);
    const auto hi0 = static_cast<std::uint32_t>(prod0 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(prod1);
    const auto hi1 = static_cast<std::uint32_t>(prod1 >> 32);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

inline std::array<std::uint32_t, 4> block(std::uint64_t key, std::array<std::uint32_t, 4> counter) {
    std::array<std::uint32_t, 2> k = {static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
    for (int r = 0; r < 10; ++r) {
        round_once(counter, k);
        if (r < 9) {
            k[0] += kWeylA;
            k[1] += kWeylB;
        }
    }
    return counter;
}

}  // namespace philox

/// One 128-bit block addressed by (seed, stream, index). Streams keep the
/// trial randomness and the tomography shots statistically disjoint.
inline std::array<std::uint32_t, 4> random_block(std::uint64_t seed, std::uint32_t stream, std::uint64_t index) {
    return philox::block(seed, {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), stream,
                                0u});
}

/// 53-bit uniform double in [0, 1).
inline double to_unit_interval(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t mantissa = (static_cast<std::uint64_t>(hi >> 5) << 26) | (lo >> 6);
    return static_cast<double>(mantissa) * (1.0 / 9007199254740992.0);  // 2^-53
}

/// All the randomness one Bell trial consumes: the two input bits and one
/// uniform variate for outcome sampling.
struct TrialDraw {
    int x = 0;
    int y = 0;
    double u = 0.0;
};

inline constexpr std::uint32_t kTrialStream = 0;
inline constexpr std::uint32_t kTomographyStreamBase = 1;

inline TrialDraw trial_draw(std::uint64_t seed, std::uint64_t trial_index) {
    const auto w = random_block(seed, kTrialStream, trial_index);
    return TrialDraw{static_cast<int>(w[0] & 1u), static_cast<int>(w[1] & 1u), to_unit_interval(w[2], w[3])};
}

/// The measurement-setting bit fed to one node in one trial. Deterministic in
/// (seed, trial_index, node); uniform and independent across trials and nodes.
inline int input_bit_stream(std::uint64_t seed, std::uint64_t trial_index, Node node) {
    const TrialDraw draw = trial_draw(seed, trial_index);
    return node == Node::A ? draw.x : draw.y;
}

}  // namespace bellcert
