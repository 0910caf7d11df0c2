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

#include "bellcert/errors.hpp"

namespace bellcert {

inline constexpr double kSpeedOfLightMps = 299792458.0;

/// Event geometry and protocol duration for the locality-budget check.
struct SpaceTimeConfig {
    double separation_distance_m = 0.0;   // shortest start-to-stop distance
    double protocol_duration_ns = 0.0;    // measured upper bound on a trial
    double distance_sigma_s = 1e-11;      // ~ten picoseconds on the budget
    double duration_sigma_s = 3e-10;      // ~a few hundred picoseconds
    double sigma_k = 3.0;                 // how many combined sigmas of margin "closed" requires

    void validate() const {
        if (!(separation_distance_m > 0.0)) throw DomainError("SpaceTimeConfig: distance must be positive");
        if (protocol_duration_ns < 0.0 || distance_sigma_s < 0.0 || duration_sigma_s < 0.0) {
            throw DomainError("SpaceTimeConfig: durations and uncertainties must be nonnegative");
        }
    }
};

/// Light travel time over d meters, in nanoseconds: the per-trial window in
/// which inter-node signaling is excluded.
inline double light_time_budget_ns(double distance_m) {
    if (!(distance_m > 0.0)) throw DomainError("light_time_budget_ns: distance must be positive");
    return distance_m / kSpeedOfLightMps * 1e9;
}

struct LocalityMargin {
    double budget_ns = 0.0;
    double margin_ns = 0.0;
    double margin_fraction = 0.0;  // margin / budget
    bool closed = false;           // margin exceeds sigma_k combined uncertainties
};

inline LocalityMargin locality_margin(const SpaceTimeConfig& cfg) {
    cfg.validate();
    LocalityMargin out;
    out.budget_ns = light_time_budget_ns(cfg.separation_distance_m);
    out.margin_ns = out.budget_ns - cfg.protocol_duration_ns;
    out.margin_fraction = out.margin_ns / out.budget_ns;
    const double combined_sigma_ns = std::hypot(cfg.distance_sigma_s, cfg.duration_sigma_s) * 1e9;
    out.closed = out.margin_ns > cfg.sigma_k * combined_sigma_ns;
    return out;
}

}  // namespace bellcert
