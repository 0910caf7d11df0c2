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
#include <cstdint>
#include <span>
#include <vector>

#include "bellcert/beta_function.hpp"
#include "bellcert/bounds.hpp"
#include "bellcert/errors.hpp"

namespace bellcert {

/// A round of the Bell game is won iff x AND y == a XOR b. Winning with
/// probability p corresponds to a CHSH value S = 8p - 4.
inline bool win_condition(int x, int y, int a, int b) { return (x & y) == ((a ^ b) & 1); }

/// Trial count and win count of a finished run.
struct TrialTally {
    std::uint64_t n = 0;
    std::uint64_t c = 0;

    static TrialTally checked(std::uint64_t n, std::uint64_t c) {
        if (n < 1) throw DomainError("TrialTally: n must be at least 1");
        if (c > n) throw DomainError("TrialTally: win count exceeds trial count");
        return TrialTally{n, c};
    }

    double win_rate() const { return static_cast<double>(c) / static_cast<double>(n); }
    double s_estimate() const { return 8.0 * win_rate() - 4.0; }
};

/// One-sided lower confidence bound on the average winning probability, and
/// the CHSH value it maps to (s_lower = 8 p_lower - 4).
struct ConfidenceBound {
    double conf_level = 0.0;  // 1 - residual; the bound holds with this probability
    double p_lower = 0.0;
    double s_lower = -4.0;
};

/// Lower confidence bound on the average win probability of n possibly
/// non-identically-distributed trials, valid without the IID assumption.
///
/// With residual r = 1 - conf_level and r* = I_{(c-1)/n}(c, n-c+1):
///   c = 0              ->  0
///   c >= 1, r <= r*    ->  I^{-1}_r(c, n-c+1)
///   c >= 1, r >  r*    ->  (c - (1-r)/(1-r*)) / n
/// The two branches meet continuously at (c-1)/n. The c = 1 case is the
/// continuous extension of the second branch (r* = 0 forces it).
inline double p_avg_lower_bound(const TrialTally& tally, double conf_level) {
    if (!(conf_level > 0.0 && conf_level < 1.0)) {
        throw DomainError("p_avg_lower_bound: confidence level must lie strictly in (0, 1)");
    }
    if (tally.n < 1 || tally.c > tally.n) {
        throw DomainError("p_avg_lower_bound: invalid tally");
    }
    if (tally.c == 0) return 0.0;

    const double n = static_cast<double>(tally.n);
    const double c = static_cast<double>(tally.c);
    const double residual = 1.0 - conf_level;
    const double a = c;
    const double b = n - c + 1.0;
    const double residual_star = reg_inc_beta((c - 1.0) / n, a, b);

    double p;
    if (residual <= residual_star) {
        p = reg_inc_beta_inv(residual, a, b);
    } else {
        p = (c - (1.0 - residual) / (1.0 - residual_star)) / n;
    }
    return std::min(std::max(p, 0.0), c / n);
}

inline ConfidenceBound s_avg_lower_bound(const TrialTally& tally, double conf_level) {
    const double p = p_avg_lower_bound(tally, conf_level);
    return ConfidenceBound{conf_level, p, 8.0 * p - 4.0};
}

/// Certified fidelities from a tally. Degraded results are flagged, never
/// thrown: below S = 2 both certificates are trivial; between 2 and the state
/// threshold only the state certificate is (the measurement bound stays
/// informative down to S = 2).
struct CertificationResult {
    TrialTally tally;
    double s_measured = 0.0;
    ConfidenceBound bound;
    double f_state = 0.5;
    double f_measurement = 0.0;
    bool state_trivial = true;
    bool measurement_trivial = true;
};

inline CertificationResult certify(const TrialTally& tally, double conf_level) {
    CertificationResult result;
    result.tally = tally;
    result.s_measured = tally.s_estimate();
    result.bound = s_avg_lower_bound(tally, conf_level);

    const double s_low = result.bound.s_lower;
    if (s_low < 2.0) {
        result.f_state = 0.5;
        result.f_measurement = trivial_measurement_fidelity();
        result.state_trivial = true;
        result.measurement_trivial = true;
        return result;
    }

    // A tally above the quantum win rate (possible at small n) certifies the
    // ceiling; the bounds are evaluated at the Tsirelson point.
    const SValue s = SValue::checked(std::min(s_low, tsirelson_s_value()));
    result.f_measurement = measurement_fidelity_bound(s);
    result.measurement_trivial = false;
    if (s_low < state_selftest_threshold()) {
        result.f_state = 0.5;
        result.state_trivial = true;
    } else {
        result.f_state = singlet_fidelity_bound(s);
        result.state_trivial = false;
    }
    return result;
}

/// One cell of the finite-size behavior table: certified fidelities assuming
/// a run of n trials whose win count matches the target S exactly.
struct FiniteSizeRow {
    double s = 0.0;
    std::uint64_t n = 0;
    std::uint64_t c = 0;
    double p_lower = 0.0;
    double s_lower = 0.0;
    double f_state = 0.0;
    double f_measurement = 0.0;
    bool state_trivial = false;
    bool measurement_trivial = false;
};

inline std::vector<FiniteSizeRow> finite_size_table(std::span<const double> s_values,
                                                    std::span<const std::uint64_t> n_values, double conf_level) {
    if (s_values.empty() || n_values.empty()) {
        throw DomainError("finite_size_table: S and n grids must be nonempty");
    }
    std::vector<FiniteSizeRow> rows;
    rows.reserve(s_values.size() * n_values.size());
    for (const double s : s_values) {
        for (const std::uint64_t n : n_values) {
            const auto c = static_cast<std::uint64_t>(std::llround(static_cast<double>(n) * (4.0 + s) / 8.0));
            const auto result = certify(TrialTally::checked(n, std::min(c, n)), conf_level);
            rows.push_back(FiniteSizeRow{s, n, std::min(c, n), result.bound.p_lower, result.bound.s_lower,
                                         result.f_state, result.f_measurement, result.state_trivial,
                                         result.measurement_trivial});
        }
    }
    return rows;
}

}  // namespace bellcert
