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
#include <string>
#include <vector>

#include "bellcert/bounds.hpp"
#include "bellcert/finite_stats.hpp"
#include "bellcert/quantum.hpp"
#include "bellcert/rng.hpp"

namespace bellcert {

namespace detail {

inline double log_binomial_pmf(std::uint64_t n, std::uint64_t k, double p) {
    const double nd = static_cast<double>(n);
    const double kd = static_cast<double>(k);
    return std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0) + kd * std::log(p) +
           (nd - kd) * std::log1p(-p);
}

}  // namespace detail

/// Exact Binomial(n, p) upper tail P(X >= c) by direct term summation.
/// Independent of the continued-fraction machinery it cross-checks. The sum
/// always starts at c and walks away from the distribution's bulk, so the
/// starting term never underflows while the result is of order one.
inline double binomial_tail_upper(std::uint64_t n, std::uint64_t c, double p) {
    if (c == 0) return 1.0;
    if (c > n) return 0.0;
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    const double q = 1.0 - p;

    if (static_cast<double>(c) > static_cast<double>(n) * p) {
        // c above the mean: sum the upper tail upward, terms decay.
        double term = std::exp(detail::log_binomial_pmf(n, c, p));
        double sum = 0.0;
        for (std::uint64_t k = c; k <= n; ++k) {
            sum += term;
            term *= (static_cast<double>(n - k) / static_cast<double>(k + 1)) * (p / q);
            if (k > c + 10 && term < sum * 1e-18) break;
        }
        return std::min(sum, 1.0);
    }

    // c at or below the mean: P(X >= c) = 1 - P(X <= c - 1), summing the
    // lower tail downward from c - 1 so the terms decay as well.
    double term = std::exp(detail::log_binomial_pmf(n, c - 1, p));
    double sum = 0.0;
    for (std::uint64_t k = c - 1;; --k) {
        sum += term;
        if (k == 0) break;
        term *= (static_cast<double>(k) / static_cast<double>(n - k + 1)) * (q / p);
        if (k + 10 < c && term < sum * 1e-18) break;
    }
    return std::max(0.0, 1.0 - std::min(sum, 1.0));
}

/// Bisection for the p with P(Bin(n, p) >= c) = alpha: the exact-tail oracle
/// for the beta-function branch of the confidence bound.
inline double binomial_tail_lower_bound_p(std::uint64_t n, std::uint64_t c, double alpha) {
    double lo = 0.0;
    double hi = 1.0;
    for (int iter = 0; iter < 200 && hi - lo > 1e-14; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (binomial_tail_upper(n, c, mid) < alpha) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

struct CheckResult {
    std::string name;
    bool passed = false;
    double worst = 0.0;      // worst observed deviation (signed where meaningful)
    double tolerance = 0.0;  // what it was held against
    std::string detail;
};

namespace detail {

inline double verify_uniform(std::uint64_t seed, std::uint32_t stream, std::uint64_t index) {
    const auto w = random_block(seed, stream, index);
    return to_unit_interval(w[0], w[1]);
}

inline CheckResult projector_check() {
    double worst = 0.0;
    for (int k = 0; k <= 100; ++k) {
        const double alpha = kPi * k / 100.0;
        const QubitMeasurement m{alpha, Node::A};
        for (int setting = 0; setting < 2; ++setting) {
            const auto [p_plus, p_minus] = measurement_projectors(m, setting);
            worst = std::max(worst, (p_plus + p_minus).max_abs_diff(Mat2::identity()));
            worst = std::max(worst, (p_plus * p_minus).max_abs_diff(Mat2::zero()));
            worst = std::max(worst, (p_plus * p_plus).max_abs_diff(p_plus));
        }
    }
    return CheckResult{"projector pairs complete, orthogonal, idempotent", worst <= 1e-12, worst, 1e-12,
                       "101-point alpha grid"};
}

inline CheckResult chsh_square_identity_check() {
    const Mat4 yy = kron(pauli(PauliAxis::Y), pauli(PauliAxis::Y));
    double worst = 0.0;
    for (int i = 0; i < 40; ++i) {
        for (int j = 0; j < 40; ++j) {
            const double alpha = kPi * i / 39.0;
            const double beta = kPi * j / 39.0;
            const Mat4 m = chsh_operator(alpha, beta);
            const Mat4 expected = 4.0 * (Mat4::identity() + (std::sin(alpha) * std::sin(beta)) * yy);
            worst = std::max(worst, (m * m).max_abs_diff(expected));
        }
    }
    return CheckResult{"CHSH operator square identity", worst <= 1e-12, worst, 1e-12, "40x40 angle grid"};
}

inline CheckResult chsh_eigenvalue_check() {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        for (int j = 0; j < 50; ++j) {
            const double alpha = kPi * i / 49.0;
            const double beta = kPi * j / 49.0;
            const auto eig = hermitian_eigenvalues(chsh_operator(alpha, beta));
            const double expected = 2.0 * std::sqrt(1.0 + std::sin(alpha) * std::sin(beta));
            worst = std::max(worst, std::abs(eig[3] - expected));
        }
    }
    return CheckResult{"CHSH ceiling 2 sqrt(1 + sin a sin b)", worst <= 1e-10, worst, 1e-10, "50x50 angle grid"};
}

inline CheckResult gap_matrix_roots_check() {
    double worst = 0.0;
    for (int k = 0; k <= 100; ++k) {
        const double alpha = kPi * k / 100.0;
        const Mat4 n = injection_gap_matrix(alpha);
        const Mat4 from_overlap = 2.0 * (injection_overlap_operator(alpha) - Mat4::identity());
        worst = std::max(worst, n.max_abs_diff(from_overlap));

        const auto eig = hermitian_eigenvalues(n);
        const double inner = std::sqrt(2.0 * (1.0 - std::sin(alpha)));
        const double outer = std::sqrt(2.0 * (1.0 + std::sin(alpha)));
        const double expected[4] = {-outer, -inner, inner, outer};
        for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(eig[i] - expected[i]));
    }
    return CheckResult{"gap matrix characteristic roots +-sqrt(2(1+-sin a))", worst <= 1e-11, worst, 1e-11,
                       "101-point alpha grid"};
}

inline CheckResult dual_certificate_grid_check(int grid) {
    double worst_eig = 0.0;     // most negative eigenvalue seen
    double worst_tight = 0.0;   // |dual/4 - F(alpha)|
    for (int k = 0; k < grid; ++k) {
        const double alpha = kPi * k / static_cast<double>(grid - 1);
        const DualCertificate cert = dual_certificate_check(alpha);
        worst_eig = std::min(worst_eig, cert.min_eigenvalue);
        worst_tight = std::max(worst_tight, std::abs(cert.dual_value / 4.0 - qubit_apparatus_fidelity(alpha)));
    }
    const bool pass = worst_eig >= -1e-10 && worst_tight <= 1e-12;
    return CheckResult{"dual certificate feasible and tight", pass, std::min(worst_eig, -worst_tight), -1e-10,
                       "min eig " + std::to_string(worst_eig) + ", tightness " + std::to_string(worst_tight)};
}

inline CheckResult injection_check(int grid) {
    double worst = 0.0;
    for (int k = 0; k < grid; ++k) {
        const double alpha = kPi * k / static_cast<double>(grid - 1);
        const InjectionMap inj = optimal_injection(alpha);
        const Mat4 choi = inj.choi();

        worst = std::max(worst, std::abs(injection_fidelity_from_choi(choi, alpha) - qubit_apparatus_fidelity(alpha)));
        const auto q = choi_overlaps(choi, alpha);
        const auto [qmin, qmax] = std::minmax_element(q.begin(), q.end());
        worst = std::max(worst, *qmax - *qmin);
        worst = std::max(worst, partial_trace_first(choi).max_abs_diff(Mat2::identity()));
        worst = std::max(worst, std::max(0.0, -hermitian_eigenvalues(choi)[0]));
    }
    return CheckResult{"optimal injection attains F(alpha) with equal overlaps", worst <= 1e-9, worst, 1e-9,
                       std::to_string(grid) + "-point alpha grid"};
}

inline CheckResult ceiling_sweep_check(int alpha_grid, int beta_grid) {
    double worst = 0.0;
    for (int i = 0; i < alpha_grid; ++i) {
        const double alpha = kPi * i / static_cast<double>(alpha_grid);
        double best = -1e9;
        for (int j = 0; j < beta_grid; ++j) {
            const double beta = kPi * j / static_cast<double>(beta_grid);
            best = std::max(best, hermitian_eigenvalues(chsh_operator(alpha, beta))[3]);
        }
        worst = std::max(worst, std::abs(best - max_s_for_alpha(alpha).value));
    }
    return CheckResult{"apparatus ceiling matches eigenvalue sweep", worst <= 1e-6, worst, 1e-6,
                       std::to_string(alpha_grid) + " alphas x " + std::to_string(beta_grid) + " betas"};
}

inline CheckResult bound_equivalence_check(int n_samples, std::size_t grid_size) {
    double worst = 0.0;
    for (int k = 0; k < n_samples; ++k) {
        const double u = verify_uniform(0xB0A7, 1, static_cast<std::uint64_t>(k));
        const SValue s{2.0 + u * (tsirelson_s_value() - 2.0)};
        worst = std::max(worst,
                         std::abs(brute_force_min_measurement_fidelity(s, grid_size) - measurement_fidelity_bound(s)));
    }
    return CheckResult{"grid minimization reproduces the measurement bound", worst <= 2e-6, worst, 2e-6,
                       std::to_string(n_samples) + " random S values"};
}

inline CheckResult beta_oracle_check(int n_samples) {
    double worst = 0.0;
    for (int k = 0; k < n_samples; ++k) {
        const auto n = static_cast<std::uint64_t>(10 + verify_uniform(0xBE7A, 1, k) * 4990.0);
        const auto c =
            2 + static_cast<std::uint64_t>(verify_uniform(0xBE7A, 2, k) * static_cast<double>(n - 1));
        const double conf = 0.9 + verify_uniform(0xBE7A, 3, k) * 0.099;
        const double from_beta = p_avg_lower_bound(TrialTally::checked(n, std::min(c, n)), conf);
        const double from_tail = binomial_tail_lower_bound_p(n, std::min(c, n), 1.0 - conf);
        worst = std::max(worst, std::abs(from_beta - from_tail));
    }
    return CheckResult{"confidence bound matches exact binomial tail", worst <= 1e-9, worst, 1e-9,
                       std::to_string(n_samples) + " random (n, c, conf) tuples"};
}

inline CheckResult convexity_check() {
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
        const double u1 = verify_uniform(0xC0, 1, k);
        const double u2 = verify_uniform(0xC0, 2, k);
        const SValue s1{2.0 + u1 * (tsirelson_s_value() - 2.0)};
        const SValue s2{2.0 + u2 * (tsirelson_s_value() - 2.0)};
        const SValue mid{0.5 * (s1.value + s2.value)};
        worst = std::max(worst, std::abs(singlet_fidelity_bound(mid) -
                                         0.5 * (singlet_fidelity_bound(s1) + singlet_fidelity_bound(s2))));
        worst = std::max(worst, std::abs(measurement_fidelity_bound(mid) -
                                         0.5 * (measurement_fidelity_bound(s1) + measurement_fidelity_bound(s2))));
    }
    return CheckResult{"fidelity bounds affine (midpoint identity)", worst <= 1e-12, worst, 1e-12,
                       "200 random S pairs"};
}

inline CheckResult no_signaling_check() {
    double worst = 0.0;
    const DensityMatrix rho = werner_state(0.9);
    const QubitMeasurement ma{kPi / 2.0, Node::A};
    const QubitMeasurement mb{kPi / 2.0, Node::B};
    for (int k = 0; k < 50; ++k) {
        const double theta = 2.0 * kPi * k / 50.0;
        const JointProbabilities t = joint_outcome_probs(rho, ma, mb, theta);
        for (int x = 0; x < 2; ++x)
            for (int a = 0; a < 2; ++a) worst = std::max(worst, std::abs(t.marginal_a(x, 0, a) - t.marginal_a(x, 1, a)));
        for (int y = 0; y < 2; ++y)
            for (int b = 0; b < 2; ++b) worst = std::max(worst, std::abs(t.marginal_b(0, y, b) - t.marginal_b(1, y, b)));
    }
    return CheckResult{"simulated device is no-signaling", worst <= 1e-12, worst, 1e-12, "50-point theta grid"};
}

inline CheckResult alpha_range_inversion_check() {
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        const double u = verify_uniform(0xA1FA, 1, k);
        const SValue s{2.0 + u * (tsirelson_s_value() - 2.0 - 1e-12)};
        const AlphaRange range = alpha_range_for_s(s);

        // Invert max_s_for_alpha on [0, pi/2] by bisection; the range's lower
        // endpoint must match, and the range must be symmetric about pi/2.
        double lo = 0.0, hi = kPi / 2.0;
        for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
            const double mid = 0.5 * (lo + hi);
            (max_s_for_alpha(mid).value < s.value ? lo : hi) = mid;
        }
        worst = std::max(worst, std::abs(range.lo - 0.5 * (lo + hi)));
        worst = std::max(worst, std::abs(range.lo + range.hi - kPi));
        worst = std::max(worst, std::abs(max_s_for_alpha(range.lo).value - s.value));
    }
    return CheckResult{"alpha range inverts the apparatus ceiling", worst <= 1e-9, worst, 1e-9,
                       "50 random S values, bisection oracle"};
}

}  // namespace detail

/// Grid sizes for the oracle suite; defaults match the full verification run.
struct VerifyOptions {
    int dual_grid = 1000;
    int injection_grid = 500;
    int ceiling_alpha_grid = 21;
    int ceiling_beta_grid = 2000;
    int bound_samples = 50;
    std::size_t bound_grid = 100000;
    int beta_samples = 60;
};

inline std::vector<CheckResult> run_verification_suite(const VerifyOptions& opt = {}) {
    std::vector<CheckResult> results;
    results.push_back(detail::projector_check());
    results.push_back(detail::chsh_square_identity_check());
    results.push_back(detail::chsh_eigenvalue_check());
    results.push_back(detail::gap_matrix_roots_check());
    results.push_back(detail::dual_certificate_grid_check(opt.dual_grid));
    results.push_back(detail::injection_check(opt.injection_grid));
    results.push_back(detail::ceiling_sweep_check(opt.ceiling_alpha_grid, opt.ceiling_beta_grid));
    results.push_back(detail::bound_equivalence_check(opt.bound_samples, opt.bound_grid));
    results.push_back(detail::beta_oracle_check(opt.beta_samples));
    results.push_back(detail::convexity_check());
    results.push_back(detail::no_signaling_check());
    results.push_back(detail::alpha_range_inversion_check());
    return results;
}

}  // namespace bellcert
