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

#include "bellcert/tomography.hpp"

#include <cmath>
#include <sstream>

#include "doctest.h"

#include "bellcert/rng.hpp"

using namespace bellcert;

namespace {

const ConfusionMatrix kNoError{0.0, 0.0};

/// Random valid density matrix via G G^dagger / Tr.
DensityMatrix random_state(std::uint64_t index) {
    Mat4 g;
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            const auto w = random_block(0xD0, 9, index * 16 + k++);
            g(i, j) = Complex(2.0 * to_unit_interval(w[0], w[1]) - 1.0, 2.0 * to_unit_interval(w[2], w[3]) - 1.0);
        }
    }
    Mat4 rho = g * g.adjoint();
    rho = (1.0 / rho.trace().real()) * rho;
    return DensityMatrix{rho, "random"};
}

std::array<std::array<double, 4>, 9> exact_distributions(const DensityMatrix& rho, const ConfusionMatrix& ca,
                                                         const ConfusionMatrix& cb) {
    std::array<std::array<double, 4>, 9> dists{};
    for (int ia = 0; ia < 3; ++ia)
        for (int ib = 0; ib < 3; ++ib)
            dists[3 * ia + ib] =
                tomography_setting_distribution(rho, kTomographyAxes[ia], kTomographyAxes[ib], ca, cb);
    return dists;
}

double trace_distance(const Mat4& a, const Mat4& b) {
    const auto eig = hermitian_eigenvalues(a - b);
    double sum = 0.0;
    for (const double v : eig) sum += std::abs(v);
    return 0.5 * sum;
}

double fidelity_to(const DensityMatrix& rho, const DensityMatrix& target_pure) {
    return real_trace_product(rho.mat, target_pure.mat);
}

}  // namespace

TEST_CASE("confusion matrix: validation, fidelity, inverse") {
    CHECK_THROWS_AS((void)ConfusionMatrix::checked(0.5, 0.0), DomainError);
    CHECK_THROWS_AS((void)ConfusionMatrix::checked(-0.1, 0.0), DomainError);
    const ConfusionMatrix cm = ConfusionMatrix::checked(0.0055, 0.0055);
    CHECK(cm.readout_fidelity() == doctest::Approx(0.989).epsilon(1e-12));

    const std::array<double, 2> dist = {0.8, 0.2};
    const auto observed = cm.apply(dist);
    const auto recovered = cm.unapply(observed);
    CHECK(std::abs(recovered[0] - dist[0]) < 1e-14);
    CHECK(std::abs(recovered[1] - dist[1]) < 1e-14);
}

TEST_CASE("exact reconstruction: no noise round trip within 1e-9 trace distance") {
    for (std::uint64_t i = 0; i < 20; ++i) {
        const DensityMatrix rho = random_state(i);
        const auto dists = exact_distributions(rho, kNoError, kNoError);
        const DensityMatrix rebuilt = reconstruct_from_probabilities(dists, false, kNoError, kNoError);
        CHECK(trace_distance(rebuilt.mat, rho.mat) < 1e-9);
    }
}

TEST_CASE("exact reconstruction: confusion undone by correction within 1e-9") {
    const ConfusionMatrix ca = ConfusionMatrix::checked(0.0055, 0.0055);
    const ConfusionMatrix cb = ConfusionMatrix::checked(0.014, 0.014);
    for (std::uint64_t i = 0; i < 20; ++i) {
        const DensityMatrix rho = random_state(100 + i);
        const auto dists = exact_distributions(rho, ca, cb);
        const DensityMatrix rebuilt = reconstruct_from_probabilities(dists, true, ca, cb);
        CHECK(trace_distance(rebuilt.mat, rho.mat) < 1e-9);
    }
}

TEST_CASE("phi+ in the ZZ setting produces only matching outcomes") {
    const DensityMatrix phi = pure_state(bell_phi_plus(), "phi+");
    const TomographyCounts counts = simulate_tomography(phi, 20000, kNoError, kNoError, 2024);
    const auto& zz = counts.counts[3 * 2 + 2];
    CHECK(zz[1] == 0);  // g e
    CHECK(zz[2] == 0);  // e g
    CHECK(zz[0] + zz[3] == 20000);
}

TEST_CASE("maximally mixed state: every outcome near shots/4") {
    const TomographyCounts counts = simulate_tomography(maximally_mixed_state(), 40000, kNoError, kNoError, 7);
    const double sigma = std::sqrt(40000.0 * 0.25 * 0.75);
    for (const auto& setting : counts.counts) {
        for (const std::uint64_t c : setting) {
            CHECK(std::abs(static_cast<double>(c) - 10000.0) < 4.0 * sigma);
        }
    }
}

TEST_CASE("tomography sampling is deterministic in the seed") {
    const DensityMatrix rho = werner_state(0.8);
    const TomographyCounts a = simulate_tomography(rho, 5000, kNoError, kNoError, 11);
    const TomographyCounts b = simulate_tomography(rho, 5000, kNoError, kNoError, 11);
    const TomographyCounts c = simulate_tomography(rho, 5000, kNoError, kNoError, 12);
    CHECK(a.counts == b.counts);
    CHECK(a.counts != c.counts);
}

TEST_CASE("sampled reconstruction at the calibrated working point") {
    const ConfusionMatrix ca = ConfusionMatrix::checked(0.0055, 0.0055);  // F_r,A = 98.9%
    const ConfusionMatrix cb = ConfusionMatrix::checked(0.014, 0.014);    // F_r,B = 97.2%
    const DensityMatrix rho = werner_state(0.859);
    const DensityMatrix phi = pure_state(bell_phi_plus(), "phi+");

    const TomographyCounts counts = simulate_tomography(rho, 20000, ca, cb, 555);
    const double corrected = fidelity_to(reconstruct_state(counts, true, ca, cb), phi);
    const double uncorrected = fidelity_to(reconstruct_state(counts, false, ca, cb), phi);
    CHECK(std::abs(corrected - 0.859) < 0.01);
    CHECK(std::abs(uncorrected - 0.8354) < 0.01);
    CHECK(corrected > uncorrected);
}

TEST_CASE("readout correction improves fidelity to the true state") {
    const ConfusionMatrix ca = ConfusionMatrix::checked(0.01, 0.004);
    const ConfusionMatrix cb = ConfusionMatrix::checked(0.02, 0.012);
    int improved = 0;
    for (int k = 0; k < 20; ++k) {
        const double f = 0.5 + 0.45 * (k / 19.0);
        const DensityMatrix rho = werner_state(f);
        const TomographyCounts counts = simulate_tomography(rho, 20000, ca, cb, 900 + k);
        const double with = fidelity_to(reconstruct_state(counts, true, ca, cb), rho);
        const double without = fidelity_to(reconstruct_state(counts, false, ca, cb), rho);
        if (with >= without - 0.004) ++improved;  // 1 sigma of statistical slack
    }
    CHECK(improved == 20);
}

TEST_CASE("reconstruction always lands in the physical set") {
    const ConfusionMatrix cb = ConfusionMatrix::checked(0.03, 0.02);
    for (std::uint64_t k = 0; k < 10; ++k) {
        const TomographyCounts counts = simulate_tomography(random_state(300 + k), 200, cb, cb, k);
        const DensityMatrix rebuilt = reconstruct_state(counts, true, cb, cb);
        rebuilt.validate();
    }
}

TEST_CASE("tomographic measurement fidelity bound") {
    CHECK(tomographic_measurement_fidelity(0.0025, 0.014) == doctest::Approx(0.9716678).epsilon(1e-6));
    CHECK(tomographic_measurement_fidelity(0.0025, 0.014) >= 0.972 - 5e-4);
    CHECK(tomographic_measurement_fidelity(0.0, 0.0) == 1.0);
    CHECK(tomographic_measurement_fidelity(0.5, 0.5) == 0.0);  // clamped
    CHECK_THROWS_AS((void)tomographic_measurement_fidelity(-0.1, 0.0), DomainError);
    CHECK_THROWS_AS((void)tomographic_measurement_fidelity(0.0, 1.0), DomainError);
}

TEST_CASE("bound is monotone nonincreasing in each error rate") {
    for (int i = 0; i + 1 < 20; ++i) {
        const double e0 = 0.4 * i / 20.0;
        const double e1 = 0.4 * (i + 1) / 20.0;
        CHECK(tomographic_measurement_fidelity(e1, 0.01) <= tomographic_measurement_fidelity(e0, 0.01) + 1e-15);
        CHECK(tomographic_measurement_fidelity(0.01, e1) <= tomographic_measurement_fidelity(0.01, e0) + 1e-15);
    }
}

TEST_CASE("readout-to-error-rate helpers") {
    CHECK(eps_z_from_readout_fidelity(0.972) == doctest::Approx(0.014).epsilon(1e-12));
    CHECK(combined_eps_z(eps_z_from_readout_fidelity(0.989), eps_z_from_readout_fidelity(0.972)) ==
          doctest::Approx(0.0055).epsilon(1e-12));
    CHECK_THROWS_AS((void)eps_z_from_readout_fidelity(0.0), DomainError);
}

TEST_CASE("counts serialization round trip") {
    const TomographyCounts counts = simulate_tomography(werner_state(0.7), 3000, kNoError, kNoError, 42);
    std::ostringstream out;
    write_tomography_counts(out, counts);
    std::istringstream in(out.str());
    const TomographyCounts parsed = read_tomography_counts(in);
    CHECK(parsed.shots_per_setting == counts.shots_per_setting);
    CHECK(parsed.counts == counts.counts);
}

TEST_CASE("counts parser rejects malformed input") {
    {
        std::istringstream in(std::string("# shots_per_setting=10\nX,X,5,5,0,0\n"));
        CHECK_THROWS_AS((void)read_tomography_counts(in), ParseError);  // incomplete
    }
    {
        std::istringstream in(std::string("# shots_per_setting=10\nQ,X,10,0,0,0\n"));
        CHECK_THROWS_AS((void)read_tomography_counts(in), ParseError);  // bad basis
    }
}
