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

#include "bellcert/beta_function.hpp"

#include <cmath>

#include "doctest.h"

#include "bellcert/rng.hpp"
#include "bellcert/verify.hpp"

using namespace bellcert;

namespace {

double uniform(std::uint32_t stream, std::uint64_t index) {
    const auto w = random_block(0xBE7A2, stream, index);
    return to_unit_interval(w[0], w[1]);
}

}  // namespace

TEST_CASE("uniform case: I_0.5(1, 1) = 0.5") {
    CHECK(std::abs(reg_inc_beta(0.5, 1.0, 1.0) - 0.5) < 1e-13);
}

TEST_CASE("closed form I_p(1, n) = 1 - (1-p)^n") {
    for (const double p : {0.01, 0.3, 0.5, 0.9}) {
        for (const double n : {1.0, 2.0, 10.0, 200.0}) {
            CHECK(std::abs(reg_inc_beta(p, 1.0, n) - (1.0 - std::pow(1.0 - p, n))) < 1e-12);
        }
    }
}

TEST_CASE("closed form I_p(a, 1) = p^a") {
    for (const double p : {0.2, 0.7, 0.955}) {
        for (const double a : {1.0, 3.0, 100.0}) {
            CHECK(std::abs(reg_inc_beta(p, a, 1.0) - std::pow(p, a)) < 1e-12);
        }
    }
}

TEST_CASE("binomial tail identity at n = 2000, c = 1600, p = 0.78") {
    // P(Bin(2000, 0.78) >= 1600), frozen from the exact tail summation.
    const double frozen = 1.5739482773236e-02;
    const double from_beta = reg_inc_beta(0.78, 1600.0, 401.0);
    const double from_tail = binomial_tail_upper(2000, 1600, 0.78);
    CHECK(std::abs(from_beta - frozen) < 5e-13);
    CHECK(std::abs(from_beta - from_tail) < 1e-11);
}

TEST_CASE("endpoints and domain errors") {
    CHECK(reg_inc_beta(0.0, 3.0, 4.0) == 0.0);
    CHECK(reg_inc_beta(1.0, 3.0, 4.0) == 1.0);
    CHECK_THROWS_AS((void)reg_inc_beta(-0.1, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS((void)reg_inc_beta(1.1, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS((void)reg_inc_beta(0.5, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS((void)reg_inc_beta(0.5, 1.0, -2.0), DomainError);
    CHECK_THROWS_AS((void)reg_inc_beta_inv(0.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS((void)reg_inc_beta_inv(1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("monotonicity in p") {
    for (int k = 0; k < 50; ++k) {
        const double a = 0.5 + uniform(1, k) * 50.0;
        const double b = 0.5 + uniform(2, k) * 50.0;
        const double p1 = 0.05 + uniform(3, k) * 0.6;
        const double p2 = p1 + 0.2;
        CHECK(reg_inc_beta(p1, a, b) < reg_inc_beta(p2, a, b));
    }
}

TEST_CASE("inverse: anchor and round trips") {
    CHECK(std::abs(reg_inc_beta_inv(0.5, 1.0, 1.0) - 0.5) < 1e-12);
    // Round trips through quantiles in the body of the distribution, where
    // the density does not degenerate and p-space resolution is meaningful.
    for (int k = 0; k < 40; ++k) {
        const double a = 0.5 + uniform(4, k) * 200.0;
        const double b = 0.5 + uniform(5, k) * 200.0;
        const double target = 0.02 + uniform(6, k) * 0.96;
        const double p = reg_inc_beta_inv(target, a, b);
        CHECK(std::abs(reg_inc_beta(p, a, b) - target) < 1e-12);
        CHECK(std::abs(reg_inc_beta_inv(reg_inc_beta(p, a, b), a, b) - p) < 1e-10);
    }
}

TEST_CASE("inverse matches the binomial-tail bisection oracle at n = 5000, c = 3900") {
    const std::uint64_t n = 5000;
    const std::uint64_t c = 3900;
    const double from_beta = reg_inc_beta_inv(0.01, static_cast<double>(c), static_cast<double>(n - c + 1));
    const double from_tail = binomial_tail_lower_bound_p(n, c, 0.01);
    CHECK(std::abs(from_beta - from_tail) < 1e-9);
}

TEST_CASE("full-scale evaluation stays sane and monotone") {
    const double a = 13077840.0;
    const double b = 3699377.0;  // n = 2^24
    const double mode = a / (a + b);
    const double at_mode = reg_inc_beta(mode, a, b);
    CHECK(at_mode > 0.4);
    CHECK(at_mode < 0.6);
    const double sigma = std::sqrt(mode * (1.0 - mode) / (a + b));
    CHECK(reg_inc_beta(mode - 2.0 * sigma, a, b) < at_mode);
    CHECK(reg_inc_beta(mode + 2.0 * sigma, a, b) > at_mode);
    CHECK(std::abs(reg_inc_beta(reg_inc_beta_inv(0.01, a, b), a, b) - 0.01) < 1e-11);
}
