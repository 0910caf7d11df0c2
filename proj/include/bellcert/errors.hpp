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

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bellcert {

/// A matrix passed to a Hermitian-only routine was not Hermitian.
struct NonHermitianInput : std::invalid_argument {
    explicit NonHermitianInput(const std::string& what) : std::invalid_argument(what) {}
};

/// An S-value (or grid size) outside the range a bound is defined for.
struct OutOfRange : std::domain_error {
    explicit OutOfRange(const std::string& what) : std::domain_error(what) {}
};

/// Invalid argument to a statistical or physical-model function.
struct DomainError : std::domain_error {
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// An iteration failed to converge; signals numerical pathology, not bad input.
struct NoConvergence : std::runtime_error {
    explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

/// A trial sink rejected data mid-run. Carries partial progress.
struct SinkFailure : std::runtime_error {
    SinkFailure(const std::string& what, std::uint64_t blocks_delivered, std::uint64_t trials_delivered,
                std::uint64_t wins_so_far)
        : std::runtime_error(what),
          blocks_delivered(blocks_delivered),
          trials_delivered(trials_delivered),
          wins_so_far(wins_so_far) {}

    std::uint64_t blocks_delivered;
    std::uint64_t trials_delivered;
    std::uint64_t wins_so_far;
};

/// Malformed text input. `line` is 1-based, 0 when not line-addressable.
struct ParseError : std::runtime_error {
    ParseError(const std::string& what, std::uint64_t line) : std::runtime_error(what), line(line) {}

    std::uint64_t line;
};

/// Readout confusion matrix with nonpositive readout fidelity; not invertible.
struct SingularConfusion : std::invalid_argument {
    explicit SingularConfusion(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace bellcert
