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

#include <cinttypes>
#include <cstdio>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>

#include "bellcert/errors.hpp"
#include "bellcert/simulator.hpp"

namespace bellcert {

inline constexpr const char* kTrialLogFormat = "bellcert-trial-log/1";

namespace detail {

inline std::string full_precision(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

/// Streams a trial log: `#`-prefixed key=value header lines carrying the
/// resolved configuration, then one `index,x,y,a,b` record per line.
class TrialLogWriter {
  public:
    TrialLogWriter(std::ostream& out, const ExperimentConfig& config) : out_(out) {
        const NoiseModel& nm = config.noise;
        write_kv("format", kTrialLogFormat);
        write_kv("n_trials", std::to_string(config.n_trials));
        write_kv("block_size", std::to_string(config.block_size));
        write_kv("seed", std::to_string(config.seed));
        write_kv("repetition_rate_hz", detail::full_precision(config.repetition_rate_hz));
        write_kv("bell_fidelity", detail::full_precision(nm.bell_fidelity));
        write_kv("alpha_a_rad", detail::full_precision(nm.alpha_a));
        write_kv("theta_offset_rad", detail::full_precision(nm.theta_offset));
        write_kv("readout_eg_a", detail::full_precision(nm.readout_eg_a));
        write_kv("readout_ge_a", detail::full_precision(nm.readout_ge_a));
        write_kv("readout_eg_b", detail::full_precision(nm.readout_eg_b));
        write_kv("readout_ge_b", detail::full_precision(nm.readout_ge_b));
        write_kv("drift_amplitude_rad", detail::full_precision(nm.drift_amplitude));
        write_kv("drift_period", std::to_string(nm.drift_period));
    }

    void append(std::span<const TrialRecord> records) {
        char line[64];
        for (const TrialRecord& r : records) {
            const int len = std::snprintf(line, sizeof(line), "%" PRIu64 ",%u,%u,%u,%u\n", r.index,
                                          static_cast<unsigned>(r.x), static_cast<unsigned>(r.y),
                                          static_cast<unsigned>(r.a), static_cast<unsigned>(r.b));
            out_.write(line, len);
        }
    }

  private:
    void write_kv(const std::string& key, const std::string& value) { out_ << "# " << key << "=" << value << "\n"; }

    std::ostream& out_;
};

struct TrialLogHeader {
    std::map<std::string, std::string> values;

    bool has(const std::string& key) const { return values.count(key) > 0; }

    const std::string& get(const std::string& key) const {
        auto it = values.find(key);
        if (it == values.end()) throw ParseError("trial log header missing key '" + key + "'", 0);
        return it->second;
    }
};

/// Parses a trial log, invoking `visit` on every record in order. Returns the
/// header. Malformed or out-of-order records raise ParseError with the
/// offending 1-based line number.
inline TrialLogHeader read_trial_log(std::istream& in, const std::function<void(const TrialRecord&)>& visit) {
    TrialLogHeader header;
    std::string line;
    std::uint64_t line_no = 0;
    bool saw_record = false;
    bool have_prev_index = false;
    std::uint64_t prev_index = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (saw_record) throw ParseError("line " + std::to_string(line_no) + ": header line after records", line_no);
            std::size_t start = 1;
            while (start < line.size() && line[start] == ' ') ++start;
            const std::size_t eq = line.find('=', start);
            if (eq == std::string::npos) {
                throw ParseError("line " + std::to_string(line_no) + ": header line without '='", line_no);
            }
            header.values[line.substr(start, eq - start)] = line.substr(eq + 1);
            continue;
        }

        std::uint64_t index = 0;
        unsigned x = 0, y = 0, a = 0, b = 0;
        char trailing = 0;
        const int matched =
            std::sscanf(line.c_str(), "%" SCNu64 ",%u,%u,%u,%u%c", &index, &x, &y, &a, &b, &trailing);
        if (matched != 5) {
            throw ParseError("line " + std::to_string(line_no) + ": malformed trial record '" + line + "'", line_no);
        }
        if (x > 1 || y > 1 || a > 1 || b > 1) {
            throw ParseError("line " + std::to_string(line_no) + ": inputs and outcomes must be bits", line_no);
        }
        if (have_prev_index && index <= prev_index) {
            throw ParseError("line " + std::to_string(line_no) + ": trial index not strictly increasing", line_no);
        }
        prev_index = index;
        have_prev_index = true;
        saw_record = true;
        visit(TrialRecord{index, static_cast<std::uint8_t>(x), static_cast<std::uint8_t>(y),
                          static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)});
    }
    return header;
}

struct TalliedLog {
    TrialLogHeader header;
    TrialTally tally;
};

/// Reads a log and counts game wins; the input to certification.
inline TalliedLog tally_trial_log(std::istream& in) {
    std::uint64_t n = 0;
    std::uint64_t wins = 0;
    TrialLogHeader header = read_trial_log(in, [&](const TrialRecord& r) {
        ++n;
        wins += win_condition(r.x, r.y, r.a, r.b) ? 1 : 0;
    });
    if (n == 0) throw ParseError("trial log contains no records", 0);
    return TalliedLog{std::move(header), TrialTally::checked(n, wins)};
}

}  // namespace bellcert
