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

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "bellcert/bounds.hpp"
#include "bellcert/errors.hpp"
#include "bellcert/finite_stats.hpp"
#include "bellcert/simulator.hpp"
#include "bellcert/sweep.hpp"
#include "bellcert/timing.hpp"
#include "bellcert/tomography.hpp"
#include "bellcert/trial_log.hpp"
#include "bellcert/verify.hpp"
#include "bellcert/version.hpp"

namespace bellcert::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitVerifyFailed = 3;
inline constexpr int kExitTrivialCertificate = 4;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// 6 significant digits for humans, 17 for machines.
inline std::string render(double v, bool machine) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), machine ? "%.17g" : "%.6g", v);
    return buf;
}

struct NoiseFlags {
    double bell_fidelity = 1.0;
    double alpha_deg = 90.0;
    double theta_deg = 45.0;
    double readout_eg_a = 0.0;
    double readout_ge_a = 0.0;
    double readout_eg_b = 0.0;
    double readout_ge_b = 0.0;
    double drift_amplitude_deg = 0.0;
    std::uint64_t drift_period = 1u << 20;

    NoiseModel to_model() const {
        NoiseModel nm;
        nm.bell_fidelity = bell_fidelity;
        nm.alpha_a = deg_to_rad(alpha_deg);
        nm.theta_offset = deg_to_rad(theta_deg);
        nm.readout_eg_a = readout_eg_a;
        nm.readout_ge_a = readout_ge_a;
        nm.readout_eg_b = readout_eg_b;
        nm.readout_ge_b = readout_ge_b;
        nm.drift_amplitude = deg_to_rad(drift_amplitude_deg);
        nm.drift_period = drift_period;
        return nm;
    }
};

inline void add_noise_flags(CLI::App* cmd, NoiseFlags& flags, bool with_theta) {
    cmd->add_option("--bell-fidelity", flags.bell_fidelity, "Fidelity of the shared state to the Bell state");
    cmd->add_option("--alpha-deg", flags.alpha_deg, "Node A basis separation, degrees");
    if (with_theta) cmd->add_option("--theta-deg", flags.theta_deg, "Measurement basis offset angle, degrees");
    cmd->add_option("--readout-eg-a", flags.readout_eg_a, "Node A p(e|g) readout error");
    cmd->add_option("--readout-ge-a", flags.readout_ge_a, "Node A p(g|e) readout error");
    cmd->add_option("--readout-eg-b", flags.readout_eg_b, "Node B p(e|g) readout error");
    cmd->add_option("--readout-ge-b", flags.readout_ge_b, "Node B p(g|e) readout error");
    cmd->add_option("--drift-amplitude-deg", flags.drift_amplitude_deg, "Slow theta drift amplitude, degrees");
    cmd->add_option("--drift-period", flags.drift_period, "Trials per drift cycle");
}

/// key=value manifest written next to every produced file; feeding it back
/// through --config reproduces the run bit for bit.
inline void write_manifest(const std::string& path, const std::string& command,
                           const std::vector<std::pair<std::string, std::string>>& entries) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    out << "# bellcert manifest\n";
    out << "# command=" << command << "\n";
    out << "# version=" << kVersion << "\n";
    for (const auto& [key, value] : entries) out << key << "=" << value << "\n";
}

inline std::string manifest_path_for(const std::string& out_path) { return out_path + ".manifest"; }

/// Replaces `--config FILE` with the file's key=value pairs, inserted right
/// after the subcommand name so explicit command-line flags take precedence
/// (options use take-last semantics).
inline std::vector<std::string> expand_config_args(const std::vector<std::string>& args) {
    std::string config_path;
    std::vector<std::string> stripped;
    stripped.reserve(args.size());
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config_path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        } else {
            stripped.push_back(args[i]);
        }
    }
    if (config_path.empty()) return stripped;
    if (stripped.empty()) throw std::runtime_error("--config requires a subcommand");

    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot read config file: " + config_path);
    std::vector<std::string> from_config;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw std::runtime_error("config line without '=': " + line);
        from_config.push_back("--" + line.substr(0, eq) + "=" + line.substr(eq + 1));
    }

    std::vector<std::string> expanded;
    expanded.reserve(stripped.size() + from_config.size());
    expanded.push_back(stripped.front());  // subcommand
    expanded.insert(expanded.end(), from_config.begin(), from_config.end());
    expanded.insert(expanded.end(), stripped.begin() + 1, stripped.end());
    return expanded;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOptions {
    std::uint64_t n = 1u << 20;
    std::uint64_t block_size = 1u << 16;
    std::uint64_t seed = 1;
    unsigned workers = 0;  // 0 = hardware concurrency
    NoiseFlags noise;
    std::string out_path;
    std::string format = "text";
    double repetition_rate_hz = 50000.0;
};

inline std::vector<std::pair<std::string, std::string>> simulate_manifest_entries(const SimulateOptions& opt) {
    return {
        {"n", std::to_string(opt.n)},
        {"block-size", std::to_string(opt.block_size)},
        {"seed", std::to_string(opt.seed)},
        {"workers", std::to_string(opt.workers)},
        {"bell-fidelity", detail::full_precision(opt.noise.bell_fidelity)},
        {"alpha-deg", detail::full_precision(opt.noise.alpha_deg)},
        {"theta-deg", detail::full_precision(opt.noise.theta_deg)},
        {"readout-eg-a", detail::full_precision(opt.noise.readout_eg_a)},
        {"readout-ge-a", detail::full_precision(opt.noise.readout_ge_a)},
        {"readout-eg-b", detail::full_precision(opt.noise.readout_eg_b)},
        {"readout-ge-b", detail::full_precision(opt.noise.readout_ge_b)},
        {"drift-amplitude-deg", detail::full_precision(opt.noise.drift_amplitude_deg)},
        {"drift-period", std::to_string(opt.noise.drift_period)},
        {"out", opt.out_path},
        {"format", opt.format},
    };
}

inline int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err) {
    ExperimentConfig config;
    config.n_trials = opt.n;
    config.block_size = opt.block_size;
    config.seed = opt.seed;
    config.noise = opt.noise.to_model();
    config.repetition_rate_hz = opt.repetition_rate_hz;
    config.validate();

    // Without --out the log streams to stdout and the summary moves to stderr.
    const bool to_file = !opt.out_path.empty();
    std::ofstream file;
    if (to_file) {
        file.open(opt.out_path, std::ios::binary);
        if (!file) {
            err << "error: cannot open output file '" << opt.out_path << "'\n";
            return kExitUsage;
        }
    }
    std::ostream& log = to_file ? static_cast<std::ostream&>(file) : out;
    std::ostream& summary_out = to_file ? out : err;

    const bool machine = opt.format == "csv";
    TrialLogWriter writer(log, config);
    if (machine) summary_out << "block,trials,wins,s\n";
    const SimulationSummary summary = simulate(
        config,
        [&](const BlockSummary& block, std::span<const TrialRecord> records) {
            writer.append(records);
            if (machine) {
                summary_out << block.index << ',' << block.n << ',' << block.wins << ','
                            << render(block.s_estimate(), true) << "\n";
            } else {
                summary_out << "block " << block.index << ": trials " << block.n << "  wins " << block.wins << "  S "
                            << render(block.s_estimate(), false) << "\n";
            }
        },
        opt.workers == 0 ? std::thread::hardware_concurrency() : opt.workers);
    log.flush();
    if (!log) {
        err << "error: I/O failure while writing the trial log\n";
        return kExitUsage;
    }

    if (machine) {
        summary_out << "total," << summary.tally.n << ',' << summary.tally.c << ','
                    << render(summary.s_measured(), true) << "\n";
    } else {
        summary_out << "total: trials " << summary.tally.n << "  wins " << summary.tally.c << "  S "
                    << render(summary.s_measured(), false) << "\n";
        if (to_file) summary_out << "trial log written to " << opt.out_path << "\n";
    }

    if (to_file) write_manifest(manifest_path_for(opt.out_path), "simulate", simulate_manifest_entries(opt));
    return kExitOk;
}

// ---------------------------------------------------------------------------
// certify

struct CertifyOptions {
    std::string log_path;
    double conf_level = 0.99;
    std::string format = "text";
    std::string out_path;  // optional result file
};

inline void render_certification(const CertificationResult& result, bool machine, std::ostream& out) {
    if (machine) {
        out << "key,value\n";
        out << "trials," << result.tally.n << "\n";
        out << "wins," << result.tally.c << "\n";
        out << "win_rate," << render(result.tally.win_rate(), true) << "\n";
        out << "s_measured," << render(result.s_measured, true) << "\n";
        out << "conf_level," << render(result.bound.conf_level, true) << "\n";
        out << "p_lower," << render(result.bound.p_lower, true) << "\n";
        out << "s_lower," << render(result.bound.s_lower, true) << "\n";
        out << "f_state," << render(result.f_state, true) << "\n";
        out << "f_measurement," << render(result.f_measurement, true) << "\n";
        out << "state_trivial," << (result.state_trivial ? 1 : 0) << "\n";
        out << "measurement_trivial," << (result.measurement_trivial ? 1 : 0) << "\n";
        return;
    }
    out << "trials                  " << result.tally.n << "\n";
    out << "wins                    " << result.tally.c << "\n";
    out << "win rate                " << render(result.tally.win_rate(), false) << "\n";
    out << "S measured              " << render(result.s_measured, false) << "\n";
    out << "confidence level        " << render(result.bound.conf_level, false) << "\n";
    out << "p lower bound           " << render(result.bound.p_lower, false) << "\n";
    out << "S lower bound           " << render(result.bound.s_lower, false) << "\n";
    out << "state fidelity     >=   " << render(result.f_state, false)
        << (result.state_trivial ? "   (trivial)" : "") << "\n";
    out << "measurement fid.   >=   " << render(result.f_measurement, false)
        << (result.measurement_trivial ? "   (trivial)" : "") << "\n";
}

inline int cmd_certify(const CertifyOptions& opt, std::ostream& out, std::ostream& err) {
    std::ifstream in(opt.log_path, std::ios::binary);
    if (!in) {
        err << "error: cannot open trial log '" << opt.log_path << "'\n";
        return kExitUsage;
    }

    TalliedLog log;
    try {
        log = tally_trial_log(in);
    } catch (const ParseError& e) {
        err << "error: " << opt.log_path << ": " << e.what() << "\n";
        return kExitParse;
    }

    const CertificationResult result = certify(log.tally, opt.conf_level);
    const bool machine = opt.format == "csv";
    render_certification(result, machine, out);

    if (!opt.out_path.empty()) {
        std::ofstream file(opt.out_path, std::ios::binary);
        if (!file) {
            err << "error: cannot open output file '" << opt.out_path << "'\n";
            return kExitUsage;
        }
        render_certification(result, machine, file);
        write_manifest(manifest_path_for(opt.out_path), "certify",
                       {{"log", opt.log_path},
                        {"conf", detail::full_precision(opt.conf_level)},
                        {"format", opt.format},
                        {"out", opt.out_path}});
    }
    return result.state_trivial ? kExitTrivialCertificate : kExitOk;
}

// ---------------------------------------------------------------------------
// sweep-angle

struct SweepOptions {
    double theta_start_deg = 0.0;
    double theta_stop_deg = 360.0;
    std::size_t theta_steps = 29;
    std::uint64_t trials_per_point = 36157;
    std::uint64_t seed = 1;
    NoiseFlags noise;
    std::string format = "text";
    std::string out_path;
};

inline void render_sweep(const SweepResult& result, bool machine, std::ostream& out) {
    if (machine) {
        out << "theta_deg,e00,e01,e10,e11,s,abs_s\n";
    } else {
        out << "theta_deg      E00       E01       E10       E11         S     |S|\n";
    }
    for (const SweepPoint& p : result.points) {
        if (machine) {
            out << render(rad_to_deg(p.theta_rad), true) << ',' << render(p.correlators[0][0], true) << ','
                << render(p.correlators[0][1], true) << ',' << render(p.correlators[1][0], true) << ','
                << render(p.correlators[1][1], true) << ',' << render(p.s, true) << ',' << render(p.abs_s(), true)
                << "\n";
        } else {
            char line[160];
            std::snprintf(line, sizeof(line), "%9.3f %9.4f %9.4f %9.4f %9.4f %9.4f %7.4f\n",
                          rad_to_deg(p.theta_rad), p.correlators[0][0], p.correlators[0][1], p.correlators[1][0],
                          p.correlators[1][1], p.s, p.abs_s());
            out << line;
        }
    }
    const auto print_peak = [&](const char* name, const SweepPeak& peak) {
        if (machine) {
            out << name << ',' << render(rad_to_deg(peak.theta_rad), true) << ',' << render(peak.s, true) << ','
                << render(peak.abs_s, true) << "\n";
        } else {
            out << name << ": theta " << render(rad_to_deg(peak.theta_rad), false) << " deg, S " << render(peak.s, false)
                << ", |S| " << render(peak.abs_s, false) << "\n";
        }
    };
    print_peak(machine ? "peak_primary" : "peak 1", result.peak_primary);
    print_peak(machine ? "peak_secondary" : "peak 2", result.peak_secondary);
    if (machine) {
        out << "peak_separation_deg," << render(rad_to_deg(result.separation_rad), true) << "\n";
    } else {
        out << "peak separation: " << render(rad_to_deg(result.separation_rad), false) << " deg\n";
    }
}

inline int cmd_sweep_angle(const SweepOptions& opt, std::ostream& out, std::ostream& err) {
    const auto grid =
        theta_grid(deg_to_rad(opt.theta_start_deg), deg_to_rad(opt.theta_stop_deg), opt.theta_steps);
    const SweepResult result = run_angle_sweep(grid, opt.trials_per_point, opt.noise.to_model(), opt.seed);

    const bool machine = opt.format == "csv";
    render_sweep(result, machine, out);

    if (!opt.out_path.empty()) {
        std::ofstream file(opt.out_path, std::ios::binary);
        if (!file) {
            err << "error: cannot open output file '" << opt.out_path << "'\n";
            return kExitUsage;
        }
        render_sweep(result, machine, file);
        write_manifest(manifest_path_for(opt.out_path), "sweep-angle",
                       {{"theta-start-deg", detail::full_precision(opt.theta_start_deg)},
                        {"theta-stop-deg", detail::full_precision(opt.theta_stop_deg)},
                        {"theta-steps", std::to_string(opt.theta_steps)},
                        {"trials-per-point", std::to_string(opt.trials_per_point)},
                        {"seed", std::to_string(opt.seed)},
                        {"bell-fidelity", detail::full_precision(opt.noise.bell_fidelity)},
                        {"alpha-deg", detail::full_precision(opt.noise.alpha_deg)},
                        {"readout-eg-a", detail::full_precision(opt.noise.readout_eg_a)},
                        {"readout-ge-a", detail::full_precision(opt.noise.readout_ge_a)},
                        {"readout-eg-b", detail::full_precision(opt.noise.readout_eg_b)},
                        {"readout-ge-b", detail::full_precision(opt.noise.readout_ge_b)},
                        {"format", opt.format},
                        {"out", opt.out_path}});
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// bounds

struct BoundsOptions {
    std::vector<double> s_values;
    std::string format = "text";
};

inline int cmd_bounds(const BoundsOptions& opt, std::ostream& out, std::ostream&) {
    const bool machine = opt.format == "csv";
    if (machine) {
        out << "s,f_state,f_measurement\n";
    } else {
        out << "        S    F_state    F_meas\n";
    }
    for (const double s_raw : opt.s_values) {
        const SValue s = SValue::checked(s_raw);
        const double fs = singlet_fidelity_bound(s);
        const double fm = measurement_fidelity_bound(s);
        if (machine) {
            out << render(s.value, true) << ',' << render(fs, true) << ',' << render(fm, true) << "\n";
        } else {
            char line[96];
            std::snprintf(line, sizeof(line), "%9.6f %10.6f %9.6f%s\n", s.value, fs, fm,
                          s.value < state_selftest_threshold() ? "   (S below state threshold)" : "");
            out << line;
        }
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// finite-size-table

struct FiniteSizeOptions {
    std::vector<double> s_values = {2.15, 2.2, 2.236, 2.3, 2.4};
    std::vector<std::uint64_t> n_values = {10000, 100000, 1000000, 10000000, 16777216};
    double conf_level = 0.99;
    std::string format = "text";
    std::string out_path;
};

inline void render_finite_size_table(const std::vector<FiniteSizeRow>& rows, bool machine, std::ostream& out) {
    if (machine) {
        out << "s,n,c,p_lower,s_lower,f_state,f_measurement,state_trivial,measurement_trivial\n";
        for (const FiniteSizeRow& r : rows) {
            out << render(r.s, true) << ',' << r.n << ',' << r.c << ',' << render(r.p_lower, true) << ','
                << render(r.s_lower, true) << ',' << render(r.f_state, true) << ',' << render(r.f_measurement, true)
                << ',' << (r.state_trivial ? 1 : 0) << ',' << (r.measurement_trivial ? 1 : 0) << "\n";
        }
        return;
    }
    out << "        S           n     S_lower    F_state     F_meas\n";
    for (const FiniteSizeRow& r : rows) {
        char line[128];
        std::snprintf(line, sizeof(line), "%9.4f %11llu %11.6f %10.6f%s %10.6f%s\n", r.s,
                      static_cast<unsigned long long>(r.n), r.s_lower, r.f_state, r.state_trivial ? "*" : " ",
                      r.f_measurement, r.measurement_trivial ? "*" : " ");
        out << line;
    }
    out << "(* = trivial certificate at this sample size)\n";
}

inline int cmd_finite_size_table(const FiniteSizeOptions& opt, std::ostream& out, std::ostream& err) {
    const auto rows = finite_size_table(opt.s_values, opt.n_values, opt.conf_level);
    const bool machine = opt.format == "csv";
    render_finite_size_table(rows, machine, out);
    if (!opt.out_path.empty()) {
        std::ofstream file(opt.out_path, std::ios::binary);
        if (!file) {
            err << "error: cannot open output file '" << opt.out_path << "'\n";
            return kExitUsage;
        }
        render_finite_size_table(rows, machine, file);
        std::string s_list, n_list;
        for (const double s : opt.s_values) s_list += (s_list.empty() ? "" : ",") + detail::full_precision(s);
        for (const std::uint64_t n : opt.n_values) n_list += (n_list.empty() ? "" : ",") + std::to_string(n);
        write_manifest(manifest_path_for(opt.out_path), "finite-size-table",
                       {{"s-list", s_list},
                        {"n-list", n_list},
                        {"conf", detail::full_precision(opt.conf_level)},
                        {"format", opt.format},
                        {"out", opt.out_path}});
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// timing

struct TimingOptions {
    double distance_m = 0.0;
    double duration_ns = 0.0;
    double distance_sigma_ns = 0.01;
    double duration_sigma_ns = 0.3;
    double sigma_k = 3.0;
    std::string format = "text";
};

inline int cmd_timing(const TimingOptions& opt, std::ostream& out, std::ostream&) {
    SpaceTimeConfig cfg;
    cfg.separation_distance_m = opt.distance_m;
    cfg.protocol_duration_ns = opt.duration_ns;
    cfg.distance_sigma_s = opt.distance_sigma_ns * 1e-9;
    cfg.duration_sigma_s = opt.duration_sigma_ns * 1e-9;
    cfg.sigma_k = opt.sigma_k;
    const LocalityMargin margin = locality_margin(cfg);

    if (opt.format == "csv") {
        out << "key,value\n";
        out << "budget_ns," << render(margin.budget_ns, true) << "\n";
        out << "margin_ns," << render(margin.margin_ns, true) << "\n";
        out << "margin_fraction," << render(margin.margin_fraction, true) << "\n";
        out << "closed," << (margin.closed ? 1 : 0) << "\n";
    } else {
        out << "light-cone budget       " << render(margin.budget_ns, false) << " ns\n";
        out << "protocol duration       " << render(opt.duration_ns, false) << " ns\n";
        out << "margin                  " << render(margin.margin_ns, false) << " ns\n";
        out << "margin fraction         " << render(100.0 * margin.margin_fraction, false) << " %\n";
        out << "locality loophole       " << (margin.closed ? "closed" : "NOT closed") << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

inline int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream&) {
    const auto results = run_verification_suite(opt);
    bool all_passed = true;
    for (const CheckResult& r : results) {
        all_passed = all_passed && r.passed;
        out << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << " (worst " << render(r.worst, false) << ", tol "
            << render(r.tolerance, false) << "; " << r.detail << ")\n";
    }
    out << (all_passed ? "verification suite passed\n" : "verification suite FAILED\n");
    return all_passed ? kExitOk : kExitVerifyFailed;
}

// ---------------------------------------------------------------------------
// driver

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"bellcert: simulate two-node CHSH Bell tests and certify state and measurement fidelities "
                 "device-independently from the observed statistics"};
    app.require_subcommand(1);

    SimulateOptions sim;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "Run seeded Bell-test trials and write a trial log");
    sim_cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sim_cmd->add_option("--n", sim.n, "Number of trials");
    sim_cmd->add_option("--block-size", sim.block_size, "Trials per recalibration block (must divide --n)");
    sim_cmd->add_option("--seed", sim.seed, "Random seed");
    sim_cmd->add_option("--workers", sim.workers, "Worker threads (0 = hardware)");
    add_noise_flags(sim_cmd, sim.noise, true);
    sim_cmd->add_option("--out", sim.out_path, "Trial log output path (default: stream the log to stdout)");
    sim_cmd->add_option("--format", sim.format, "Summary format")->check(CLI::IsMember({"text", "csv"}));

    CertifyOptions cert;
    CLI::App* cert_cmd = app.add_subcommand("certify", "Certify fidelities from a trial log");
    cert_cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    cert_cmd->add_option("log", cert.log_path, "Trial log path")->required();
    cert_cmd->add_option("--conf", cert.conf_level, "Confidence level");
    cert_cmd->add_option("--format", cert.format, "Output format")->check(CLI::IsMember({"text", "csv"}));
    cert_cmd->add_option("--out", cert.out_path, "Also write the result to this file");

    SweepOptions sweep;
    CLI::App* sweep_cmd = app.add_subcommand("sweep-angle", "Scan the measurement basis offset angle");
    sweep_cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sweep_cmd->add_option("--theta-start-deg", sweep.theta_start_deg, "Grid start");
    sweep_cmd->add_option("--theta-stop-deg", sweep.theta_stop_deg, "Grid stop (exclusive)");
    sweep_cmd->add_option("--theta-steps", sweep.theta_steps, "Grid points");
    sweep_cmd->add_option("--trials-per-point", sweep.trials_per_point, "Trials per Bell test");
    sweep_cmd->add_option("--seed", sweep.seed, "Random seed (point k uses seed + k)");
    add_noise_flags(sweep_cmd, sweep.noise, false);
    sweep_cmd->add_option("--format", sweep.format, "Output format")->check(CLI::IsMember({"text", "csv"}));
    sweep_cmd->add_option("--out", sweep.out_path, "Also write the table to this file");

    BoundsOptions bounds;
    CLI::App* bounds_cmd = app.add_subcommand("bounds", "Evaluate the fidelity bounds at given S-values");
    bounds_cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    bounds_cmd->add_option("--s", bounds.s_values, "S-value(s) in [2, 2 sqrt(2)]")->required()->delimiter(',');
    bounds_cmd->add_option("--format", bounds.format, "Output format")->check(CLI::IsMember({"text", "csv"}));

    FiniteSizeOptions table;
    CLI::App* table_cmd = app.add_subcommand("finite-size-table", "Certified fidelities vs sample size");
    table_cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    table_cmd->add_option("--s-list", table.s_values, "S-values")->delimiter(',');
    table_cmd->add_option("--n-list", table.n_values, "Trial counts")->delimiter(',');
    table_cmd->add_option("--conf", table.conf_level, "Confidence level");
    table_cmd->add_option("--format", table.format, "Output format")->check(CLI::IsMember({"text", "csv"}));
    table_cmd->add_option("--out", table.out_path, "Also write the table to this file");

    TimingOptions timing;
    CLI::App* timing_cmd = app.add_subcommand("timing", "Light-cone budget and locality margin");
    timing_cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    timing_cmd->add_option("--distance-m", timing.distance_m, "Shortest start-to-stop distance, meters")->required();
    timing_cmd->add_option("--duration-ns", timing.duration_ns, "Protocol duration, nanoseconds")->required();
    timing_cmd->add_option("--distance-sigma-ns", timing.distance_sigma_ns, "Budget uncertainty, ns");
    timing_cmd->add_option("--duration-sigma-ns", timing.duration_sigma_ns, "Duration uncertainty, ns");
    timing_cmd->add_option("--sigma-k", timing.sigma_k, "Sigmas of margin required to call it closed");
    timing_cmd->add_option("--format", timing.format, "Output format")->check(CLI::IsMember({"text", "csv"}));

    VerifyOptions verify;
    CLI::App* verify_cmd = app.add_subcommand("verify", "Run the oracle cross-check suite");
    verify_cmd->add_option("--dual-grid", verify.dual_grid, "Alpha grid for the dual certificate check");
    verify_cmd->add_option("--bound-samples", verify.bound_samples, "Random S-values for the bound equivalence check");

    app.footer("Every subcommand accepts --config FILE with flat key=value lines mirroring its flags;\n"
               "the manifests written next to output files are valid config files.");

    std::vector<std::string> expanded;
    try {
        expanded = expand_config_args(args);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    std::vector<const char*> argv;
    argv.reserve(expanded.size() + 1);
    argv.push_back("bellcert");
    for (const std::string& a : expanded) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*sim_cmd) return cmd_simulate(sim, out, err);
        if (*cert_cmd) return cmd_certify(cert, out, err);
        if (*sweep_cmd) return cmd_sweep_angle(sweep, out, err);
        if (*bounds_cmd) return cmd_bounds(bounds, out, err);
        if (*table_cmd) return cmd_finite_size_table(table, out, err);
        if (*timing_cmd) return cmd_timing(timing, out, err);
        if (*verify_cmd) return cmd_verify(verify, out, err);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const SinkFailure& e) {
        err << "error: " << e.what() << " (delivered " << e.blocks_delivered << " blocks, " << e.trials_delivered
            << " trials, " << e.wins_so_far << " wins)\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    err << "error: no command given\n";
    return kExitUsage;
}

}  // namespace bellcert::cli
