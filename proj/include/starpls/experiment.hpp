#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "starpls/config.hpp"
#include "starpls/optimizer.hpp"

namespace starpls {

// JSON object with flat SystemConfig keys; *_dBm / *_dB variants are
// converted to linear at this boundary and nowhere else. "preset" selects
// named scale presets ("desk_scale", "paper_scale") before explicit keys
// apply. p_tmax (or p_tmax_dbm) is mandatory.
SystemConfig config_from_json_text(const std::string& text,
                                   const std::string& origin = "<inline>");
SystemConfig load_config(const std::string& path);

struct SweepSpec {
    std::string axis;  // one of M, N_t, P_tmax_dBm, lambda_bits, P1
    std::vector<double> values;
    std::vector<Scheme> schemes;
    std::vector<std::uint64_t> seeds;
};

SweepSpec sweep_spec_from_json_text(const std::string& text,
                                    const std::string& origin = "<inline>");
SweepSpec load_sweep_spec(const std::string& path);

// Returns a copy of cfg with the axis value applied (seed untouched).
SystemConfig apply_axis(const SystemConfig& cfg, const std::string& axis,
                        double value);

struct ResultRecord {
    std::string scheme;
    std::string axis;
    double value = 0.0;
    std::uint64_t seed = 0;
    double objective = 0.0;
    double r_b_sec = 0.0;  // clamped asymptotic security rate
    double r_c = 0.0;
    double r_b = 0.0;
    int outer_iterations = 0;
    bool converged = false;
    bool ok = false;
    std::string status;
    double wall_time_ms = 0.0;  // never written into deterministic outputs
    std::vector<double> trajectory;
};

// Stream identities shared by single runs and sweep points, so a `run` at
// (config, seed) reproduces the matching sweep record.
RngStream channel_stream(std::uint64_t seed);
RngStream scheme_stream(std::uint64_t seed, Scheme s);

// One full optimization run per (scheme, value, seed), channels freshly
// drawn per (value, seed) and shared across schemes. Failures of individual
// points are recorded in-place, not thrown.
std::vector<ResultRecord> run_sweep(const SystemConfig& base,
                                    const SweepSpec& spec);

struct SummaryRow {
    std::string scheme;
    double value = 0.0;
    int n_ok = 0;
    double objective_mean = 0.0;
    double objective_std = 0.0;  // population std
    double r_b_sec_mean = 0.0;
    double r_c_mean = 0.0;
};

std::vector<SummaryRow> summarize(const std::vector<ResultRecord>& records);

// Human-readable mean +/- std table, one line per (scheme, value).
std::string emit_summary(const std::vector<ResultRecord>& records);

// File emission. All CSVs carry a `# config_hash=...` comment, LF endings
// and 17-significant-digit floats. records/summary/trajectory files are
// byte-deterministic for a given (config, spec); wall-clock timings go to
// their own file outside the determinism contract.
void write_sweep_outputs(const std::string& out_dir, const SystemConfig& base,
                         const SweepSpec& spec,
                         const std::vector<ResultRecord>& records);

std::string format_csv_double(double v);

}  // namespace starpls
