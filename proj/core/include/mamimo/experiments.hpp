#pragma once

#include <string>
#include <vector>

#include "mamimo/optimizer.hpp"

namespace mamimo {

enum class SweepKind { none, power, antennas };

/// One sweep cell outcome; the CSV row format mirrors these fields.
struct ResultRow {
    ArrayMode mode = ArrayMode::general;
    double sweep_value = 0.0;        // SNR in dB or antenna count
    std::size_t replicate = 0;
    double final_rate = 0.0;         // bits per channel use
    double rate_stderr = 0.0;
    double wall_time_seconds = 0.0;  // 0 unless record_timings is enabled
    std::size_t iterations_used = 0;

    friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

struct ExperimentSpec {
    SweepKind sweep = SweepKind::none;
    std::vector<ArrayMode> modes = {ArrayMode::general, ArrayMode::linear,
                                    ArrayMode::planar, ArrayMode::upa};
    std::vector<double> power_db = {5.0, 10.0, 15.0, 20.0};
    std::vector<std::size_t> antenna_counts = {1, 2, 4, 6};
    std::size_t replications = 10;
    std::size_t sweep_iterations = 500;   // desk-scale budget for sweep cells
    OptimizerConfig base;
    std::string output_path;
    // Wall-clock timings break run-to-run byte identity of the CSV, so
    // they are opt-in; the column stays present either way.
    bool record_timings = false;

    void validate() const;   // throws std::invalid_argument
};

const char* mode_name(ArrayMode mode);
ArrayMode mode_from_string(const std::string& name);   // throws on unknown names

/// Parse the flat key = value config grammar ('#' comments, blank lines
/// skipped).  Unknown keys, duplicates, malformed values, and invariant
/// violations throw std::invalid_argument naming the line and field.
/// `source_name` only labels error messages.
ExperimentSpec parse_config_text(const std::string& text, const std::string& source_name = "<config>");

/// Read and parse a config file; an empty file yields all defaults.
ExperimentSpec load_config(const std::string& path);

/// Deterministic per-cell seed shared by all modes at one
/// (sweep_index, replicate) cell: the common-random-numbers discipline.
std::uint64_t cell_seed(std::uint64_t base_seed, std::size_t sweep_index, std::size_t replicate);

std::vector<ResultRow> run_power_sweep(const ExperimentSpec& spec);
std::vector<ResultRow> run_antenna_sweep(const ExperimentSpec& spec);

/// CSV with the fixed header
/// mode,sweep_value,replicate,final_rate,rate_stderr,wall_time_seconds,iterations_used
/// and one row per ResultRow; floats carry 17 significant digits so
/// parse(emit(rows)) == rows exactly.  Rows are emitted in their stored
/// order (the sweep runners sort by mode, sweep value, replicate).
std::string csv_to_string(const std::vector<ResultRow>& rows);
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);
std::vector<ResultRow> parse_result_csv(const std::string& path);

/// Per-iteration trajectory CSV for single runs:
/// iteration,sampled_rate,alpha,rho,gamma,objective_branch,violation
void emit_trajectory_csv(const std::vector<TrajectoryPoint>& trajectory, const std::string& path);

} // namespace mamimo
