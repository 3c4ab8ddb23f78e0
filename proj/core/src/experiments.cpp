#include "mamimo/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "mamimo/rng.hpp"

namespace mamimo {

void ExperimentSpec::validate() const {
    if (modes.empty())
        throw std::invalid_argument("ExperimentSpec: modes must be nonempty");
    if (replications == 0)
        throw std::invalid_argument("ExperimentSpec: replications must be >= 1");
    if (sweep_iterations == 0)
        throw std::invalid_argument("ExperimentSpec: sweep_iterations must be >= 1");
    if (sweep == SweepKind::power && power_db.empty())
        throw std::invalid_argument("ExperimentSpec: power_db must be nonempty for a power sweep");
    if (sweep == SweepKind::antennas && antenna_counts.empty())
        throw std::invalid_argument("ExperimentSpec: antenna_counts must be nonempty for an antenna sweep");
    for (std::size_t n : antenna_counts)
        if (n == 0)
            throw std::invalid_argument("ExperimentSpec: antenna_counts entries must be >= 1");
    base.validate();
}

const char* mode_name(ArrayMode mode) {
    switch (mode) {
    case ArrayMode::general: return "general";
    case ArrayMode::linear: return "linear";
    case ArrayMode::planar: return "planar";
    case ArrayMode::upa: return "upa";
    }
    return "?";
}

ArrayMode mode_from_string(const std::string& name) {
    if (name == "general") return ArrayMode::general;
    if (name == "linear") return ArrayMode::linear;
    if (name == "planar") return ArrayMode::planar;
    if (name == "upa") return ArrayMode::upa;
    throw std::invalid_argument("unknown mode '" + name + "' (expected general|linear|planar|upa)");
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

struct RawEntry {
    std::string value;
    int line = 0;
};

/// Flat key = value store with parse-time typed accessors.  Every error
/// message carries the source name, line, and key so misconfigurations
/// are reported at the exact spot.
class ConfigMap {
public:
    ConfigMap(const std::string& text, std::string source) : source_(std::move(source)) {
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const std::string stripped = trim(line);
            if (stripped.empty()) continue;
            const auto eq = stripped.find('=');
            if (eq == std::string::npos)
                fail(lineno, "expected 'key = value'");
            const std::string key = trim(stripped.substr(0, eq));
            const std::string value = trim(stripped.substr(eq + 1));
            if (key.empty()) fail(lineno, "empty key");
            if (value.empty()) fail(lineno, "empty value for key '" + key + "'");
            if (entries_.count(key))
                fail(lineno, "duplicate key '" + key + "' (first set on line " +
                                 std::to_string(entries_[key].line) + ")");
            entries_[key] = {value, lineno};
        }
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::optional<std::string> take_string(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        consumed_.insert(*it);
        entries_.erase(it);
        return consumed_[key].value;
    }

    std::optional<double> take_double(const std::string& key) {
        auto raw = take_string(key);
        if (!raw) return std::nullopt;
        try {
            std::size_t pos = 0;
            const double v = std::stod(*raw, &pos);
            if (pos != raw->size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            fail_key(key, "expected a number, got '" + *raw + "'");
        }
        return std::nullopt;   // unreachable
    }

    std::optional<long long> take_int(const std::string& key) {
        auto raw = take_string(key);
        if (!raw) return std::nullopt;
        try {
            std::size_t pos = 0;
            const long long v = std::stoll(*raw, &pos);
            if (pos != raw->size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            fail_key(key, "expected an integer, got '" + *raw + "'");
        }
        return std::nullopt;   // unreachable
    }

    std::optional<std::size_t> take_size(const std::string& key, long long min_value = 0) {
        auto v = take_int(key);
        if (!v) return std::nullopt;
        if (*v < min_value)
            fail_key(key, "must be >= " + std::to_string(min_value));
        return static_cast<std::size_t>(*v);
    }

    std::optional<bool> take_bool(const std::string& key) {
        auto raw = take_string(key);
        if (!raw) return std::nullopt;
        if (*raw == "true" || *raw == "1" || *raw == "yes") return true;
        if (*raw == "false" || *raw == "0" || *raw == "no") return false;
        fail_key(key, "expected true/false, got '" + *raw + "'");
        return std::nullopt;   // unreachable
    }

    void reject_unknown() const {
        if (entries_.empty()) return;
        const auto& [key, entry] = *entries_.begin();
        fail(entry.line, "unknown key '" + key + "'");
    }

    [[noreturn]] void fail(int line, const std::string& msg) const {
        throw std::invalid_argument(source_ + ":" + std::to_string(line) + ": " + msg);
    }
    [[noreturn]] void fail_key(const std::string& key, const std::string& msg) {
        const int line = consumed_.count(key) ? consumed_[key].line : 0;
        fail(line, "key '" + key + "': " + msg);
    }

private:
    std::string source_;
    std::map<std::string, RawEntry> entries_;
    std::map<std::string, RawEntry> consumed_;
};

} // namespace

ExperimentSpec parse_config_text(const std::string& text, const std::string& source_name) {
    ConfigMap cfg(text, source_name);
    ExperimentSpec spec;
    OptimizerConfig& base = spec.base;

    // --- optimizer scalars -------------------------------------------------
    if (auto v = cfg.take_string("mode")) {
        try {
            base.mode = mode_from_string(*v);
        } catch (const std::invalid_argument& e) {
            cfg.fail_key("mode", e.what());
        }
    }
    if (auto v = cfg.take_size("num_tx", 1)) base.num_tx = *v;
    if (auto v = cfg.take_size("num_rx", 1)) base.num_rx = *v;
    if (auto v = cfg.take_double("min_distance")) {
        if (*v < 0.5)
            cfg.fail_key("min_distance",
                         "must be >= 0.5 wavelengths (half-wavelength antenna-coupling limit)");
        base.min_distance = *v;
    }
    if (auto v = cfg.take_double("region_size")) base.region_size = *v;
    if (auto v = cfg.take_double("sigma2")) base.sigma2 = *v;
    if (auto v = cfg.take_size("iterations", 1)) base.iterations = *v;
    if (auto v = cfg.take_size("eval_samples", 1)) base.eval_samples = *v;
    if (auto v = cfg.take_int("seed")) base.seed = static_cast<std::uint64_t>(*v);
    if (auto v = cfg.take_double("rho_exponent")) base.schedule.rho_exponent = *v;
    if (auto v = cfg.take_double("gamma_exponent")) base.schedule.gamma_exponent = *v;
    if (auto v = cfg.take_double("gamma_scale")) base.schedule.gamma_scale = *v;
    if (auto v = cfg.take_double("tau_objective")) base.tau_objective = *v;
    if (auto v = cfg.take_double("tau_constraint")) base.tau_constraint = *v;
    if (auto v = cfg.take_double("barrier_epsilon")) base.barrier.epsilon = *v;
    if (auto v = cfg.take_size("barrier_max_newton", 1))
        base.barrier.max_newton_steps = static_cast<int>(*v);
    if (auto v = cfg.take_double("barrier_initial_weight")) base.barrier.initial_barrier_weight = *v;
    if (auto v = cfg.take_double("barrier_decrease")) base.barrier.barrier_decrease_factor = *v;
    if (auto v = cfg.take_double("early_stop_residual")) base.early_stop_residual = *v;
    if (auto v = cfg.take_size("residual_window", 1)) base.residual_window = *v;

    // --- scattering ---------------------------------------------------------
    if (auto v = cfg.take_double("rician_k")) base.scattering.rician_k = *v;
    if (auto v = cfg.take_double("los_theta_t")) base.scattering.los_theta_t = *v;
    if (auto v = cfg.take_double("los_phi_t")) base.scattering.los_phi_t = *v;
    if (auto v = cfg.take_double("los_theta_r")) base.scattering.los_theta_r = *v;
    if (auto v = cfg.take_double("los_phi_r")) base.scattering.los_phi_r = *v;
    if (auto v = cfg.take_size("paths_per_cluster", 1)) base.scattering.paths_per_cluster = *v;
    {
        const auto n_clusters = cfg.take_size("num_clusters", 1);
        const auto spread = cfg.take_double("cluster_spread");
        if (spread && *spread < 0.0) cfg.fail_key("cluster_spread", "must be >= 0");
        if (n_clusters || spread)
            base.scattering.clusters =
                default_clusters(n_clusters.value_or(base.scattering.clusters.size()),
                                 spread.value_or(0.1));
    }

    // --- power: either snr_db or power, never both --------------------------
    {
        const auto snr = cfg.take_double("snr_db");
        const auto pow_lin = cfg.take_double("power");
        if (snr && pow_lin)
            cfg.fail_key("power", "set either snr_db or power, not both");
        if (pow_lin) {
            if (*pow_lin < 0.0) cfg.fail_key("power", "must be >= 0");
            base.power = *pow_lin;
        } else if (snr) {
            base.power = base.sigma2 * std::pow(10.0, *snr / 10.0);
        }
    }

    // --- sweep harness -------------------------------------------------------
    if (auto v = cfg.take_string("sweep")) {
        if (*v == "power")
            spec.sweep = SweepKind::power;
        else if (*v == "antennas")
            spec.sweep = SweepKind::antennas;
        else
            cfg.fail_key("sweep", "expected power or antennas, got '" + *v + "'");
    }
    if (auto v = cfg.take_string("modes")) {
        spec.modes.clear();
        for (const auto& item : split(*v, ',')) {
            if (item.empty()) cfg.fail_key("modes", "empty list entry");
            try {
                spec.modes.push_back(mode_from_string(item));
            } catch (const std::invalid_argument& e) {
                cfg.fail_key("modes", e.what());
            }
        }
    }
    if (auto v = cfg.take_string("power_db")) {
        spec.power_db.clear();
        for (const auto& item : split(*v, ',')) {
            try {
                std::size_t pos = 0;
                spec.power_db.push_back(std::stod(item, &pos));
                if (pos != item.size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                cfg.fail_key("power_db", "expected a number list, got '" + item + "'");
            }
        }
    }
    if (auto v = cfg.take_string("antenna_counts")) {
        spec.antenna_counts.clear();
        for (const auto& item : split(*v, ',')) {
            try {
                std::size_t pos = 0;
                const long long n = std::stoll(item, &pos);
                if (pos != item.size() || n < 1) throw std::invalid_argument("");
                spec.antenna_counts.push_back(static_cast<std::size_t>(n));
            } catch (const std::exception&) {
                cfg.fail_key("antenna_counts", "expected positive integers, got '" + item + "'");
            }
        }
    }
    if (auto v = cfg.take_size("replications", 1)) spec.replications = *v;
    if (auto v = cfg.take_size("sweep_iterations", 1)) spec.sweep_iterations = *v;
    if (auto v = cfg.take_string("output")) spec.output_path = *v;
    if (auto v = cfg.take_bool("record_timings")) spec.record_timings = *v;

    cfg.reject_unknown();
    spec.validate();
    return spec;
}

ExperimentSpec load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

std::uint64_t cell_seed(std::uint64_t base_seed, std::size_t sweep_index, std::size_t replicate) {
    return mix_seed(base_seed, 0x5EEDC0DEULL + sweep_index, replicate);
}

namespace {

/// Shared sweep core: runs (mode, value, replicate) cells with common
/// random numbers across modes and returns the rows in canonical order.
std::vector<ResultRow> run_sweep(const ExperimentSpec& spec,
                                 const std::vector<double>& values,
                                 SweepKind kind) {
    spec.validate();
    std::vector<ResultRow> rows;
    rows.reserve(spec.modes.size() * values.size() * spec.replications);

    for (ArrayMode mode : spec.modes) {
        for (std::size_t vi = 0; vi < values.size(); ++vi) {
            for (std::size_t rep = 0; rep < spec.replications; ++rep) {
                OptimizerConfig cfg = spec.base;
                cfg.mode = mode;
                cfg.iterations = spec.sweep_iterations;
                cfg.seed = cell_seed(spec.base.seed, vi, rep);
                if (kind == SweepKind::power) {
                    cfg.power = cfg.sigma2 * std::pow(10.0, values[vi] / 10.0);
                } else {
                    const auto n = static_cast<std::size_t>(values[vi]);
                    cfg.num_tx = n;
                    cfg.num_rx = n;
                }

                const auto started = std::chrono::steady_clock::now();
                const OptimizationResult res = run_optimizer(cfg);
                const auto elapsed = std::chrono::duration<double>(
                                         std::chrono::steady_clock::now() - started)
                                         .count();

                ResultRow row;
                row.mode = mode;
                row.sweep_value = values[vi];
                row.replicate = rep;
                row.final_rate = res.final_rate;
                row.rate_stderr = res.final_rate_stderr;
                row.wall_time_seconds = spec.record_timings ? elapsed : 0.0;
                row.iterations_used = res.iterations_used;
                rows.push_back(row);
            }
        }
    }

    std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        if (a.mode != b.mode) return static_cast<int>(a.mode) < static_cast<int>(b.mode);
        if (a.sweep_value != b.sweep_value) return a.sweep_value < b.sweep_value;
        return a.replicate < b.replicate;
    });
    if (!spec.output_path.empty()) emit_csv(rows, spec.output_path);
    return rows;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::vector<ResultRow> run_power_sweep(const ExperimentSpec& spec) {
    if (spec.sweep == SweepKind::antennas)
        throw std::invalid_argument("run_power_sweep: spec requests an antenna sweep");
    return run_sweep(spec, spec.power_db, SweepKind::power);
}

std::vector<ResultRow> run_antenna_sweep(const ExperimentSpec& spec) {
    if (spec.sweep == SweepKind::power)
        throw std::invalid_argument("run_antenna_sweep: spec requests a power sweep");
    std::vector<double> values;
    values.reserve(spec.antenna_counts.size());
    for (std::size_t n : spec.antenna_counts) values.push_back(static_cast<double>(n));
    return run_sweep(spec, values, SweepKind::antennas);
}

std::string csv_to_string(const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    out << "mode,sweep_value,replicate,final_rate,rate_stderr,wall_time_seconds,iterations_used\n";
    for (const auto& row : rows) {
        out << mode_name(row.mode) << ',' << format_double(row.sweep_value) << ','
            << row.replicate << ',' << format_double(row.final_rate) << ','
            << format_double(row.rate_stderr) << ',' << format_double(row.wall_time_seconds)
            << ',' << row.iterations_used << '\n';
    }
    return out.str();
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("emit_csv: cannot open '" + path + "' for writing");
    out << csv_to_string(rows);
    if (!out)
        throw std::runtime_error("emit_csv: write to '" + path + "' failed");
}

std::vector<ResultRow> parse_result_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("parse_result_csv: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("parse_result_csv: empty file");
    if (trim(line) !=
        "mode,sweep_value,replicate,final_rate,rate_stderr,wall_time_seconds,iterations_used")
        throw std::runtime_error("parse_result_csv: unexpected header '" + line + "'");

    std::vector<ResultRow> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != 7)
            throw std::runtime_error("parse_result_csv: line " + std::to_string(lineno) +
                                     ": expected 7 fields");
        ResultRow row;
        row.mode = mode_from_string(fields[0]);
        row.sweep_value = std::stod(fields[1]);
        row.replicate = static_cast<std::size_t>(std::stoull(fields[2]));
        row.final_rate = std::stod(fields[3]);
        row.rate_stderr = std::stod(fields[4]);
        row.wall_time_seconds = std::stod(fields[5]);
        row.iterations_used = static_cast<std::size_t>(std::stoull(fields[6]));
        rows.push_back(row);
    }
    return rows;
}

void emit_trajectory_csv(const std::vector<TrajectoryPoint>& trajectory, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("emit_trajectory_csv: cannot open '" + path + "' for writing");
    out << "iteration,sampled_rate,alpha,rho,gamma,objective_branch,violation\n";
    for (const auto& tp : trajectory) {
        out << tp.iteration << ',' << format_double(tp.sampled_rate) << ','
            << format_double(tp.alpha) << ',' << format_double(tp.rho) << ','
            << format_double(tp.gamma) << ',' << (tp.objective_branch ? 1 : 0) << ','
            << (tp.violation ? 1 : 0) << '\n';
    }
    if (!out)
        throw std::runtime_error("emit_trajectory_csv: write to '" + path + "' failed");
}

} // namespace mamimo
