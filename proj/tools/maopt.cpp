// maopt: movable-antenna MIMO rate optimization runs and sweeps.
//
// Single run (default):   maopt --mode planar --iterations 1000
// Figure-style sweeps:    maopt --sweep power --output rates.csv
// All knobs can also come from a flat key = value config file.

#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <string>

#include "mamimo/experiments.hpp"

namespace {

int run_single(mamimo::ExperimentSpec spec, const std::string& output) {
    const mamimo::OptimizationResult res = mamimo::run_optimizer(spec.base);

    std::size_t feasibility_steps = 0, violations = 0;
    for (const auto& tp : res.trajectory) {
        if (!tp.objective_branch) ++feasibility_steps;
        if (tp.violation) ++violations;
    }

    std::printf("mode                 %s\n", mamimo::mode_name(spec.base.mode));
    std::printf("antennas             %zu tx / %zu rx\n", spec.base.num_tx, spec.base.num_rx);
    std::printf("power / sigma2       %.6g / %.6g\n", spec.base.power, spec.base.sigma2);
    std::printf("iterations           %zu\n", res.iterations_used);
    std::printf("feasibility steps    %zu\n", feasibility_steps);
    std::printf("blend violations     %zu\n", violations);
    std::printf("final rate           %.6f bits/use (stderr %.6f, %zu samples)\n",
                res.final_rate, res.final_rate_stderr, spec.base.eval_samples);

    std::printf("tx positions        ");
    for (const auto& p : res.t_layout.positions) std::printf(" (%.4f, %.4f)", p.x, p.y);
    std::printf("\nrx positions        ");
    for (const auto& p : res.r_layout.positions) std::printf(" (%.4f, %.4f)", p.x, p.y);
    std::printf("\n");

    if (!output.empty()) {
        mamimo::emit_trajectory_csv(res.trajectory, output);
        std::printf("trajectory written to %s\n", output.c_str());
    }
    return 0;
}

int run_sweep(mamimo::ExperimentSpec spec, const std::string& output) {
    if (!output.empty()) spec.output_path = output;
    if (spec.output_path.empty()) spec.output_path = "results.csv";

    const auto rows = spec.sweep == mamimo::SweepKind::antennas
                          ? mamimo::run_antenna_sweep(spec)
                          : mamimo::run_power_sweep(spec);
    std::printf("%zu rows written to %s\n", rows.size(), spec.output_path.c_str());

    // Per-(mode, value) means as a quick console readout.
    for (std::size_t i = 0; i < rows.size();) {
        std::size_t j = i;
        double sum = 0.0;
        while (j < rows.size() && rows[j].mode == rows[i].mode &&
               rows[j].sweep_value == rows[i].sweep_value) {
            sum += rows[j].final_rate;
            ++j;
        }
        std::printf("  %-8s %-10s %8.4g   mean rate %.4f\n", mamimo::mode_name(rows[i].mode),
                    spec.sweep == mamimo::SweepKind::antennas ? "antennas" : "snr_db",
                    rows[i].sweep_value, sum / static_cast<double>(j - i));
        i = j;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Movable-antenna MIMO achievable-rate optimization (CSSCA)"};

    std::string config_path, mode, sweep, output;
    long long iterations = -1, samples = -1, replications = -1;
    long long seed = -1;

    app.add_option("--config", config_path, "flat key = value config file");
    app.add_option("--mode", mode, "array mode: general|linear|planar|upa");
    app.add_option("--sweep", sweep, "run a sweep instead of a single run: power|antennas");
    app.add_option("--iterations", iterations, "CSSCA iteration budget");
    app.add_option("--samples", samples, "Monte-Carlo samples for the final rate estimate");
    app.add_option("--seed", seed, "base RNG seed");
    app.add_option("--output", output,
                   "output path: sweep CSV, or per-iteration trajectory CSV for single runs");
    app.add_option("--replications", replications, "independent replicates per sweep cell");

    CLI11_PARSE(app, argc, argv);

    try {
        mamimo::ExperimentSpec spec =
            config_path.empty() ? mamimo::ExperimentSpec{} : mamimo::load_config(config_path);

        if (!mode.empty()) spec.base.mode = mamimo::mode_from_string(mode);
        if (!sweep.empty()) {
            if (sweep == "power")
                spec.sweep = mamimo::SweepKind::power;
            else if (sweep == "antennas")
                spec.sweep = mamimo::SweepKind::antennas;
            else
                throw std::invalid_argument("--sweep expects power or antennas, got '" + sweep + "'");
        }
        if (iterations >= 0) {
            if (iterations == 0) throw std::invalid_argument("--iterations must be >= 1");
            spec.base.iterations = static_cast<std::size_t>(iterations);
            spec.sweep_iterations = static_cast<std::size_t>(iterations);
        }
        if (samples >= 0) {
            if (samples == 0) throw std::invalid_argument("--samples must be >= 1");
            spec.base.eval_samples = static_cast<std::size_t>(samples);
        }
        if (seed >= 0) spec.base.seed = static_cast<std::uint64_t>(seed);
        if (replications >= 0) {
            if (replications == 0) throw std::invalid_argument("--replications must be >= 1");
            spec.replications = static_cast<std::size_t>(replications);
        }
        spec.validate();

        return spec.sweep == mamimo::SweepKind::none ? run_single(spec, output)
                                                     : run_sweep(spec, output);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "maopt: %s\n", e.what());
        return 1;
    }
}
