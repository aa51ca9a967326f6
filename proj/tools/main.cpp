#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mips/analysis.hpp"
#include "mips/collisions.hpp"
#include "mips/errors.hpp"
#include "mips/harness/config.hpp"
#include "mips/harness/io.hpp"
#include "mips/harness/run.hpp"
#include "mips/harness/sweep.hpp"

namespace {

namespace fs = std::filesystem;
using namespace mips;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

int cmd_simulate(const std::string& config_path, const fs::path& out_dir,
                 std::optional<std::uint64_t> seed, std::int64_t snapshot_every) {
    {
        std::ifstream probe(config_path);
        if (probe) {
            nlohmann::json j;
            probe >> j;
            if (j.is_object() && j.contains("base")) {
                throw ConfigError(config_path +
                                  " is an experiment spec (has 'base'); run it with the sweep "
                                  "subcommand");
            }
        }
    }
    SwarmParams params = harness::load_run_config(config_path);
    if (seed) params.seed = *seed;

    harness::RunOptions options;
    options.snapshot_every = snapshot_every;
    const harness::RunRecord record = run_simulation(params, options);

    fs::create_directories(out_dir);
    nlohmann::json manifest;
    manifest["params"] = harness::params_to_json(params);
    manifest["snapshot_every"] = snapshot_every;
    manifest["spec_hash"] = harness::hash_hex(record.spec_hash);
    harness::write_text_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
    harness::write_metrics_csv(out_dir / "metrics.csv", record.metrics);
    harness::write_snapshots_csv(out_dir / "snapshots.csv", record.snapshots, params.dt);

    std::cout << "run complete: " << record.snapshots.size() << " snapshots, "
              << record.metrics.times.size() << " metric rows -> " << out_dir.string() << "\n";
    return kExitOk;
}

int cmd_sweep(const std::string& spec_path, const fs::path& out_dir, int workers, bool resume,
              std::optional<std::uint64_t> seed) {
    const harness::ExperimentSpec spec = harness::load_experiment_spec(spec_path);
    harness::SweepOptions options;
    options.workers = workers;
    options.resume = resume;
    options.out_dir = out_dir;
    if (seed) {
        options.seed_override = *seed;
        options.has_seed_override = true;
    }
    const harness::SweepOutcome outcome = run_sweep(spec, options);

    int failed = 0;
    for (const auto& run : outcome.runs) {
        if (run.obs.failed) ++failed;
    }
    std::cout << "sweep '" << spec.name << "': " << outcome.runs.size() << " runs ("
              << failed << " failed), " << outcome.cells.size() << " cells -> " << out_dir.string()
              << "\n";
    return failed == static_cast<int>(outcome.runs.size()) && !outcome.runs.empty() ? kExitRuntime
                                                                                    : kExitOk;
}

int cmd_theory(double v0, double dt_coeff, double dr_coeff, double radius, double tau_m,
               std::optional<double> mean_density) {
    theory::TheoryInputs in;
    in.speed = v0;
    in.diff_trans = dt_coeff;
    in.diff_rot = dr_coeff;
    in.radius = radius;
    in.resolve_time = tau_m;
    const harness::TheoryReport report = harness::make_theory_report(in, mean_density);
    std::cout << harness::theory_report_json(report);
    return kExitOk;
}

int cmd_analyze(const fs::path& snapshot_dir, const std::string& analysis_config_path,
                const fs::path& out_dir) {
    const harness::AnalysisConfig analysis = harness::load_analysis_config(analysis_config_path);

    std::ifstream manifest_in(snapshot_dir / "manifest.json");
    if (!manifest_in) {
        throw ConfigError("no manifest.json in " + snapshot_dir.string());
    }
    const auto manifest = nlohmann::json::parse(manifest_in);
    const SwarmParams params =
        harness::resolve_run_config(harness::parse_run_config(manifest.at("params")));

    const auto snapshots = harness::read_snapshots_csv(snapshot_dir / "snapshots.csv");
    fs::create_directories(out_dir);

    const double cutoff = analysis.resolved_cutoff(params);
    const double contact_tol = analysis.resolved_contact_tolerance(params);
    const double window_start = analysis.resolved_window_start(params);

    std::vector<DensityField> fields;
    for (const auto& s : snapshots) {
        if (s.time > 0.0 && s.time >= window_start) {
            fields.push_back(analysis::coarse_grain(s, params, analysis.grid_size, cutoff));
        }
    }
    if (fields.empty() && !snapshots.empty()) {
        fields.push_back(
            analysis::coarse_grain(snapshots.back(), params, analysis.grid_size, cutoff));
    }
    harness::write_density_field_csv(out_dir / "density_field.csv", fields.back());

    double bw = analysis.bandwidth;
    std::vector<double> pooled;
    for (const auto& f : fields) pooled.insert(pooled.end(), f.values.begin(), f.values.end());
    if (!(bw > 0.0)) bw = analysis::silverman_bandwidth(pooled);
    const auto kde = analysis::smooth_density_distribution(fields, bw, analysis.eval_points);
    harness::write_kde_csv(out_dir / "kde.csv", kde);
    const int modes = analysis::count_modes(kde, analysis.prominence_fraction);

    MetricsSeries metrics = analysis::mean_square_displacement(snapshots, params);
    // The one-step projected speed is not recomputable from spaced
    // snapshots; the column is filled with NaN to keep the schema.
    metrics.mean_speed.assign(metrics.times.size(), std::nan(""));
    metrics.aggregation_fraction.clear();
    for (const auto& s : snapshots) {
        const ContactGraph graph = build_contact_graph(s, params, contact_tol);
        metrics.aggregation_fraction.push_back(
            analysis::aggregation_fraction(graph, analysis.cluster_cutoff));
    }
    harness::write_metrics_csv(out_dir / "metrics.csv", metrics);

    nlohmann::json summary;
    summary["snapshots"] = snapshots.size();
    summary["pooled_samples"] = pooled.size();
    summary["bandwidth"] = bw;
    summary["kde_modes"] = modes;
    summary["final_aggregation_fraction"] = metrics.aggregation_fraction.back();
    harness::write_text_file(out_dir / "analysis.json", summary.dump(2) + "\n");
    std::cout << summary.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Self-propelled disk swarm simulator and phase-separation analysis toolkit"};
    app.require_subcommand(1);

    std::string config_path, spec_path, analysis_config_path;
    std::string out_dir = "out";
    std::string snapshot_dir;
    std::optional<std::uint64_t> seed;
    std::int64_t snapshot_every = 0;
    int workers = 1;
    bool resume = false;

    auto* simulate = app.add_subcommand("simulate", "Run one simulation from a parameter config");
    simulate->add_option("config", config_path, "JSON parameter file")->required();
    simulate->add_option("--seed", seed, "Override the config seed");
    simulate->add_option("--out", out_dir, "Output directory");
    simulate->add_option("--snapshot-every", snapshot_every, "Snapshot cadence in steps (0: ends only)");

    auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep from an experiment spec");
    sweep->add_option("spec", spec_path, "JSON experiment spec")->required();
    sweep->add_option("--out", out_dir, "Output directory");
    sweep->add_option("--workers", workers, "Concurrent runs");
    sweep->add_option("--seed", seed, "Override the base seed");
    sweep->add_flag("--resume", resume, "Skip runs already completed under --out");

    double v0 = 0.0, dt_coeff = 0.0, dr_coeff = 0.0, radius = 1.0, tau_m = 0.0;
    std::optional<double> mean_density;
    auto* theory_cmd = app.add_subcommand("theory", "Print the analytical parameter report");
    theory_cmd->add_option("--v0", v0, "Self-propelled speed")->required();
    theory_cmd->add_option("--diff-trans", dt_coeff, "Translational diffusion coefficient")->required();
    theory_cmd->add_option("--diff-rot", dr_coeff, "Rotational diffusion coefficient")->required();
    theory_cmd->add_option("--radius", radius, "Robot radius")->required();
    theory_cmd->add_option("--tau-m", tau_m, "Collision resolution time")->required();
    theory_cmd->add_option("--mean-density", mean_density, "Classify this mean density against the range");

    auto* analyze = app.add_subcommand("analyze", "Re-analyze persisted snapshots");
    analyze->add_option("snapshot-dir", snapshot_dir, "Directory holding snapshots.csv + manifest.json")
        ->required();
    analyze->add_option("analysis-config", analysis_config_path, "JSON analysis config")->required();
    analyze->add_option("--out", out_dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (simulate->parsed()) {
            return cmd_simulate(config_path, out_dir, seed, snapshot_every);
        }
        if (sweep->parsed()) {
            return cmd_sweep(spec_path, out_dir, workers, resume, seed);
        }
        if (theory_cmd->parsed()) {
            return cmd_theory(v0, dt_coeff, dr_coeff, radius, tau_m, mean_density);
        }
        if (analyze->parsed()) {
            return cmd_analyze(snapshot_dir, analysis_config_path, out_dir);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitConfig;
}
