#include "mips/harness/sweep.hpp"

#include "mips/theory.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "mips/analysis.hpp"
#include "mips/errors.hpp"
#include "mips/harness/io.hpp"

namespace mips::harness {

namespace {

struct ResolvedTask {
    std::size_t task_index = 0;
    std::size_t cell_index = 0;
    int replicate = 0;
    std::vector<std::pair<std::string, double>> axis_values;
    SwarmParams params;
    AnalysisConfig analysis;
    std::uint64_t hash = 0;
    bool resolve_failed = false;
    std::string resolve_error;
};

std::vector<std::vector<double>> cartesian_product(const std::vector<SweepAxis>& axes) {
    std::vector<std::vector<double>> cells = {{}};
    for (const SweepAxis& axis : axes) {
        std::vector<std::vector<double>> next;
        next.reserve(cells.size() * axis.values.size());
        for (const auto& prefix : cells) {
            for (const double v : axis.values) {
                auto combo = prefix;
                combo.push_back(v);
                next.push_back(std::move(combo));
            }
        }
        cells = std::move(next);
    }
    return cells;
}

nlohmann::json resolved_json(const ResolvedTask& task, std::int64_t snapshot_every) {
    nlohmann::json j;
    j["params"] = params_to_json(task.params);
    j["analysis"] = analysis_to_json(task.analysis);
    j["snapshot_every"] = snapshot_every;
    j["replicate"] = task.replicate;
    return j;
}

std::filesystem::path run_dir(const SweepOptions& options, const ResolvedTask& task) {
    std::ostringstream name;
    name << "cell" << task.cell_index << "_rep" << task.replicate;
    return options.out_dir / "runs" / name.str();
}

nlohmann::json observables_to_json(const RunObservables& obs) {
    return nlohmann::json{{"mean_speed", obs.mean_speed},
                          {"agg_fraction", obs.agg_fraction},
                          {"density_samples", obs.density_samples},
                          {"failed", obs.failed},
                          {"error", obs.error}};
}

RunObservables observables_from_json(const nlohmann::json& j) {
    RunObservables obs;
    obs.mean_speed = j.at("mean_speed").get<double>();
    obs.agg_fraction = j.at("agg_fraction").get<double>();
    obs.density_samples = j.at("density_samples").get<std::vector<double>>();
    obs.failed = j.at("failed").get<bool>();
    obs.error = j.at("error").get<std::string>();
    return obs;
}

bool try_load_completed(const SweepOptions& options, const ResolvedTask& task, RunObservables& obs) {
    const auto dir = run_dir(options, task);
    std::ifstream manifest(dir / "manifest.json");
    std::ifstream observables(dir / "observables.json");
    if (!manifest || !observables) return false;
    try {
        const auto mj = nlohmann::json::parse(manifest);
        if (mj.value("spec_hash", std::string{}) != hash_hex(task.hash)) return false;
        obs = observables_from_json(nlohmann::json::parse(observables));
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

RunObservables execute_task(const ResolvedTask& task, std::int64_t snapshot_every,
                            const std::filesystem::path& artifact_dir) {
    RunObservables obs;
    try {
        RunOptions run_options;
        run_options.snapshot_every = snapshot_every;
        run_options.metrics_every = task.analysis.metrics_every;
        run_options.contact_tolerance = task.analysis.resolved_contact_tolerance(task.params);
        run_options.cluster_cutoff = task.analysis.cluster_cutoff;
        const RunRecord record = run_simulation(task.params, run_options);
        if (!artifact_dir.empty()) {
            write_metrics_csv(artifact_dir / "metrics.csv", record.metrics);
            if (snapshot_every > 0) {
                write_snapshots_csv(artifact_dir / "snapshots.csv", record.snapshots, task.params.dt);
            }
        }

        const double window_start = task.analysis.resolved_window_start(task.params);
        double speed_acc = 0.0, agg_acc = 0.0;
        std::size_t count = 0;
        const MetricsSeries& m = record.metrics;
        for (std::size_t k = 0; k < m.times.size(); ++k) {
            if (m.times[k] >= window_start) {
                speed_acc += m.mean_speed[k];
                agg_acc += m.aggregation_fraction[k];
                ++count;
            }
        }
        if (count == 0 && !m.times.empty()) {
            for (std::size_t k = 0; k < m.times.size(); ++k) {
                speed_acc += m.mean_speed[k];
                agg_acc += m.aggregation_fraction[k];
            }
            count = m.times.size();
        }
        if (count > 0) {
            obs.mean_speed = speed_acc / static_cast<double>(count);
            obs.agg_fraction = agg_acc / static_cast<double>(count);
        }

        if (snapshot_every > 0) {
            const double cutoff = task.analysis.resolved_cutoff(task.params);
            for (const SwarmState& s : record.snapshots) {
                if (s.time <= 0.0 || s.time < window_start) continue;
                const DensityField field =
                    analysis::coarse_grain(s, task.params, task.analysis.grid_size, cutoff);
                obs.density_samples.insert(obs.density_samples.end(), field.values.begin(),
                                           field.values.end());
            }
        }
        return obs;
    } catch (const std::exception& e) {
        obs.failed = true;
        obs.error = e.what();
        return obs;
    }
}

void write_task_outputs(const SweepOptions& options, const ResolvedTask& task,
                        std::int64_t snapshot_every, const RunObservables& obs) {
    const auto dir = run_dir(options, task);
    std::filesystem::create_directories(dir);
    nlohmann::json manifest = resolved_json(task, snapshot_every);
    manifest["spec_hash"] = hash_hex(task.hash);
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
    write_text_file(dir / "observables.json", observables_to_json(obs).dump(2) + "\n");
}

std::string format_axis_header(const ExperimentSpec& spec) {
    std::string out;
    for (const auto& axis : spec.axes) out += axis.field + ",";
    return out;
}

}  // namespace

SweepOutcome run_sweep(const ExperimentSpec& spec, const SweepOptions& options) {
    const auto cells = cartesian_product(spec.axes);
    const std::size_t n_tasks = cells.size() * static_cast<std::size_t>(spec.replicates);

    std::vector<ResolvedTask> tasks;
    tasks.reserve(n_tasks);
    for (std::size_t c = 0; c < cells.size(); ++c) {
        for (int rep = 0; rep < spec.replicates; ++rep) {
            ResolvedTask task;
            task.task_index = tasks.size();
            task.cell_index = c;
            task.replicate = rep;
            RunConfig run_cfg = spec.base;
            task.analysis = spec.analysis;
            for (std::size_t a = 0; a < spec.axes.size(); ++a) {
                apply_sweep_value(run_cfg, task.analysis, spec.axes[a].field, cells[c][a]);
                task.axis_values.emplace_back(spec.axes[a].field, cells[c][a]);
            }
            if (options.has_seed_override) run_cfg.params.seed = options.seed_override;
            run_cfg.params.seed += static_cast<std::uint64_t>(rep);
            try {
                task.params = resolve_run_config(run_cfg);
            } catch (const std::exception& e) {
                // An invalid cell is recorded as a failed run, not a fatal error.
                task.resolve_failed = true;
                task.resolve_error = e.what();
                task.params = run_cfg.params;
            }
            task.hash = spec_hash(resolved_json(task, spec.snapshot_every));
            tasks.push_back(std::move(task));
        }
    }

    const bool write_outputs = !options.out_dir.empty();
    std::vector<RunObservables> results(tasks.size());
    std::atomic<std::size_t> next{0};
    const int workers = std::max(1, options.workers);

    auto worker_loop = [&]() {
        while (true) {
            const std::size_t t = next.fetch_add(1);
            if (t >= tasks.size()) break;
            const ResolvedTask& task = tasks[t];
            RunObservables obs;
            if (task.resolve_failed) {
                obs.failed = true;
                obs.error = task.resolve_error;
                if (write_outputs) write_task_outputs(options, task, spec.snapshot_every, obs);
                results[t] = std::move(obs);
                continue;
            }
            if (options.resume && write_outputs && try_load_completed(options, task, obs)) {
                results[t] = std::move(obs);
                continue;
            }
            std::filesystem::path artifact_dir;
            if (write_outputs) {
                artifact_dir = run_dir(options, task);
                std::filesystem::create_directories(artifact_dir);
            }
            obs = execute_task(task, spec.snapshot_every, artifact_dir);
            if (write_outputs) write_task_outputs(options, task, spec.snapshot_every, obs);
            results[t] = std::move(obs);
        }
    };

    if (workers == 1) {
        worker_loop();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker_loop);
        for (auto& th : pool) th.join();
    }

    SweepOutcome outcome;
    outcome.runs.reserve(tasks.size());
    for (const ResolvedTask& task : tasks) {
        SweepRun run;
        run.cell_index = task.cell_index;
        run.axis_values = task.axis_values;
        run.replicate = task.replicate;
        run.seed = task.params.seed;
        run.hash = task.hash;
        run.obs = results[task.task_index];
        outcome.runs.push_back(std::move(run));
    }

    // Per-cell aggregation over successful replicates, in cell order.
    for (std::size_t c = 0; c < cells.size(); ++c) {
        CellAggregate agg;
        agg.cell_index = c;
        std::vector<double> speeds, aggs, pooled;
        for (const SweepRun& run : outcome.runs) {
            if (run.cell_index != c) continue;
            agg.axis_values = run.axis_values;
            if (run.obs.failed) continue;
            speeds.push_back(run.obs.mean_speed);
            aggs.push_back(run.obs.agg_fraction);
            pooled.insert(pooled.end(), run.obs.density_samples.begin(), run.obs.density_samples.end());
        }
        agg.n_ok = static_cast<int>(speeds.size());
        const auto mean_se = [](const std::vector<double>& xs, double& mean, double& se) {
            mean = 0.0;
            se = 0.0;
            if (xs.empty()) return;
            for (const double x : xs) mean += x;
            mean /= static_cast<double>(xs.size());
            if (xs.size() < 2) return;
            double var = 0.0;
            for (const double x : xs) var += (x - mean) * (x - mean);
            var /= static_cast<double>(xs.size() - 1);
            se = std::sqrt(var / static_cast<double>(xs.size()));
        };
        mean_se(speeds, agg.mean_speed, agg.se_speed);
        mean_se(aggs, agg.mean_agg, agg.se_agg);

        if (!pooled.empty()) {
            double bw = spec.analysis.bandwidth;
            if (!(bw > 0.0)) bw = analysis::silverman_bandwidth(pooled);
            DensityField pooled_field;
            pooled_field.values = pooled;
            const auto kde = analysis::smooth_density_distribution({&pooled_field, 1}, bw,
                                                                   spec.analysis.eval_points);
            agg.kde_modes = analysis::count_modes(kde, spec.analysis.prominence_fraction);
            if (write_outputs) {
                std::ostringstream name;
                name << "kde_cell" << c << ".csv";
                write_kde_csv(options.out_dir / name.str(), kde);
            }
        }
        outcome.cells.push_back(std::move(agg));
    }

    // Tidy CSV tables.
    {
        std::ostringstream runs_csv;
        runs_csv << "cell,replicate,seed,spec_hash," << format_axis_header(spec)
                 << "mean_speed,agg_fraction,status\n";
        for (const SweepRun& run : outcome.runs) {
            runs_csv << run.cell_index << ',' << run.replicate << ',' << run.seed << ','
                     << hash_hex(run.hash) << ',';
            for (const auto& [field, value] : run.axis_values) runs_csv << format_full(value) << ',';
            runs_csv << format_full(run.obs.mean_speed) << ',' << format_full(run.obs.agg_fraction)
                     << ',' << (run.obs.failed ? "failed:" + run.obs.error : "ok") << '\n';
        }
        outcome.runs_csv = runs_csv.str();

        std::ostringstream agg_csv;
        agg_csv << "cell," << format_axis_header(spec)
                << "n,mean_speed,se_speed,mean_agg,se_agg,kde_modes\n";
        for (const CellAggregate& cell : outcome.cells) {
            agg_csv << cell.cell_index << ',';
            for (const auto& [field, value] : cell.axis_values) agg_csv << format_full(value) << ',';
            agg_csv << cell.n_ok << ',' << format_full(cell.mean_speed) << ','
                    << format_full(cell.se_speed) << ',' << format_full(cell.mean_agg) << ','
                    << format_full(cell.se_agg) << ',' << cell.kde_modes << '\n';
        }
        outcome.aggregate_csv = agg_csv.str();
    }

    // A pure density sweep measures the speed law; fit it over cell means.
    if (spec.axes.size() == 1 && spec.axes[0].field == "target_mean_density") {
        std::vector<std::pair<double, double>> points;
        for (const CellAggregate& cell : outcome.cells) {
            if (cell.n_ok > 0) points.push_back({cell.axis_values[0].second, cell.mean_speed});
        }
        if (points.size() >= 2) {
            theory::TheoryInputs in;
            in.speed = spec.base.params.speed;
            in.diff_trans = spec.base.params.diff_trans;
            in.diff_rot = spec.base.params.diff_rot;
            in.radius = spec.base.params.radius;
            try {
                outcome.speed_fit = analysis::fit_speed_density(points, in);
            } catch (const std::exception&) {
                // No slowdown signal; leave the fit absent.
            }
        }
    }

    if (write_outputs) {
        write_text_file(options.out_dir / "runs.csv", outcome.runs_csv);
        write_text_file(options.out_dir / "aggregate.csv", outcome.aggregate_csv);
        if (outcome.speed_fit) write_fit_csv(options.out_dir / "fit.csv", *outcome.speed_fit);
        nlohmann::json manifest;
        manifest["name"] = spec.name;
        manifest["replicates"] = spec.replicates;
        manifest["snapshot_every"] = spec.snapshot_every;
        manifest["base"] = params_to_json(spec.base.params);
        if (spec.base.target_mean_density) {
            manifest["base"]["target_mean_density"] = *spec.base.target_mean_density;
        }
        manifest["analysis"] = analysis_to_json(spec.analysis);
        write_text_file(options.out_dir / "manifest.json", manifest.dump(2) + "\n");
    }
    return outcome;
}

}  // namespace mips::harness
