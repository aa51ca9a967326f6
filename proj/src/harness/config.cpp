#include "mips/harness/config.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "mips/errors.hpp"

namespace mips::harness {

double AnalysisConfig::resolved_cutoff(const SwarmParams& p) const {
    if (cutoff > 0.0) return cutoff;
    const double spacing = std::max(p.domain_width, p.domain_height) / grid_size;
    return 2.0 * spacing;
}

double AnalysisConfig::resolved_contact_tolerance(const SwarmParams& p) const {
    if (contact_tolerance >= 0.0) return contact_tolerance;
    return 0.05 * p.radius;
}

double AnalysisConfig::resolved_window_start(const SwarmParams& p) const {
    if (window_start >= 0.0) return window_start;
    return 0.5 * static_cast<double>(p.n_steps) * p.dt;
}

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, const std::set<std::string>& known, const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) {
            throw ConfigError("unknown key '" + key + "' in " + where);
        }
    }
}

double get_number(const json& j, const std::string& key, double fallback, bool& present) {
    present = j.contains(key);
    if (!present) return fallback;
    if (!j.at(key).is_number()) throw ConfigError("key '" + key + "' must be a number");
    return j.at(key).get<double>();
}

}  // namespace

RunConfig parse_run_config(const json& j) {
    if (!j.is_object()) throw ConfigError("parameter config must be a JSON object");
    static const std::set<std::string> known = {
        "n_robots",     "radius",        "speed",           "diff_trans",
        "diff_rot",     "domain_width",  "domain_height",   "dt",
        "seed",         "force_stiffness", "boundary_mode", "n_steps",
        "target_mean_density",
    };
    reject_unknown_keys(j, known, "parameter config");

    RunConfig cfg;
    bool present = false;
    cfg.params.n_robots = static_cast<std::int64_t>(get_number(j, "n_robots", 0, present));
    cfg.params.radius = get_number(j, "radius", 0.0, present);
    cfg.params.speed = get_number(j, "speed", 0.0, present);
    cfg.params.diff_trans = get_number(j, "diff_trans", 0.0, present);
    cfg.params.diff_rot = get_number(j, "diff_rot", 0.0, present);
    cfg.params.domain_width = get_number(j, "domain_width", 0.0, present);
    cfg.params.domain_height = get_number(j, "domain_height", 0.0, present);
    cfg.params.dt = get_number(j, "dt", 0.0, present);
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_integer() && !j.at("seed").is_number_unsigned()) {
            throw ConfigError("key 'seed' must be an integer");
        }
        cfg.params.seed = j.at("seed").get<std::uint64_t>();
    }
    cfg.params.force_stiffness = get_number(j, "force_stiffness", 0.0, present);
    cfg.params.n_steps = static_cast<std::int64_t>(get_number(j, "n_steps", 0, present));
    if (j.contains("boundary_mode")) {
        const std::string mode = j.at("boundary_mode").get<std::string>();
        if (mode == "periodic") {
            cfg.params.boundary_mode = BoundaryMode::periodic;
        } else if (mode == "reflecting") {
            cfg.params.boundary_mode = BoundaryMode::reflecting;
        } else {
            throw ConfigError("boundary_mode must be 'periodic' or 'reflecting', got '" + mode + "'");
        }
    }
    const double target = get_number(j, "target_mean_density", -1.0, present);
    if (present) {
        if (j.contains("domain_width") || j.contains("domain_height")) {
            throw ConfigError("give either target_mean_density or explicit domain dimensions, not both");
        }
        if (!(target > 0.0)) throw ConfigError("target_mean_density must be > 0");
        cfg.target_mean_density = target;
    }
    return cfg;
}

AnalysisConfig parse_analysis_config(const json& j) {
    if (!j.is_object()) throw ConfigError("analysis config must be a JSON object");
    static const std::set<std::string> known = {
        "grid_size",        "cutoff",      "cluster_cutoff", "contact_tolerance",
        "bandwidth",        "eval_points", "prominence_fraction", "window_start",
        "metrics_every",
    };
    reject_unknown_keys(j, known, "analysis config");

    AnalysisConfig a;
    bool present = false;
    a.grid_size = static_cast<int>(get_number(j, "grid_size", a.grid_size, present));
    a.cutoff = get_number(j, "cutoff", a.cutoff, present);
    a.cluster_cutoff = static_cast<int>(get_number(j, "cluster_cutoff", a.cluster_cutoff, present));
    a.contact_tolerance = get_number(j, "contact_tolerance", a.contact_tolerance, present);
    a.bandwidth = get_number(j, "bandwidth", a.bandwidth, present);
    a.eval_points = static_cast<int>(get_number(j, "eval_points", a.eval_points, present));
    a.prominence_fraction = get_number(j, "prominence_fraction", a.prominence_fraction, present);
    a.window_start = get_number(j, "window_start", a.window_start, present);
    a.metrics_every = static_cast<int>(get_number(j, "metrics_every", a.metrics_every, present));
    if (a.metrics_every < 1) throw ConfigError("metrics_every must be >= 1");
    if (a.grid_size < 2) throw ConfigError("grid_size must be >= 2");
    if (a.cluster_cutoff < 1) throw ConfigError("cluster_cutoff must be >= 1");
    if (a.eval_points < 2) throw ConfigError("eval_points must be >= 2");
    if (!(a.prominence_fraction > 0.0 && a.prominence_fraction < 1.0)) {
        throw ConfigError("prominence_fraction must lie in (0, 1)");
    }
    return a;
}

ExperimentSpec parse_experiment_spec(const json& j) {
    if (!j.is_object()) throw ConfigError("experiment spec must be a JSON object");
    static const std::set<std::string> known = {"name", "base", "sweep", "replicates",
                                                "snapshot_every", "analysis"};
    reject_unknown_keys(j, known, "experiment spec");
    if (!j.contains("base")) throw ConfigError("experiment spec requires 'base' parameters");

    ExperimentSpec spec;
    spec.name = j.value("name", std::string("experiment"));
    spec.base = parse_run_config(j.at("base"));
    if (j.contains("sweep")) {
        if (!j.at("sweep").is_array()) throw ConfigError("'sweep' must be an array of axes");
        for (const auto& axis_json : j.at("sweep")) {
            static const std::set<std::string> axis_keys = {"field", "values"};
            reject_unknown_keys(axis_json, axis_keys, "sweep axis");
            SweepAxis axis;
            axis.field = axis_json.at("field").get<std::string>();
            for (const auto& v : axis_json.at("values")) axis.values.push_back(v.get<double>());
            if (axis.values.empty()) throw ConfigError("sweep axis '" + axis.field + "' has no values");
            // Validate the field name up front, on a scratch copy.
            RunConfig probe = spec.base;
            AnalysisConfig probe_a;
            apply_sweep_value(probe, probe_a, axis.field, axis.values.front());
            spec.axes.push_back(std::move(axis));
        }
    }
    spec.replicates = static_cast<int>(j.value("replicates", 1));
    if (spec.replicates < 1) throw ConfigError("replicates must be >= 1");
    spec.snapshot_every = static_cast<std::int64_t>(j.value("snapshot_every", 0));
    if (j.contains("analysis")) spec.analysis = parse_analysis_config(j.at("analysis"));
    return spec;
}

SwarmParams resolve_run_config(const RunConfig& cfg) {
    SwarmParams p = cfg.params;
    if (cfg.target_mean_density) {
        const double side = std::sqrt(static_cast<double>(p.n_robots) / *cfg.target_mean_density);
        p.domain_width = side;
        p.domain_height = side;
    }
    return validated(p);
}

namespace {

json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
    }
}

}  // namespace

SwarmParams load_run_config(const std::filesystem::path& path) {
    return resolve_run_config(parse_run_config(load_json_file(path)));
}

AnalysisConfig load_analysis_config(const std::filesystem::path& path) {
    return parse_analysis_config(load_json_file(path));
}

ExperimentSpec load_experiment_spec(const std::filesystem::path& path) {
    return parse_experiment_spec(load_json_file(path));
}

void apply_sweep_value(RunConfig& run, AnalysisConfig& analysis, const std::string& field, double value) {
    SwarmParams& p = run.params;
    if (field == "n_robots") {
        p.n_robots = static_cast<std::int64_t>(value);
    } else if (field == "radius") {
        p.radius = value;
    } else if (field == "speed") {
        p.speed = value;
    } else if (field == "diff_trans") {
        p.diff_trans = value;
    } else if (field == "diff_rot") {
        p.diff_rot = value;
    } else if (field == "domain_width") {
        p.domain_width = value;
        run.target_mean_density.reset();
    } else if (field == "domain_height") {
        p.domain_height = value;
        run.target_mean_density.reset();
    } else if (field == "dt") {
        p.dt = value;
    } else if (field == "force_stiffness") {
        p.force_stiffness = value;
    } else if (field == "n_steps") {
        p.n_steps = static_cast<std::int64_t>(value);
    } else if (field == "target_mean_density") {
        run.target_mean_density = value;
    } else if (field == "grid_size") {
        analysis.grid_size = static_cast<int>(value);
    } else if (field == "cutoff") {
        analysis.cutoff = value;
    } else if (field == "cluster_cutoff") {
        analysis.cluster_cutoff = static_cast<int>(value);
    } else if (field == "contact_tolerance") {
        analysis.contact_tolerance = value;
    } else if (field == "bandwidth") {
        analysis.bandwidth = value;
    } else if (field == "window_start") {
        analysis.window_start = value;
    } else if (field == "metrics_every") {
        analysis.metrics_every = static_cast<int>(value);
    } else {
        throw ConfigError("unknown sweep field '" + field + "'");
    }
}

json params_to_json(const SwarmParams& p) {
    return json{
        {"n_robots", p.n_robots},
        {"radius", p.radius},
        {"speed", p.speed},
        {"diff_trans", p.diff_trans},
        {"diff_rot", p.diff_rot},
        {"domain_width", p.domain_width},
        {"domain_height", p.domain_height},
        {"dt", p.dt},
        {"seed", p.seed},
        {"force_stiffness", p.force_stiffness},
        {"boundary_mode", p.boundary_mode == BoundaryMode::periodic ? "periodic" : "reflecting"},
        {"n_steps", p.n_steps},
    };
}

json analysis_to_json(const AnalysisConfig& a) {
    return json{
        {"grid_size", a.grid_size},
        {"cutoff", a.cutoff},
        {"cluster_cutoff", a.cluster_cutoff},
        {"contact_tolerance", a.contact_tolerance},
        {"bandwidth", a.bandwidth},
        {"eval_points", a.eval_points},
        {"prominence_fraction", a.prominence_fraction},
        {"window_start", a.window_start},
        {"metrics_every", a.metrics_every},
    };
}

std::uint64_t spec_hash(const json& resolved) {
    const std::string dump = resolved.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (const unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

}  // namespace mips::harness
