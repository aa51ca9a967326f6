#include "mips/harness/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mips/errors.hpp"

namespace mips::harness {

std::string format_full(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

double parse_double(const std::string& s, std::size_t line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw IoError("malformed numeric field '" + s + "' at line " + std::to_string(line_no), line_no);
    }
}

long long parse_int(const std::string& s, std::size_t line_no) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw IoError("malformed integer field '" + s + "' at line " + std::to_string(line_no), line_no);
    }
}

}  // namespace

void write_snapshots_csv(const std::filesystem::path& path, std::span<const SwarmState> snapshots,
                         double dt) {
    auto out = open_for_write(path);
    out << "step,time,robot_id,x,y,theta,unwrapped_x,unwrapped_y\n";
    for (const SwarmState& s : snapshots) {
        const long long step = std::llround(s.time / dt);
        for (std::size_t i = 0; i < s.size(); ++i) {
            out << step << ',' << format_full(s.time) << ',' << i << ',' << format_full(s.x[i]) << ','
                << format_full(s.y[i]) << ',' << format_full(s.theta[i]) << ','
                << format_full(s.ux[i]) << ',' << format_full(s.uy[i]) << '\n';
        }
    }
}

std::vector<SwarmState> read_snapshots_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open snapshot file: " + path.string());

    std::vector<SwarmState> snapshots;
    std::string line;
    std::size_t line_no = 0;
    long long current_step = -1;

    if (!std::getline(in, line)) throw IoError("empty snapshot file: " + path.string(), 1);
    ++line_no;
    if (line != "step,time,robot_id,x,y,theta,unwrapped_x,unwrapped_y") {
        throw IoError("unexpected snapshot header at line 1", 1);
    }

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 8) {
            throw IoError("expected 8 columns, got " + std::to_string(fields.size()) + " at line " +
                              std::to_string(line_no),
                          line_no);
        }
        const long long step = parse_int(fields[0], line_no);
        const double time = parse_double(fields[1], line_no);
        const long long robot_id = parse_int(fields[2], line_no);
        if (step != current_step) {
            if (robot_id != 0) {
                throw IoError("snapshot must start at robot_id 0 at line " + std::to_string(line_no), line_no);
            }
            snapshots.emplace_back();
            snapshots.back().time = time;
            current_step = step;
        }
        SwarmState& s = snapshots.back();
        if (robot_id != static_cast<long long>(s.size())) {
            throw IoError("non-consecutive robot_id at line " + std::to_string(line_no), line_no);
        }
        s.x.push_back(parse_double(fields[3], line_no));
        s.y.push_back(parse_double(fields[4], line_no));
        s.theta.push_back(parse_double(fields[5], line_no));
        s.ux.push_back(parse_double(fields[6], line_no));
        s.uy.push_back(parse_double(fields[7], line_no));
    }
    if (snapshots.empty()) throw IoError("snapshot file holds no rows: " + path.string(), line_no);
    const std::size_t n = snapshots.front().size();
    for (const auto& s : snapshots) {
        if (s.size() != n) throw IoError("snapshots disagree on robot count in " + path.string());
    }
    return snapshots;
}

void write_metrics_csv(const std::filesystem::path& path, const MetricsSeries& metrics) {
    auto out = open_for_write(path);
    out << "t,v_hat,agg_fraction,msd\n";
    for (std::size_t k = 0; k < metrics.times.size(); ++k) {
        out << format_full(metrics.times[k]) << ',' << format_full(metrics.mean_speed[k]) << ','
            << format_full(metrics.aggregation_fraction[k]) << ',' << format_full(metrics.msd[k])
            << '\n';
    }
}

void write_density_field_csv(const std::filesystem::path& path, const DensityField& field) {
    auto out = open_for_write(path);
    out << "lattice_x,lattice_y,lambda\n";
    for (int iy = 0; iy < field.grid_size; ++iy) {
        for (int ix = 0; ix < field.grid_size; ++ix) {
            out << format_full(field.lattice_x(ix)) << ',' << format_full(field.lattice_y(iy)) << ','
                << format_full(field.at(ix, iy)) << '\n';
        }
    }
}

void write_kde_csv(const std::filesystem::path& path, const analysis::DensityHistogramKDE& kde) {
    auto out = open_for_write(path);
    out << "lambda,pdf\n";
    for (std::size_t k = 0; k < kde.evaluation_points.size(); ++k) {
        out << format_full(kde.evaluation_points[k]) << ',' << format_full(kde.smoothed[k]) << '\n';
    }
}

void write_fit_csv(const std::filesystem::path& path, const analysis::SpeedDensityFit& fit) {
    auto out = open_for_write(path);
    out << "v0_fit,lambda_star_fit,tau_m_fit,tau_m_fit_self,r_squared\n";
    out << format_full(fit.v0_fit) << ',' << format_full(fit.lambda_star_fit) << ','
        << format_full(fit.tau_m_fit) << ',' << format_full(fit.tau_m_fit_self) << ','
        << format_full(fit.r_squared) << '\n';
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    auto out = open_for_write(path);
    out << content;
}

}  // namespace mips::harness
