#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mips/analysis.hpp"
#include "mips/types.hpp"

namespace mips::harness {

// Full-precision decimal formatting (17 significant digits), so that
// write -> read round-trips doubles exactly.
std::string format_full(double v);

// Snapshot persistence. One CSV row per robot per snapshot:
//   step,time,robot_id,x,y,theta,unwrapped_x,unwrapped_y
void write_snapshots_csv(const std::filesystem::path& path, std::span<const SwarmState> snapshots,
                         double dt);
std::vector<SwarmState> read_snapshots_csv(const std::filesystem::path& path);

void write_metrics_csv(const std::filesystem::path& path, const MetricsSeries& metrics);
void write_density_field_csv(const std::filesystem::path& path, const DensityField& field);
void write_kde_csv(const std::filesystem::path& path, const analysis::DensityHistogramKDE& kde);
void write_fit_csv(const std::filesystem::path& path, const analysis::SpeedDensityFit& fit);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace mips::harness
