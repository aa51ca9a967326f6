#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace mips {

enum class BoundaryMode { periodic, reflecting };

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

// Pose of one robot. theta is stored unwrapped; consumers only ever take
// cos/sin of it.
struct RobotPose {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;
};

// Positions and orientations of all robots at one instant, stored as
// structure-of-arrays so the kernels can run over contiguous spans.
// x/y are wrapped into the domain under periodic boundaries; ux/uy
// accumulate the raw (unwrapped) displacements for MSD computation.
struct SwarmState {
    double time = 0.0;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> theta;
    std::vector<double> ux;
    std::vector<double> uy;

    std::size_t size() const { return x.size(); }

    RobotPose pose(std::size_t i) const { return {x[i], y[i], theta[i]}; }
    void set_pose(std::size_t i, const RobotPose& p) {
        x[i] = p.x;
        y[i] = p.y;
        theta[i] = p.theta;
    }

    static SwarmState zeros(std::size_t n) {
        SwarmState s;
        s.x.assign(n, 0.0);
        s.y.assign(n, 0.0);
        s.theta.assign(n, 0.0);
        s.ux.assign(n, 0.0);
        s.uy.assign(n, 0.0);
        return s;
    }

    bool operator==(const SwarmState&) const = default;
};

// Coarse-grained density evaluated at the cell centers of an l x l lattice
// over the domain. values is row-major: values[iy * grid_size + ix].
struct DensityField {
    int grid_size = 0;
    double cutoff = 0.0;
    double domain_width = 0.0;
    double domain_height = 0.0;
    std::vector<double> values;

    double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * grid_size + ix]; }
    double lattice_x(int ix) const { return (ix + 0.5) * domain_width / grid_size; }
    double lattice_y(int iy) const { return (iy + 0.5) * domain_height / grid_size; }
};

// Per-step (or per-window) scalar observables. All lists share one length.
struct MetricsSeries {
    std::vector<double> times;
    std::vector<double> mean_speed;
    std::vector<double> aggregation_fraction;
    std::vector<double> msd;

    bool operator==(const MetricsSeries&) const = default;
};

// Undirected contact graph over robot indices; edges hold (i, j) with i < j.
struct ContactGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;
};

}  // namespace mips
