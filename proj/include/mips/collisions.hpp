#pragma once

#include <vector>

#include "mips/params.hpp"
#include "mips/types.hpp"

namespace mips {

// Uniform-cell spatial hash over the domain. Cell side >= the reach it was
// built with, so a 3x3 cell neighborhood around a robot is guaranteed to
// contain every robot within that reach.
struct SpatialHashGrid {
    double cell_size = 0.0;  // requested reach; actual cells are >= this
    int nx = 0;
    int ny = 0;
    double cell_w = 0.0;
    double cell_h = 0.0;
    bool periodic = true;
    std::vector<std::vector<int>> cells;  // flat [cy * nx + cx] buckets, robot indices in insertion order

    int cell_x(double x) const;
    int cell_y(double y) const;

    // Robot indices in the 3x3 neighborhood around (x, y), skipping
    // exclude_index. Cells are visited in a fixed order and deduplicated
    // (small domains can wrap a neighborhood onto itself), so the output
    // order is deterministic.
    void gather_neighbors(double x, double y, int exclude_index, std::vector<int>& out) const;
};

// Cell reach covering a contact query plus one step of motion.
double default_grid_reach(const SwarmParams& params);

SpatialHashGrid build_grid(const SwarmState& state, const SwarmParams& params, double reach = 0.0);

// Per-robot displacement from excluded-volume springs: each overlapping
// pair (minimum-image distance d < 2r) pushes both robots apart along the
// center line by k (2r - d) dt / 2 each. Contributions accumulate per
// robot in neighbor-scan order, so results are deterministic and the
// displacement sum over the swarm cancels to roundoff. Exactly coincident
// pairs separate along a reproducible pseudo-random direction derived from
// the noise streams.
std::vector<Vec2> compute_overlap_forces(const SwarmState& state, const SpatialHashGrid& grid,
                                         const SwarmParams& params);

// Edges (i, j), i < j, for every pair at minimum-image distance
// <= 2r + contact_tolerance. Edges come out sorted.
ContactGraph build_contact_graph(const SwarmState& state, const SwarmParams& params,
                                 double contact_tolerance);

}  // namespace mips
