#pragma once

#include <span>
#include <utility>
#include <vector>

#include "mips/params.hpp"
#include "mips/theory.hpp"
#include "mips/types.hpp"

namespace mips::analysis {

// Coarse-grained density lambda(z) = sum_i w(|z - z_i|) evaluated at the
// cell centers of a grid_size x grid_size lattice, with the compact kernel
// w(d) = exp(-dc^2 / (dc^2 - d^2)) and minimum-image distances in periodic
// mode.
DensityField coarse_grain(const SwarmState& state, const SwarmParams& params, int grid_size,
                          double cutoff);

// Integral of the smoothing kernel over the plane, 2 pi int_0^dc w(d) d dd.
double bump_kernel_mass(double cutoff);

struct DensityHistogramKDE {
    std::vector<double> sample_densities;
    std::vector<double> evaluation_points;
    std::vector<double> smoothed;
    double bandwidth = 0.0;
};

// Silverman's rule on the pooled sample: 0.9 min(sd, iqr/1.34) n^(-1/5).
double silverman_bandwidth(std::span<const double> samples);

// Pools all lattice values and returns a Gaussian kernel density estimate
// on a uniform evaluation grid covering the sample plus 3 bandwidths on
// each side. Throws AnalysisError(empty_sample) on an empty pool.
DensityHistogramKDE smooth_density_distribution(std::span<const DensityField> fields,
                                                double bandwidth, int eval_points);

// Number of local maxima of the smoothed curve whose topographic prominence
// exceeds prominence_fraction times the global maximum. A plateau counts as
// one peak.
int count_modes(const DensityHistogramKDE& kde, double prominence_fraction);

// Fraction of robots belonging to connected components of size >=
// cluster_cutoff in the contact graph.
double aggregation_fraction(const ContactGraph& graph, int cluster_cutoff);

// Mean over robots of the one-step displacement (minimum image, divided by
// dt) projected on the robot's orientation at the earlier state.
double mean_projected_speed(const SwarmState& prev, const SwarmState& next,
                            const SwarmParams& params);

struct SpeedDensityFit {
    std::vector<std::pair<double, double>> points;  // (mean density, measured speed)
    double v0_fit = 0.0;                            // intercept
    double lambda_star_fit = 0.0;                   // -intercept / slope
    double tau_m_fit = 0.0;                         // inverts the packing law with the configured v0
    double tau_m_fit_self = 0.0;                    // same inversion using v0_fit
    double r_squared = 0.0;
};

// Ordinary least squares line through (density, speed) points plus the
// derived packing density and collision resolution time. Throws
// AnalysisError(non_negative_slope) when the fitted slope is >= 0.
SpeedDensityFit fit_speed_density(std::span<const std::pair<double, double>> points,
                                  const theory::TheoryInputs& in);

// Ensemble MSD over the trajectory relative to the first snapshot, using
// unwrapped coordinates. Returns a MetricsSeries with times and msd
// populated.
MetricsSeries mean_square_displacement(std::span<const SwarmState> trajectory,
                                       const SwarmParams& params);

}  // namespace mips::analysis
