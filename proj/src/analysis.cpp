#include "mips/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mips/kernels.hpp"
#include "mips/quadrature.hpp"

namespace mips::analysis {

DensityField coarse_grain(const SwarmState& state, const SwarmParams& params, int grid_size,
                          double cutoff) {
    if (grid_size < 2) throw std::invalid_argument("coarse_grain: grid_size must be >= 2");
    if (!(cutoff > 0.0)) throw std::invalid_argument("coarse_grain: cutoff must be > 0");

    DensityField field;
    field.grid_size = grid_size;
    field.cutoff = cutoff;
    field.domain_width = params.domain_width;
    field.domain_height = params.domain_height;
    field.values.assign(static_cast<std::size_t>(grid_size) * grid_size, 0.0);

    const std::size_t n = state.size();
    const bool periodic = params.boundary_mode == BoundaryMode::periodic;
    const auto& kt = kernels::active();
    std::vector<double> dx(n), dy(n), d2(n), w(n);
    for (int iy = 0; iy < grid_size; ++iy) {
        for (int ix = 0; ix < grid_size; ++ix) {
            const double zx = field.lattice_x(ix);
            const double zy = field.lattice_y(iy);
            kt.min_image(zx, zy, state.x.data(), state.y.data(), n, params.domain_width,
                         params.domain_height, periodic, dx.data(), dy.data(), d2.data());
            kt.bump_weights(d2.data(), n, cutoff, w.data());
            double sum = 0.0;
            for (std::size_t k = 0; k < n; ++k) sum += w[k];
            field.values[static_cast<std::size_t>(iy) * grid_size + ix] = sum;
        }
    }
    return field;
}

double bump_kernel_mass(double cutoff) {
    const double c2 = cutoff * cutoff;
    const auto radial = [c2](double d) { return std::exp(-c2 / (c2 - d * d)) * d; };
    return 2.0 * std::numbers::pi * quad::integrate(radial, 0.0, cutoff, 1e-12);
}

double silverman_bandwidth(std::span<const double> samples) {
    const std::size_t n = samples.size();
    if (n < 2) return 1e-3;
    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double s : samples) var += (s - mean) * (s - mean);
    var /= static_cast<double>(n - 1);
    const double sd = std::sqrt(var);

    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(n - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, n - 1);
        const double frac = pos - static_cast<double>(lo);
        return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
    };
    const double iqr = quantile(0.75) - quantile(0.25);

    double scale;
    if (sd > 0.0 && iqr > 0.0) {
        scale = std::min(sd, iqr / 1.34);
    } else {
        scale = std::max(sd, iqr / 1.34);
    }
    if (!(scale > 0.0)) return 1e-3;
    return 0.9 * scale * std::pow(static_cast<double>(n), -0.2);
}

DensityHistogramKDE smooth_density_distribution(std::span<const DensityField> fields,
                                                double bandwidth, int eval_points) {
    if (!(bandwidth > 0.0)) throw std::invalid_argument("bandwidth must be > 0");
    if (eval_points < 2) throw std::invalid_argument("eval_points must be >= 2");

    DensityHistogramKDE kde;
    kde.bandwidth = bandwidth;
    for (const auto& f : fields) {
        kde.sample_densities.insert(kde.sample_densities.end(), f.values.begin(), f.values.end());
    }
    if (kde.sample_densities.empty()) {
        throw AnalysisError(AnalysisErrc::empty_sample, "no density samples to smooth");
    }

    const auto [mn, mx] = std::minmax_element(kde.sample_densities.begin(), kde.sample_densities.end());
    // The grid covers both tails; clipping the left tail at zero would leak
    // kernel mass for samples within 3h of zero and break normalization.
    const double lo = *mn - 3.0 * bandwidth;
    const double hi = *mx + 3.0 * bandwidth;
    const double step = (hi - lo) / static_cast<double>(eval_points - 1);

    kde.evaluation_points.resize(eval_points);
    kde.smoothed.assign(eval_points, 0.0);
    const double norm =
        1.0 / (static_cast<double>(kde.sample_densities.size()) * bandwidth * std::sqrt(2.0 * std::numbers::pi));
    for (int k = 0; k < eval_points; ++k) {
        const double z = lo + step * k;
        kde.evaluation_points[k] = z;
        double acc = 0.0;
        for (const double s : kde.sample_densities) {
            const double t = (z - s) / bandwidth;
            acc += std::exp(-0.5 * t * t);
        }
        kde.smoothed[k] = acc * norm;
    }
    return kde;
}

int count_modes(const DensityHistogramKDE& kde, double prominence_fraction) {
    if (!(prominence_fraction > 0.0 && prominence_fraction < 1.0)) {
        throw std::invalid_argument("prominence_fraction must lie in (0, 1)");
    }
    const auto& y = kde.smoothed;
    const std::size_t m = y.size();
    if (m == 0) return 0;
    const double global_max = *std::max_element(y.begin(), y.end());

    int count = 0;
    std::size_t i = 0;
    while (i < m) {
        std::size_t j = i;
        while (j + 1 < m && y[j + 1] == y[i]) ++j;  // plateau [i, j]
        const bool rises_left = (i == 0) || (y[i - 1] < y[i]);
        const bool falls_right = (j == m - 1) || (y[j + 1] < y[i]);
        if (rises_left && falls_right) {
            const double v = y[i];
            // Topographic prominence: descend on each side to the first
            // strictly higher ground (or the end) and take the higher of
            // the two valley floors as the reference.
            double left_base = v;
            for (std::size_t l = i; l-- > 0;) {
                if (y[l] > v) break;
                left_base = std::min(left_base, y[l]);
            }
            double right_base = v;
            for (std::size_t r = j + 1; r < m; ++r) {
                if (y[r] > v) break;
                right_base = std::min(right_base, y[r]);
            }
            const double prominence = v - std::max(left_base, right_base);
            // The global maximum always counts; a flat curve is one plateau.
            if (v == global_max || prominence > prominence_fraction * global_max) ++count;
        }
        i = j + 1;
    }
    return count;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    std::vector<int> size;

    explicit UnionFind(int n) : parent(n), size(n, 1) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size[a] < size[b]) std::swap(a, b);
        parent[b] = a;
        size[a] += size[b];
    }
};

}  // namespace

double aggregation_fraction(const ContactGraph& graph, int cluster_cutoff) {
    if (cluster_cutoff < 1) throw std::invalid_argument("cluster_cutoff must be >= 1");
    if (graph.n == 0) return 0.0;
    UnionFind uf(graph.n);
    for (const auto& [i, j] : graph.edges) uf.unite(i, j);
    int in_clusters = 0;
    for (int i = 0; i < graph.n; ++i) {
        if (uf.size[uf.find(i)] >= cluster_cutoff) ++in_clusters;
    }
    return static_cast<double>(in_clusters) / static_cast<double>(graph.n);
}

double mean_projected_speed(const SwarmState& prev, const SwarmState& next,
                            const SwarmParams& params) {
    if (prev.size() != next.size()) throw std::invalid_argument("state size mismatch");
    const double dt_actual = next.time - prev.time;
    if (std::abs(dt_actual - params.dt) > 1e-9 * params.dt) {
        throw AnalysisError(AnalysisErrc::time_mismatch,
                            "states are not one step apart: dt = " + std::to_string(dt_actual));
    }
    const bool periodic = params.boundary_mode == BoundaryMode::periodic;
    const std::size_t n = prev.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx, dy, d2;
        kernels::scalar::min_image(prev.x[i], prev.y[i], &next.x[i], &next.y[i], 1,
                                   params.domain_width, params.domain_height, periodic, &dx, &dy, &d2);
        acc += (dx * std::cos(prev.theta[i]) + dy * std::sin(prev.theta[i])) / params.dt;
    }
    return acc / static_cast<double>(n);
}

SpeedDensityFit fit_speed_density(std::span<const std::pair<double, double>> points,
                                  const theory::TheoryInputs& in) {
    SpeedDensityFit fit;
    fit.points.assign(points.begin(), points.end());
    double first_density = points.empty() ? 0.0 : points.front().first;
    bool distinct = false;
    for (const auto& [lambda, v] : points) {
        if (lambda != first_density) distinct = true;
    }
    if (points.size() < 2 || !distinct) {
        throw std::invalid_argument("fit_speed_density needs >= 2 distinct densities");
    }

    const double n = static_cast<double>(points.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (const auto& [x, y] : points) {
        mean_x += x;
        mean_y += y;
    }
    mean_x /= n;
    mean_y /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [x, y] : points) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
        syy += (y - mean_y) * (y - mean_y);
    }
    const double slope = sxy / sxx;
    const double intercept = mean_y - slope * mean_x;
    if (slope >= 0.0) {
        throw AnalysisError(AnalysisErrc::non_negative_slope,
                            "no collisional slowdown signal: fitted slope = " + std::to_string(slope));
    }

    double ss_res = 0.0;
    for (const auto& [x, y] : points) {
        const double e = y - (intercept + slope * x);
        ss_res += e * e;
    }
    fit.v0_fit = intercept;
    fit.lambda_star_fit = -intercept / slope;
    fit.r_squared = (syy > 0.0) ? 1.0 - ss_res / syy : 1.0;
    // Packing-law inversion: tau_m = pi / (16 r v0 lambda*), reported both
    // with the configured speed (the paper-style known-v0 setup) and with
    // the fitted intercept.
    const double geom = 16.0 * in.radius * fit.lambda_star_fit / std::numbers::pi;
    fit.tau_m_fit = 1.0 / (geom * in.speed);
    fit.tau_m_fit_self = 1.0 / (geom * fit.v0_fit);
    return fit;
}

MetricsSeries mean_square_displacement(std::span<const SwarmState> trajectory,
                                       const SwarmParams& params) {
    (void)params;  // unwrapping already lives in the ux/uy coordinates
    if (trajectory.size() < 2) throw std::invalid_argument("need >= 2 snapshots for MSD");
    MetricsSeries series;
    const SwarmState& first = trajectory.front();
    const std::size_t n = first.size();
    for (const SwarmState& s : trajectory) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dx = s.ux[i] - first.ux[i];
            const double dy = s.uy[i] - first.uy[i];
            acc += dx * dx + dy * dy;
        }
        series.times.push_back(s.time);
        series.msd.push_back(acc / static_cast<double>(n));
    }
    return series;
}

}  // namespace mips::analysis
