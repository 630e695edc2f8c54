#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "selfaffine/system.hpp"

namespace selfaffine::geometry {

using system::AffineSystem;

// Bound on the max-norm of every attractor point: the translation series
// sum_r A^{1-r} u_{j_r} is dominated by max_j ||u_j|| * (1 + tail(1)).
Rat attractor_radius_bound(const AffineSystem& sys);

// Axis-aligned cube [lo, lo + cell*resolution)^d containing the attractor
// with two cells of symmetric padding. Exact rationals.
struct Viewport {
    VecQ lo;
    Rat cell;
    int resolution = 0;
};

Viewport make_viewport(const AffineSystem& sys, int resolution);

// Cell-count grid over a viewport. Occupancy = nonzero count. depth records
// the cylinder depth for anchor rasters and 0 for chaos-game histograms.
class Raster {
public:
    Raster(Viewport viewport, int dim, int depth);

    int dim() const { return dim_; }
    int resolution() const { return viewport_.resolution; }
    int depth() const { return depth_; }
    const Viewport& viewport() const { return viewport_; }

    uint32_t at(const std::vector<int>& idx) const { return counts_[flat(idx)]; }
    void add(const std::vector<int>& idx, uint32_t c = 1) { counts_[flat(idx)] += c; }

    const std::vector<uint32_t>& counts() const { return counts_; }
    uint64_t occupied_count() const;
    uint64_t total_count() const;
    double cell_volume() const;

    size_t flat(const std::vector<int>& idx) const;

private:
    Viewport viewport_;
    int dim_ = 0;
    int depth_ = 0;
    std::vector<uint32_t> counts_;
};

// Marks the cells containing the anchor points T_{j_1..j_n}(0) of all
// depth-n cylinders, computed in exact integer arithmetic. Requires a
// normalized system.
Raster rasterize_attractor(const AffineSystem& sys, int depth, int resolution,
                           uint64_t budget = system::kDefaultEnumerationBudget);

// Occupied cells times cell volume; upper-bounds the attractor volume at
// this depth and stabilizes under refinement exactly in the tile branch.
double measure_estimate(const Raster& raster);
double measure_estimate(const AffineSystem& sys, int depth, int resolution,
                        uint64_t budget = system::kDefaultEnumerationBudget);

struct ScalePoint {
    int depth = 0;
    int resolution = 0;
    uint64_t occupied = 0;
    double cell = 0.0;
};

struct BoxDimensionEstimate {
    double slope = 0.0;
    double std_error = 0.0;
    double ci_half_width = 0.0;  // 2 * std_error
    std::vector<ScalePoint> points;
};

// Least-squares slope of log(occupied cells) against log(1/cell) over the
// given (depth, resolution) scales. Diagnostic only. Throws
// Error(InsufficientScales) for fewer than 3 scales.
BoxDimensionEstimate box_dimension_estimate(const AffineSystem& sys,
                                            const std::vector<std::pair<int, int>>& scales,
                                            uint64_t budget = system::kDefaultEnumerationBudget);

// Resolutions matched to the cylinder size at each depth: cell comparable to
// ||A^-n|| times the attractor extent.
std::vector<std::pair<int, int>> matched_scales(const AffineSystem& sys,
                                                const std::vector<int>& depths);

// Empirical histogram of the self-affine measure via the chaos game:
// uniform letters, burn-in 100, deterministic per seed.
Raster chaos_game_histogram(const AffineSystem& sys, uint64_t samples, int resolution,
                            uint64_t seed);
Raster chaos_game_histogram(const AffineSystem& sys, uint64_t samples, uint64_t seed,
                            Viewport viewport);

// Binary PGM (P5, maxval 255). Occupancy renders black on white; histograms
// use log-scaled intensity. Supported for dim 1 and 2.
std::string to_pgm(const Raster& raster, bool log_scale);

}  // namespace selfaffine::geometry
