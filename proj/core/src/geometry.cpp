#include "selfaffine/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "selfaffine/errors.hpp"
#include "selfaffine/rng.hpp"

namespace selfaffine::geometry {

namespace {

constexpr uint64_t kMaxCells = uint64_t(1) << 26;

uint64_t grid_cells(int resolution, int dim) {
    uint64_t total = 1;
    for (int i = 0; i < dim; ++i) {
        total *= static_cast<uint64_t>(resolution);
        if (total > kMaxCells)
            throw BudgetError(ErrorCode::BudgetExceeded, "raster grid exceeds the cell budget");
    }
    return total;
}

}  // namespace

Rat attractor_radius_bound(const AffineSystem& sys) {
    Rat max_u = 0;
    for (int j = 1; j <= sys.map_count(); ++j) {
        Rat n = vec_inf_norm(sys.digit_value(j));
        if (n > max_u) max_u = n;
    }
    return max_u * (Rat(1) + intlinalg::inverse_power_tail(sys.matrix(), 1));
}

Viewport make_viewport(const AffineSystem& sys, int resolution) {
    if (resolution < 8) throw Error(ErrorCode::InvalidArgument, "resolution must be at least 8");
    Rat radius = attractor_radius_bound(sys);
    if (sgn(radius) == 0) radius = 1;  // single-point attractor at the origin
    // cell = 2R / (resolution - 4): the attractor box plus two padding cells
    // per side fills the grid exactly.
    Rat cell = 2 * radius / Rat(resolution - 4);
    Viewport vp;
    vp.cell = cell;
    vp.resolution = resolution;
    vp.lo.assign(sys.dim(), -(radius + 2 * cell));
    return vp;
}

Raster::Raster(Viewport viewport, int dim, int depth)
    : viewport_(std::move(viewport)), dim_(dim), depth_(depth) {
    counts_.assign(grid_cells(viewport_.resolution, dim_), 0);
}

size_t Raster::flat(const std::vector<int>& idx) const {
    size_t f = 0;
    for (int i = 0; i < dim_; ++i) {
        if (idx[i] < 0 || idx[i] >= viewport_.resolution)
            throw std::logic_error("raster index outside the viewport");
        f = f * viewport_.resolution + idx[i];
    }
    return f;
}

uint64_t Raster::occupied_count() const {
    uint64_t n = 0;
    for (uint32_t c : counts_)
        if (c) ++n;
    return n;
}

uint64_t Raster::total_count() const {
    uint64_t n = 0;
    for (uint32_t c : counts_) n += c;
    return n;
}

double Raster::cell_volume() const {
    double c = viewport_.cell.get_d();
    double v = 1.0;
    for (int i = 0; i < dim_; ++i) v *= c;
    return v;
}

Raster rasterize_attractor(const AffineSystem& sys, int depth, int resolution, uint64_t budget) {
    if (!sys.normalized())
        throw Error(ErrorCode::InvalidArgument, "rasterize_attractor requires a normalized system");
    if (depth < 1) throw Error(ErrorCode::InvalidArgument, "depth must be >= 1");

    const int d = sys.dim();
    Raster raster(make_viewport(sys, resolution), d, depth);
    const Viewport& vp = raster.viewport();

    // Anchor of word w is A^{1-n} * (reversed digit sum), an exact rational.
    // Map cells in pure integer arithmetic: with A^{1-n} = B / q0,
    // lo = lo_n/lo_d and cell = c_n/c_d,
    //   floor((B s / q0 - lo) / cell) = fdiv((B s * lo_d - lo_n q0) * c_d,
    //                                        q0 * lo_d * c_n).
    MatQ p = sys.matrix().power(1 - depth);
    Int q0 = 1;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            mpz_lcm(q0.get_mpz_t(), q0.get_mpz_t(), p(i, j).get_den().get_mpz_t());
    MatZ b(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) b(i, j) = Rat(p(i, j) * q0).get_num();

    const Int lo_n = vp.lo[0].get_num(), lo_d = vp.lo[0].get_den();
    const Int c_n = vp.cell.get_num(), c_d = vp.cell.get_den();
    const Int alpha = lo_n * q0;
    const Int denom = q0 * lo_d * c_n;

    std::vector<int> idx(d);
    system::for_each_digit_sum(sys, depth, budget, [&](const VecZ& sum, uint64_t) {
        VecZ t = b.apply(sum);
        for (int i = 0; i < d; ++i) {
            Int num = (t[i] * lo_d - alpha) * c_d;
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), denom.get_mpz_t());
            idx[i] = static_cast<int>(q.get_si());
        }
        raster.add(idx);
    });
    return raster;
}

double measure_estimate(const Raster& raster) {
    return static_cast<double>(raster.occupied_count()) * raster.cell_volume();
}

double measure_estimate(const AffineSystem& sys, int depth, int resolution, uint64_t budget) {
    return measure_estimate(rasterize_attractor(sys, depth, resolution, budget));
}

BoxDimensionEstimate box_dimension_estimate(const AffineSystem& sys,
                                            const std::vector<std::pair<int, int>>& scales,
                                            uint64_t budget) {
    if (scales.size() < 3)
        throw Error(ErrorCode::InsufficientScales, "box dimension needs at least 3 scales");

    BoxDimensionEstimate est;
    std::vector<double> xs, ys;
    for (const auto& [depth, resolution] : scales) {
        Raster r = rasterize_attractor(sys, depth, resolution, budget);
        ScalePoint pt;
        pt.depth = depth;
        pt.resolution = resolution;
        pt.occupied = r.occupied_count();
        pt.cell = r.viewport().cell.get_d();
        est.points.push_back(pt);
        xs.push_back(std::log(1.0 / pt.cell));
        ys.push_back(std::log(static_cast<double>(pt.occupied)));
    }

    const size_t n = xs.size();
    double mx = 0, my = 0;
    for (size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    est.slope = sxy / sxx;
    double ss_res = 0;
    for (size_t i = 0; i < n; ++i) {
        double r = ys[i] - (my + est.slope * (xs[i] - mx));
        ss_res += r * r;
    }
    est.std_error = std::sqrt(ss_res / static_cast<double>(n - 2) / sxx);
    est.ci_half_width = 2.0 * est.std_error;
    return est;
}

std::vector<std::pair<int, int>> matched_scales(const AffineSystem& sys,
                                                const std::vector<int>& depths) {
    std::vector<std::pair<int, int>> scales;
    for (int n : depths) {
        double rho = sys.matrix().power(-n).op_inf_norm().get_d();
        double res = std::ceil(1.0 / rho) + 4;
        res = std::min(res, 1.0e6);
        scales.emplace_back(n, static_cast<int>(std::max(res, 16.0)));
    }
    return scales;
}

Raster chaos_game_histogram(const AffineSystem& sys, uint64_t samples, int resolution,
                            uint64_t seed) {
    return chaos_game_histogram(sys, samples, seed, make_viewport(sys, resolution));
}

Raster chaos_game_histogram(const AffineSystem& sys, uint64_t samples, uint64_t seed,
                            Viewport viewport) {
    if (samples < 10'000)
        throw Error(ErrorCode::InvalidArgument, "at least 10^4 samples are required");

    const int d = sys.dim();
    const int N = sys.map_count();
    Raster raster(std::move(viewport), d, 0);
    const Viewport& vp = raster.viewport();

    std::vector<double> inv(static_cast<size_t>(d) * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) inv[i * d + j] = sys.matrix().inv()(i, j).get_d();
    std::vector<std::vector<double>> digits(N, std::vector<double>(d));
    for (int j = 1; j <= N; ++j) {
        VecQ u = sys.digit_value(j);
        for (int i = 0; i < d; ++i) digits[j - 1][i] = u[i].get_d();
    }
    std::vector<double> lo(d);
    for (int i = 0; i < d; ++i) lo[i] = vp.lo[i].get_d();
    const double cell = vp.cell.get_d();

    SplitMix64 rng(seed);
    std::vector<double> x(d, 0.0), y(d, 0.0);
    std::vector<int> idx(d);
    constexpr int kBurnIn = 100;

    for (uint64_t t = 0; t < kBurnIn + samples; ++t) {
        int j = rng.uniform_int(N);
        for (int i = 0; i < d; ++i) {
            double acc = digits[j][i];
            for (int k = 0; k < d; ++k) acc += inv[i * d + k] * x[k];
            y[i] = acc;
        }
        std::swap(x, y);
        if (t < kBurnIn) continue;
        bool inside = true;
        for (int i = 0; i < d; ++i) {
            int c = static_cast<int>(std::floor((x[i] - lo[i]) / cell));
            if (c < 0 || c >= vp.resolution) {
                inside = false;
                break;
            }
            idx[i] = c;
        }
        // Orbit points stay inside the radius-bound viewport; an explicit
        // viewport may crop.
        if (inside) raster.add(idx);
    }
    return raster;
}

std::string to_pgm(const Raster& raster, bool log_scale) {
    if (raster.dim() < 1 || raster.dim() > 2)
        throw Error(ErrorCode::InvalidArgument, "PGM output supports dim 1 and 2 only");

    const int res = raster.resolution();
    const int width = res;
    const int height = raster.dim() == 2 ? res : 1;

    std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    out.reserve(out.size() + static_cast<size_t>(width) * height);

    uint32_t max_count = 0;
    for (uint32_t c : raster.counts()) max_count = std::max(max_count, c);
    const double log_max = std::log1p(static_cast<double>(max_count));

    auto shade = [&](uint32_t c) -> char {
        if (!log_scale) return static_cast<char>(c ? 0 : 255);
        if (c == 0 || max_count == 0) return static_cast<char>(255);
        double v = std::log1p(static_cast<double>(c)) / log_max;
        int g = 255 - static_cast<int>(std::lround(v * 255.0));
        return static_cast<char>(std::clamp(g, 0, 255));
    };

    if (raster.dim() == 1) {
        for (int i = 0; i < res; ++i) out.push_back(shade(raster.counts()[i]));
    } else {
        // Row 0 at the top = largest second coordinate.
        for (int row = 0; row < res; ++row) {
            int ycell = res - 1 - row;
            for (int xcell = 0; xcell < res; ++xcell)
                out.push_back(shade(raster.counts()[static_cast<size_t>(xcell) * res + ycell]));
        }
    }
    return out;
}

}  // namespace selfaffine::geometry
