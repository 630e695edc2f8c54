#include <benchmark/benchmark.h>

#include "selfaffine/fourier.hpp"
#include "selfaffine/geometry.hpp"
#include "selfaffine/intlinalg.hpp"
#include "selfaffine/overlap.hpp"
#include "selfaffine/system.hpp"

using namespace selfaffine;

namespace {

MatZ mat1(long a) {
    MatZ m(1, 1);
    m(0, 0) = a;
    return m;
}

MatZ fivefold_matrix() {
    MatZ m(2, 2);
    m(0, 0) = 1;
    m(0, 1) = -2;
    m(1, 0) = 2;
    m(1, 1) = 1;
    return m;
}

system::AffineSystem f2() {
    auto m = intlinalg::certify_expanding(mat1(3));
    return system::build_system(
        m, {{0, VecZ{Int(0)}}, {0, VecZ{Int(1)}}, {0, VecZ{Int(3)}}});
}

system::AffineSystem fivefold_overlap() {
    auto m = intlinalg::certify_expanding(fivefold_matrix());
    auto sys = system::build_system(m, {{0, VecZ{Int(-1), Int(1)}},
                                        {0, VecZ{Int(-1), Int(0)}},
                                        {0, VecZ{Int(0), Int(0)}},
                                        {0, VecZ{Int(1), Int(0)}},
                                        {0, VecZ{Int(1), Int(-1)}}});
    return system::normalize(sys).first;
}

void BM_DigitSums(benchmark::State& state) {
    auto sys = f2();
    const int depth = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto ds = system::digit_sums(sys, depth);
        benchmark::DoNotOptimize(ds.distinct_count());
    }
}
BENCHMARK(BM_DigitSums)->Arg(6)->Arg(8)->Arg(10);

void BM_DecideOverlaps(benchmark::State& state) {
    auto sys = fivefold_overlap();
    for (auto _ : state) {
        auto res = overlap::decide_overlaps(sys);
        benchmark::DoNotOptimize(res.index());
    }
}
BENCHMARK(BM_DecideOverlaps);

void BM_SmithNormalForm(benchmark::State& state) {
    for (auto _ : state) {
        auto m = intlinalg::certify_expanding(fivefold_matrix());
        benchmark::DoNotOptimize(m.smith().S(1, 1).get_si());
    }
}
BENCHMARK(BM_SmithNormalForm);

void BM_VwMembership(benchmark::State& state) {
    auto sys = f2();
    VecZ w{Int(1)};
    for (auto _ : state) {
        auto r = fourier::v_w_membership(sys, w);
        benchmark::DoNotOptimize(r.status);
    }
}
BENCHMARK(BM_VwMembership);

void BM_Rasterize(benchmark::State& state) {
    auto sys = fivefold_overlap();
    const int depth = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto raster = geometry::rasterize_attractor(sys, depth, 256);
        benchmark::DoNotOptimize(raster.occupied_count());
    }
}
BENCHMARK(BM_Rasterize)->Arg(5)->Arg(7);

void BM_ChaosGame(benchmark::State& state) {
    auto sys = fivefold_overlap();
    for (auto _ : state) {
        auto h = geometry::chaos_game_histogram(sys, 100'000, 256, 1);
        benchmark::DoNotOptimize(h.total_count());
    }
}
BENCHMARK(BM_ChaosGame);

}  // namespace

BENCHMARK_MAIN();
