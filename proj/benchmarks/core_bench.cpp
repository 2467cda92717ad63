#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "skycat/catalog.hpp"
#include "skycat/htm.hpp"
#include "skycat/queries.hpp"
#include "skycat/region.hpp"
#include "skycat/scan_bench.hpp"
#include "skycat/sphere.hpp"
#include "skycat/synth.hpp"

using namespace skycat;

namespace {

std::vector<UnitVector> random_points(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uz(-1.0, 1.0);
    std::uniform_real_distribution<double> ut(0.0, 2.0 * kPi);
    std::vector<UnitVector> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double z = uz(rng);
        double t = ut(rng);
        double r = std::sqrt(1.0 - z * z);
        pts.push_back({r * std::cos(t), r * std::sin(t), z});
    }
    return pts;
}

void BM_ArcAngle(benchmark::State& state) {
    auto pts = random_points(1024, 7);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            arc_angle_arcmin(pts[i & 1023], pts[(i + 1) & 1023]));
        ++i;
    }
}
BENCHMARK(BM_ArcAngle);

void BM_LookupId(benchmark::State& state) {
    auto pts = random_points(1024, 11);
    int depth = static_cast<int>(state.range(0));
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(lookup_id(pts[i & 1023], depth));
        ++i;
    }
}
BENCHMARK(BM_LookupId)->Arg(8)->Arg(14)->Arg(20);

void BM_CoverCap(benchmark::State& state) {
    Cap cap = make_cap({185, -0.5}, static_cast<double>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cover(cap, 14));
    }
}
BENCHMARK(BM_CoverCap)->Arg(1)->Arg(10)->Arg(60);

// Shared 2e5-row fixtures, built once per binary run.
const Catalog& uniform_catalog() {
    static const Catalog cat = [] {
        SynthProfile p;
        p.n = 200000;
        p.seed = 17;
        Catalog c(14);
        populate(c, generate_sky(p));
        return c;
    }();
    return cat;
}

const Catalog& patch_catalog() {
    static const Catalog cat = [] {
        SynthProfile p;
        p.n = 200000;
        p.seed = 18;
        p.density = DensityProfile::patch;
        Catalog c(14);
        populate(c, generate_sky(p));
        return c;
    }();
    return cat;
}

void BM_ScanColorcut(benchmark::State& state) {
    const Catalog& cat = uniform_catalog();
    for (auto _ : state) {
        benchmark::DoNotOptimize(color_count(cat, 1.0).count);
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(cat.photo().size()) * 16);
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(cat.photo().size()));
}
BENCHMARK(BM_ScanColorcut);

void BM_ScanCountAll(benchmark::State& state) {
    const Catalog& cat = uniform_catalog();
    for (auto _ : state) {
        benchmark::DoNotOptimize(bench_scan_warm(cat, "count_all", 1).matches);
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(cat.photo().size() *
                                                      PhotoColumns::row_bytes()));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(cat.photo().size()));
}
BENCHMARK(BM_ScanCountAll);

// Dense sky: 2e5 objects inside the 25-arcmin patch.
void BM_NearbyEq(benchmark::State& state) {
    const Catalog& cat = patch_catalog();
    const double r = static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(nearby_eq(cat, 185.0, -0.5, r).rows.size());
    }
}
BENCHMARK(BM_NearbyEq)->Arg(1)->Arg(5)->Arg(20);

void BM_Q15(benchmark::State& state) {
    const Catalog& cat = uniform_catalog();
    for (auto _ : state) {
        benchmark::DoNotOptimize(q15_asteroids(cat).rows.size());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(cat.photo().size()));
}
BENCHMARK(BM_Q15);

}  // namespace

BENCHMARK_MAIN();
