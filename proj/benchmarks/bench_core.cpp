#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "turbmax/functional.hpp"
#include "turbmax/measure.hpp"
#include "turbmax/selector.hpp"

using namespace turbmax;

namespace {

// Deterministic mixed-atom measure: three atoms per cell plus concentration
// mass on every fourth cell.
DiscreteYoungMeasure make_measure(const SpaceTimeGrid& grid, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<CellMeasure> cells(grid.cell_count());
    for (std::size_t c = 0; c < grid.cell_count(); ++c) {
        if (!grid.is_final_layer(c)) {
            for (int a = 0; a < 3; ++a) {
                cells[c].atoms.push_back({{g(rng), g(rng)}, a == 2 ? 0.5 : 0.25});
            }
        }
        if (c % 4 == 0) {
            cells[c].lambda_mass = 0.25;
            const double x = g(rng);
            const double y = g(rng);
            const double n = std::sqrt(x * x + y * y);
            if (n > 1e-8) {
                cells[c].angle_atoms.push_back({{x / n, y / n}, 1.0});
            } else {
                cells[c].angle_atoms.push_back({{1.0, 0.0}, 1.0});
            }
        }
    }
    return DiscreteYoungMeasure(grid, 2, GrowthStructure::quadratic(), std::move(cells));
}

void bench_pairing(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const SpaceTimeGrid grid(1.0, 2, n, n);
    const auto Y = make_measure(grid, 1);
    const auto f = ConvexIntegrand::squared_norm();
    for (auto _ : state) {
        benchmark::DoNotOptimize(pairing(Y, f));
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(grid.interior_cell_count()));
}

void bench_jensen_defect(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const SpaceTimeGrid grid(1.0, 2, n, n);
    const auto Y = make_measure(grid, 2);
    const auto f = ConvexIntegrand::squared_norm();
    for (auto _ : state) {
        benchmark::DoNotOptimize(jensen_defect(Y, f).value);
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(grid.interior_cell_count()));
}

void bench_maximize(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const SpaceTimeGrid grid(1.0, 2, n, n);
    std::vector<DiscreteYoungMeasure> cands;
    for (unsigned i = 0; i < 4; ++i) {
        cands.push_back(make_measure(grid, 10 + i));
    }
    const CandidateSet cs(std::move(cands));
    const auto f = ConvexIntegrand::squared_norm();
    MaximizeOptions opts;
    opts.tol = 1e-12;
    for (auto _ : state) {
        benchmark::DoNotOptimize(maximize(cs, f, opts).value);
    }
}

} // namespace

BENCHMARK(bench_pairing)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(bench_jensen_defect)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(bench_maximize)->Arg(4)->Arg(8);

BENCHMARK_MAIN();
