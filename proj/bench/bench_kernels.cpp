// Serial reference kernels against the OpenMP kernels on the default 512x384 branch-2 grid.

#include <benchmark/benchmark.h>

#include "qmeas/doubleslit/evolve.hpp"
#include "qmeas/doubleslit/grid.hpp"
#include "qmeas/doubleslit/kernels.hpp"
#include "qmeas/doubleslit/potential.hpp"

using namespace qmeas::doubleslit;

namespace {

struct Setup {
    Grid2D grid{512, 384, 512.0, 384.0, -128.0};
    PhysicalParams params{};
    Potential2D pot = build_potential(grid, params, 2, SlitGeometry{});
    WavePacket2D packet = init_packet(grid, params, {0.0, 0.0});
    kernels::CayleyLine line_x = kernels::CayleyLine::make(0.25, 0.5, grid.hx());
    kernels::CayleyLine line_y = kernels::CayleyLine::make(0.5, 0.5, grid.hy());
    kernels::RunIndex runs = kernels::RunIndex::build(grid, pot.blocked());
    kernels::ThomasTable table_x = kernels::ThomasTable::build(line_x, grid.nx());
    kernels::ThomasTable table_y = kernels::ThomasTable::build(line_y, grid.ny());
};

const Setup& setup() {
    static const Setup s;
    return s;
}

void BM_cayley_x_serial(benchmark::State& state) {
    const auto& s = setup();
    auto psi = s.packet.psi;
    for (auto _ : state) kernels::serial::cayley_x(psi, s.grid, s.pot.blocked(), s.line_x);
    benchmark::DoNotOptimize(psi.data());
}

void BM_cayley_x_omp(benchmark::State& state) {
    const auto& s = setup();
    auto psi = s.packet.psi;
    for (auto _ : state) kernels::omp::cayley_x(psi, s.grid, s.pot.blocked(), s.runs, s.line_x, s.table_x);
    benchmark::DoNotOptimize(psi.data());
}

void BM_cayley_y_serial(benchmark::State& state) {
    const auto& s = setup();
    auto psi = s.packet.psi;
    for (auto _ : state) kernels::serial::cayley_y(psi, s.grid, s.pot.blocked(), s.line_y);
    benchmark::DoNotOptimize(psi.data());
}

void BM_cayley_y_omp(benchmark::State& state) {
    const auto& s = setup();
    auto psi = s.packet.psi;
    for (auto _ : state) kernels::omp::cayley_y(psi, s.grid, s.pot.blocked(), s.runs, s.line_y, s.table_y);
    benchmark::DoNotOptimize(psi.data());
}

void BM_step(benchmark::State& state, Backend backend) {
    const auto& s = setup();
    WavePacket2D p = s.packet;
    const EvolveOptions opt{backend, Sponge{}};
    for (auto _ : state) p = evolve(p, s.pot, 0.5, 1, opt);
    benchmark::DoNotOptimize(p.psi.data());
}

}  // namespace

BENCHMARK(BM_cayley_x_serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_cayley_x_omp)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_cayley_y_serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_cayley_y_omp)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_step, serial, Backend::serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_step, omp, Backend::omp)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
