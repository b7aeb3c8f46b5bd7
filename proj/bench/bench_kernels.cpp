#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "wfrac/grid.hpp"
#include "wfrac/kernels.hpp"

using namespace wfrac;

namespace {

const NodeIntegrand integrand = [](double x, double t) { return std::exp(-(x - t)) * std::sin(3.0 * t) + 1.0; };

void BM_integral_serial(benchmark::State& st) {
    const Grid g = make_uniform_grid(0.0, 1.0, int(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(reference::frac_integral(0.6, 0.0, g.nodes, integrand));
}

void BM_integral_openmp(benchmark::State& st) {
    const Grid g = make_uniform_grid(0.0, 1.0, int(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::frac_integral(0.6, 0.0, g.nodes, integrand));
    st.counters["threads"] = thread_count();
}

std::vector<double> samples(const Grid& g) {
    std::vector<double> h(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) h[j] = std::cos(g.nodes[j]);
    return h;
}

void BM_samples_serial(benchmark::State& st) {
    const Grid g = make_uniform_grid(0.0, 1.0, int(st.range(0)));
    const auto h = samples(g);
    for (auto _ : st) benchmark::DoNotOptimize(reference::frac_integral_samples(0.4, g.nodes, h));
}

void BM_samples_openmp(benchmark::State& st) {
    const Grid g = make_uniform_grid(0.0, 1.0, int(st.range(0)));
    const auto h = samples(g);
    for (auto _ : st) benchmark::DoNotOptimize(kernels::frac_integral_samples(0.4, g.nodes, h, true));
    st.counters["threads"] = thread_count();
}

}  // namespace

BENCHMARK(BM_integral_serial)->RangeMultiplier(4)->Range(256, 4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_integral_openmp)->RangeMultiplier(4)->Range(256, 4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_samples_serial)->RangeMultiplier(4)->Range(256, 4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_samples_openmp)->RangeMultiplier(4)->Range(256, 4096)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
