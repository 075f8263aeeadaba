#include <random>

#include <benchmark/benchmark.h>

#include "citenet/centrality_kernels.hpp"

using namespace citenet;

namespace {

// Sparse random digraph with mean out-degree 8.
Graph make_graph(std::size_t n)
{
    std::mt19937_64 rng(n);
    Graph g(true);
    for (std::size_t i = 0; i < n; ++i) g.add_node("v" + std::to_string(i));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t e = 0; e < 8 * n; ++e) {
        const std::size_t u = pick(rng), v = pick(rng);
        if (u != v) g.add_edge(u, v);
    }
    return g;
}

template <auto Kernel>
void run_betweenness(benchmark::State& state)
{
    const Csr out = out_csr(make_graph(static_cast<std::size_t>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(out));
}

template <auto Kernel>
void run_closeness(benchmark::State& state)
{
    const Csr in = in_csr(make_graph(static_cast<std::size_t>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(in));
}

template <auto Kernel>
void run_pagerank(benchmark::State& state)
{
    const Graph g = make_graph(static_cast<std::size_t>(state.range(0)));
    const Csr in = in_csr(g);
    const Csr out = out_csr(g);
    std::vector<std::size_t> deg(out.size());
    for (std::size_t v = 0; v < deg.size(); ++v) deg[v] = out.degree(v);
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(in, deg, 0.85, 1e-9, 1000));
}

} // namespace

BENCHMARK(run_betweenness<kernels::betweenness_serial>)->Name("betweenness/serial")->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(run_betweenness<kernels::betweenness_parallel>)->Name("betweenness/parallel")->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(run_closeness<kernels::closeness_serial>)->Name("closeness/serial")->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(run_closeness<kernels::closeness_parallel>)->Name("closeness/parallel")->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(run_pagerank<kernels::pagerank_serial>)->Name("page_rank/serial")->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(run_pagerank<kernels::pagerank_parallel>)->Name("page_rank/parallel")->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
