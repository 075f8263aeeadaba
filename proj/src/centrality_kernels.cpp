#include "citenet/centrality_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <omp.h>

namespace citenet {

namespace {

Csr build_csr(const Graph& graph, bool incoming)
{
    Csr csr;
    const std::size_t n = graph.node_count();
    csr.offsets.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) {
        const auto row = incoming ? graph.in_neighbors(v) : graph.out_neighbors(v);
        csr.offsets[v + 1] = csr.offsets[v] + row.size();
    }
    csr.targets.reserve(csr.offsets[n]);
    for (std::size_t v = 0; v < n; ++v) {
        const auto row = incoming ? graph.in_neighbors(v) : graph.out_neighbors(v);
        csr.targets.insert(csr.targets.end(), row.begin(), row.end());
    }
    return csr;
}

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

/// Scratch space for one Brandes pass.
struct BrandesWork {
    explicit BrandesWork(std::size_t n) : sigma(n), dist(n), delta(n) {}

    std::vector<double> sigma;
    std::vector<std::size_t> dist;
    std::vector<double> delta;
    std::vector<std::size_t> order;
    std::vector<std::size_t> queue;
};

/// Single-source dependency accumulation; calls sink(w, delta_w) for w != s.
template <typename Sink>
void brandes_source(const Csr& out, std::size_t s, BrandesWork& w, Sink&& sink)
{
    std::fill(w.sigma.begin(), w.sigma.end(), 0.0);
    std::fill(w.dist.begin(), w.dist.end(), kUnreached);
    std::fill(w.delta.begin(), w.delta.end(), 0.0);
    w.order.clear();
    w.queue.clear();

    w.sigma[s] = 1.0;
    w.dist[s] = 0;
    w.queue.push_back(s);
    for (std::size_t head = 0; head < w.queue.size(); ++head) {
        const std::size_t v = w.queue[head];
        w.order.push_back(v);
        for (std::size_t x : out.row(v)) {
            if (w.dist[x] == kUnreached) {
                w.dist[x] = w.dist[v] + 1;
                w.queue.push_back(x);
            }
            if (w.dist[x] == w.dist[v] + 1) {
                w.sigma[x] += w.sigma[v];
            }
        }
    }
    // Walk back in non-increasing distance; predecessors of x are the
    // neighbours one hop closer to s.
    for (std::size_t k = w.order.size(); k-- > 0;) {
        const std::size_t x = w.order[k];
        for (std::size_t y : out.row(x)) {
            if (w.dist[y] == w.dist[x] + 1) {
                w.delta[x] += w.sigma[x] / w.sigma[y] * (1.0 + w.delta[y]);
            }
        }
        if (x != s) {
            sink(x, w.delta[x]);
        }
    }
}

} // namespace

Csr out_csr(const Graph& graph)
{
    return build_csr(graph, false);
}

Csr in_csr(const Graph& graph)
{
    return build_csr(graph, true);
}

namespace kernels {

std::vector<double> betweenness_serial(const Csr& out)
{
    const std::size_t n = out.size();
    std::vector<double> bc(n, 0.0);
    BrandesWork work(n);
    for (std::size_t s = 0; s < n; ++s) {
        brandes_source(out, s, work, [&](std::size_t v, double d) { bc[v] += d; });
    }
    return bc;
}

std::vector<double> betweenness_parallel(const Csr& out)
{
    const std::size_t n = out.size();
    if (n == 0) {
        return {};
    }
    // Fixed chunking keeps the merge order independent of the thread count.
    const std::size_t chunks = std::min<std::size_t>(n, 64);
    std::vector<std::vector<CompensatedSum>> partial(chunks);

#pragma omp parallel
    {
        BrandesWork work(n);
#pragma omp for schedule(dynamic, 1)
        for (std::size_t c = 0; c < chunks; ++c) {
            auto& acc = partial[c];
            acc.assign(n, CompensatedSum{});
            const std::size_t begin = c * n / chunks;
            const std::size_t end = (c + 1) * n / chunks;
            for (std::size_t s = begin; s < end; ++s) {
                brandes_source(out, s, work, [&](std::size_t v, double d) { acc[v].add(d); });
            }
        }
    }

    std::vector<double> bc(n, 0.0);
#pragma omp parallel for schedule(static)
    for (std::size_t v = 0; v < n; ++v) {
        CompensatedSum total;
        for (std::size_t c = 0; c < chunks; ++c) {
            total.add(partial[c][v].sum);
            total.add(partial[c][v].comp);
        }
        bc[v] = total.value();
    }
    return bc;
}

namespace {

double closeness_of(const Csr& in, std::size_t v, std::vector<std::size_t>& dist, std::vector<std::size_t>& queue)
{
    const std::size_t n = in.size();
    if (n <= 1) {
        return 0.0;
    }
    std::fill(dist.begin(), dist.end(), kUnreached);
    queue.clear();
    dist[v] = 0;
    queue.push_back(v);
    std::size_t total = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::size_t x = queue[head];
        total += dist[x];
        for (std::size_t y : in.row(x)) {
            if (dist[y] == kUnreached) {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    const double reach = static_cast<double>(queue.size() - 1);
    if (total == 0) {
        return 0.0;
    }
    return (reach / static_cast<double>(n - 1)) * (reach / static_cast<double>(total));
}

} // namespace

std::vector<double> closeness_serial(const Csr& in)
{
    const std::size_t n = in.size();
    std::vector<double> c(n, 0.0);
    std::vector<std::size_t> dist(n), queue;
    for (std::size_t v = 0; v < n; ++v) {
        c[v] = closeness_of(in, v, dist, queue);
    }
    return c;
}

std::vector<double> closeness_parallel(const Csr& in)
{
    const std::size_t n = in.size();
    std::vector<double> c(n, 0.0);
#pragma omp parallel
    {
        std::vector<std::size_t> dist(n), queue;
#pragma omp for schedule(dynamic, 16)
        for (std::size_t v = 0; v < n; ++v) {
            c[v] = closeness_of(in, v, dist, queue);
        }
    }
    return c;
}

namespace {

template <bool Parallel>
PageRankResult pagerank_impl(const Csr& in, std::span<const std::size_t> out_degree, double damping,
                             double tolerance, int max_iterations)
{
    PageRankResult result;
    const std::size_t n = in.size();
    if (n == 0) {
        result.converged = true;
        return result;
    }
    const double nd = static_cast<double>(n);
    std::vector<double> x(n, 1.0 / nd), next(n), diff(n);
    std::vector<double> share(n);

    for (int it = 1; it <= max_iterations; ++it) {
        CompensatedSum dangling;
        for (std::size_t u = 0; u < n; ++u) {
            if (out_degree[u] == 0) {
                dangling.add(x[u]);
                share[u] = 0.0;
            } else {
                share[u] = x[u] / static_cast<double>(out_degree[u]);
            }
        }
        const double base = (1.0 - damping) / nd + damping * dangling.value() / nd;

#pragma omp parallel for schedule(static) if (Parallel)
        for (std::size_t v = 0; v < n; ++v) {
            double acc = 0.0;
            for (std::size_t u : in.row(v)) {
                acc += share[u];
            }
            next[v] = base + damping * acc;
            diff[v] = std::abs(next[v] - x[v]);
        }

        CompensatedSum err;
        for (double d : diff) {
            err.add(d);
        }
        x.swap(next);
        result.iterations = it;
        if (err.value() < nd * tolerance) {
            result.converged = true;
            break;
        }
    }

    CompensatedSum total;
    for (double v : x) {
        total.add(v);
    }
    const double s = total.value();
    for (double& v : x) {
        v /= s;
    }
    result.rank = std::move(x);
    return result;
}

} // namespace

PageRankResult pagerank_serial(const Csr& in, std::span<const std::size_t> out_degree, double damping,
                               double tolerance, int max_iterations)
{
    return pagerank_impl<false>(in, out_degree, damping, tolerance, max_iterations);
}

PageRankResult pagerank_parallel(const Csr& in, std::span<const std::size_t> out_degree, double damping,
                                 double tolerance, int max_iterations)
{
    return pagerank_impl<true>(in, out_degree, damping, tolerance, max_iterations);
}

} // namespace kernels
} // namespace citenet
