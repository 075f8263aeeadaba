#pragma once

// Inner loops of the centrality metrics. Every kernel has a serial reference
// and an OpenMP variant; tests hold the two within 1e-12 of each other and
// bench/ compares their speed.

#include <cstddef>
#include <span>
#include <vector>

#include "citenet/graph.hpp"

namespace citenet {

/// Compressed adjacency: neighbours of node v are
/// targets[offsets[v] .. offsets[v+1]).
struct Csr {
    std::vector<std::size_t> offsets{0};
    std::vector<std::size_t> targets;

    std::size_t size() const { return offsets.size() - 1; }
    std::span<const std::size_t> row(std::size_t v) const
    {
        return {targets.data() + offsets[v], offsets[v + 1] - offsets[v]};
    }
    std::size_t degree(std::size_t v) const { return offsets[v + 1] - offsets[v]; }
};

/// Successors (or neighbours, when undirected).
Csr out_csr(const Graph& graph);
/// Predecessors (or neighbours, when undirected).
Csr in_csr(const Graph& graph);

/// Neumaier-compensated running sum.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x)
    {
        const double t = sum + x;
        if ((sum >= 0 ? sum : -sum) >= (x >= 0 ? x : -x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + comp; }
};

namespace kernels {

/// Unnormalised Brandes betweenness summed over ordered (s, t) pairs of the
/// adjacency `out` (hop distances).
std::vector<double> betweenness_serial(const Csr& out);
/// Per-source contributions accumulate into a fixed number of chunks that are
/// merged in chunk order with compensated summation, so the result does not
/// depend on the thread count.
std::vector<double> betweenness_parallel(const Csr& out);

/// Reachable-set-scaled closeness from BFS over `in` (distances towards each
/// node): (r-1)/(n-1) * (r-1)/sum_d, where r counts nodes reaching v.
std::vector<double> closeness_serial(const Csr& in);
std::vector<double> closeness_parallel(const Csr& in);

struct PageRankResult {
    std::vector<double> rank;
    int iterations = 0;
    bool converged = false;
};

/// Power iteration of PR = (1-d)/N + d * sum PR(u)/L(u) over predecessors
/// `in`, with dangling mass spread uniformly; stops when the L1 change drops
/// below N * tolerance. Ranks are renormalised to sum to 1.
PageRankResult pagerank_serial(const Csr& in, std::span<const std::size_t> out_degree, double damping,
                               double tolerance, int max_iterations);
PageRankResult pagerank_parallel(const Csr& in, std::span<const std::size_t> out_degree, double damping,
                                 double tolerance, int max_iterations);

} // namespace kernels
} // namespace citenet
