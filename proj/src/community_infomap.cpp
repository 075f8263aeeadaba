#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "citenet/community.hpp"
#include "citenet/error.hpp"

namespace citenet {

namespace {

double plogp(double p)
{
    return p > 0.0 ? p * std::log2(p) : 0.0;
}

/// Directed flow network: node visit rates plus link flows between distinct
/// nodes. Supernodes of later levels keep the same shape.
struct FlowGraph {
    std::size_t n = 0;
    std::vector<double> visit;
    std::vector<std::vector<std::pair<std::size_t, double>>> out;
    std::vector<std::vector<std::pair<std::size_t, double>>> in;
    std::vector<double> out_total;
};

std::vector<double> visit_rates(const UndirectedNetwork& net, double teleport)
{
    const std::size_t n = net.n;
    const double nd = static_cast<double>(n);
    std::vector<double> p(n, 1.0 / nd), next(n);
    for (int it = 0; it < 10000; ++it) {
        double dangling = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            if (net.strength[v] <= 0.0) {
                dangling += p[v];
            }
        }
        const double base = (teleport + (1.0 - teleport) * dangling) / nd;
        std::fill(next.begin(), next.end(), base);
        for (std::size_t u = 0; u < n; ++u) {
            if (net.strength[u] <= 0.0) {
                continue;
            }
            const double share = (1.0 - teleport) * p[u] / net.strength[u];
            for (const auto& [v, w] : net.adj[u]) {
                next[v] += share * w;
            }
        }
        double sum = 0.0, err = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            sum += next[v];
        }
        for (std::size_t v = 0; v < n; ++v) {
            next[v] /= sum;
            err += std::abs(next[v] - p[v]);
        }
        p.swap(next);
        if (err < 1e-15 * nd) {
            break;
        }
    }
    return p;
}

FlowGraph flow_graph(const UndirectedNetwork& net, double teleport)
{
    FlowGraph g;
    g.n = net.n;
    g.visit = visit_rates(net, teleport);
    g.out.assign(net.n, {});
    g.in.assign(net.n, {});
    g.out_total.assign(net.n, 0.0);
    for (std::size_t u = 0; u < net.n; ++u) {
        if (net.strength[u] <= 0.0) {
            continue;
        }
        for (const auto& [v, w] : net.adj[u]) {
            const double f = g.visit[u] * (1.0 - teleport) * w / net.strength[u];
            g.out[u].emplace_back(v, f);
            g.in[v].emplace_back(u, f);
            g.out_total[u] += f;
        }
    }
    return g;
}

struct ModuleState {
    std::vector<double> exit;
    std::vector<double> flow;
    double sum_exit = 0.0;
    double sum_plogp_exit = 0.0;
    double sum_plogp_exit_flow = 0.0;

    double codelength(double node_term) const
    {
        return plogp(sum_exit) - 2.0 * sum_plogp_exit - node_term + sum_plogp_exit_flow;
    }

    void apply(std::size_t m, double new_exit, double new_flow)
    {
        sum_exit += new_exit - exit[m];
        sum_plogp_exit += plogp(new_exit) - plogp(exit[m]);
        sum_plogp_exit_flow += plogp(new_exit + new_flow) - plogp(exit[m] + flow[m]);
        exit[m] = new_exit;
        flow[m] = new_flow;
    }
};

bool infomap_moves(const FlowGraph& g, std::vector<std::size_t>& module, SeededRng& rng, double node_term)
{
    const std::size_t n = g.n;
    ModuleState st;
    st.exit = g.out_total;
    st.flow = g.visit;
    for (std::size_t i = 0; i < n; ++i) {
        module[i] = i;
        st.sum_exit += st.exit[i];
        st.sum_plogp_exit += plogp(st.exit[i]);
        st.sum_plogp_exit_flow += plogp(st.exit[i] + st.flow[i]);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);

    std::vector<double> out_to(n, 0.0), in_from(n, 0.0);
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> touched;
    bool any_move = false;
    for (int sweep = 0; sweep < 100; ++sweep) {
        bool moved = false;
        for (std::size_t a : order) {
            touched.clear();
            const std::size_t home = module[a];
            auto touch = [&](std::size_t m) {
                if (!seen[m]) {
                    seen[m] = 1;
                    touched.push_back(m);
                }
            };
            touch(home);
            for (const auto& [b, f] : g.out[a]) {
                touch(module[b]);
                out_to[module[b]] += f;
            }
            for (const auto& [b, f] : g.in[a]) {
                touch(module[b]);
                in_from[module[b]] += f;
            }
            std::sort(touched.begin(), touched.end());

            const double out_a = g.out_total[a];
            const double p_a = g.visit[a];
            const double home_exit = st.exit[home] - (out_a - out_to[home]) + in_from[home];
            const double home_flow = st.flow[home] - p_a;
            const double old_home_exit = st.exit[home], old_home_flow = st.flow[home];
            const double current = st.codelength(node_term);

            st.apply(home, home_exit, home_flow);
            const double base = st.codelength(node_term);

            std::size_t best = home;
            double best_len = current;
            for (std::size_t m : touched) {
                if (m == home) {
                    continue;
                }
                const double ex = st.exit[m] + (out_a - out_to[m]) - in_from[m];
                const double fl = st.flow[m] + p_a;
                const double len = base + (plogp(st.sum_exit + ex - st.exit[m]) - plogp(st.sum_exit)) -
                                   2.0 * (plogp(ex) - plogp(st.exit[m])) +
                                   (plogp(ex + fl) - plogp(st.exit[m] + st.flow[m]));
                if (len < best_len - 1e-12) {
                    best = m;
                    best_len = len;
                }
            }
            if (best == home) {
                st.apply(home, old_home_exit, old_home_flow);
            } else {
                st.apply(best, st.exit[best] + (out_a - out_to[best]) - in_from[best], st.flow[best] + p_a);
                module[a] = best;
                moved = true;
                any_move = true;
            }
            for (std::size_t m : touched) {
                seen[m] = 0;
                out_to[m] = 0.0;
                in_from[m] = 0.0;
            }
        }
        if (!moved) {
            break;
        }
    }
    return any_move;
}

FlowGraph aggregate_flow(const FlowGraph& g, std::vector<std::size_t>& module)
{
    std::vector<std::size_t> rename(g.n, SIZE_MAX);
    std::size_t count = 0;
    for (std::size_t i = 0; i < g.n; ++i) {
        if (rename[module[i]] == SIZE_MAX) {
            rename[module[i]] = count++;
        }
    }
    for (auto& m : module) {
        m = rename[m];
    }
    FlowGraph agg;
    agg.n = count;
    agg.visit.assign(count, 0.0);
    agg.out.assign(count, {});
    agg.in.assign(count, {});
    agg.out_total.assign(count, 0.0);
    std::vector<std::map<std::size_t, double>> rows(count);
    for (std::size_t u = 0; u < g.n; ++u) {
        agg.visit[module[u]] += g.visit[u];
        for (const auto& [v, f] : g.out[u]) {
            if (module[u] != module[v]) {
                rows[module[u]][module[v]] += f;
            }
        }
    }
    for (std::size_t a = 0; a < count; ++a) {
        for (const auto& [b, f] : rows[a]) {
            agg.out[a].emplace_back(b, f);
            agg.in[b].emplace_back(a, f);
            agg.out_total[a] += f;
        }
    }
    return agg;
}

double codelength_of(const FlowGraph& g, std::span<const std::size_t> partition)
{
    std::map<std::size_t, double> exit, flow;
    for (std::size_t u = 0; u < g.n; ++u) {
        flow[partition[u]] += g.visit[u];
        exit[partition[u]];
        for (const auto& [v, f] : g.out[u]) {
            if (partition[u] != partition[v]) {
                exit[partition[u]] += f;
            }
        }
    }
    double sum_exit = 0.0, term_exit = 0.0, term_both = 0.0, term_nodes = 0.0;
    for (const auto& [m, q] : exit) {
        sum_exit += q;
        term_exit += plogp(q);
        term_both += plogp(q + flow[m]);
    }
    for (double p : g.visit) {
        term_nodes += plogp(p);
    }
    return plogp(sum_exit) - 2.0 * term_exit - term_nodes + term_both;
}

void check_teleport(double teleport)
{
    if (!(teleport > 0.0 && teleport < 1.0)) {
        throw ParameterError("teleportation probability must be in (0,1)");
    }
}

} // namespace

double map_equation(const UndirectedNetwork& net, std::span<const std::size_t> partition, double teleport)
{
    check_teleport(teleport);
    if (net.n == 0) {
        return 0.0;
    }
    return codelength_of(flow_graph(net, teleport), partition);
}

std::vector<std::size_t> infomap_partition(const UndirectedNetwork& net, std::uint64_t seed, double teleport)
{
    check_teleport(teleport);
    std::vector<std::size_t> membership(net.n);
    std::iota(membership.begin(), membership.end(), std::size_t{0});
    if (net.n == 0) {
        return membership;
    }
    const FlowGraph base = flow_graph(net, teleport);
    double node_term = 0.0;
    for (double p : base.visit) {
        node_term += plogp(p);
    }

    SeededRng rng(seed);
    FlowGraph level = base;
    std::vector<std::size_t> module;
    while (true) {
        module.assign(level.n, 0);
        if (!infomap_moves(level, module, rng, node_term)) {
            break;
        }
        FlowGraph next = aggregate_flow(level, module);
        for (auto& m : membership) {
            m = module[m];
        }
        if (next.n == level.n) {
            break;
        }
        level = std::move(next);
    }

    const std::vector<std::size_t> single(net.n, 0);
    if (codelength_of(base, single) < codelength_of(base, membership) - 1e-12) {
        return single;
    }
    return membership;
}

} // namespace citenet
