#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "citenet/community.hpp"

namespace citenet {

namespace {

double xlogx_ratio(double e, double nr, double ns)
{
    return e > 0.0 ? e * std::log(e / (nr * ns)) : 0.0;
}

double h(double x)
{
    return x > 0.0 ? (1.0 + x) * std::log1p(x) - x * std::log(x) : 0.0;
}

double prior_terms(double edges, double nodes, double blocks)
{
    const double partition = nodes * std::log(blocks);
    if (edges <= 0.0) {
        return partition;
    }
    return edges * h(blocks * (blocks + 1.0) / (2.0 * edges)) + partition;
}

/// Block-level edge counts: e[r][s] ordered, with e[r][r] twice the internal
/// weight.
struct Blocks {
    std::vector<double> size;
    std::vector<std::map<std::size_t, double>> e;
    std::size_t count = 0;
};

Blocks block_counts(const UndirectedNetwork& net, std::span<const std::size_t> labels, std::size_t label_count)
{
    Blocks b;
    b.size.assign(label_count, 0.0);
    b.e.assign(label_count, {});
    for (std::size_t u = 0; u < net.n; ++u) {
        b.size[labels[u]] += 1.0;
        for (const auto& [v, w] : net.adj[u]) {
            b.e[labels[u]][labels[v]] += w;
        }
    }
    b.count = static_cast<std::size_t>(std::count_if(b.size.begin(), b.size.end(), [](double s) { return s > 0.0; }));
    return b;
}

double entropy_term(const Blocks& b, double edges)
{
    double sum = 0.0;
    for (std::size_t r = 0; r < b.e.size(); ++r) {
        for (const auto& [s, e] : b.e[r]) {
            sum += xlogx_ratio(e, b.size[r], b.size[s]);
        }
    }
    return edges - 0.5 * sum;
}

std::vector<std::size_t> compact(std::span<const std::size_t> labels, std::size_t& count)
{
    std::map<std::size_t, std::size_t> rename;
    std::vector<std::size_t> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, _] = rename.emplace(labels[i], rename.size());
        out[i] = it->second;
    }
    count = rename.size();
    return out;
}

double total_dl(const UndirectedNetwork& net, std::span<const std::size_t> labels, std::size_t label_count)
{
    const Blocks b = block_counts(net, labels, label_count);
    return entropy_term(b, net.total_weight) +
           prior_terms(net.total_weight, static_cast<double>(net.n), static_cast<double>(b.count));
}

/// Change in the sum of e_rs ln(e_rs / n_r n_s) when blocks r and s merge.
double merge_delta(const Blocks& b, std::size_t r, std::size_t s)
{
    const double nr = b.size[r], ns = b.size[s], nm = nr + ns;
    auto get = [&](std::size_t a, std::size_t c) {
        auto it = b.e[a].find(c);
        return it == b.e[a].end() ? 0.0 : it->second;
    };
    double delta = 0.0;
    std::map<std::size_t, std::pair<double, double>> others;
    for (const auto& [t, e] : b.e[r]) {
        if (t != r && t != s) {
            others[t].first = e;
        }
    }
    for (const auto& [t, e] : b.e[s]) {
        if (t != r && t != s) {
            others[t].second = e;
        }
    }
    for (const auto& [t, pair] : others) {
        const double nt = b.size[t];
        delta += 2.0 * (xlogx_ratio(pair.first + pair.second, nm, nt) - xlogx_ratio(pair.first, nr, nt) -
                        xlogx_ratio(pair.second, ns, nt));
    }
    const double err = get(r, r), ess = get(s, s), ers = get(r, s);
    delta += xlogx_ratio(err + ess + 2.0 * ers, nm, nm) - xlogx_ratio(err, nr, nr) - xlogx_ratio(ess, ns, ns) -
             2.0 * xlogx_ratio(ers, nr, ns);
    return delta;
}

void merge_into(Blocks& b, std::size_t r, std::size_t s)
{
    // Fold s into r.
    for (const auto& [t, e] : b.e[s]) {
        if (t == s) {
            b.e[r][r] += e;
        } else if (t == r) {
            b.e[r][r] += 2.0 * e;
        } else {
            b.e[r][t] += e;
            b.e[t][r] += e;
            b.e[t].erase(s);
        }
    }
    b.e[r].erase(s);
    b.e[s].clear();
    b.size[r] += b.size[s];
    b.size[s] = 0.0;
    --b.count;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x)
{
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

/// Agglomerates from singletons down to one block, returning the labelling
/// with the lowest description length seen.
std::vector<std::size_t> greedy_merge(const UndirectedNetwork& net)
{
    const std::size_t n = net.n;
    std::vector<std::size_t> identity(n);
    std::iota(identity.begin(), identity.end(), std::size_t{0});
    Blocks b = block_counts(net, identity, n);
    const double edges = net.total_weight;
    const double nd = static_cast<double>(n);

    double entropy = entropy_term(b, edges);
    double best_dl = entropy + prior_terms(edges, nd, static_cast<double>(b.count));
    std::size_t best_step = 0;
    std::vector<std::pair<std::size_t, std::size_t>> merges;

    std::vector<std::size_t> alive = identity;
    while (b.count > 1) {
        std::size_t br = SIZE_MAX, bs = SIZE_MAX;
        double best_delta = 0.0;
        auto consider = [&](std::size_t r, std::size_t s) {
            const double d = merge_delta(b, r, s);
            // Larger sum means lower entropy term.
            if (br == SIZE_MAX || d > best_delta + 1e-12) {
                br = r;
                bs = s;
                best_delta = d;
            }
        };
        for (std::size_t r : alive) {
            for (const auto& [s, e] : b.e[r]) {
                if (s > r) {
                    consider(r, s);
                }
            }
        }
        // Also allow joining two blocks with no edge between them.
        for (std::size_t i = 0; i + 1 < alive.size(); ++i) {
            const std::size_t r = alive[i], s = alive[i + 1];
            if (!b.e[r].count(s)) {
                consider(r, s);
                break;
            }
        }
        if (br == SIZE_MAX) {
            consider(alive[0], alive[1]);
        }
        merge_into(b, br, bs);
        alive.erase(std::find(alive.begin(), alive.end(), bs));
        merges.emplace_back(br, bs);
        entropy -= 0.5 * best_delta;
        const double dl = entropy + prior_terms(edges, nd, static_cast<double>(b.count));
        if (dl < best_dl - 1e-9) {
            best_dl = dl;
            best_step = merges.size();
        }
    }

    std::vector<std::size_t> parent = identity;
    for (std::size_t i = 0; i < best_step; ++i) {
        parent[merges[i].second] = merges[i].first;
    }
    std::vector<std::size_t> labels(n);
    for (std::size_t u = 0; u < n; ++u) {
        labels[u] = find_root(parent, u);
    }
    return labels;
}

std::vector<std::size_t> refine(const UndirectedNetwork& net, std::vector<std::size_t> labels, SeededRng& rng)
{
    std::size_t count = 0;
    labels = compact(labels, count);
    double current = total_dl(net, labels, count);
    std::vector<std::size_t> order(net.n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (int sweep = 0; sweep < 10; ++sweep) {
        rng.shuffle(order);
        bool moved = false;
        for (std::size_t u : order) {
            std::vector<std::size_t> targets;
            for (const auto& [v, w] : net.adj[u]) {
                if (labels[v] != labels[u]) {
                    targets.push_back(labels[v]);
                }
            }
            std::sort(targets.begin(), targets.end());
            targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
            const std::size_t home = labels[u];
            std::size_t best = home;
            double best_dl = current;
            for (std::size_t t : targets) {
                labels[u] = t;
                const double dl = total_dl(net, labels, count);
                if (dl < best_dl - 1e-9) {
                    best_dl = dl;
                    best = t;
                }
            }
            labels[u] = best;
            if (best != home) {
                current = best_dl;
                moved = true;
            }
        }
        if (!moved) {
            break;
        }
    }
    return compact(labels, count);
}

} // namespace

SbmScore sbm_description_length(const UndirectedNetwork& net, std::span<const std::size_t> partition)
{
    SbmScore score;
    if (net.n == 0) {
        return score;
    }
    std::size_t count = 0;
    const auto labels = compact(partition, count);
    const Blocks b = block_counts(net, labels, count);
    const double entropy = entropy_term(b, net.total_weight);
    score.log_likelihood = -entropy;
    score.description_length =
        entropy + prior_terms(net.total_weight, static_cast<double>(net.n), static_cast<double>(b.count));
    return score;
}

std::vector<std::size_t> sbm_partition(const UndirectedNetwork& net, std::uint64_t seed, int restarts)
{
    if (net.n == 0) {
        return {};
    }
    const auto start = greedy_merge(net);
    SeededRng rng(seed);
    std::vector<std::size_t> best;
    double best_dl = 0.0;
    for (int r = 0; r < std::max(1, restarts); ++r) {
        auto labels = refine(net, start, rng);
        const double dl = sbm_description_length(net, labels).description_length;
        if (best.empty() || dl < best_dl - 1e-9) {
            best = std::move(labels);
            best_dl = dl;
        }
    }
    return best;
}

} // namespace citenet
