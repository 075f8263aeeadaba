#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "citenet/community.hpp"
#include "citenet/error.hpp"

namespace citenet {

namespace {

struct KMeansResult {
    std::vector<std::size_t> labels;
    double inertia = std::numeric_limits<double>::infinity();
};

double sq_dist(const Eigen::MatrixXd& x, Eigen::Index row, const Eigen::MatrixXd& c, Eigen::Index center)
{
    return (x.row(row) - c.row(center)).squaredNorm();
}

KMeansResult kmeans_once(const Eigen::MatrixXd& x, std::size_t k, SeededRng& rng)
{
    const Eigen::Index n = x.rows();
    const auto kk = static_cast<Eigen::Index>(k);
    Eigen::MatrixXd centers(kk, x.cols());

    // k-means++ seeding
    centers.row(0) = x.row(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n))));
    std::vector<double> d2(static_cast<std::size_t>(n));
    for (Eigen::Index c = 1; c < kk; ++c) {
        double total = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (Eigen::Index j = 0; j < c; ++j) {
                best = std::min(best, sq_dist(x, i, centers, j));
            }
            d2[static_cast<std::size_t>(i)] = best;
            total += best;
        }
        Eigen::Index pick = n - 1;
        if (total > 0.0) {
            double target = rng.uniform() * total;
            for (Eigen::Index i = 0; i < n; ++i) {
                target -= d2[static_cast<std::size_t>(i)];
                if (target < 0.0) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
        }
        centers.row(c) = x.row(pick);
    }

    KMeansResult r;
    r.labels.assign(static_cast<std::size_t>(n), 0);
    for (int iter = 0; iter < 300; ++iter) {
        bool changed = iter == 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            std::size_t best = 0;
            double best_d = sq_dist(x, i, centers, 0);
            for (Eigen::Index j = 1; j < kk; ++j) {
                const double d = sq_dist(x, i, centers, j);
                if (d < best_d) {
                    best_d = d;
                    best = static_cast<std::size_t>(j);
                }
            }
            if (r.labels[static_cast<std::size_t>(i)] != best) {
                r.labels[static_cast<std::size_t>(i)] = best;
                changed = true;
            }
        }
        if (!changed) {
            break;
        }
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(kk, x.cols());
        std::vector<std::size_t> counts(k, 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto l = r.labels[static_cast<std::size_t>(i)];
            sums.row(static_cast<Eigen::Index>(l)) += x.row(i);
            ++counts[l];
        }
        for (Eigen::Index j = 0; j < kk; ++j) {
            if (counts[static_cast<std::size_t>(j)] > 0) {
                centers.row(j) = sums.row(j) / static_cast<double>(counts[static_cast<std::size_t>(j)]);
            }
        }
    }
    r.inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        r.inertia += sq_dist(x, i, centers, static_cast<Eigen::Index>(r.labels[static_cast<std::size_t>(i)]));
    }
    return r;
}

} // namespace

std::vector<std::size_t> spectral_partition(const UndirectedNetwork& net, std::size_t k, std::uint64_t seed)
{
    const std::size_t n = net.n;
    if (k == 0 || k > n) {
        throw ParameterError(fmt::format("k must be between 1 and the node count {} (got {})", n, k));
    }
    const auto nn = static_cast<Eigen::Index>(n);
    Eigen::VectorXd inv_sqrt(nn);
    for (std::size_t i = 0; i < n; ++i) {
        inv_sqrt(static_cast<Eigen::Index>(i)) = net.strength[i] > 0.0 ? 1.0 / std::sqrt(net.strength[i]) : 0.0;
    }
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(nn, nn);
    for (std::size_t u = 0; u < n; ++u) {
        const auto iu = static_cast<Eigen::Index>(u);
        lap(iu, iu) = net.strength[u] > 0.0 ? 1.0 : 0.0;
        for (const auto& [v, w] : net.adj[u]) {
            const auto iv = static_cast<Eigen::Index>(v);
            lap(iu, iv) -= w * inv_sqrt(iu) * inv_sqrt(iv);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
    if (solver.info() != Eigen::Success) {
        throw NumericError("eigen-decomposition of the normalised Laplacian failed");
    }
    const auto kk = static_cast<Eigen::Index>(k);
    Eigen::MatrixXd embed = solver.eigenvectors().leftCols(kk);
    for (Eigen::Index i = 0; i < nn; ++i) {
        const double norm = embed.row(i).norm();
        if (net.strength[static_cast<std::size_t>(i)] <= 0.0 || norm == 0.0) {
            embed.row(i).setZero();
        } else {
            embed.row(i) /= norm;
        }
    }
    if (!embed.allFinite()) {
        throw NumericError("spectral embedding contains non-finite values");
    }

    SeededRng rng(seed);
    KMeansResult best;
    for (int restart = 0; restart < 10; ++restart) {
        KMeansResult r = kmeans_once(embed, k, rng);
        if (r.inertia < best.inertia - 1e-12) {
            best = std::move(r);
        }
    }
    return best.labels;
}

} // namespace citenet
