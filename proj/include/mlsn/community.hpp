#pragma once

#include <vector>

#include "mlsn/sampler.hpp"

namespace mlsn {

// Posterior co-clustering probabilities for one layer of an SB archive:
// entry (i,j) = fraction of stored draws with xi_i = xi_j.
struct CoClusterMatrix {
    int n = 0;
    std::vector<double> p;  // row-major, diagonal 1
    double at(int i, int j) const { return p[static_cast<std::size_t>(i) * n + j]; }
};

CoClusterMatrix coclustering(const ChainArchive& archive, int layer);

// Canonical relabeling to 0..C'-1 in first-occurrence order.
std::vector<int> canonical_partition(const std::vector<int>& labels);

// Dahl's method over the stored draws: the draw whose partition minimizes the
// squared loss against the co-clustering matrix; ties -> earliest draw.
std::vector<int> dahl_partition(const ChainArchive& archive, int layer);

// Adjusted Rand index by pair counting.
double ari(const std::vector<int>& p1, const std::vector<int>& p2);

// Per-layer ARI between Dahl partitions and an external partition.
std::vector<double> album_ari_table(const ChainArchive& archive,
                                    const std::vector<int>& album_partition);

// Posterior mean sociability effects, node-major (n x K), for downstream
// reporting.
std::vector<double> posterior_mean_delta(const ChainArchive& archive);

}  // namespace mlsn
