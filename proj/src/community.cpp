#include "mlsn/community.hpp"

#include <limits>
#include <map>
#include <stdexcept>

namespace mlsn {

namespace {

std::vector<int> draw_labels(const ModelState& s, int layer) {
    std::vector<int> out(s.n);
    for (int i = 0; i < s.n; ++i) out[i] = s.labels[static_cast<std::size_t>(i) * s.K + layer];
    return out;
}

}  // namespace

CoClusterMatrix coclustering(const ChainArchive& archive, int layer) {
    if (!has_blocks(archive.config.variant))
        throw std::invalid_argument("coclustering: archive has no block labels");
    if (archive.draws.empty()) throw std::invalid_argument("coclustering: empty archive");
    const int n = archive.n;
    CoClusterMatrix cc;
    cc.n = n;
    cc.p.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (const ModelState& s : archive.draws) {
        const std::vector<int> l = draw_labels(s, layer);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (l[i] == l[j]) cc.p[static_cast<std::size_t>(i) * n + j] += 1.0;
    }
    const double inv = 1.0 / archive.draws.size();
    for (double& v : cc.p) v *= inv;
    return cc;
}

std::vector<int> canonical_partition(const std::vector<int>& labels) {
    std::map<int, int> remap;
    std::vector<int> out(labels.size());
    int next = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto it = remap.find(labels[i]);
        if (it == remap.end()) it = remap.insert({labels[i], next++}).first;
        out[i] = it->second;
    }
    return out;
}

std::vector<int> dahl_partition(const ChainArchive& archive, int layer) {
    const CoClusterMatrix cc = coclustering(archive, layer);
    const int n = cc.n;
    double best_loss = std::numeric_limits<double>::infinity();
    std::vector<int> best;
    for (const ModelState& s : archive.draws) {
        const std::vector<int> l = draw_labels(s, layer);
        double loss = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double d = (l[i] == l[j] ? 1.0 : 0.0) - cc.at(i, j);
                loss += d * d;
            }
        if (loss < best_loss) {
            best_loss = loss;
            best = l;
        }
    }
    return canonical_partition(best);
}

double ari(const std::vector<int>& p1, const std::vector<int>& p2) {
    if (p1.size() != p2.size()) throw std::invalid_argument("ari: length mismatch");
    const std::size_t n = p1.size();
    if (n < 2) throw std::invalid_argument("ari: need n >= 2");
    std::map<std::pair<int, int>, long> table;
    std::map<int, long> rows, cols;
    for (std::size_t i = 0; i < n; ++i) {
        ++table[{p1[i], p2[i]}];
        ++rows[p1[i]];
        ++cols[p2[i]];
    }
    auto choose2 = [](long m) { return 0.5 * m * (m - 1); };
    double sum_nij = 0.0, sum_a = 0.0, sum_b = 0.0;
    for (const auto& [key, c] : table) sum_nij += choose2(c);
    for (const auto& [key, c] : rows) sum_a += choose2(c);
    for (const auto& [key, c] : cols) sum_b += choose2(c);
    const double total = choose2(static_cast<long>(n));
    const double expected = sum_a * sum_b / total;
    const double max_index = 0.5 * (sum_a + sum_b);
    if (max_index == expected) return 0.0;  // both trivial partitions
    return (sum_nij - expected) / (max_index - expected);
}

std::vector<double> album_ari_table(const ChainArchive& archive,
                                    const std::vector<int>& album_partition) {
    std::vector<double> out;
    for (int k = 0; k < archive.K; ++k)
        out.push_back(ari(dahl_partition(archive, k), album_partition));
    return out;
}

std::vector<double> posterior_mean_delta(const ChainArchive& archive) {
    if (archive.draws.empty()) throw std::invalid_argument("posterior_mean_delta: empty archive");
    std::vector<double> mean(archive.draws.front().delta.size(), 0.0);
    for (const ModelState& s : archive.draws)
        for (std::size_t q = 0; q < mean.size(); ++q) mean[q] += s.delta[q];
    for (double& v : mean) v /= archive.draws.size();
    return mean;
}

}  // namespace mlsn
