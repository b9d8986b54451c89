#include "mlsn/community_detect.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace mlsn {

namespace {

struct WeightedGraph {
    int n = 0;
    std::vector<std::vector<std::pair<int, double>>> adj;  // no self loops here
    std::vector<double> self;                              // self-loop weight
    double total = 0.0;                                    // sum of all weights, 2m
};

// One pass of local moving; returns the labels (compacted) and whether any
// node moved.
bool local_moving(const WeightedGraph& g, std::vector<int>& comm) {
    const int n = g.n;
    std::vector<double> strength(n, 0.0);
    for (int i = 0; i < n; ++i) {
        strength[i] = g.self[i];
        for (auto [j, w] : g.adj[i]) strength[i] += w;
    }
    std::vector<double> comm_tot(n, 0.0);
    for (int i = 0; i < n; ++i) comm_tot[comm[i]] += strength[i];

    const double two_m = g.total;
    if (two_m <= 0.0) return false;

    bool any_move = false;
    bool improved = true;
    while (improved) {
        improved = false;
        for (int i = 0; i < n; ++i) {
            const int old_c = comm[i];
            std::map<int, double> links;  // weight from i into each community
            links[old_c] += 0.0;
            for (auto [j, w] : g.adj[i]) links[comm[j]] += w;
            comm_tot[old_c] -= strength[i];

            int best_c = old_c;
            double best_gain = links.count(old_c) ? links[old_c] - comm_tot[old_c] * strength[i] / two_m
                                                  : -comm_tot[old_c] * strength[i] / two_m;
            for (const auto& [c, w] : links) {
                const double gain = w - comm_tot[c] * strength[i] / two_m;
                if (gain > best_gain + 1e-12 || (std::abs(gain - best_gain) <= 1e-12 && c < best_c)) {
                    best_gain = gain;
                    best_c = c;
                }
            }
            comm_tot[best_c] += strength[i];
            if (best_c != old_c) {
                comm[i] = best_c;
                improved = true;
                any_move = true;
            }
        }
    }
    return any_move;
}

WeightedGraph aggregate(const WeightedGraph& g, const std::vector<int>& comm, int n_comm) {
    WeightedGraph h;
    h.n = n_comm;
    h.adj.assign(n_comm, {});
    h.self.assign(n_comm, 0.0);
    h.total = g.total;
    std::vector<std::map<int, double>> acc(n_comm);
    for (int i = 0; i < g.n; ++i) {
        h.self[comm[i]] += g.self[i];
        for (auto [j, w] : g.adj[i]) {
            if (comm[i] == comm[j])
                h.self[comm[i]] += w;  // both directions land here, stays doubled
            else
                acc[comm[i]][comm[j]] += w;
        }
    }
    // self accumulated each internal edge twice (i->j and j->i); keep as is,
    // the modularity bookkeeping uses strengths which double-count loops the
    // same way the input graph's 2m does.
    for (int c = 0; c < n_comm; ++c)
        for (const auto& [d, w] : acc[c]) h.adj[c].push_back({d, w});
    return h;
}

int compact_labels(std::vector<int>& comm) {
    std::map<int, int> remap;
    for (int c : comm)
        if (!remap.count(c)) remap[c] = 0;
    int next = 0;
    for (auto& [c, id] : remap) id = next++;
    for (int& c : comm) c = remap[c];
    return next;
}

}  // namespace

std::vector<int> louvain_communities(const Layer& g) {
    const int n = g.n();
    WeightedGraph wg;
    wg.n = n;
    wg.adj.assign(n, {});
    wg.self.assign(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && g.at(i, j)) {
                wg.adj[i].push_back({j, 1.0});
                wg.total += 1.0;
            }
    if (wg.total <= 0.0) {
        std::vector<int> singleton(n);
        std::iota(singleton.begin(), singleton.end(), 0);
        return singleton;
    }

    std::vector<int> final_labels(n);
    std::iota(final_labels.begin(), final_labels.end(), 0);

    WeightedGraph cur = wg;
    while (true) {
        std::vector<int> comm(cur.n);
        std::iota(comm.begin(), comm.end(), 0);
        const bool moved = local_moving(cur, comm);
        const int n_comm = compact_labels(comm);
        for (int& l : final_labels) l = comm[l];
        if (!moved || n_comm == cur.n) break;
        cur = aggregate(cur, comm, n_comm);
    }
    compact_labels(final_labels);
    return final_labels;
}

int community_count(const std::vector<int>& labels) {
    return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

int choose_block_count(const MultilayerNetwork& net) {
    int c = 1;
    for (const Layer& g : net.layers)
        c = std::max(c, community_count(louvain_communities(g)));
    return c;
}

}  // namespace mlsn
