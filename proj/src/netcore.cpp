#include "mlsn/netcore.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace mlsn {

void Layer::set(int i, int j, bool v) {
    if (i == j) return;
    a_[static_cast<std::size_t>(i) * n_ + j] = v ? 1 : 0;
    a_[static_cast<std::size_t>(j) * n_ + i] = v ? 1 : 0;
}

int Layer::edge_count() const {
    int m = 0;
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            if (at(i, j)) ++m;
    return m;
}

std::vector<int> Layer::degrees() const {
    std::vector<int> d(n_, 0);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            if (j != i && at(i, j)) ++d[i];
    return d;
}

void MultilayerNetwork::validate() const {
    if (static_cast<int>(layers.size()) != K) throw std::runtime_error("network: layer count mismatch");
    for (const Layer& g : layers) {
        if (g.n() != n) throw std::runtime_error("network: node count mismatch");
        for (int i = 0; i < n; ++i) {
            if (g.at(i, i)) throw std::runtime_error("network: self-loop");
            for (int j = i + 1; j < n; ++j)
                if (g.at(i, j) != g.at(j, i)) throw std::runtime_error("network: asymmetric layer");
        }
    }
}

double density(const Layer& g) {
    const int n = g.n();
    if (n <= 1) return 0.0;
    return 2.0 * g.edge_count() / (static_cast<double>(n) * (n - 1));
}

double transitivity(const Layer& g) {
    const int n = g.n();
    long triangles = 0;
    long triples = 0;
    const std::vector<int> deg = g.degrees();
    for (int i = 0; i < n; ++i) triples += static_cast<long>(deg[i]) * (deg[i] - 1) / 2;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (!g.at(i, j)) continue;
            for (int l = j + 1; l < n; ++l)
                if (g.at(i, l) && g.at(j, l)) ++triangles;
        }
    if (triples == 0) return 0.0;
    return 3.0 * triangles / static_cast<double>(triples);
}

double degree_assortativity(const Layer& g, bool* defined) {
    const int n = g.n();
    const std::vector<int> deg = g.degrees();
    // Both orientations of every edge.
    double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
    long m2 = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (j == i || !g.at(i, j)) continue;
            const double x = deg[i], y = deg[j];
            sx += x; sy += y; sxx += x * x; syy += y * y; sxy += x * y;
            ++m2;
        }
    if (m2 == 0) {
        if (defined) *defined = false;
        return std::numeric_limits<double>::quiet_NaN();
    }
    const double vx = sxx - sx * sx / m2;
    const double vy = syy - sy * sy / m2;
    const double cov = sxy - sx * sy / m2;
    if (vx <= 0.0 || vy <= 0.0) {
        if (defined) *defined = false;
        return std::numeric_limits<double>::quiet_NaN();
    }
    if (defined) *defined = true;
    return cov / std::sqrt(vx * vy);
}

void degree_stats(const Layer& g, double* mean, double* sd) {
    const int n = g.n();
    const std::vector<int> deg = g.degrees();
    double m = 0.0;
    for (int d : deg) m += d;
    m = (n > 0) ? m / n : 0.0;
    double ss = 0.0;
    for (int d : deg) ss += (d - m) * (d - m);
    *mean = m;
    *sd = (n > 1) ? std::sqrt(ss / (n - 1)) : 0.0;
}

void geodesic_stats(const Layer& g, double* mean_geo, double* diam, bool* defined,
                    long* unreachable_pairs) {
    const int n = g.n();
    long long dist_sum = 0;
    long pairs = 0;
    long unreachable = 0;
    int dmax = 0;
    std::vector<int> dist(n);
    std::deque<int> queue;
    for (int s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[s] = 0;
        queue.clear();
        queue.push_back(s);
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop_front();
            for (int v = 0; v < n; ++v) {
                if (v != u && g.at(u, v) && dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        for (int t = s + 1; t < n; ++t) {
            if (dist[t] > 0) {
                dist_sum += dist[t];
                ++pairs;
                if (dist[t] > dmax) dmax = dist[t];
            } else {
                ++unreachable;
            }
        }
    }
    if (unreachable_pairs) *unreachable_pairs = unreachable;
    if (pairs == 0) {
        *mean_geo = std::numeric_limits<double>::quiet_NaN();
        *diam = std::numeric_limits<double>::quiet_NaN();
        *defined = false;
        return;
    }
    *mean_geo = static_cast<double>(dist_sum) / pairs;
    *diam = dmax;
    *defined = true;
}

LayerStats layer_stats(const Layer& g) {
    LayerStats s;
    s.density = density(g);
    s.transitivity = transitivity(g);
    s.assortativity = degree_assortativity(g, &s.assortativity_defined);
    degree_stats(g, &s.mean_degree, &s.sd_degree);
    geodesic_stats(g, &s.mean_geodesic, &s.diameter, &s.geodesic_defined, &s.unreachable_pairs);
    return s;
}

LayerStats layer_stats(const MultilayerNetwork& net, int k) {
    if (k < 0 || k >= net.K) throw std::out_of_range("layer_stats: layer index");
    return layer_stats(net.layers[k]);
}

}  // namespace mlsn
