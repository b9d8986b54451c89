#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mlsn {

// Symmetric binary adjacency, zero diagonal, dense row-major storage.
class Layer {
public:
    Layer() = default;
    explicit Layer(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0) {}

    int n() const { return n_; }
    bool at(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j] != 0; }
    void set(int i, int j, bool v);

    int edge_count() const;
    std::vector<int> degrees() const;

private:
    int n_ = 0;
    std::vector<std::uint8_t> a_;
};

struct MultilayerNetwork {
    int n = 0;
    int K = 0;
    std::vector<Layer> layers;
    std::vector<std::string> node_labels;
    std::vector<std::string> layer_labels;

    void validate() const;  // throws on invariant violation
};

struct LayerStats {
    double density = 0.0;
    double transitivity = 0.0;
    double assortativity = 0.0;
    bool assortativity_defined = false;
    double mean_degree = 0.0;
    double sd_degree = 0.0;
    double mean_geodesic = 0.0;
    double diameter = 0.0;
    bool geodesic_defined = false;
    long unreachable_pairs = 0;  // connected-pairs-only convention
};

double density(const Layer& g);
double transitivity(const Layer& g);
// Pearson correlation of endpoint degrees over both edge orientations.
// defined=false (NaN value) when degree variance over endpoints is zero.
double degree_assortativity(const Layer& g, bool* defined = nullptr);
void degree_stats(const Layer& g, double* mean, double* sd);  // sample sd (n-1)
// BFS all-pairs; aggregation over connected pairs only.
void geodesic_stats(const Layer& g, double* mean_geo, double* diam, bool* defined,
                    long* unreachable_pairs = nullptr);

LayerStats layer_stats(const Layer& g);
LayerStats layer_stats(const MultilayerNetwork& net, int k);  // k is 0-based

}  // namespace mlsn
