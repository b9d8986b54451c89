#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mlsn/curves.hpp"
#include "mlsn/netcore.hpp"

namespace mlsn {

// p symmetric dyadic covariate matrices, stored per-dyad (i<j) row-major.
struct DyadicCovariates {
    int n = 0;
    int p = 0;
    std::vector<std::string> names;
    std::vector<bool> standardized;       // per covariate
    std::vector<double> x;                // dyad-major: x[dyad(i,j)*p + l]

    static std::size_t dyad_index(int i, int j, int n) {
        if (i > j) std::swap(i, j);
        return static_cast<std::size_t>(i) * n - static_cast<std::size_t>(i) * (i + 1) / 2 +
               (j - i - 1);
    }
    double at(int i, int j, int l) const { return x[dyad_index(i, j, n) * p + l]; }
    std::size_t dyads() const { return static_cast<std::size_t>(n) * (n - 1) / 2; }
};

// Song-level attribute table; emotion is an 8-share profile and vad a triple.
struct SongRecord {
    std::string song_id;
    std::string band;
    std::string album;
    double year = 0.0;
    double duration_s = 0.0;
    double bpm = 0.0;
    std::optional<std::vector<double>> emotion;  // 8 shares
    std::optional<std::vector<double>> vad;      // valence, arousal, dominance
};

// OR-rule kNN graph from a distance matrix: affinities w = 1/d, each node
// lists its k largest affinities, an edge appears when either endpoint lists
// the other.  Ties (including zero distances) break toward the lower index.
Layer knn_graph(const DistanceMatrix& d, int k);

MultilayerNetwork build_multilayer(const std::vector<DistanceMatrix>& dists, int k,
                                   const std::vector<std::string>& node_labels = {},
                                   const std::vector<std::string>& layer_labels = {});

// Six dyadic covariates: |dYear|, |dBPM|, |dDur|, same-album, emotion cosine
// similarity, Euclidean distance in standardized VAD space.  Nonbinary
// columns are standardized over the i<j dyad population; covariates with
// missing song attributes are dropped (names records what survived).
DyadicCovariates assemble_covariates(const std::vector<SongRecord>& songs,
                                     std::vector<std::string>* warnings = nullptr);

}  // namespace mlsn
