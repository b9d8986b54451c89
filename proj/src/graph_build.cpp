#include "mlsn/graph_build.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mlsn {

Layer knn_graph(const DistanceMatrix& dm, int k) {
    const int n = dm.n;
    if (k < 1 || k >= n) throw std::invalid_argument("knn_graph: need 1 <= k < n");
    Layer g(n);
    std::vector<int> order;
    for (int i = 0; i < n; ++i) {
        order.clear();
        for (int j = 0; j < n; ++j)
            if (j != i) order.push_back(j);
        // Affinity 1/d descending; d == 0 ranks first; ties toward lower index.
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            const double da = dm.at(i, a), db = dm.at(i, b);
            if (da != db) return da < db;
            return a < b;
        });
        for (int r = 0; r < k; ++r) g.set(i, order[r], true);
    }
    return g;
}

MultilayerNetwork build_multilayer(const std::vector<DistanceMatrix>& dists, int k,
                                   const std::vector<std::string>& node_labels,
                                   const std::vector<std::string>& layer_labels) {
    if (dists.empty()) throw std::invalid_argument("build_multilayer: no distance matrices");
    MultilayerNetwork net;
    net.n = dists[0].n;
    net.K = static_cast<int>(dists.size());
    for (const DistanceMatrix& d : dists) {
        if (d.n != net.n) throw std::invalid_argument("build_multilayer: size mismatch");
        net.layers.push_back(knn_graph(d, k));
    }
    net.node_labels = node_labels;
    if (net.node_labels.empty())
        for (int i = 0; i < net.n; ++i) net.node_labels.push_back("node_" + std::to_string(i + 1));
    net.layer_labels = layer_labels;
    if (net.layer_labels.empty())
        for (int q = 0; q < net.K; ++q) net.layer_labels.push_back("layer_" + std::to_string(q + 1));
    return net;
}

namespace {

void standardize_dyads(std::vector<double>& col) {
    const std::size_t m = col.size();
    double mean = 0.0;
    for (double v : col) mean += v;
    mean /= m;
    double ss = 0.0;
    for (double v : col) ss += (v - mean) * (v - mean);
    const double sd = (m > 1) ? std::sqrt(ss / (m - 1)) : 0.0;
    if (sd <= 0.0) throw std::runtime_error("covariate column has zero dyadic variance");
    for (double& v : col) v = (v - mean) / sd;
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    double aa = 0.0, bb = 0.0, ab = 0.0;
    for (std::size_t l = 0; l < a.size(); ++l) {
        aa += a[l] * a[l];
        bb += b[l] * b[l];
        ab += a[l] * b[l];
    }
    if (aa <= 0.0 || bb <= 0.0) return 0.0;
    return ab / std::sqrt(aa * bb);
}

}  // namespace

DyadicCovariates assemble_covariates(const std::vector<SongRecord>& songs,
                                     std::vector<std::string>* warnings) {
    const int n = static_cast<int>(songs.size());
    if (n < 2) throw std::invalid_argument("assemble_covariates: need at least 2 songs");
    const std::size_t ndyads = static_cast<std::size_t>(n) * (n - 1) / 2;

    const bool have_year = std::all_of(songs.begin(), songs.end(),
                                       [](const SongRecord& s) { return s.year > 0.0; });
    const bool have_bpm = std::all_of(songs.begin(), songs.end(),
                                      [](const SongRecord& s) { return s.bpm > 0.0; });
    const bool have_dur = std::all_of(songs.begin(), songs.end(),
                                      [](const SongRecord& s) { return s.duration_s > 0.0; });
    const bool have_album = std::all_of(songs.begin(), songs.end(),
                                        [](const SongRecord& s) { return !s.album.empty(); });
    const bool have_emo = std::all_of(songs.begin(), songs.end(), [](const SongRecord& s) {
        return s.emotion.has_value() && s.emotion->size() == 8;
    });
    const bool have_vad = std::all_of(songs.begin(), songs.end(), [](const SongRecord& s) {
        return s.vad.has_value() && s.vad->size() == 3;
    });
    auto warn = [&](const std::string& msg) {
        if (warnings) warnings->push_back(msg);
    };

    // Standardized VAD per node before dyadic distances are taken.
    std::vector<std::vector<double>> vad_std;
    if (have_vad) {
        vad_std.assign(n, std::vector<double>(3, 0.0));
        for (int c = 0; c < 3; ++c) {
            double mean = 0.0;
            for (const SongRecord& s : songs) mean += (*s.vad)[c];
            mean /= n;
            double ss = 0.0;
            for (const SongRecord& s : songs) ss += ((*s.vad)[c] - mean) * ((*s.vad)[c] - mean);
            const double sd = (n > 1) ? std::sqrt(ss / (n - 1)) : 0.0;
            for (int i = 0; i < n; ++i)
                vad_std[i][c] = (sd > 0.0) ? ((*songs[i].vad)[c] - mean) / sd : 0.0;
        }
    }

    std::vector<std::string> names;
    std::vector<bool> binary;
    std::vector<std::vector<double>> cols;
    auto add = [&](const std::string& name, bool is_binary, auto&& fill) {
        std::vector<double> col(ndyads);
        std::size_t t = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) col[t++] = fill(i, j);
        names.push_back(name);
        binary.push_back(is_binary);
        cols.push_back(std::move(col));
    };

    if (have_year)
        add("year_absdiff", false,
            [&](int i, int j) { return std::fabs(songs[i].year - songs[j].year); });
    else
        warn("covariate year_absdiff dropped: missing year values");
    if (have_bpm)
        add("bpm_absdiff", false,
            [&](int i, int j) { return std::fabs(songs[i].bpm - songs[j].bpm); });
    else
        warn("covariate bpm_absdiff dropped: missing bpm values");
    if (have_dur)
        add("duration_absdiff", false,
            [&](int i, int j) { return std::fabs(songs[i].duration_s - songs[j].duration_s); });
    else
        warn("covariate duration_absdiff dropped: missing duration values");
    if (have_album)
        add("same_album", true,
            [&](int i, int j) { return songs[i].album == songs[j].album ? 1.0 : 0.0; });
    else
        warn("covariate same_album dropped: missing album ids");
    if (have_emo)
        add("emotion_cosine", false, [&](int i, int j) {
            return cosine_similarity(*songs[i].emotion, *songs[j].emotion);
        });
    else
        warn("covariate emotion_cosine dropped: missing emotion profiles");
    if (have_vad)
        add("vad_distance", false, [&](int i, int j) {
            double s = 0.0;
            for (int c = 0; c < 3; ++c)
                s += (vad_std[i][c] - vad_std[j][c]) * (vad_std[i][c] - vad_std[j][c]);
            return std::sqrt(s);
        });
    else
        warn("covariate vad_distance dropped: missing VAD triples");

    DyadicCovariates cov;
    cov.n = n;
    cov.p = static_cast<int>(cols.size());
    cov.names = names;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (!binary[c]) standardize_dyads(cols[c]);
        cov.standardized.push_back(!binary[c]);
    }
    cov.x.resize(ndyads * cov.p);
    for (std::size_t t = 0; t < ndyads; ++t)
        for (int c = 0; c < cov.p; ++c) cov.x[t * cov.p + c] = cols[c][t];
    return cov;
}

}  // namespace mlsn
