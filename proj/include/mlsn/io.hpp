#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "mlsn/audio.hpp"
#include "mlsn/curves.hpp"
#include "mlsn/graph_build.hpp"
#include "mlsn/sampler.hpp"

namespace mlsn::io {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

// Round-trip-exact decimal formatting used in every CSV we emit.
std::string format_double(double v);

// Multilayer network: per-layer edge-list CSVs (1-based i,j) plus a JSON
// header with n, K and labels.  The header round-trips byte-stably.
void write_network(const fs::path& dir, const MultilayerNetwork& net);
MultilayerNetwork read_network(const fs::path& header_json);

// Dense 0/1 adjacency CSV (optionally with a header line), one layer.
Layer read_dense_layer_csv(const fs::path& path);

// Per-track feature table: frame_index, t_m, rms, sc, sfm, flux.  Undefined
// entries serialize as "nan".
void write_features(const fs::path& path, const std::vector<FrameSeries>& series);
std::vector<FrameSeries> read_features(const fs::path& path);

// Long-format curves: song_id, metric_id, l, value.
void write_curves(const fs::path& path, const std::vector<FeatureCurve>& curves);
std::vector<FeatureCurve> read_curves(const fs::path& path);

// Dense distance matrix with a one-line header naming the metric.
void write_distance_matrix(const fs::path& path, const DistanceMatrix& dm);
DistanceMatrix read_distance_matrix(const fs::path& path);

// Song attribute table (song_id, band, album, year, duration_s, bpm,
// emo_1..emo_8, vad_v, vad_a, vad_d; the emotion and VAD blocks may be absent).
std::vector<SongRecord> read_song_table(const fs::path& path);

// Dyadic covariates: one dense n x n CSV per covariate + a JSON manifest.
void write_covariates(const fs::path& dir, const DyadicCovariates& cov);
DyadicCovariates read_covariates(const fs::path& manifest_json);

// Flat named-block state serialization with deterministic field order.
ordered_json state_to_json(const ModelState& s);
ModelState state_from_json(const ordered_json& j);

// Chain archive: one CSV per parameter block (row = stored iteration),
// log-likelihood trace, MCSE table, JSON manifest.
void write_archive(const fs::path& dir, const ChainArchive& archive);
ChainArchive read_archive(const fs::path& dir);

}  // namespace mlsn::io
