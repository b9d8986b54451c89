#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mlsn/graph_build.hpp"

using namespace mlsn;

namespace {

DistanceMatrix dm_from(int n, const std::vector<double>& dense) {
    DistanceMatrix dm;
    dm.n = n;
    dm.d = dense;
    return dm;
}

SongRecord song(const std::string& id, const std::string& album, double year, double dur,
                double bpm) {
    SongRecord s;
    s.song_id = id;
    s.band = "b";
    s.album = album;
    s.year = year;
    s.duration_s = dur;
    s.bpm = bpm;
    return s;
}

}  // namespace

TEST_SUITE("graph_build") {

TEST_CASE("dyad_index enumerates i<j row-major") {
    CHECK(DyadicCovariates::dyad_index(0, 1, 4) == 0);
    CHECK(DyadicCovariates::dyad_index(0, 3, 4) == 2);
    CHECK(DyadicCovariates::dyad_index(1, 2, 4) == 3);
    CHECK(DyadicCovariates::dyad_index(2, 3, 4) == 5);
    CHECK(DyadicCovariates::dyad_index(3, 2, 4) == 5);  // order-free
    std::size_t t = 0;
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j) CHECK(DyadicCovariates::dyad_index(i, j, 6) == t++);
}

TEST_CASE("knn OR rule on a hand instance") {
    // 0-1 close, 2 close to 1 only, 3 far from everyone.
    const double big = 100;
    const DistanceMatrix dm = dm_from(4, {0, 1, 5, big,
                                          1, 0, 2, big,
                                          5, 2, 0, big + 1,
                                          big, big, big + 1, 0});
    const Layer g = knn_graph(dm, 1);
    // lists: 0->1, 1->0, 2->1, 3->0; OR rule unions them.
    CHECK(g.at(0, 1));
    CHECK(g.at(1, 2));
    CHECK(g.at(0, 3));
    CHECK_FALSE(g.at(0, 2));
    CHECK_FALSE(g.at(2, 3));
    CHECK_FALSE(g.at(1, 3));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(g.at(i, j) == g.at(j, i));
    CHECK_THROWS(knn_graph(dm, 0));
    CHECK_THROWS(knn_graph(dm, 4));
}

TEST_CASE("knn ties break toward the lower index") {
    const DistanceMatrix dm = dm_from(4, {0, 2, 2, 2,
                                          2, 0, 9, 9,
                                          2, 9, 0, 9,
                                          2, 9, 9, 0});
    const Layer g = knn_graph(dm, 1);
    // node 0 is equidistant to all; it must pick node 1.
    CHECK(g.at(0, 1));
    // 1,2,3 all pick node 0 (their nearest), so those edges exist via OR.
    CHECK(g.at(0, 2));
    CHECK(g.at(0, 3));
    CHECK_FALSE(g.at(1, 2));
}

TEST_CASE("every node has at least k neighbours") {
    DistanceMatrix dm;
    dm.n = 8;
    dm.d.assign(64, 0.0);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            if (i != j) dm.d[static_cast<std::size_t>(i) * 8 + j] = std::fabs(i - j) + 0.1 * ((i * 7 + j) % 5);
    for (int i = 0; i < 8; ++i)
        for (int j = i + 1; j < 8; ++j) dm.d[static_cast<std::size_t>(j) * 8 + i] = dm.at(i, j);
    for (int k = 1; k <= 4; ++k) {
        const Layer g = knn_graph(dm, k);
        for (int d : g.degrees()) CHECK(d >= k);
    }
}

TEST_CASE("build_multilayer") {
    const DistanceMatrix dm = dm_from(3, {0, 1, 2, 1, 0, 3, 2, 3, 0});
    const MultilayerNetwork net = build_multilayer({dm, dm}, 1, {}, {"rms", "sc"});
    CHECK(net.n == 3);
    CHECK(net.K == 2);
    CHECK(net.node_labels[0] == "node_1");
    CHECK(net.layer_labels[1] == "sc");
    CHECK_NOTHROW(net.validate());
}

TEST_CASE("covariate assembly: full table") {
    std::vector<SongRecord> songs = {song("a", "A1", 1990, 200, 120), song("b", "A1", 1992, 260, 140),
                                     song("c", "A2", 1999, 320, 90), song("d", "A2", 2001, 150, 180)};
    for (auto& s : songs) {
        s.emotion = std::vector<double>{0.1, 0.2, 0.1, 0.1, 0.1, 0.1, 0.2, 0.1};
        (*s.emotion)[0] += 0.01 * (&s - songs.data());
        s.vad = std::vector<double>{0.2 * (&s - songs.data()), 0.5, 1.0 - 0.1 * (&s - songs.data())};
    }
    std::vector<std::string> warnings;
    const DyadicCovariates cov = assemble_covariates(songs, &warnings);
    CHECK(warnings.empty());
    REQUIRE(cov.p == 6);
    CHECK(cov.names == std::vector<std::string>{"year_absdiff", "bpm_absdiff", "duration_absdiff",
                                                "same_album", "emotion_cosine", "vad_distance"});
    // binary same_album column keeps its 0/1 coding
    const int album_col = 3;
    CHECK_FALSE(cov.standardized[album_col]);
    CHECK(cov.at(0, 1, album_col) == doctest::Approx(1.0));
    CHECK(cov.at(0, 2, album_col) == doctest::Approx(0.0));
    // standardized columns have zero dyadic mean, unit sample sd
    for (int c : {0, 1, 2, 4, 5}) {
        CHECK(cov.standardized[c]);
        double mean = 0, ss = 0;
        for (std::size_t t = 0; t < cov.dyads(); ++t) mean += cov.x[t * cov.p + c];
        mean /= cov.dyads();
        for (std::size_t t = 0; t < cov.dyads(); ++t) {
            const double v = cov.x[t * cov.p + c] - mean;
            ss += v * v;
        }
        CHECK(mean == doctest::Approx(0.0).epsilon(1e-10));
        CHECK(ss / (cov.dyads() - 1) == doctest::Approx(1.0).epsilon(1e-10));
    }
    // year column ordering survives standardization (monotone transform)
    CHECK(cov.at(0, 1, 0) < cov.at(0, 2, 0));
}

TEST_CASE("covariate assembly drops incomplete columns with warnings") {
    std::vector<SongRecord> songs = {song("a", "A1", 1990, 200, 120),
                                     song("b", "A2", 1992, 260, 0.0),  // bpm missing
                                     song("c", "A2", 1995, 320, 130)};
    songs[0].vad = std::vector<double>{0.1, 0.2, 0.3};  // only one song has VAD
    std::vector<std::string> warnings;
    const DyadicCovariates cov = assemble_covariates(songs, &warnings);
    CHECK(cov.p == 3);  // year, duration, same_album survive
    CHECK(std::find(cov.names.begin(), cov.names.end(), "bpm_absdiff") == cov.names.end());
    CHECK(std::find(cov.names.begin(), cov.names.end(), "vad_distance") == cov.names.end());
    CHECK(warnings.size() == 3);  // bpm, emotion, vad
    CHECK_THROWS(assemble_covariates({songs[0]}));
}

}  // TEST_SUITE
