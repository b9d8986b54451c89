#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mlsn/curves.hpp"

using namespace mlsn;

namespace {

FrameSeries series_from(const std::vector<double>& y) {
    FrameSeries s;
    s.metric = Metric::Rms;
    s.values = y;
    const std::size_t n = y.size();
    for (std::size_t i = 0; i < n; ++i) s.frame_times.push_back(static_cast<double>(i) / (n - 1));
    s.defined.assign(n, true);
    return s;
}

}  // namespace

TEST_SUITE("curves") {

TEST_CASE("distance kind names round trip") {
    for (DistanceKind k : {DistanceKind::Canberra, DistanceKind::Correlation,
                           DistanceKind::Cosine, DistanceKind::Euclidean})
        CHECK(parse_distance(distance_name(k)) == k);
    CHECK_THROWS(parse_distance("manhattan"));
}

TEST_CASE("smooth_resample reproduces smooth inputs") {
    // Cubic splines contain all linear functions with zero curvature penalty.
    std::vector<double> lin(30);
    for (int i = 0; i < 30; ++i) lin[i] = 2.0 - 3.0 * i / 29.0;
    auto out = smooth_resample(series_from(lin), 17);
    for (int l = 0; l < 17; ++l)
        CHECK(out[l] == doctest::Approx(2.0 - 3.0 * l / 16.0).epsilon(1e-6));

    std::vector<double> cst(20, 1.5);
    out = smooth_resample(series_from(cst), 8);
    for (double v : out) CHECK(v == doctest::Approx(1.5).epsilon(1e-8));
}

TEST_CASE("smooth_resample smooths noise and skips undefined frames") {
    std::mt19937 gen(77);
    std::normal_distribution<double> noise(0.0, 0.5);
    const int n = 200;
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) y[i] = std::sin(2 * M_PI * i / (n - 1.0)) + noise(gen);
    FrameSeries s = series_from(y);
    auto fit = smooth_resample(s, 100);
    double err = 0.0;
    for (int l = 0; l < 100; ++l) {
        const double truth = std::sin(2 * M_PI * l / 99.0);
        err += (fit[l] - truth) * (fit[l] - truth);
    }
    // fitted curve is closer to the signal than the raw noise level
    CHECK(std::sqrt(err / 100) < 0.3);

    // poisoning frames marked undefined must not change the fit
    FrameSeries t = s;
    for (int i = 20; i < 30; ++i) {
        t.values[i] = 1e6;
        t.defined[i] = false;
    }
    FrameSeries ref = s;
    std::vector<double> tt, ty;
    for (int i = 0; i < n; ++i)
        if (i < 20 || i >= 30) {
            tt.push_back(s.frame_times[i]);
            ty.push_back(s.values[i]);
        }
    FrameSeries pruned;
    pruned.metric = Metric::Rms;
    pruned.values = ty;
    pruned.frame_times = tt;
    pruned.defined.assign(ty.size(), true);
    auto a = smooth_resample(t, 50);
    auto b = smooth_resample(pruned, 50);
    for (int l = 0; l < 50; ++l) CHECK(a[l] == doctest::Approx(b[l]).epsilon(1e-10));

    FrameSeries few = series_from({1, 2, 3});
    CHECK_THROWS(smooth_resample(few, 10));
}

TEST_CASE("standardize") {
    auto z = standardize({1.0, 2.0, 3.0, 4.0});
    double mean = 0, ss = 0;
    for (double v : z) mean += v;
    mean /= z.size();
    for (double v : z) ss += (v - mean) * (v - mean);
    CHECK(mean == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ss / (z.size() - 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS(standardize({2.0, 2.0, 2.0}));
    CHECK_THROWS(standardize({1.0}));
}

TEST_CASE("canberra hand values") {
    CHECK(canberra({1, 2}, {1, 2}) == doctest::Approx(0.0));
    // |1-(-1)|/(1+1) + |3-1|/(3+1) = 1 + 0.5
    CHECK(canberra({1, 3}, {-1, 1}) == doctest::Approx(1.5).epsilon(1e-14));
    // 0/0 terms contribute zero
    CHECK(canberra({0, 2}, {0, 4}) == doctest::Approx(2.0 / 6).epsilon(1e-14));
    CHECK(canberra({0, 0}, {0, 0}) == doctest::Approx(0.0));
    CHECK_THROWS(canberra({1}, {1, 2}));
}

TEST_CASE("alternative distances hand values") {
    CHECK(alt_distance({0, 0}, {3, 4}, DistanceKind::Euclidean) == doctest::Approx(5.0));
    CHECK(alt_distance({1, 0}, {0, 1}, DistanceKind::Cosine) == doctest::Approx(1.0));
    CHECK(alt_distance({1, 2}, {2, 4}, DistanceKind::Cosine) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(alt_distance({1, 2, 3}, {3, 2, 1}, DistanceKind::Correlation) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(alt_distance({1, 2, 3}, {2, 4, 6}, DistanceKind::Correlation) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS(alt_distance({0, 0}, {1, 2}, DistanceKind::Cosine));
    CHECK_THROWS(alt_distance({1, 1}, {1, 2}, DistanceKind::Correlation));
}

TEST_CASE("distance_matrix symmetry and permutation consistency") {
    std::mt19937 gen(5);
    std::normal_distribution<double> nd;
    std::vector<FeatureCurve> curves(6);
    for (int i = 0; i < 6; ++i) {
        curves[i].song_id = "s" + std::to_string(i);
        curves[i].values.resize(12);
        for (double& v : curves[i].values) v = nd(gen);
    }
    const DistanceMatrix dm = distance_matrix(curves, DistanceKind::Canberra);
    for (int i = 0; i < 6; ++i) {
        CHECK(dm.at(i, i) == doctest::Approx(0.0));
        for (int j = 0; j < 6; ++j) CHECK(dm.at(i, j) == doctest::Approx(dm.at(j, i)));
    }
    // reversing the song order permutes the matrix accordingly
    std::vector<FeatureCurve> rev(curves.rbegin(), curves.rend());
    const DistanceMatrix dr = distance_matrix(rev, DistanceKind::Canberra);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            CHECK(dr.at(i, j) == doctest::Approx(dm.at(5 - i, 5 - j)).epsilon(1e-13));
}

}  // TEST_SUITE
