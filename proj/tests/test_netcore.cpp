#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "mlsn/netcore.hpp"
#include "test_util.hpp"

using namespace mlsn;

namespace {

// Independent brute-force statistics over explicit pair/triple enumeration.
struct Oracle {
    double dens, trans, assor, mdeg, sddeg, mgeo, diam;
    bool assor_def, geo_def;
};

Oracle brute_stats(const Layer& g) {
    const int n = g.n();
    Oracle o{};
    long edges = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges += g.at(i, j);
    o.dens = (n > 1) ? 2.0 * edges / (static_cast<double>(n) * (n - 1)) : 0.0;

    long closed = 0, open = 0;  // ordered triples with centre j
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            for (int l = 0; l < n; ++l) {
                if (i == j || l == j || i == l) continue;
                if (g.at(i, j) && g.at(j, l)) {
                    ++open;
                    if (g.at(i, l)) ++closed;
                }
            }
    o.trans = open ? static_cast<double>(closed) / open : 0.0;

    std::vector<int> deg(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (j != i && g.at(i, j)) ++deg[i];
    double dm = 0;
    for (int d : deg) dm += d;
    o.mdeg = n ? dm / n : 0.0;
    double ss = 0;
    for (int d : deg) ss += (d - o.mdeg) * (d - o.mdeg);
    o.sddeg = (n > 1) ? std::sqrt(ss / (n - 1)) : 0.0;

    // Pearson correlation of (deg_i, deg_j) over ordered edges.
    std::vector<double> xs, ys;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (j != i && g.at(i, j)) {
                xs.push_back(deg[i]);
                ys.push_back(deg[j]);
            }
    o.assor_def = false;
    if (!xs.empty()) {
        const double m = xs.size();
        const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / m;
        const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / m;
        double vx = 0, vy = 0, cv = 0;
        for (std::size_t q = 0; q < xs.size(); ++q) {
            vx += (xs[q] - mx) * (xs[q] - mx);
            vy += (ys[q] - my) * (ys[q] - my);
            cv += (xs[q] - mx) * (ys[q] - my);
        }
        if (vx > 0 && vy > 0) {
            o.assor_def = true;
            o.assor = cv / std::sqrt(vx * vy);
        }
    }

    // Floyd-Warshall geodesics, connected pairs only.
    const double inf = 1e18;
    std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
    for (int i = 0; i < n; ++i) d[i][i] = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (j != i && g.at(i, j)) d[i][j] = 1;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    double sum = 0, mx = 0;
    long pairs = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (d[i][j] < inf) {
                sum += d[i][j];
                mx = std::max(mx, d[i][j]);
                ++pairs;
            }
    o.geo_def = pairs > 0;
    if (o.geo_def) {
        o.mgeo = sum / pairs;
        o.diam = mx;
    }
    return o;
}

}  // namespace

TEST_SUITE("netcore") {

TEST_CASE("layer set is symmetric, no self loops") {
    Layer g(4);
    g.set(2, 0, true);
    CHECK(g.at(0, 2));
    CHECK(g.at(2, 0));
    g.set(1, 1, true);
    CHECK_FALSE(g.at(1, 1));
    CHECK(g.edge_count() == 1);
    CHECK(g.degrees() == std::vector<int>{1, 0, 1, 0});
}

TEST_CASE("hand instances") {
    Layer tri(3);
    tri.set(0, 1, true);
    tri.set(1, 2, true);
    tri.set(0, 2, true);
    LayerStats s = layer_stats(tri);
    CHECK(s.density == doctest::Approx(1.0));
    CHECK(s.transitivity == doctest::Approx(1.0));
    CHECK(s.mean_degree == doctest::Approx(2.0));
    CHECK(s.sd_degree == doctest::Approx(0.0));
    CHECK(s.mean_geodesic == doctest::Approx(1.0));
    CHECK(s.diameter == doctest::Approx(1.0));
    CHECK_FALSE(s.assortativity_defined);  // constant degrees

    Layer path(3);
    path.set(0, 1, true);
    path.set(1, 2, true);
    s = layer_stats(path);
    CHECK(s.transitivity == doctest::Approx(0.0));
    CHECK(s.mean_geodesic == doctest::Approx(4.0 / 3));
    CHECK(s.diameter == doctest::Approx(2.0));

    Layer star(5);
    for (int j = 1; j < 5; ++j) star.set(0, j, true);
    s = layer_stats(star);
    REQUIRE(s.assortativity_defined);
    CHECK(s.assortativity == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("disconnected convention") {
    Layer g(4);  // one edge + two isolates
    g.set(0, 1, true);
    LayerStats s = layer_stats(g);
    REQUIRE(s.geodesic_defined);
    CHECK(s.mean_geodesic == doctest::Approx(1.0));
    CHECK(s.diameter == doctest::Approx(1.0));
    CHECK(s.unreachable_pairs == 5);

    Layer empty(3);
    s = layer_stats(empty);
    CHECK_FALSE(s.geodesic_defined);
    CHECK_FALSE(s.assortativity_defined);
    CHECK(s.density == doctest::Approx(0.0));
    CHECK(s.transitivity == doctest::Approx(0.0));
}

TEST_CASE("all statistics match brute force on random graphs") {
    std::mt19937 gen(2024);
    std::uniform_int_distribution<int> nd(2, 7);
    std::uniform_real_distribution<double> pd(0.0, 1.0);
    for (int rep = 0; rep < 300; ++rep) {
        const int n = nd(gen);
        const Layer g = testutil::random_layer(n, pd(gen), gen);
        const LayerStats s = layer_stats(g);
        const Oracle o = brute_stats(g);
        CHECK(s.density == doctest::Approx(o.dens).epsilon(1e-12));
        CHECK(s.transitivity == doctest::Approx(o.trans).epsilon(1e-12));
        CHECK(s.mean_degree == doctest::Approx(o.mdeg).epsilon(1e-12));
        CHECK(s.sd_degree == doctest::Approx(o.sddeg).epsilon(1e-12));
        REQUIRE(s.assortativity_defined == o.assor_def);
        if (o.assor_def) CHECK(s.assortativity == doctest::Approx(o.assor).epsilon(1e-12));
        REQUIRE(s.geodesic_defined == o.geo_def);
        if (o.geo_def) {
            CHECK(s.mean_geodesic == doctest::Approx(o.mgeo).epsilon(1e-12));
            CHECK(s.diameter == doctest::Approx(o.diam).epsilon(1e-12));
        }
    }
}

TEST_CASE("statistics are permutation invariant") {
    std::mt19937 gen(99);
    const int n = 7;
    const Layer g = testutil::random_layer(n, 0.4, gen);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen);
    Layer h(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (g.at(i, j)) h.set(perm[i], perm[j], true);
    const LayerStats a = layer_stats(g), b = layer_stats(h);
    CHECK(a.density == doctest::Approx(b.density).epsilon(1e-13));
    CHECK(a.transitivity == doctest::Approx(b.transitivity).epsilon(1e-13));
    CHECK(a.mean_geodesic == doctest::Approx(b.mean_geodesic).epsilon(1e-13));
    CHECK(a.sd_degree == doctest::Approx(b.sd_degree).epsilon(1e-13));
}

TEST_CASE("validate rejects malformed networks") {
    MultilayerNetwork net;
    net.n = 3;
    net.K = 2;
    net.layers.assign(1, Layer(3));
    CHECK_THROWS(net.validate());
    net.layers.assign(2, Layer(4));
    CHECK_THROWS(net.validate());
    net.layers.assign(2, Layer(3));
    CHECK_NOTHROW(net.validate());
}

}  // TEST_SUITE
