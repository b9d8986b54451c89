#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "mlsn/community.hpp"
#include "mlsn/community_detect.hpp"
#include "test_util.hpp"

using namespace mlsn;

namespace {

// SB archive with explicit per-draw labels for one layer (K=1).
ChainArchive sb_archive(int n, const std::vector<std::vector<int>>& label_draws) {
    Hyper hy;
    hy.C = 1;
    for (const auto& l : label_draws)
        for (int v : l) hy.C = std::max(hy.C, v + 1);
    ChainArchive arc;
    arc.config.variant = Variant::SMN_C_SB;
    arc.n = n;
    arc.K = 1;
    for (const auto& l : label_draws) {
        ModelState s = make_state(Variant::SMN_C_SB, n, 1, 0, hy);
        for (int i = 0; i < n; ++i) s.labels[i] = l[i];
        arc.draws.push_back(std::move(s));
        arc.loglik.push_back(0.0);
    }
    return arc;
}

// Reference ARI straight from the contingency-table definition.
double ari_oracle(const std::vector<int>& a, const std::vector<int>& b) {
    const int n = static_cast<int>(a.size());
    double sum_nij = 0, sum_a = 0, sum_b = 0;
    const int ca = 1 + *std::max_element(a.begin(), a.end());
    const int cb = 1 + *std::max_element(b.begin(), b.end());
    std::vector<std::vector<long>> tab(ca, std::vector<long>(cb, 0));
    for (int i = 0; i < n; ++i) ++tab[a[i]][b[i]];
    auto c2 = [](long m) { return m * (m - 1) / 2.0; };
    for (int r = 0; r < ca; ++r) {
        long rt = 0;
        for (int c = 0; c < cb; ++c) {
            sum_nij += c2(tab[r][c]);
            rt += tab[r][c];
        }
        sum_a += c2(rt);
    }
    for (int c = 0; c < cb; ++c) {
        long ct = 0;
        for (int r = 0; r < ca; ++r) ct += tab[r][c];
        sum_b += c2(ct);
    }
    const double exp_idx = sum_a * sum_b / c2(n);
    const double max_idx = 0.5 * (sum_a + sum_b);
    if (max_idx == exp_idx) return 0.0;
    return (sum_nij - exp_idx) / (max_idx - exp_idx);
}

}  // namespace

TEST_SUITE("community") {

TEST_CASE("coclustering on the two-draw example") {
    const ChainArchive arc = sb_archive(3, {{0, 0, 1}, {0, 1, 1}});
    const CoClusterMatrix cc = coclustering(arc, 0);
    CHECK(cc.at(0, 0) == doctest::Approx(1.0));
    CHECK(cc.at(0, 1) == doctest::Approx(0.5));
    CHECK(cc.at(1, 2) == doctest::Approx(0.5));
    CHECK(cc.at(0, 2) == doctest::Approx(0.0));
    CHECK(cc.at(2, 0) == doctest::Approx(0.0));

    ChainArchive smn;
    smn.config.variant = Variant::SMN;
    CHECK_THROWS(coclustering(smn, 0));
}

TEST_CASE("coclustering ignores label permutations") {
    const ChainArchive a = sb_archive(4, {{0, 0, 1, 1}, {0, 0, 1, 1}});
    const ChainArchive b = sb_archive(4, {{0, 0, 1, 1}, {1, 1, 0, 0}});
    const CoClusterMatrix ca = coclustering(a, 0), cb = coclustering(b, 0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(ca.at(i, j) == doctest::Approx(cb.at(i, j)));
}

TEST_CASE("canonical_partition relabels in first-occurrence order") {
    CHECK(canonical_partition({7, 7, 2, 7, 5}) == std::vector<int>{0, 0, 1, 0, 2});
    CHECK(canonical_partition({0, 1, 2}) == std::vector<int>{0, 1, 2});
}

TEST_CASE("dahl picks the squared-loss minimizer, exhaustively verified") {
    std::mt19937 gen(404);
    std::uniform_int_distribution<int> lab(0, 2);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 6, S = 25;
        std::vector<std::vector<int>> draws(S, std::vector<int>(n));
        for (auto& d : draws)
            for (int& v : d) v = lab(gen);
        const ChainArchive arc = sb_archive(n, draws);
        const CoClusterMatrix cc = coclustering(arc, 0);
        double best = std::numeric_limits<double>::infinity();
        std::vector<int> want;
        for (const auto& d : draws) {
            double loss = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    const double e = (d[i] == d[j] ? 1.0 : 0.0) - cc.at(i, j);
                    loss += e * e;
                }
            if (loss < best) {
                best = loss;
                want = canonical_partition(d);
            }
        }
        CHECK(dahl_partition(arc, 0) == want);
    }
}

TEST_CASE("ari oracle values and random cross-check") {
    CHECK(ari({0, 0, 1, 1}, {0, 0, 1, 1}) == doctest::Approx(1.0));
    CHECK(ari({0, 0, 1, 1}, {1, 1, 0, 0}) == doctest::Approx(1.0));  // label-invariant
    // classic hand instance
    CHECK(ari({0, 0, 0, 1, 1, 1}, {0, 0, 1, 1, 2, 2}) ==
          doctest::Approx(0.2424242424242424).epsilon(1e-12));
    // degenerate agreement of trivial partitions -> 0 by convention
    CHECK(ari({0, 0, 0}, {0, 0, 0}) == doctest::Approx(0.0));
    CHECK_THROWS(ari({0, 1}, {0, 1, 2}));

    std::mt19937 gen(77);
    std::uniform_int_distribution<int> lab(0, 3);
    for (int rep = 0; rep < 500; ++rep) {
        const int n = 3 + rep % 10;
        std::vector<int> a(n), b(n);
        for (int& v : a) v = lab(gen);
        for (int& v : b) v = lab(gen);
        CHECK(ari(a, b) == doctest::Approx(ari_oracle(a, b)).epsilon(1e-12));
    }
}

TEST_CASE("posterior_mean_delta averages the sociability draws") {
    ChainArchive arc = sb_archive(3, {{0, 0, 0}, {0, 0, 0}});
    arc.draws[0].delta = {1, 2, 3};
    arc.draws[1].delta = {3, 4, 7};
    CHECK(posterior_mean_delta(arc) == std::vector<double>{2, 3, 5});
}

TEST_CASE("louvain separates two cliques") {
    Layer g(8);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            g.set(i, j, true);
            g.set(i + 4, j + 4, true);
        }
    g.set(0, 4, true);  // single bridge
    const auto labels = louvain_communities(g);
    CHECK(community_count(labels) == 2);
    for (int i = 1; i < 4; ++i) CHECK(labels[i] == labels[0]);
    for (int i = 5; i < 8; ++i) CHECK(labels[i] == labels[4]);
    CHECK(labels[0] != labels[4]);
    // deterministic
    CHECK(louvain_communities(g) == labels);

    Layer empty(5);
    CHECK(community_count(louvain_communities(empty)) == 5);
}

TEST_CASE("choose_block_count takes the max over layers") {
    MultilayerNetwork net;
    net.n = 8;
    net.K = 2;
    Layer cliques(8), ring(8);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            cliques.set(i, j, true);
            cliques.set(i + 4, j + 4, true);
        }
    for (int i = 0; i < 8; ++i) ring.set(i, (i + 1) % 8, true);
    net.layers = {cliques, ring};
    CHECK(choose_block_count(net) >= 2);
    CHECK(choose_block_count(net) ==
          std::max(community_count(louvain_communities(cliques)),
                   community_count(louvain_communities(ring))));
}

}  // TEST_SUITE
