#include <doctest.h>

#include <cmath>
#include <vector>

#include "mlsn/rng.hpp"

using namespace mlsn;

TEST_SUITE("rng") {

TEST_CASE("norm_cdf reference values") {
    CHECK(norm_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(norm_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
    CHECK(norm_cdf(-3.0) == doctest::Approx(0.0013498980316300945).epsilon(1e-10));
    CHECK(norm_cdf(1.0) + norm_cdf(-1.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("norm_quantile inverts norm_cdf") {
    for (double p : {0.001, 0.025, 0.2, 0.5, 0.8, 0.975, 0.999})
        CHECK(norm_cdf(norm_quantile(p)) == doctest::Approx(p).epsilon(1e-10));
}

TEST_CASE("log pdfs match closed forms") {
    CHECK(log_norm_pdf(0.0, 0.0, 1.0) ==
          doctest::Approx(-0.9189385332046727).epsilon(1e-14));
    CHECK(log_norm_pdf(2.0, 1.0, 4.0) ==
          doctest::Approx(-0.5 * std::log(2 * M_PI * 4) - 0.5 * 1.0 / 4.0).epsilon(1e-14));
    // IG(x; a, b) with shape a=3, scale b=2 at x=1.
    const double a = 3, b = 2, x = 1;
    CHECK(log_ig_pdf(x, a, b) ==
          doctest::Approx(a * std::log(b) - std::lgamma(a) - (a + 1) * std::log(x) - b / x)
              .epsilon(1e-14));
    // Gamma(x; shape 2, rate 3) at x=0.5.
    CHECK(log_gamma_pdf(0.5, 2.0, 3.0) ==
          doctest::Approx(2 * std::log(3.0) - std::lgamma(2.0) + std::log(0.5) - 1.5)
              .epsilon(1e-14));
    // Dirichlet((.2,.3,.5); (1,1,1)) = Gamma(3) = 2.
    CHECK(log_dirichlet_pdf({0.2, 0.3, 0.5}, {1, 1, 1}) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("determinism and substreams") {
    Rng a(42), b(42), c(43);
    bool same = true, diff = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64(), y = b.next_u64();
        same = same && (x == y);
        diff = diff || (x != c.next_u64());
    }
    CHECK(same);
    CHECK(diff);
    Rng base(7);
    Rng s0 = base.substream(0), s1 = base.substream(1);
    CHECK(s0.next_u64() != s1.next_u64());
    // substream is a pure function of (seed, index)
    Rng again = Rng(7).substream(1);
    Rng s1b = Rng(7).substream(1);
    CHECK(again.next_u64() == s1b.next_u64());
}

TEST_CASE("distribution moments") {
    Rng rng(123);
    const int S = 200000;
    double sum = 0, ss = 0;
    for (int i = 0; i < S; ++i) {
        const double x = rng.normal();
        sum += x;
        ss += x * x;
    }
    CHECK(sum / S == doctest::Approx(0.0).epsilon(0.02));
    CHECK(ss / S == doctest::Approx(1.0).epsilon(0.02));

    sum = 0;
    for (int i = 0; i < S; ++i) sum += rng.gamma(3.0, 2.0);
    CHECK(sum / S == doctest::Approx(1.5).epsilon(0.02));

    sum = 0;
    for (int i = 0; i < S; ++i) sum += rng.inv_gamma(4.0, 6.0);  // mean b/(a-1) = 2
    CHECK(sum / S == doctest::Approx(2.0).epsilon(0.05));

    sum = 0;
    for (int i = 0; i < S; ++i) sum += rng.beta(2.0, 3.0);
    CHECK(sum / S == doctest::Approx(0.4).epsilon(0.02));

    sum = 0;
    for (int i = 0; i < S; ++i) sum += rng.exponential(2.0);
    CHECK(sum / S == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("dirichlet and categorical") {
    Rng rng(5);
    const std::vector<double> alpha = {1.0, 2.0, 3.0};
    std::vector<double> mean(3, 0.0);
    for (int i = 0; i < 50000; ++i) {
        const auto w = rng.dirichlet(alpha);
        double tot = 0;
        for (int c = 0; c < 3; ++c) {
            mean[c] += w[c];
            tot += w[c];
        }
        REQUIRE(tot == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(mean[0] / 50000 == doctest::Approx(1.0 / 6).epsilon(0.03));
    CHECK(mean[2] / 50000 == doctest::Approx(0.5).epsilon(0.03));

    std::vector<int> counts(3, 0);
    for (int i = 0; i < 60000; ++i) ++counts[rng.categorical({0.2, 0.3, 0.5})];
    CHECK(counts[0] / 60000.0 == doctest::Approx(0.2).epsilon(0.05));
    CHECK(counts[2] / 60000.0 == doctest::Approx(0.5).epsilon(0.05));

    // categorical_from_log agrees with categorical after normalization
    counts.assign(3, 0);
    for (int i = 0; i < 60000; ++i)
        ++counts[rng.categorical_from_log({std::log(0.2), std::log(0.3), std::log(0.5)})];
    CHECK(counts[1] / 60000.0 == doctest::Approx(0.3).epsilon(0.05));
}

TEST_CASE("truncated normal sign and moments") {
    Rng rng(9);
    double sum = 0;
    for (int i = 0; i < 100000; ++i) {
        const double x = rng.trunc_normal(0.0, true);
        REQUIRE(x > 0.0);
        sum += x;
    }
    CHECK(sum / 100000 == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(0.02));
    for (int i = 0; i < 10000; ++i) REQUIRE(rng.trunc_normal(1.5, false) <= 0.0);
    // deep-tail request still returns a finite, correctly signed value
    for (int i = 0; i < 1000; ++i) {
        const double x = rng.trunc_normal(-40.0, true);
        REQUIRE(x > 0.0);
        REQUIRE(std::isfinite(x));
    }
    // TN(mu, +) mean for mu = -2: mu + phi(2)/(1-Phi(2))
    sum = 0;
    for (int i = 0; i < 200000; ++i) sum += rng.trunc_normal(-2.0, true);
    const double phi2 = std::exp(-2.0) / std::sqrt(2 * M_PI);
    CHECK(sum / 200000 == doctest::Approx(-2.0 + phi2 / (1 - norm_cdf(2.0))).epsilon(0.02));
}

}  // TEST_SUITE
