#include <doctest.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <random>
#include <vector>

#include "mlsn/audio.hpp"
#include "test_util.hpp"

using namespace mlsn;

namespace {

// O(N^2) DFT oracle, one-sided magnitudes for k = 1..N/2.
void naive_spectrum(const std::vector<double>& x, double fs, std::vector<double>* mags,
                    std::vector<double>* freqs) {
    const int n = static_cast<int>(x.size());
    mags->clear();
    freqs->clear();
    for (int k = 1; k <= n / 2; ++k) {
        std::complex<double> acc(0, 0);
        for (int t = 0; t < n; ++t)
            acc += x[t] * std::exp(std::complex<double>(0, -2.0 * M_PI * k * t / n));
        mags->push_back(std::abs(acc));
        freqs->push_back(k * fs / n);
    }
}

}  // namespace

TEST_SUITE("audio") {

TEST_CASE("frame plan") {
    FramePlan p = frame_plan(44100);
    CHECK(p.window == 2028);
    CHECK(p.hop == 1014);
    p = frame_plan(1000);
    CHECK(p.window == 46);
    CHECK(p.hop == 23);
    CHECK_THROWS(frame_plan(10));
}

TEST_CASE("hann window") {
    const auto w3 = hann_window(3);
    CHECK(w3[0] == doctest::Approx(0.0));
    CHECK(w3[1] == doctest::Approx(1.0));
    CHECK(w3[2] == doctest::Approx(0.0));
    const auto w5 = hann_window(5);
    CHECK(w5[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(w5[2] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(w5[3] == doctest::Approx(0.5).epsilon(1e-12));
    const auto w17 = hann_window(17);
    for (int i = 0; i < 17; ++i) CHECK(w17[i] == doctest::Approx(w17[16 - i]).epsilon(1e-13));
}

TEST_CASE("magnitude spectrum matches naive DFT") {
    std::mt19937 gen(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int n : {8, 15, 16, 31, 64}) {
        std::vector<double> x(n);
        for (double& v : x) v = u(gen);
        std::vector<double> m1, f1, m2, f2;
        magnitude_spectrum(x, 1000.0, &m1, &f1);
        naive_spectrum(x, 1000.0, &m2, &f2);
        REQUIRE(m1.size() == m2.size());
        for (std::size_t k = 0; k < m1.size(); ++k) {
            CHECK(m1[k] == doctest::Approx(m2[k]).epsilon(1e-9));
            CHECK(f1[k] == doctest::Approx(f2[k]).epsilon(1e-12));
        }
    }
}

TEST_CASE("spectrum of pure cosine concentrates at its bin") {
    const int n = 16;
    std::vector<double> x(n);
    for (int t = 0; t < n; ++t) x[t] = std::cos(2 * M_PI * 3 * t / n);
    std::vector<double> m, f;
    magnitude_spectrum(x, 1600.0, &m, &f);
    CHECK(m[2] == doctest::Approx(8.0).epsilon(1e-9));  // k=3 is index 2 (DC excluded)
    for (std::size_t k = 0; k < m.size(); ++k)
        if (k != 2) CHECK(m[k] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(f[2] == doctest::Approx(300.0));

    std::vector<double> zero(n, 0.0);
    magnitude_spectrum(zero, 1600.0, &m, &f);
    for (double v : m) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("frame metrics match formula oracles") {
    const double eps = 1e-10;
    CHECK(frame_rms({0, 0, 0, 0}, eps) == doctest::Approx(std::log(eps)));
    CHECK(frame_rms({0.5, 0.5, 0.5}, eps) == doctest::Approx(std::log(0.5 + eps)));
    std::mt19937 gen(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> x(32);
    for (double& v : x) v = u(gen);
    double ss = 0;
    for (double v : x) ss += v * v;
    CHECK(frame_rms(x, eps) == doctest::Approx(std::log(std::sqrt(ss / 32) + eps)).epsilon(1e-13));

    // centroid
    double sc;
    REQUIRE(spectral_centroid({0, 2, 0}, {100, 200, 300}, &sc));
    CHECK(sc == doctest::Approx(std::log(200.0)));
    REQUIRE(spectral_centroid({1, 0, 1}, {100, 200, 400}, &sc));
    CHECK(sc == doctest::Approx(0.5 * (std::log(100.0) + std::log(400.0))));
    CHECK_FALSE(spectral_centroid({0, 0, 0}, {100, 200, 300}, &sc));

    // flatness: flat spectrum clamps to 1 - 1e-6 before logit
    const double c = 1e-6;
    const double flat = spectral_flatness({2, 2, 2, 2}, eps);
    CHECK(flat == doctest::Approx(std::log((1 - c) / c)).epsilon(1e-9));
    CHECK(spectral_flatness({5, eps, eps, eps}, eps) < -2.0);
    std::vector<double> mags = {0.3, 1.7, 0.9, 2.2};
    double gm = 0, am = 0;
    for (double v : mags) {
        gm += std::log(v + eps);
        am += v;
    }
    gm = std::exp(gm / mags.size());
    am /= mags.size();
    double ratio = gm / (am + eps);
    ratio = std::min(std::max(ratio, c), 1 - c);
    CHECK(spectral_flatness(mags, eps) ==
          doctest::Approx(std::log(ratio / (1 - ratio))).epsilon(1e-12));

    // flux
    CHECK(spectral_flux({1, 2, 3}, {1, 2, 3}, eps) == doctest::Approx(std::log(eps)));
    CHECK(spectral_flux({2, 1, 5}, {1, 3, 4}, eps) ==
          doctest::Approx(std::log(2.0 + eps)).epsilon(1e-12));
}

TEST_CASE("extract_all on silence and a pure tone") {
    Waveform silence;
    silence.sample_rate = 44100;
    silence.samples.assign(44100, 0.0);
    auto fs = extract_all(silence);
    const FramePlan p = frame_plan(44100);
    const int want = 1 + (44100 - p.window) / p.hop;
    for (const FrameSeries& s : fs) REQUIRE(static_cast<int>(s.values.size()) == want);
    for (std::size_t m = 0; m < fs[0].values.size(); ++m) {
        CHECK(fs[0].values[m] == doctest::Approx(std::log(1e-10)));  // RMS
        CHECK_FALSE(fs[1].defined[m]);                               // SC undefined
        CHECK(fs[3].values[m] == doctest::Approx(std::log(1e-10)));  // Flux
    }
    CHECK(fs[0].frame_times.front() == doctest::Approx(0.0));
    CHECK(fs[0].frame_times.back() == doctest::Approx(1.0));

    Waveform tone;
    tone.sample_rate = 44100;
    tone.samples.resize(44100);
    for (int t = 0; t < 44100; ++t)
        tone.samples[t] = 0.8 * std::sin(2 * M_PI * 1000.0 * t / 44100.0);
    fs = extract_all(tone);
    for (std::size_t m = 2; m + 2 < fs[1].values.size(); ++m) {
        REQUIRE(fs[1].defined[m]);
        CHECK(fs[1].values[m] == doctest::Approx(std::log(1000.0)).epsilon(0.01 / std::log(1000.0)));
        CHECK(fs[2].values[m] < 0.0);  // tone-like: low flatness
    }

    // scaling up strictly increases RMS everywhere
    Waveform loud = tone;
    for (double& v : loud.samples) v *= 1.2;
    auto fl = extract_all(loud);
    for (std::size_t m = 0; m < fl[0].values.size(); ++m)
        CHECK(fl[0].values[m] > fs[0].values[m]);

    // trailing zeros shorter than one hop do not change anything; use a
    // length that is an exact number of hops past the first window so the
    // padding cannot open up a new frame
    Waveform exact = tone;
    exact.samples.resize(p.window + 41 * p.hop);
    auto fe = extract_all(exact);
    Waveform padded = exact;
    padded.samples.resize(padded.samples.size() + p.hop - 1, 0.0);
    auto fp = extract_all(padded);
    REQUIRE(fp[0].values.size() == fe[0].values.size());
    for (int q = 0; q < 4; ++q)
        for (std::size_t m = 0; m < fe[q].values.size(); ++m)
            CHECK(fp[q].values[m] == doctest::Approx(fe[q].values[m]).epsilon(1e-12));

    Waveform tiny;
    tiny.sample_rate = 44100;
    tiny.samples.assign(100, 0.1);
    CHECK_THROWS(extract_all(tiny));
}

TEST_CASE("wav reader: PCM16 stereo averaging and float32") {
    const auto dir = testutil::temp_dir("wav");
    std::vector<std::int16_t> left = {16384, -16384, 0, 32767};
    std::vector<std::int16_t> right = {16384, 16384, 0, 32767};
    testutil::write_wav16(dir / "st.wav", {left, right}, 8000);
    Waveform w = read_wav((dir / "st.wav").string());
    CHECK(w.sample_rate == doctest::Approx(8000.0));
    REQUIRE(w.samples.size() == 4);
    CHECK(w.samples[0] == doctest::Approx(16384.0 / 32768).epsilon(1e-6));
    CHECK(w.samples[1] == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(w.samples[3] == doctest::Approx(32767.0 / 32768).epsilon(1e-6));
    for (double v : w.samples) CHECK(std::fabs(v) <= 1.0);

    std::vector<float> mono = {0.25f, -0.5f, 1.0f, -1.0f};
    testutil::write_wav_float32(dir / "f32.wav", mono, 22050);
    w = read_wav((dir / "f32.wav").string());
    CHECK(w.sample_rate == doctest::Approx(22050.0));
    REQUIRE(w.samples.size() == 4);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(w.samples[i] == doctest::Approx(mono[i]).epsilon(1e-7));

    CHECK_THROWS(read_wav((dir / "missing.wav").string()));
    std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
