#include "mlsn/audio.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace mlsn {

namespace {

constexpr double kSfmClamp = 1e-6;

std::uint32_t read_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t read_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

// Real-to-complex DFT reused across the frames of one track.
class Dft {
public:
    explicit Dft(int n)
        : n_(n),
          in_(fftw_alloc_real(n)),
          out_(fftw_alloc_complex(n / 2 + 1)),
          plan_(fftw_plan_dft_r2c_1d(n, in_, out_, FFTW_ESTIMATE)) {}
    ~Dft() {
        fftw_destroy_plan(plan_);
        fftw_free(in_);
        fftw_free(out_);
    }
    Dft(const Dft&) = delete;
    Dft& operator=(const Dft&) = delete;

    // mags gets |X(k)| for k = 1..floor(n/2), DC excluded.
    void magnitudes(const double* frame, std::vector<double>* mags) const {
        std::memcpy(in_, frame, sizeof(double) * n_);
        fftw_execute(plan_);
        const int kbins = n_ / 2;
        mags->resize(kbins);
        for (int k = 1; k <= kbins; ++k)
            (*mags)[k - 1] = std::hypot(out_[k][0], out_[k][1]);
    }

private:
    int n_;
    double* in_;
    fftw_complex* out_;
    fftw_plan plan_;
};

}  // namespace

Waveform read_wav(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open WAV file: " + path);
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(f)),
                                   std::istreambuf_iterator<char>());
    if (buf.size() < 12 || std::memcmp(buf.data(), "RIFF", 4) != 0 ||
        std::memcmp(buf.data() + 8, "WAVE", 4) != 0)
        throw std::runtime_error("not a RIFF/WAVE file: " + path);

    int channels = 0, bits = 0;
    std::uint16_t format = 0;
    double rate = 0.0;
    const unsigned char* data = nullptr;
    std::size_t data_len = 0;

    std::size_t pos = 12;
    while (pos + 8 <= buf.size()) {
        const char* id = reinterpret_cast<const char*>(buf.data() + pos);
        const std::uint32_t len = read_u32(buf.data() + pos + 4);
        const unsigned char* body = buf.data() + pos + 8;
        if (pos + 8 + len > buf.size()) break;
        if (std::memcmp(id, "fmt ", 4) == 0 && len >= 16) {
            format = read_u16(body);
            channels = read_u16(body + 2);
            rate = read_u32(body + 4);
            bits = read_u16(body + 14);
            if (format == 0xFFFE && len >= 40) format = read_u16(body + 24);  // extensible
        } else if (std::memcmp(id, "data", 4) == 0) {
            data = body;
            data_len = len;
        }
        pos += 8 + len + (len & 1);
    }
    if (!data || channels <= 0 || rate <= 0.0)
        throw std::runtime_error("malformed WAV file: " + path);

    const int bytes = bits / 8;
    if (bytes <= 0) throw std::runtime_error("bad WAV bit depth: " + path);
    const std::size_t frames = data_len / (static_cast<std::size_t>(bytes) * channels);
    if (frames == 0) throw std::runtime_error("empty WAV file: " + path);

    Waveform wav;
    wav.sample_rate = rate;
    wav.samples.resize(frames);
    for (std::size_t t = 0; t < frames; ++t) {
        double acc = 0.0;
        for (int c = 0; c < channels; ++c) {
            const unsigned char* p = data + (t * channels + c) * bytes;
            double v = 0.0;
            if (format == 3 && bits == 32) {
                float fv;
                std::memcpy(&fv, p, 4);
                v = fv;
            } else if (format == 3 && bits == 64) {
                std::memcpy(&v, p, 8);
            } else if (format == 1 && bits == 8) {
                v = (static_cast<int>(p[0]) - 128) / 128.0;
            } else if (format == 1 && bits == 16) {
                const std::int16_t s = static_cast<std::int16_t>(p[0] | (p[1] << 8));
                v = s / 32768.0;
            } else if (format == 1 && bits == 24) {
                std::int32_t s = p[0] | (p[1] << 8) | (p[2] << 16);
                if (s & 0x800000) s |= ~0xFFFFFF;
                v = s / 8388608.0;
            } else if (format == 1 && bits == 32) {
                std::int32_t s;
                std::memcpy(&s, p, 4);
                v = s / 2147483648.0;
            } else {
                throw std::runtime_error("unsupported WAV encoding: " + path);
            }
            acc += v;
        }
        wav.samples[t] = acc / channels;
    }
    // Clamp float input that exceeds full scale.
    for (double& s : wav.samples) {
        if (s > 1.0) s = 1.0;
        if (s < -1.0) s = -1.0;
    }
    return wav;
}

const char* metric_name(Metric m) {
    switch (m) {
        case Metric::Rms: return "rms";
        case Metric::Sc: return "sc";
        case Metric::Sfm: return "sfm";
        case Metric::Flux: return "flux";
    }
    return "?";
}

FramePlan frame_plan(double sample_rate) {
    if (sample_rate <= 0.0) throw std::invalid_argument("frame_plan: nonpositive sample rate");
    FramePlan p;
    p.window = static_cast<int>(std::floor(0.046 * sample_rate));
    p.hop = static_cast<int>(std::floor(0.023 * sample_rate));
    if (p.window < 2) throw std::runtime_error("frame_plan: sample rate too coarse");
    return p;
}

std::vector<double> hann_window(int n) {
    if (n < 2) throw std::invalid_argument("hann_window: n < 2");
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i)
        w[i] = 0.5 * (1.0 - std::cos(2.0 * M_PI * i / (n - 1)));
    return w;
}

void magnitude_spectrum(const std::vector<double>& frame, double sample_rate,
                        std::vector<double>* mags, std::vector<double>* freqs) {
    const int n = static_cast<int>(frame.size());
    Dft dft(n);
    dft.magnitudes(frame.data(), mags);
    if (freqs) {
        freqs->resize(n / 2);
        for (int k = 1; k <= n / 2; ++k) (*freqs)[k - 1] = k * sample_rate / n;
    }
}

double frame_rms(const std::vector<double>& frame, double eps) {
    double ss = 0.0;
    for (double x : frame) ss += x * x;
    return std::log(std::sqrt(ss / frame.size()) + eps);
}

bool spectral_centroid(const std::vector<double>& mags, const std::vector<double>& freqs,
                       double* out) {
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < mags.size(); ++k) {
        num += std::log(freqs[k]) * mags[k];
        den += mags[k];
    }
    if (den <= 0.0) return false;
    *out = num / den;
    return true;
}

double spectral_flatness(const std::vector<double>& mags, double eps) {
    const double kbins = static_cast<double>(mags.size());
    double log_sum = 0.0, sum = 0.0;
    for (double m : mags) {
        log_sum += std::log(m + eps);
        sum += m;
    }
    double ratio = std::exp(log_sum / kbins) / (sum / kbins + eps);
    if (ratio < kSfmClamp) ratio = kSfmClamp;
    if (ratio > 1.0 - kSfmClamp) ratio = 1.0 - kSfmClamp;
    return std::log(ratio / (1.0 - ratio));
}

double spectral_flux(const std::vector<double>& mags, const std::vector<double>& prev_mags,
                     double eps) {
    if (mags.size() != prev_mags.size())
        throw std::invalid_argument("spectral_flux: bin count mismatch");
    double s = 0.0;
    for (std::size_t k = 0; k < mags.size(); ++k) {
        const double d = mags[k] - prev_mags[k];
        if (d > 0.0) s += d;
    }
    return std::log(s + eps);
}

std::array<FrameSeries, 4> extract_all(const Waveform& wav, double eps) {
    const FramePlan plan = frame_plan(wav.sample_rate);
    const int n = plan.window, hop = plan.hop;
    const long len = static_cast<long>(wav.samples.size());
    if (len < n + hop) throw std::runtime_error("extract_all: input shorter than two frames");
    const int nframes = 1 + static_cast<int>((len - n) / hop);

    const std::vector<double> win = hann_window(n);
    const int kbins = n / 2;
    std::vector<double> freqs(kbins);
    for (int k = 1; k <= kbins; ++k) freqs[k - 1] = k * wav.sample_rate / n;

    std::array<FrameSeries, 4> out;
    for (int m = 0; m < 4; ++m) {
        out[m].metric = static_cast<Metric>(m);
        out[m].values.resize(nframes);
        out[m].frame_times.resize(nframes);
        out[m].defined.assign(nframes, true);
    }

    Dft dft(n);
    std::vector<double> frame(n), mags, prev_mags(kbins, 0.0);
    for (int m = 0; m < nframes; ++m) {
        for (int i = 0; i < n; ++i) frame[i] = wav.samples[m * static_cast<long>(hop) + i] * win[i];
        dft.magnitudes(frame.data(), &mags);

        const double t = (nframes > 1) ? static_cast<double>(m) / (nframes - 1) : 0.0;
        for (int q = 0; q < 4; ++q) out[q].frame_times[m] = t;

        out[0].values[m] = frame_rms(frame, eps);
        double sc;
        if (spectral_centroid(mags, freqs, &sc)) {
            out[1].values[m] = sc;
        } else {
            out[1].values[m] = 0.0;
            out[1].defined[m] = false;
        }
        out[2].values[m] = spectral_flatness(mags, eps);
        out[3].values[m] = spectral_flux(mags, prev_mags, eps);
        prev_mags = mags;
    }
    return out;
}

}  // namespace mlsn
