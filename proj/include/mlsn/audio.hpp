#pragma once

#include <array>
#include <string>
#include <vector>

namespace mlsn {

struct Waveform {
    std::vector<double> samples;  // mono, in [-1,1]
    double sample_rate = 0.0;
};

// WAV (RIFF) reader: integer PCM 8/16/24/32 and IEEE float 32/64,
// any channel count (averaged to mono), amplitudes rescaled to [-1,1].
Waveform read_wav(const std::string& path);

enum class Metric { Rms = 0, Sc = 1, Sfm = 2, Flux = 3 };
const char* metric_name(Metric m);

struct FrameSeries {
    Metric metric;
    std::vector<double> values;
    std::vector<double> frame_times;   // normalized to [0,1]
    std::vector<bool> defined;         // zero-spectrum frames flag SC undefined
};

struct FramePlan {
    int window = 0;  // N = floor(0.046 fs)
    int hop = 0;     // H = floor(0.023 fs)
};

FramePlan frame_plan(double sample_rate);  // throws if N < 2

std::vector<double> hann_window(int n);

// One-sided magnitudes |X(k)| for k = 1..floor(N/2) (DC excluded) and the
// bin center frequencies f_k = k fs / N.  Unnormalized DFT.
void magnitude_spectrum(const std::vector<double>& frame, double sample_rate,
                        std::vector<double>* mags, std::vector<double>* freqs);

double frame_rms(const std::vector<double>& frame, double eps);
// Returns false when the spectrum is all-zero (centroid undefined).
bool spectral_centroid(const std::vector<double>& mags, const std::vector<double>& freqs,
                       double* out);
double spectral_flatness(const std::vector<double>& mags, double eps);
double spectral_flux(const std::vector<double>& mags, const std::vector<double>& prev_mags,
                     double eps);

// The four aligned frame series for a whole track.  eps defaults to 1e-10.
std::array<FrameSeries, 4> extract_all(const Waveform& wav, double eps = 1e-10);

}  // namespace mlsn
