#pragma once

#include <string>
#include <vector>

#include "mlsn/audio.hpp"

namespace mlsn {

struct FeatureCurve {
    std::string song_id;
    Metric metric = Metric::Rms;
    std::vector<double> values;  // on the grid u_l = l/(M-1), l = 0..M-1
};

enum class DistanceKind { Canberra, Correlation, Cosine, Euclidean };
const char* distance_name(DistanceKind k);
DistanceKind parse_distance(const std::string& name);  // throws on unknown name

struct DistanceMatrix {
    int n = 0;
    DistanceKind kind = DistanceKind::Canberra;
    std::vector<double> d;  // dense n*n, symmetric, zero diagonal
    double at(int i, int j) const { return d[static_cast<std::size_t>(i) * n + j]; }
};

// Cubic smoothing spline fit to (frame_times, values), frames flagged
// undefined omitted, evaluated at m grid points on [0,1].  The curvature
// penalty is chosen by generalized cross-validation unless lambda >= 0.
std::vector<double> smooth_resample(const FrameSeries& series, int m, double lambda = -1.0);

// Zero mean, unit sample variance.  Throws on a constant curve.
std::vector<double> standardize(const std::vector<double>& values);

double canberra(const std::vector<double>& g, const std::vector<double>& h);
double alt_distance(const std::vector<double>& g, const std::vector<double>& h, DistanceKind kind);
double curve_distance(const std::vector<double>& g, const std::vector<double>& h, DistanceKind kind);

DistanceMatrix distance_matrix(const std::vector<FeatureCurve>& curves, DistanceKind kind);

}  // namespace mlsn
