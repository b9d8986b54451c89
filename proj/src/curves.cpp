#include "mlsn/curves.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mlsn {

namespace {

// Clamped cubic B-spline basis on [0,1].
class BSplineBasis {
public:
    explicit BSplineBasis(int n_basis) {
        // n_basis >= 4; interior knots equally spaced.
        const int interior = n_basis - 4;
        knots_.assign(4, 0.0);
        for (int i = 1; i <= interior; ++i)
            knots_.push_back(static_cast<double>(i) / (interior + 1));
        for (int i = 0; i < 4; ++i) knots_.push_back(1.0);
        n_basis_ = n_basis;
    }

    int size() const { return n_basis_; }

    // Values of the four basis functions supported at x; first is their index.
    void eval(double x, int* first, double out[4]) const { eval_deriv(x, 0, first, out); }
    void eval_d2(double x, int* first, double out[4]) const { eval_deriv(x, 2, first, out); }

    const std::vector<double>& knots() const { return knots_; }

private:
    int span(double x) const {
        // Index s with knots[s] <= x < knots[s+1], degree-aware clamping.
        const int hi = n_basis_;  // last valid span start index is n_basis_-1
        if (x >= 1.0) return n_basis_ - 1;
        if (x <= 0.0) return 3;
        int lo = 3, up = hi;
        while (up - lo > 1) {
            const int mid = (lo + up) / 2;
            if (x < knots_[mid]) up = mid; else lo = mid;
        }
        return lo;
    }

    void eval_deriv(double x, int order, int* first, double out[4]) const {
        const int s = span(x);
        *first = s - 3;
        // Cox-de Boor triangle for degree 3 with derivative lowering.
        double nd[4][4] = {{0}};
        nd[0][0] = 1.0;
        for (int deg = 1; deg <= 3; ++deg) {
            for (int j = 0; j <= deg; ++j) {
                const int i = s - deg + j;
                double v = 0.0;
                const bool differentiate = (order >= 4 - deg);
                const double dl = knots_[i + deg] - knots_[i];
                const double dr = knots_[i + deg + 1] - knots_[i + 1];
                if (j > 0 && dl > 0.0) {
                    const double w = differentiate ? deg / dl : (x - knots_[i]) / dl;
                    v += w * nd[deg - 1][j - 1];
                }
                if (j < deg && dr > 0.0) {
                    const double w = differentiate ? -deg / dr : (knots_[i + deg + 1] - x) / dr;
                    v += w * nd[deg - 1][j];
                }
                nd[deg][j] = v;
            }
        }
        for (int j = 0; j < 4; ++j) out[j] = nd[3][j];
    }

    std::vector<double> knots_;
    int n_basis_ = 0;
};

// Exact integral of products of second derivatives: the integrands are
// piecewise quadratic, so two-point Gauss per knot interval is exact.
Eigen::MatrixXd curvature_penalty(const BSplineBasis& basis) {
    const int q = basis.size();
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(q, q);
    const std::vector<double>& knots = basis.knots();
    const double g = 1.0 / std::sqrt(3.0);
    for (std::size_t s = 3; s + 4 < knots.size(); ++s) {
        const double a = knots[s], b = knots[s + 1];
        if (b <= a) continue;
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        for (int pt = 0; pt < 2; ++pt) {
            const double x = mid + (pt == 0 ? -g : g) * half;
            int first;
            double v[4];
            basis.eval_d2(x, &first, v);
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c)
                    omega(first + r, first + c) += half * v[r] * v[c];
        }
    }
    return omega;
}

}  // namespace

const char* distance_name(DistanceKind k) {
    switch (k) {
        case DistanceKind::Canberra: return "canberra";
        case DistanceKind::Correlation: return "correlation";
        case DistanceKind::Cosine: return "cosine";
        case DistanceKind::Euclidean: return "euclidean";
    }
    return "?";
}

DistanceKind parse_distance(const std::string& name) {
    if (name == "canberra") return DistanceKind::Canberra;
    if (name == "correlation") return DistanceKind::Correlation;
    if (name == "cosine") return DistanceKind::Cosine;
    if (name == "euclidean") return DistanceKind::Euclidean;
    throw std::invalid_argument("unknown distance kind: " + name);
}

std::vector<double> smooth_resample(const FrameSeries& series, int m, double lambda) {
    std::vector<double> t, y;
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        if (series.defined.empty() || series.defined[i]) {
            t.push_back(series.frame_times[i]);
            y.push_back(series.values[i]);
        }
    }
    const int npts = static_cast<int>(t.size());
    if (npts < 4) throw std::runtime_error("smooth_resample: fewer than 4 valid frames");
    if (m < 2) throw std::invalid_argument("smooth_resample: grid size < 2");

    const int q = std::clamp(npts, 4, 64);
    BSplineBasis basis(q);

    Eigen::MatrixXd btb = Eigen::MatrixXd::Zero(q, q);
    Eigen::VectorXd bty = Eigen::VectorXd::Zero(q);
    std::vector<int> firsts(npts);
    std::vector<std::array<double, 4>> rows(npts);
    for (int i = 0; i < npts; ++i) {
        int first;
        double v[4];
        basis.eval(t[i], &first, v);
        firsts[i] = first;
        for (int j = 0; j < 4; ++j) rows[i][j] = v[j];
        for (int r = 0; r < 4; ++r) {
            bty(first + r) += v[r] * y[i];
            for (int c = 0; c < 4; ++c) btb(first + r, first + c) += v[r] * v[c];
        }
    }
    const Eigen::MatrixXd omega = curvature_penalty(basis);

    auto fit_for = [&](double lam) { return (btb + lam * omega).ldlt(); };

    if (lambda < 0.0) {
        // GCV over a log-spaced grid, scale-normalized by the traces.
        const double scale = (omega.trace() > 0.0) ? btb.trace() / omega.trace() : 1.0;
        double best_gcv = std::numeric_limits<double>::infinity();
        double best_lambda = scale;
        for (int e = -8; e <= 8; ++e) {
            const double lam = scale * std::pow(10.0, e);
            const auto ldlt = fit_for(lam);
            const Eigen::VectorXd theta = ldlt.solve(bty);
            const double tr_h = ldlt.solve(btb).trace();
            double rss = 0.0;
            for (int i = 0; i < npts; ++i) {
                double fit = 0.0;
                for (int j = 0; j < 4; ++j) fit += rows[i][j] * theta(firsts[i] + j);
                rss += (y[i] - fit) * (y[i] - fit);
            }
            const double denom = npts - tr_h;
            if (denom <= 1e-8) continue;
            const double gcv = npts * rss / (denom * denom);
            if (gcv < best_gcv) {
                best_gcv = gcv;
                best_lambda = lam;
            }
        }
        lambda = best_lambda;
    }

    const Eigen::VectorXd theta = fit_for(lambda).solve(bty);

    std::vector<double> out(m);
    for (int l = 0; l < m; ++l) {
        const double u = static_cast<double>(l) / (m - 1);
        int first;
        double v[4];
        basis.eval(u, &first, v);
        double val = 0.0;
        for (int j = 0; j < 4; ++j) val += v[j] * theta(first + j);
        out[l] = val;
    }
    return out;
}

std::vector<double> standardize(const std::vector<double>& values) {
    const std::size_t m = values.size();
    if (m < 2) throw std::invalid_argument("standardize: need at least 2 values");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= m;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (m - 1));
    if (sd <= 0.0) throw std::runtime_error("standardize: constant curve");
    std::vector<double> out(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = (values[i] - mean) / sd;
    return out;
}

double canberra(const std::vector<double>& g, const std::vector<double>& h) {
    if (g.size() != h.size()) throw std::invalid_argument("canberra: length mismatch");
    double s = 0.0;
    for (std::size_t l = 0; l < g.size(); ++l) {
        const double den = std::fabs(g[l]) + std::fabs(h[l]);
        if (den > 0.0) s += std::fabs(g[l] - h[l]) / den;
    }
    return s;
}

double alt_distance(const std::vector<double>& g, const std::vector<double>& h, DistanceKind kind) {
    if (g.size() != h.size()) throw std::invalid_argument("alt_distance: length mismatch");
    const std::size_t m = g.size();
    switch (kind) {
        case DistanceKind::Euclidean: {
            double s = 0.0;
            for (std::size_t l = 0; l < m; ++l) s += (g[l] - h[l]) * (g[l] - h[l]);
            return std::sqrt(s);
        }
        case DistanceKind::Cosine: {
            double gg = 0.0, hh = 0.0, gh = 0.0;
            for (std::size_t l = 0; l < m; ++l) {
                gg += g[l] * g[l];
                hh += h[l] * h[l];
                gh += g[l] * h[l];
            }
            if (gg <= 0.0 || hh <= 0.0) throw std::runtime_error("cosine distance: zero vector");
            return 1.0 - gh / std::sqrt(gg * hh);
        }
        case DistanceKind::Correlation: {
            double mg = 0.0, mh = 0.0;
            for (std::size_t l = 0; l < m; ++l) {
                mg += g[l];
                mh += h[l];
            }
            mg /= m;
            mh /= m;
            double vg = 0.0, vh = 0.0, cv = 0.0;
            for (std::size_t l = 0; l < m; ++l) {
                vg += (g[l] - mg) * (g[l] - mg);
                vh += (h[l] - mh) * (h[l] - mh);
                cv += (g[l] - mg) * (h[l] - mh);
            }
            if (vg <= 0.0 || vh <= 0.0)
                throw std::runtime_error("correlation distance: zero-variance input");
            return 1.0 - cv / std::sqrt(vg * vh);
        }
        case DistanceKind::Canberra:
            return canberra(g, h);
    }
    throw std::logic_error("alt_distance: unreachable");
}

double curve_distance(const std::vector<double>& g, const std::vector<double>& h,
                      DistanceKind kind) {
    return kind == DistanceKind::Canberra ? canberra(g, h) : alt_distance(g, h, kind);
}

DistanceMatrix distance_matrix(const std::vector<FeatureCurve>& curves, DistanceKind kind) {
    const int n = static_cast<int>(curves.size());
    DistanceMatrix dm;
    dm.n = n;
    dm.kind = kind;
    dm.d.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        if (curves[i].values.size() != curves[0].values.size())
            throw std::invalid_argument("distance_matrix: grid size mismatch");
        for (int j = i + 1; j < n; ++j) {
            const double d = curve_distance(curves[i].values, curves[j].values, kind);
            dm.d[static_cast<std::size_t>(i) * n + j] = d;
            dm.d[static_cast<std::size_t>(j) * n + i] = d;
        }
    }
    return dm;
}

}  // namespace mlsn
