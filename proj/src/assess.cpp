#include "mlsn/assess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mlsn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double clip_prob(double theta) { return std::min(std::max(theta, 1e-300), 1.0 - 1e-16); }

// Seven statistics of one layer; defined[] marks usable entries.
void stat_vector(const Layer& g, double out[kNumNetStats], bool defined[kNumNetStats]) {
    const LayerStats st = layer_stats(g);
    out[0] = st.density;
    out[1] = st.transitivity;
    out[2] = st.assortativity;
    out[3] = st.mean_degree;
    out[4] = st.sd_degree;
    out[5] = st.mean_geodesic;
    out[6] = st.diameter;
    for (int q = 0; q < kNumNetStats; ++q) defined[q] = true;
    defined[2] = st.assortativity_defined;
    defined[5] = defined[6] = st.geodesic_defined;
}

std::vector<int> layer_outcomes(const MultilayerNetwork& net, int k) {
    std::vector<int> y;
    y.reserve(static_cast<std::size_t>(net.n) * (net.n - 1) / 2);
    for (int i = 0; i < net.n; ++i)
        for (int j = i + 1; j < net.n; ++j) y.push_back(net.layers[k].at(i, j) ? 1 : 0);
    return y;
}

std::vector<double> layer_probs(const ModelState& s, const DyadicCovariates* cov, int k) {
    std::vector<double> theta;
    theta.reserve(static_cast<std::size_t>(s.n) * (s.n - 1) / 2);
    for (int i = 0; i < s.n; ++i)
        for (int j = i + 1; j < s.n; ++j)
            theta.push_back(edge_probability(linear_predictor(s, cov, i, j, k)));
    return theta;
}

double log_mean_exp(const std::vector<double>& v) {
    const double m = *std::max_element(v.begin(), v.end());
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s / v.size());
}

}  // namespace

const char* net_stat_name(NetStat s) {
    switch (s) {
        case NetStat::Density: return "Dens.";
        case NetStat::Transitivity: return "Trans.";
        case NetStat::Assortativity: return "Assor.";
        case NetStat::MeanDegree: return "M. Deg.";
        case NetStat::SdDegree: return "SD Deg.";
        case NetStat::MeanGeo: return "M. Geo.";
        case NetStat::Diameter: return "Diam.";
    }
    return "?";
}

PPCReport ppc(const ChainArchive& archive, const MultilayerNetwork& net,
              const DyadicCovariates* cov, Rng& rng) {
    if (archive.draws.empty()) throw std::invalid_argument("ppc: empty archive");
    const int K = net.K;
    PPCReport rep;
    rep.K = K;
    rep.predictive_mean.assign(kNumNetStats, std::vector<double>(K, 0.0));
    rep.observed.assign(kNumNetStats, std::vector<double>(K, kNaN));
    rep.rmse.assign(kNumNetStats, std::vector<double>(K, kNaN));
    rep.excluded_draws.assign(kNumNetStats, std::vector<long>(K, 0));
    std::vector<std::vector<long>> used(kNumNetStats, std::vector<long>(K, 0));

    std::vector<std::vector<bool>> obs_defined(kNumNetStats, std::vector<bool>(K, false));
    for (int k = 0; k < K; ++k) {
        double v[kNumNetStats];
        bool def[kNumNetStats];
        stat_vector(net.layers[k], v, def);
        for (int q = 0; q < kNumNetStats; ++q) {
            rep.observed[q][k] = def[q] ? v[q] : kNaN;
            obs_defined[q][k] = def[q];
        }
    }

    for (const ModelState& s : archive.draws) {
        const MultilayerNetwork sim = simulate_network(s, cov, rng);
        for (int k = 0; k < K; ++k) {
            double v[kNumNetStats];
            bool def[kNumNetStats];
            stat_vector(sim.layers[k], v, def);
            for (int q = 0; q < kNumNetStats; ++q) {
                if (def[q]) {
                    rep.predictive_mean[q][k] += v[q];
                    ++used[q][k];
                } else {
                    ++rep.excluded_draws[q][k];
                }
            }
        }
    }

    rep.layer_avg_rmse.assign(kNumNetStats, kNaN);
    for (int q = 0; q < kNumNetStats; ++q) {
        double sum = 0.0;
        int count = 0;
        for (int k = 0; k < K; ++k) {
            rep.predictive_mean[q][k] =
                used[q][k] ? rep.predictive_mean[q][k] / used[q][k] : kNaN;
            if (used[q][k] && obs_defined[q][k]) {
                rep.rmse[q][k] = std::fabs(rep.predictive_mean[q][k] - rep.observed[q][k]);
                sum += rep.rmse[q][k];
                ++count;
            }
        }
        if (count) rep.layer_avg_rmse[q] = sum / count;
    }
    return rep;
}

double auc(const std::vector<double>& theta, const std::vector<int>& y, bool* defined) {
    if (theta.size() != y.size()) throw std::invalid_argument("auc: length mismatch");
    const std::size_t m = y.size();
    std::size_t n1 = 0;
    for (int v : y) n1 += (v != 0);
    const std::size_t n0 = m - n1;
    if (n1 == 0 || n0 == 0) {
        if (defined) *defined = false;
        return kNaN;
    }
    if (defined) *defined = true;
    // Midrank form of the Mann-Whitney statistic.
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return theta[a] < theta[b]; });
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < m) {
        std::size_t j = i;
        while (j + 1 < m && theta[order[j + 1]] == theta[order[i]]) ++j;
        const double midrank = 0.5 * (i + 1 + j + 1);
        for (std::size_t q = i; q <= j; ++q)
            if (y[order[q]]) rank_sum_pos += midrank;
        i = j + 1;
    }
    return (rank_sum_pos - 0.5 * n1 * (n1 + 1)) / (static_cast<double>(n1) * n0);
}

double brier(const std::vector<double>& theta, const std::vector<int>& y) {
    if (theta.size() != y.size()) throw std::invalid_argument("brier: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += (theta[i] - y[i]) * (theta[i] - y[i]);
    return s / y.size();
}

double log_loss(const std::vector<double>& theta, const std::vector<int>& y) {
    if (theta.size() != y.size()) throw std::invalid_argument("log_loss: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double t = std::min(std::max(theta[i], kProbClip), 1.0 - kProbClip);
        s += y[i] ? std::log(t) : std::log1p(-t);
    }
    return -s / y.size();
}

double dic(const ChainArchive& archive, const MultilayerNetwork& net,
           const DyadicCovariates* cov) {
    if (archive.draws.empty()) throw std::invalid_argument("dic: empty archive");
    const std::size_t S = archive.draws.size();
    double mean_dev = 0.0;
    for (double ll : archive.loglik) mean_dev += -2.0 * ll;
    mean_dev /= S;

    double dev_hat = 0.0;
    if (has_blocks(archive.config.variant)) {
        // Discrete labels cannot be averaged; use the posterior mean of the
        // dyad probabilities as the point estimate.
        const int n = net.n, K = net.K;
        for (int k = 0; k < K; ++k) {
            std::vector<double> theta_bar(static_cast<std::size_t>(n) * (n - 1) / 2, 0.0);
            for (const ModelState& s : archive.draws) {
                const std::vector<double> theta = layer_probs(s, cov, k);
                for (std::size_t t = 0; t < theta.size(); ++t) theta_bar[t] += theta[t];
            }
            std::size_t t = 0;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j, ++t) {
                    const double tb = clip_prob(theta_bar[t] / S);
                    dev_hat += -2.0 * (net.layers[k].at(i, j) ? std::log(tb) : std::log1p(-tb));
                }
        }
    } else {
        ModelState mean_state = archive.draws.front();
        const auto base = flatten_state(mean_state);
        std::vector<double> acc(base.size(), 0.0);
        for (const ModelState& s : archive.draws) {
            const auto flat = flatten_state(s);
            for (std::size_t q = 0; q < acc.size(); ++q) acc[q] += flat[q].second;
        }
        // Rebuild the mean state field by field in flatten order.
        std::size_t q = 0;
        mean_state.zeta = acc[q++] / S;
        if (mean_state.mu_enabled)
            for (int k = 0; k < mean_state.K; ++k) mean_state.mu[k] = acc[q++] / S;
        for (double& v : mean_state.delta) v = acc[q++] / S;
        for (double& v : mean_state.vartheta) v = acc[q++] / S;
        mean_state.omega2 = acc[q++] / S;
        if (mean_state.mu_enabled) mean_state.sigma2 = acc[q++] / S;
        mean_state.tau2 = acc[q++] / S;
        mean_state.kappa2 = acc[q++] / S;
        for (double& v : mean_state.beta) v = acc[q++] / S;
        if (mean_state.p > 0) mean_state.varsigma2 = acc[q++] / S;
        if (has_latents(mean_state.variant)) {
            for (double& v : mean_state.latent) v = acc[q++] / S;
            for (double& v : mean_state.lambda) v = acc[q++] / S;
            mean_state.upsilon2 = acc[q++] / S;
        }
        dev_hat = -2.0 * log_likelihood(mean_state, net, cov);
    }
    return 2.0 * mean_dev - dev_hat;
}

double waic(const ChainArchive& archive, const MultilayerNetwork& net,
            const DyadicCovariates* cov) {
    if (archive.draws.empty()) throw std::invalid_argument("waic: empty archive");
    const std::size_t S = archive.draws.size();
    const int n = net.n, K = net.K;
    const std::size_t D = static_cast<std::size_t>(n) * (n - 1) / 2;

    double lppd = 0.0, p_waic = 0.0;
    std::vector<std::vector<double>> lp(D, std::vector<double>(S));
    for (int k = 0; k < K; ++k) {
        for (std::size_t s = 0; s < S; ++s) {
            const std::vector<double> theta = layer_probs(archive.draws[s], cov, k);
            std::size_t t = 0;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j, ++t) {
                    const double tc = clip_prob(theta[t]);
                    lp[t][s] = net.layers[k].at(i, j) ? std::log(tc) : std::log1p(-tc);
                }
        }
        for (std::size_t t = 0; t < D; ++t) {
            lppd += log_mean_exp(lp[t]);
            double mean = 0.0;
            for (double v : lp[t]) mean += v;
            mean /= S;
            double ss = 0.0;
            for (double v : lp[t]) ss += (v - mean) * (v - mean);
            p_waic += (S > 1) ? ss / (S - 1) : 0.0;
        }
    }
    return -2.0 * (lppd - p_waic);
}

FitMetrics metrics_over_chain(const ChainArchive& archive, const MultilayerNetwork& net,
                              const DyadicCovariates* cov) {
    if (archive.draws.empty()) throw std::invalid_argument("metrics_over_chain: empty archive");
    const int K = net.K;
    const std::size_t S = archive.draws.size();
    FitMetrics fm;
    double auc_sum = 0.0, bs_sum = 0.0, ll_sum = 0.0;
    int auc_layers = 0;
    for (int k = 0; k < K; ++k) {
        const std::vector<int> y = layer_outcomes(net, k);
        double a = 0.0, b = 0.0, l = 0.0;
        bool layer_auc_defined = true;
        for (std::size_t s = 0; s < S; ++s) {
            const std::vector<double> theta = layer_probs(archive.draws[s], cov, k);
            bool def;
            const double av = auc(theta, y, &def);
            if (def) a += av; else layer_auc_defined = false;
            b += brier(theta, y);
            l += log_loss(theta, y);
        }
        if (layer_auc_defined) {
            auc_sum += a / S;
            ++auc_layers;
        } else {
            fm.auc_defined = false;
        }
        bs_sum += b / S;
        ll_sum += l / S;
    }
    fm.auc = auc_layers ? auc_sum / auc_layers : kNaN;
    fm.brier = bs_sum / K;
    fm.log_loss = ll_sum / K;
    fm.dic = dic(archive, net, cov);
    fm.waic = waic(archive, net, cov);
    return fm;
}

}  // namespace mlsn
