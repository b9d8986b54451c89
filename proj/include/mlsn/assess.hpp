#pragma once

#include <string>
#include <vector>

#include "mlsn/sampler.hpp"

namespace mlsn {

// Seven per-layer statistics in Table-1 order.
enum class NetStat { Density, Transitivity, Assortativity, MeanDegree, SdDegree, MeanGeo, Diameter };
constexpr int kNumNetStats = 7;
const char* net_stat_name(NetStat s);  // "Dens.", "Trans.", ...

struct PPCReport {
    int K = 0;
    // indexed [stat][layer]
    std::vector<std::vector<double>> predictive_mean;
    std::vector<std::vector<double>> observed;
    std::vector<std::vector<double>> rmse;
    std::vector<std::vector<long>> excluded_draws;  // undefined-statistic draws
    std::vector<double> layer_avg_rmse;             // one per statistic
};

struct FitMetrics {
    double auc = 0.0;
    double brier = 0.0;
    double log_loss = 0.0;
    bool auc_defined = true;  // false when some layer is single-class
    double dic = 0.0;
    double waic = 0.0;
};

// Posterior predictive check: simulate one network per stored draw, compare
// layer statistics against the observed ones.
PPCReport ppc(const ChainArchive& archive, const MultilayerNetwork& net,
              const DyadicCovariates* cov, Rng& rng);

// Mann-Whitney AUC with half-weight ties; *defined=false on single-class y.
double auc(const std::vector<double>& theta, const std::vector<int>& y, bool* defined = nullptr);
double brier(const std::vector<double>& theta, const std::vector<int>& y);
double log_loss(const std::vector<double>& theta, const std::vector<int>& y);

constexpr double kProbClip = 1e-12;  // log-loss clipping only

// AUC/BS/LL averaged per layer over draws, then across layers; plus DIC/WAIC.
FitMetrics metrics_over_chain(const ChainArchive& archive, const MultilayerNetwork& net,
                              const DyadicCovariates* cov);

double dic(const ChainArchive& archive, const MultilayerNetwork& net,
           const DyadicCovariates* cov);
double waic(const ChainArchive& archive, const MultilayerNetwork& net,
            const DyadicCovariates* cov);

}  // namespace mlsn
