#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mlsn/models.hpp"

namespace mlsn {

// ModelState plus the probit auxiliary variables, layer-major over i<j dyads.
struct AugmentedState {
    ModelState state;
    std::vector<double> z;  // z[k*D + dyad(i,j)]

    double z_at(int i, int j, int k) const {
        return z[static_cast<std::size_t>(k) * state.n * (state.n - 1) / 2 +
                 DyadicCovariates::dyad_index(i, j, state.n)];
    }
    double& z_at(int i, int j, int k) {
        return z[static_cast<std::size_t>(k) * state.n * (state.n - 1) / 2 +
                 DyadicCovariates::dyad_index(i, j, state.n)];
    }
};

AugmentedState make_augmented(ModelState state);

struct Moments {
    double mean = 0.0, var = 0.0;
};
struct IgParams {
    double shape = 0.0, rate = 0.0;
};

// Analytic full-conditional moments, exposed so tests can compare each kernel
// against quadrature of the log joint.
Moments zeta_fc(const AugmentedState& a, const DyadicCovariates* cov, const Hyper& hy);
Moments mu_fc(const AugmentedState& a, const DyadicCovariates* cov, int k);
Moments delta_fc(const AugmentedState& a, const DyadicCovariates* cov, int i, int k);
Moments vartheta_fc(const AugmentedState& a, int i);
void beta_fc(const AugmentedState& a, const DyadicCovariates& cov, int k, Eigen::VectorXd* mean,
             Eigen::MatrixXd* covariance);
void bilinear_u_fc(const AugmentedState& a, const DyadicCovariates* cov, int i,
                   Eigen::VectorXd* mean, Eigen::MatrixXd* covariance);
Moments bilinear_lambda_fc(const AugmentedState& a, const DyadicCovariates* cov, int k);
Moments block_gamma_fc(const AugmentedState& a, const DyadicCovariates* cov, int b1, int b2,
                       int k);
std::vector<double> label_log_probs(const AugmentedState& a, const DyadicCovariates* cov, int i,
                                    int k);
std::vector<double> weight_concentration(const ModelState& s, int k);

IgParams omega2_fc(const ModelState& s, const Hyper& hy);
IgParams sigma2_fc(const ModelState& s, const Hyper& hy);
IgParams tau2_fc(const ModelState& s, const Hyper& hy);
IgParams kappa2_fc(const ModelState& s, const Hyper& hy);
IgParams varsigma2_fc(const ModelState& s, const Hyper& hy);
IgParams upsilon2_fc(const ModelState& s, const Hyper& hy);
IgParams rho2_fc(const ModelState& s, const Hyper& hy);

// Log full conditionals targeted by the Metropolis steps of the distance
// variant, as functions of the proposed value.
double ld_log_fcd_u(const AugmentedState& a, const DyadicCovariates* cov, int i, const double* ui);
double ld_log_fcd_lambda(const AugmentedState& a, const DyadicCovariates* cov, int k,
                         double lambda);

// Mixture weight of the two-component Gamma update for the Dirichlet
// concentration (auxiliary-variable scheme).
double alpha_mixture_weight(double a_alpha, double b_alpha, int m_dot, int n_dot, double log_eta);

// Robbins-Monro bookkeeping for the distance-variant random walks.
struct AdaptationState {
    std::vector<double> ell_node;   // log proposal scales, one per node
    std::vector<double> ell_layer;  // one per layer
    std::vector<long> accept_node, attempt_node;
    std::vector<long> accept_layer, attempt_layer;
    long t = 0;
    bool adapting = true;

    static constexpr double kEta0 = 0.05;
    static constexpr double kTargetNode = 0.234;
    static constexpr double kTargetLayer = 0.44;
    static constexpr double kLogSMin = -6.907755278982137;  // log 1e-3
    static constexpr double kLogSMax = 2.302585092994046;   // log 10
};

AdaptationState make_adaptation(int n, int K);

// One-block kernels (Gibbs draws with the moments above).
void update_z(AugmentedState& a, const MultilayerNetwork& net, const DyadicCovariates* cov,
              Rng& rng);
void update_zeta(AugmentedState& a, const DyadicCovariates* cov, const Hyper& hy, Rng& rng);
void update_mu(AugmentedState& a, const DyadicCovariates* cov, Rng& rng);
void update_delta(AugmentedState& a, const DyadicCovariates* cov, Rng& rng);
void update_vartheta(AugmentedState& a, Rng& rng);
void update_beta(AugmentedState& a, const DyadicCovariates& cov, Rng& rng);
void update_bilinear(AugmentedState& a, const DyadicCovariates* cov, Rng& rng);
void update_distance_latents(AugmentedState& a, const DyadicCovariates* cov,
                             AdaptationState& adapt, Rng& rng);
void update_blocks(AugmentedState& a, const DyadicCovariates* cov, const Hyper& hy, Rng& rng);
void update_variances(AugmentedState& a, const Hyper& hy, Rng& rng);

// Full sweep in the fixed order z -> zeta -> mu -> delta -> vartheta -> beta
// -> variant blocks -> variances.  adapt may be null for non-distance
// variants.
void sweep(AugmentedState& a, const MultilayerNetwork& net, const DyadicCovariates* cov,
           AdaptationState* adapt, const Hyper& hy, Rng& rng);

struct ChainConfig {
    Variant variant = Variant::SMN;
    Hyper hyper;
    long burn = 2000;
    long keep = 10000;
    int thin = 10;
    std::uint64_t seed = 1;
    std::uint64_t stream = 0;     // substream id, one per chain
    bool louvain_init = true;     // SB labels start from Louvain communities
    bool reduced_mu = false;      // covariate-free reduced form (drops mu)
};

struct ChainArchive {
    ChainConfig config;
    int n = 0, K = 0, p = 0;
    std::vector<ModelState> draws;           // keep/thin states
    std::vector<double> loglik;              // one per stored draw
    std::vector<std::string> scalar_names;   // flattened parameter labels
    std::vector<double> scalar_mean;
    std::vector<double> scalar_mcse;
    std::vector<double> node_accept_rate;    // LD only, post-adaptation
    std::vector<double> layer_accept_rate;
    double wall_seconds = 0.0;
};

// Flatten every continuous scalar block of a state with stable names.
std::vector<std::pair<std::string, double>> flatten_state(const ModelState& s);

// Batch-means Monte Carlo standard error with floor(sqrt(S)) batches.
double batch_means_mcse(const std::vector<double>& draws);

ChainArchive run_chain(const MultilayerNetwork& net, const DyadicCovariates* cov,
                       const ChainConfig& config);

}  // namespace mlsn
