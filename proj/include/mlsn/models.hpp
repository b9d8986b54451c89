#pragma once

#include <string>
#include <vector>

#include "mlsn/graph_build.hpp"
#include "mlsn/netcore.hpp"
#include "mlsn/rng.hpp"

namespace mlsn {

enum class Variant { SMN, SMN_C, SMN_C_BG, SMN_C_LD, SMN_C_SB };

const char* variant_name(Variant v);
Variant parse_variant(const std::string& name);  // throws on unknown name

bool has_covariates(Variant v);   // every variant beyond SMN
bool has_bilinear(Variant v);
bool has_distance(Variant v);
bool has_blocks(Variant v);
bool has_latents(Variant v);      // bilinear or distance

struct Hyper {
    double a_omega = 3, b_omega = 3;
    double a_sigma = 3, b_sigma = 3;
    double a_tau = 3, b_tau = 3;
    double a_kappa = 3, b_kappa = 3;
    double a_varsigma = 3, b_varsigma = 200;
    double a_upsilon = 3, b_upsilon = 100;  // 1 for the distance variant
    double a_rho = 3, b_rho = 200;
    double a_alpha = 1, b_alpha = 1;
    int d = 3;
    int C = 1;
    // Concentration update: exact Metropolis step on log(alpha) against the
    // instantiated weights by default; the auxiliary-variable Gamma mixture
    // is available but slightly biased under a finite number of blocks.
    bool exact_alpha = true;
};

Hyper default_hyperparameters(Variant v);

// All unknowns of one variant at one iteration.  Fields not used by the
// variant stay empty.
struct ModelState {
    Variant variant = Variant::SMN;
    int n = 0, K = 0, p = 0, d = 0, C = 0;

    double zeta = 0.0;
    std::vector<double> mu;        // K
    std::vector<double> delta;     // n*K, node-major: delta[i*K + k]
    std::vector<double> vartheta;  // n
    double omega2 = 1, sigma2 = 1, tau2 = 1, kappa2 = 1;

    std::vector<double> beta;      // K*p: beta[k*p + l]
    double varsigma2 = 1;

    std::vector<double> latent;    // n*d: latent[i*d + r]
    std::vector<double> lambda;    // K
    double upsilon2 = 1;

    std::vector<int> labels;       // n*K: labels[i*K + k], in 0..C-1
    std::vector<double> block;     // K * C(C+1)/2 symmetric affinities
    std::vector<double> weights;   // K*C mixing weights
    double alpha = 1, rho2 = 1;

    bool mu_enabled = true;        // covariate-free reduced form drops mu in SMN

    double& block_at(int a, int b, int k);
    double block_at(int a, int b, int k) const;
    static int block_pairs(int C) { return C * (C + 1) / 2; }

    void check_invariants() const;  // throws on violation
};

ModelState make_state(Variant v, int n, int K, int p, const Hyper& hy);

double linear_predictor(const ModelState& s, const DyadicCovariates* cov, int i, int j, int k);
double edge_probability(double eta);  // standard normal CDF

double log_prior(const ModelState& s, const Hyper& hy);

ModelState prior_draw(Variant v, const Hyper& hy, int n, int K, int p, Rng& rng);

// S prior draws of theta for a random dyad and layer each; the Gaussian part
// of the predictor is standardized to unit conditional prior scale so the
// baseline shapes are comparable across variants.
std::vector<double> prior_predictive_edges(Variant v, const Hyper& hy, int n, int K, int S,
                                           Rng& rng);

MultilayerNetwork simulate_network(const ModelState& s, const DyadicCovariates* cov, Rng& rng);

long parameter_count(Variant v, int n, int K, int p, int d, int C);

// Log-likelihood of the observed network under the probit link.
double log_likelihood(const ModelState& s, const MultilayerNetwork& net,
                      const DyadicCovariates* cov);

}  // namespace mlsn
