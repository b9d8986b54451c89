#include "mlsn/sampler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mlsn/community_detect.hpp"

namespace mlsn {

namespace {

std::size_t ndyads(int n) { return static_cast<std::size_t>(n) * (n - 1) / 2; }

// Residual of z against eta with the target's own contribution added back.
double resid_excluding(const AugmentedState& a, const DyadicCovariates* cov, int i, int j, int k,
                       double own_term) {
    return a.z_at(i, j, k) - (linear_predictor(a.state, cov, i, j, k) - own_term);
}

}  // namespace

AugmentedState make_augmented(ModelState state) {
    AugmentedState a;
    a.z.assign(ndyads(state.n) * state.K, 0.0);
    a.state = std::move(state);
    return a;
}

Moments zeta_fc(const AugmentedState& a, const DyadicCovariates* cov, const Hyper& hy) {
    const ModelState& s = a.state;
    (void)hy;
    const double v2 = 1.0 / (1.0 / s.omega2 + static_cast<double>(s.K) * ndyads(s.n));
    double sum = 0.0;
    for (int k = 0; k < s.K; ++k)
        for (int i = 0; i < s.n; ++i)
            for (int j = i + 1; j < s.n; ++j) sum += resid_excluding(a, cov, i, j, k, s.zeta);
    return {v2 * sum, v2};
}

Moments mu_fc(const AugmentedState& a, const DyadicCovariates* cov, int k) {
    const ModelState& s = a.state;
    const double v2 = 1.0 / (1.0 / s.sigma2 + static_cast<double>(ndyads(s.n)));
    double sum = 0.0;
    for (int i = 0; i < s.n; ++i)
        for (int j = i + 1; j < s.n; ++j) sum += resid_excluding(a, cov, i, j, k, s.mu[k]);
    return {v2 * sum, v2};
}

Moments delta_fc(const AugmentedState& a, const DyadicCovariates* cov, int i, int k) {
    const ModelState& s = a.state;
    const double v2 = 1.0 / (1.0 / s.tau2 + (s.n - 1));
    double sum = s.vartheta[i] / s.tau2;
    const double own = s.delta[static_cast<std::size_t>(i) * s.K + k];
    for (int j = 0; j < s.n; ++j)
        if (j != i) sum += resid_excluding(a, cov, i, j, k, own);
    return {v2 * sum, v2};
}

Moments vartheta_fc(const AugmentedState& a, int i) {
    const ModelState& s = a.state;
    const double v2 = 1.0 / (1.0 / s.kappa2 + s.K / s.tau2);
    double sum = 0.0;
    for (int k = 0; k < s.K; ++k) sum += s.delta[static_cast<std::size_t>(i) * s.K + k];
    return {v2 * sum / s.tau2, v2};
}

void beta_fc(const AugmentedState& a, const DyadicCovariates& cov, int k, Eigen::VectorXd* mean,
             Eigen::MatrixXd* covariance) {
    const ModelState& s = a.state;
    const int p = s.p;
    Eigen::MatrixXd prec = Eigen::MatrixXd::Identity(p, p) / s.varsigma2;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(p);
    for (int i = 0; i < s.n; ++i)
        for (int j = i + 1; j < s.n; ++j) {
            const std::size_t t = DyadicCovariates::dyad_index(i, j, s.n);
            Eigen::Map<const Eigen::VectorXd> x(&cov.x[t * p], p);
            double own = 0.0;
            for (int l = 0; l < p; ++l) own += x(l) * s.beta[static_cast<std::size_t>(k) * p + l];
            prec += x * x.transpose();
            rhs += resid_excluding(a, &cov, i, j, k, own) * x;
        }
    *covariance = prec.llt().solve(Eigen::MatrixXd::Identity(p, p));
    *mean = *covariance * rhs;
}

void bilinear_u_fc(const AugmentedState& a, const DyadicCovariates* cov, int i,
                   Eigen::VectorXd* mean, Eigen::MatrixXd* covariance) {
    const ModelState& s = a.state;
    const int d = s.d;
    Eigen::MatrixXd prec = Eigen::MatrixXd::Identity(d, d);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d);
    for (int k = 0; k < s.K; ++k) {
        const double lam = s.lambda[k];
        for (int j = 0; j < s.n; ++j) {
            if (j == i) continue;
            Eigen::Map<const Eigen::VectorXd> uj(&s.latent[static_cast<std::size_t>(j) * d], d);
            double ip = 0.0;
            for (int r = 0; r < d; ++r) ip += s.latent[static_cast<std::size_t>(i) * d + r] * uj(r);
            prec += lam * lam * uj * uj.transpose();
            rhs += lam * resid_excluding(a, cov, i, j, k, lam * ip) * uj;
        }
    }
    *covariance = prec.llt().solve(Eigen::MatrixXd::Identity(d, d));
    *mean = *covariance * rhs;
}

Moments bilinear_lambda_fc(const AugmentedState& a, const DyadicCovariates* cov, int k) {
    const ModelState& s = a.state;
    double quad = 0.0, sum = 0.0;
    for (int i = 0; i < s.n; ++i)
        for (int j = i + 1; j < s.n; ++j) {
            double ip = 0.0;
            for (int r = 0; r < s.d; ++r)
                ip += s.latent[static_cast<std::size_t>(i) * s.d + r] *
                      s.latent[static_cast<std::size_t>(j) * s.d + r];
            quad += ip * ip;
            sum += resid_excluding(a, cov, i, j, k, s.lambda[k] * ip) * ip;
        }
    const double v2 = 1.0 / (1.0 / s.upsilon2 + quad);
    return {v2 * sum, v2};
}

Moments block_gamma_fc(const AugmentedState& a, const DyadicCovariates* cov, int b1, int b2,
                       int k) {
    const ModelState& s = a.state;
    if (b1 > b2) std::swap(b1, b2);
    long count = 0;
    double sum = 0.0;
    for (int i = 0; i < s.n; ++i)
        for (int j = i + 1; j < s.n; ++j) {
            int ci = s.labels[static_cast<std::size_t>(i) * s.K + k];
            int cj = s.labels[static_cast<std::size_t>(j) * s.K + k];
            if (ci > cj) std::swap(ci, cj);
            if (ci != b1 || cj != b2) continue;
            ++count;
            sum += resid_excluding(a, cov, i, j, k, s.block_at(b1, b2, k));
        }
    const double v2 = 1.0 / (1.0 / s.rho2 + count);
    return {v2 * sum, v2};
}

std::vector<double> label_log_probs(const AugmentedState& a, const DyadicCovariates* cov, int i,
                                    int k) {
    const ModelState& s = a.state;
    std::vector<double> lp(s.C);
    // Base residual with the block term removed; candidate c then subtracts
    // gamma_{phi(c, xi_j),k}.
    std::vector<double> base(s.n, 0.0);
    for (int j = 0; j < s.n; ++j) {
        if (j == i) continue;
        const int ci = s.labels[static_cast<std::size_t>(i) * s.K + k];
        const int cj = s.labels[static_cast<std::size_t>(j) * s.K + k];
        base[j] = resid_excluding(a, cov, i, j, k, s.block_at(ci, cj, k));
    }
    for (int c = 0; c < s.C; ++c) {
        const double w = s.weights[static_cast<std::size_t>(k) * s.C + c];
        double v = std::log(std::max(w, 1e-300));
        for (int j = 0; j < s.n; ++j) {
            if (j == i) continue;
            const int cj = s.labels[static_cast<std::size_t>(j) * s.K + k];
            const double r = base[j] - s.block_at(c, cj, k);
            v -= 0.5 * r * r;
        }
        lp[c] = v;
    }
    return lp;
}

std::vector<double> weight_concentration(const ModelState& s, int k) {
    std::vector<double> conc(s.C, s.alpha / s.C);
    for (int i = 0; i < s.n; ++i) conc[s.labels[static_cast<std::size_t>(i) * s.K + k]] += 1.0;
    return conc;
}

IgParams omega2_fc(const ModelState& s, const Hyper& hy) {
    return {hy.a_omega + 0.5, hy.b_omega + 0.5 * s.zeta * s.zeta};
}

IgParams sigma2_fc(const ModelState& s, const Hyper& hy) {
    double ss = 0.0;
    for (double m : s.mu) ss += m * m;
    return {hy.a_sigma + 0.5 * s.K, hy.b_sigma + 0.5 * ss};
}

IgParams tau2_fc(const ModelState& s, const Hyper& hy) {
    double ss = 0.0;
    for (int i = 0; i < s.n; ++i)
        for (int k = 0; k < s.K; ++k) {
            const double r = s.delta[static_cast<std::size_t>(i) * s.K + k] - s.vartheta[i];
            ss += r * r;
        }
    return {hy.a_tau + 0.5 * s.n * s.K, hy.b_tau + 0.5 * ss};
}

IgParams kappa2_fc(const ModelState& s, const Hyper& hy) {
    double ss = 0.0;
    for (double v : s.vartheta) ss += v * v;
    return {hy.a_kappa + 0.5 * s.n, hy.b_kappa + 0.5 * ss};
}

IgParams varsigma2_fc(const ModelState& s, const Hyper& hy) {
    double ss = 0.0;
    for (double b : s.beta) ss += b * b;
    return {hy.a_varsigma + 0.5 * s.K * s.p, hy.b_varsigma + 0.5 * ss};
}

IgParams upsilon2_fc(const ModelState& s, const Hyper& hy) {
    double ss = 0.0;
    for (double l : s.lambda) ss += l * l;
    return {hy.a_upsilon + 0.5 * s.K, hy.b_upsilon + 0.5 * ss};
}

IgParams rho2_fc(const ModelState& s, const Hyper& hy) {
    double ss = 0.0;
    for (double g : s.block) ss += g * g;
    return {hy.a_rho + 0.25 * s.K * s.C * (s.C + 1), hy.b_rho + 0.5 * ss};
}

double ld_log_fcd_u(const AugmentedState& a, const DyadicCovariates* cov, int i,
                    const double* ui) {
    const ModelState& s = a.state;
    double lp = 0.0;
    for (int r = 0; r < s.d; ++r) lp -= 0.5 * ui[r] * ui[r];
    for (int j = 0; j < s.n; ++j) {
        if (j == i) continue;
        double dd = 0.0;
        for (int r = 0; r < s.d; ++r) {
            const double v = ui[r] - s.latent[static_cast<std::size_t>(j) * s.d + r];
            dd += v * v;
        }
        const double dist = std::sqrt(dd);
        for (int k = 0; k < s.K; ++k) {
            // r_{i,j,k} excludes the distance term entirely.
            const double cur = std::exp(s.lambda[k]);
            double cur_dist = 0.0;
            for (int r = 0; r < s.d; ++r) {
                const double v = s.latent[static_cast<std::size_t>(i) * s.d + r] -
                                 s.latent[static_cast<std::size_t>(j) * s.d + r];
                cur_dist += v * v;
            }
            const double resid =
                resid_excluding(a, cov, i, j, k, -cur * std::sqrt(cur_dist));
            const double e = cur;
            lp -= e * resid * dist + 0.5 * e * e * dd;
        }
    }
    return lp;
}

double ld_log_fcd_lambda(const AugmentedState& a, const DyadicCovariates* cov, int k,
                         double lambda) {
    const ModelState& s = a.state;
    double s1 = 0.0, s2 = 0.0;
    const double cur = std::exp(s.lambda[k]);
    for (int i = 0; i < s.n; ++i)
        for (int j = i + 1; j < s.n; ++j) {
            double dd = 0.0;
            for (int r = 0; r < s.d; ++r) {
                const double v = s.latent[static_cast<std::size_t>(i) * s.d + r] -
                                 s.latent[static_cast<std::size_t>(j) * s.d + r];
                dd += v * v;
            }
            const double dist = std::sqrt(dd);
            const double resid = resid_excluding(a, cov, i, j, k, -cur * dist);
            s1 += resid * dist;
            s2 += dd;
        }
    const double e = std::exp(lambda);
    return -e * s1 - 0.5 * e * e * s2 - 0.5 * lambda * lambda / s.upsilon2;
}

double alpha_mixture_weight(double a_alpha, double b_alpha, int m_dot, int n_dot, double log_eta) {
    const double num = a_alpha + m_dot - 1.0;
    return num / (num + n_dot * (b_alpha - log_eta));
}

AdaptationState make_adaptation(int n, int K) {
    AdaptationState ad;
    ad.ell_node.assign(n, 0.0);
    ad.ell_layer.assign(K, 0.0);
    ad.accept_node.assign(n, 0);
    ad.attempt_node.assign(n, 0);
    ad.accept_layer.assign(K, 0);
    ad.attempt_layer.assign(K, 0);
    return ad;
}

void update_z(AugmentedState& a, const MultilayerNetwork& net, const DyadicCovariates* cov,
              Rng& rng) {
    const ModelState& s = a.state;
    for (int k = 0; k < s.K; ++k)
        for (int i = 0; i < s.n; ++i)
            for (int j = i + 1; j < s.n; ++j) {
                const double eta = linear_predictor(s, cov, i, j, k);
                a.z_at(i, j, k) = rng.trunc_normal(eta, net.layers[k].at(i, j));
            }
}

void update_zeta(AugmentedState& a, const DyadicCovariates* cov, const Hyper& hy, Rng& rng) {
    const Moments m = zeta_fc(a, cov, hy);
    a.state.zeta = rng.normal(m.mean, std::sqrt(m.var));
}

void update_mu(AugmentedState& a, const DyadicCovariates* cov, Rng& rng) {
    for (int k = 0; k < a.state.K; ++k) {
        const Moments m = mu_fc(a, cov, k);
        a.state.mu[k] = rng.normal(m.mean, std::sqrt(m.var));
    }
}

void update_delta(AugmentedState& a, const DyadicCovariates* cov, Rng& rng) {
    for (int i = 0; i < a.state.n; ++i)
        for (int k = 0; k < a.state.K; ++k) {
            const Moments m = delta_fc(a, cov, i, k);
            a.state.delta[static_cast<std::size_t>(i) * a.state.K + k] =
                rng.normal(m.mean, std::sqrt(m.var));
        }
}

void update_vartheta(AugmentedState& a, Rng& rng) {
    for (int i = 0; i < a.state.n; ++i) {
        const Moments m = vartheta_fc(a, i);
        a.state.vartheta[i] = rng.normal(m.mean, std::sqrt(m.var));
    }
}

void update_beta(AugmentedState& a, const DyadicCovariates& cov, Rng& rng) {
    const int p = a.state.p;
    for (int k = 0; k < a.state.K; ++k) {
        Eigen::VectorXd mean;
        Eigen::MatrixXd covariance;
        beta_fc(a, cov, k, &mean, &covariance);
        const Eigen::MatrixXd l = covariance.llt().matrixL();
        Eigen::VectorXd eps(p);
        for (int r = 0; r < p; ++r) eps(r) = rng.normal();
        const Eigen::VectorXd draw = mean + l * eps;
        for (int r = 0; r < p; ++r) a.state.beta[static_cast<std::size_t>(k) * p + r] = draw(r);
    }
}

void update_bilinear(AugmentedState& a, const DyadicCovariates* cov, Rng& rng) {
    const int d = a.state.d;
    for (int i = 0; i < a.state.n; ++i) {
        Eigen::VectorXd mean;
        Eigen::MatrixXd covariance;
        bilinear_u_fc(a, cov, i, &mean, &covariance);
        const Eigen::MatrixXd l = covariance.llt().matrixL();
        Eigen::VectorXd eps(d);
        for (int r = 0; r < d; ++r) eps(r) = rng.normal();
        const Eigen::VectorXd draw = mean + l * eps;
        for (int r = 0; r < d; ++r) a.state.latent[static_cast<std::size_t>(i) * d + r] = draw(r);
    }
    for (int k = 0; k < a.state.K; ++k) {
        const Moments m = bilinear_lambda_fc(a, cov, k);
        a.state.lambda[k] = rng.normal(m.mean, std::sqrt(m.var));
    }
}

void update_distance_latents(AugmentedState& a, const DyadicCovariates* cov,
                             AdaptationState& adapt, Rng& rng) {
    ModelState& s = a.state;
    ++adapt.t;
    const double gamma_t = AdaptationState::kEta0 / std::sqrt(1.0 + adapt.t);
    const double sqd = std::sqrt(static_cast<double>(s.d));

    std::vector<double> prop(s.d);
    for (int i = 0; i < s.n; ++i) {
        const double step = std::exp(adapt.ell_node[i]) / sqd;
        for (int r = 0; r < s.d; ++r)
            prop[r] = s.latent[static_cast<std::size_t>(i) * s.d + r] + step * rng.normal();
        const double lp_cur =
            ld_log_fcd_u(a, cov, i, &s.latent[static_cast<std::size_t>(i) * s.d]);
        const double lp_prop = ld_log_fcd_u(a, cov, i, prop.data());
        const bool accept = std::log(rng.uniform()) <= lp_prop - lp_cur;
        ++adapt.attempt_node[i];
        if (accept) {
            for (int r = 0; r < s.d; ++r) s.latent[static_cast<std::size_t>(i) * s.d + r] = prop[r];
            ++adapt.accept_node[i];
        }
        if (adapt.adapting) {
            adapt.ell_node[i] += gamma_t * ((accept ? 1.0 : 0.0) - AdaptationState::kTargetNode);
            adapt.ell_node[i] = std::clamp(adapt.ell_node[i], AdaptationState::kLogSMin,
                                           AdaptationState::kLogSMax);
        }
    }
    for (int k = 0; k < s.K; ++k) {
        const double step = std::exp(adapt.ell_layer[k]);
        const double prop_l = s.lambda[k] + step * rng.normal();
        const double lp_cur = ld_log_fcd_lambda(a, cov, k, s.lambda[k]);
        const double lp_prop = ld_log_fcd_lambda(a, cov, k, prop_l);
        const bool accept = std::log(rng.uniform()) <= lp_prop - lp_cur;
        ++adapt.attempt_layer[k];
        if (accept) {
            s.lambda[k] = prop_l;
            ++adapt.accept_layer[k];
        }
        if (adapt.adapting) {
            adapt.ell_layer[k] += gamma_t * ((accept ? 1.0 : 0.0) - AdaptationState::kTargetLayer);
            adapt.ell_layer[k] = std::clamp(adapt.ell_layer[k], AdaptationState::kLogSMin,
                                            AdaptationState::kLogSMax);
        }
    }
}

namespace {

void update_alpha_escobar_west(ModelState& s, const Hyper& hy, Rng& rng) {
    const int n_dot = s.n * s.K;
    int m_dot = 0;
    for (int k = 0; k < s.K; ++k) {
        const std::vector<double> conc = weight_concentration(s, k);
        for (int c = 0; c < s.C; ++c)
            if (conc[c] - s.alpha / s.C > 0.5) ++m_dot;
    }
    const double eta = rng.beta(s.alpha + 1.0, static_cast<double>(n_dot));
    const double log_eta = std::log(eta);
    const double pi = alpha_mixture_weight(hy.a_alpha, hy.b_alpha, m_dot, n_dot, log_eta);
    const double rate = hy.b_alpha - log_eta;
    double shape = hy.a_alpha + m_dot;
    if (rng.uniform() >= pi && shape - 1.0 > 0.0) shape -= 1.0;
    s.alpha = rng.gamma(shape, rate);
}

// Exact Metropolis step on log(alpha) against the instantiated-weights
// conditional p(alpha | omega_1..K) — used when the auxiliary-variable
// approximation is too coarse for the finite Dirichlet.
void update_alpha_exact(ModelState& s, const Hyper& hy, Rng& rng) {
    auto log_target = [&](double alpha) {
        double lp = (hy.a_alpha - 1.0) * std::log(alpha) - hy.b_alpha * alpha;
        for (int k = 0; k < s.K; ++k) {
            lp += std::lgamma(alpha) - s.C * std::lgamma(alpha / s.C);
            for (int c = 0; c < s.C; ++c)
                lp += (alpha / s.C) *
                      std::log(std::max(s.weights[static_cast<std::size_t>(k) * s.C + c], 1e-300));
        }
        return lp;
    };
    const double cur = s.alpha;
    const double prop = cur * std::exp(0.5 * rng.normal());
    // log-scale random walk: Jacobian contributes log(prop/cur).
    const double diff = log_target(prop) - log_target(cur) + std::log(prop / cur);
    if (std::log(rng.uniform()) <= diff) s.alpha = prop;
}

}  // namespace

void update_blocks(AugmentedState& a, const DyadicCovariates* cov, const Hyper& hy, Rng& rng) {
    ModelState& s = a.state;
    for (int k = 0; k < s.K; ++k)
        for (int b1 = 0; b1 < s.C; ++b1)
            for (int b2 = b1; b2 < s.C; ++b2) {
                const Moments m = block_gamma_fc(a, cov, b1, b2, k);
                s.block_at(b1, b2, k) = rng.normal(m.mean, std::sqrt(m.var));
            }
    for (int k = 0; k < s.K; ++k)
        for (int i = 0; i < s.n; ++i)
            s.labels[static_cast<std::size_t>(i) * s.K + k] =
                rng.categorical_from_log(label_log_probs(a, cov, i, k));
    for (int k = 0; k < s.K; ++k) {
        const std::vector<double> wk = rng.dirichlet(weight_concentration(s, k));
        for (int c = 0; c < s.C; ++c) s.weights[static_cast<std::size_t>(k) * s.C + c] = wk[c];
    }
    if (hy.exact_alpha)
        update_alpha_exact(s, hy, rng);
    else
        update_alpha_escobar_west(s, hy, rng);
}

void update_variances(AugmentedState& a, const Hyper& hy, Rng& rng) {
    ModelState& s = a.state;
    auto draw = [&](const IgParams& p) { return rng.inv_gamma(p.shape, p.rate); };
    s.omega2 = draw(omega2_fc(s, hy));
    if (s.mu_enabled) s.sigma2 = draw(sigma2_fc(s, hy));
    s.tau2 = draw(tau2_fc(s, hy));
    s.kappa2 = draw(kappa2_fc(s, hy));
    if (s.p > 0) s.varsigma2 = draw(varsigma2_fc(s, hy));
    if (has_latents(s.variant)) s.upsilon2 = draw(upsilon2_fc(s, hy));
    if (has_blocks(s.variant)) s.rho2 = draw(rho2_fc(s, hy));
}

void sweep(AugmentedState& a, const MultilayerNetwork& net, const DyadicCovariates* cov,
           AdaptationState* adapt, const Hyper& hy, Rng& rng) {
    update_z(a, net, cov, rng);
    update_zeta(a, cov, hy, rng);
    if (a.state.mu_enabled) update_mu(a, cov, rng);
    update_delta(a, cov, rng);
    update_vartheta(a, rng);
    if (a.state.p > 0) update_beta(a, *cov, rng);
    if (has_bilinear(a.state.variant)) update_bilinear(a, cov, rng);
    if (has_distance(a.state.variant)) {
        if (!adapt) throw std::invalid_argument("sweep: distance variant needs adaptation state");
        update_distance_latents(a, cov, *adapt, rng);
    }
    if (has_blocks(a.state.variant)) update_blocks(a, cov, hy, rng);
    update_variances(a, hy, rng);
}

std::vector<std::pair<std::string, double>> flatten_state(const ModelState& s) {
    std::vector<std::pair<std::string, double>> out;
    auto idx2 = [](int i, int k) {
        return "[" + std::to_string(i + 1) + "," + std::to_string(k + 1) + "]";
    };
    out.push_back({"zeta", s.zeta});
    if (s.mu_enabled)
        for (int k = 0; k < s.K; ++k)
            out.push_back({"mu[" + std::to_string(k + 1) + "]", s.mu[k]});
    for (int i = 0; i < s.n; ++i)
        for (int k = 0; k < s.K; ++k)
            out.push_back({"delta" + idx2(i, k), s.delta[static_cast<std::size_t>(i) * s.K + k]});
    for (int i = 0; i < s.n; ++i)
        out.push_back({"vartheta[" + std::to_string(i + 1) + "]", s.vartheta[i]});
    out.push_back({"omega2", s.omega2});
    if (s.mu_enabled) out.push_back({"sigma2", s.sigma2});
    out.push_back({"tau2", s.tau2});
    out.push_back({"kappa2", s.kappa2});
    for (int k = 0; k < s.K; ++k)
        for (int l = 0; l < s.p; ++l)
            out.push_back({"beta" + idx2(k, l), s.beta[static_cast<std::size_t>(k) * s.p + l]});
    if (s.p > 0) out.push_back({"varsigma2", s.varsigma2});
    if (has_latents(s.variant)) {
        for (int i = 0; i < s.n; ++i)
            for (int r = 0; r < s.d; ++r)
                out.push_back({"u" + idx2(i, r), s.latent[static_cast<std::size_t>(i) * s.d + r]});
        for (int k = 0; k < s.K; ++k)
            out.push_back({"lambda[" + std::to_string(k + 1) + "]", s.lambda[k]});
        out.push_back({"upsilon2", s.upsilon2});
    }
    if (has_blocks(s.variant)) {
        for (int k = 0; k < s.K; ++k)
            for (int b1 = 0; b1 < s.C; ++b1)
                for (int b2 = b1; b2 < s.C; ++b2)
                    out.push_back({"gamma[" + std::to_string(b1 + 1) + "," +
                                       std::to_string(b2 + 1) + "," + std::to_string(k + 1) + "]",
                                   s.block_at(b1, b2, k)});
        for (int k = 0; k < s.K; ++k)
            for (int c = 0; c < s.C; ++c)
                out.push_back(
                    {"weight" + idx2(k, c), s.weights[static_cast<std::size_t>(k) * s.C + c]});
        for (int i = 0; i < s.n; ++i)
            for (int k = 0; k < s.K; ++k)
                out.push_back({"xi" + idx2(i, k),
                               static_cast<double>(s.labels[static_cast<std::size_t>(i) * s.K + k])});
        out.push_back({"alpha", s.alpha});
        out.push_back({"rho2", s.rho2});
    }
    return out;
}

double batch_means_mcse(const std::vector<double>& draws) {
    const std::size_t n = draws.size();
    const std::size_t b = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    if (b < 2 || n / b < 2) return std::numeric_limits<double>::quiet_NaN();
    const std::size_t nb = n / b;
    std::vector<double> means(nb, 0.0);
    for (std::size_t q = 0; q < nb; ++q) {
        for (std::size_t r = 0; r < b; ++r) means[q] += draws[q * b + r];
        means[q] /= b;
    }
    double grand = 0.0;
    for (double m : means) grand += m;
    grand /= nb;
    double ss = 0.0;
    for (double m : means) ss += (m - grand) * (m - grand);
    return std::sqrt(ss / (nb - 1) / nb);
}

ChainArchive run_chain(const MultilayerNetwork& net, const DyadicCovariates* cov,
                       const ChainConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    const int n = net.n, K = net.K;
    const int p = (has_covariates(config.variant) && cov) ? cov->p : 0;
    if (config.burn < 0 || config.keep <= 0 || config.thin < 1)
        throw std::invalid_argument("run_chain: bad chain lengths");

    Rng master(config.seed);
    Rng rng = master.substream(config.stream);

    ModelState init = prior_draw(config.variant, config.hyper, n, K, p, rng);
    if (config.reduced_mu) {
        init.mu_enabled = false;
        std::fill(init.mu.begin(), init.mu.end(), 0.0);
    }
    if (has_blocks(config.variant) && config.louvain_init) {
        for (int k = 0; k < K; ++k) {
            const std::vector<int> labels = louvain_communities(net.layers[k]);
            for (int i = 0; i < n; ++i)
                init.labels[static_cast<std::size_t>(i) * K + k] =
                    std::min(labels[i], init.C - 1);
        }
    }
    AugmentedState aug = make_augmented(std::move(init));

    AdaptationState adapt = make_adaptation(n, K);
    AdaptationState* adapt_ptr = has_distance(config.variant) ? &adapt : nullptr;

    for (long it = 0; it < config.burn; ++it) sweep(aug, net, cov, adapt_ptr, config.hyper, rng);
    adapt.adapting = false;
    std::fill(adapt.accept_node.begin(), adapt.accept_node.end(), 0);
    std::fill(adapt.attempt_node.begin(), adapt.attempt_node.end(), 0);
    std::fill(adapt.accept_layer.begin(), adapt.accept_layer.end(), 0);
    std::fill(adapt.attempt_layer.begin(), adapt.attempt_layer.end(), 0);

    ChainArchive arc;
    arc.config = config;
    arc.n = n;
    arc.K = K;
    arc.p = p;
    arc.draws.reserve(config.keep / config.thin);
    for (long it = 1; it <= config.keep; ++it) {
        sweep(aug, net, cov, adapt_ptr, config.hyper, rng);
        if (it % config.thin == 0) {
            aug.state.check_invariants();
            arc.draws.push_back(aug.state);
            arc.loglik.push_back(log_likelihood(aug.state, net, cov));
        }
    }

    if (has_distance(config.variant)) {
        for (int i = 0; i < n; ++i)
            arc.node_accept_rate.push_back(
                adapt.attempt_node[i] ? static_cast<double>(adapt.accept_node[i]) /
                                            adapt.attempt_node[i]
                                      : 0.0);
        for (int k = 0; k < K; ++k)
            arc.layer_accept_rate.push_back(
                adapt.attempt_layer[k] ? static_cast<double>(adapt.accept_layer[k]) /
                                             adapt.attempt_layer[k]
                                       : 0.0);
    }

    // Per-parameter summaries over the stored draws.
    if (!arc.draws.empty()) {
        const auto names = flatten_state(arc.draws.front());
        const std::size_t m = names.size();
        std::vector<std::vector<double>> series(m);
        for (auto& v : series) v.reserve(arc.draws.size());
        for (const ModelState& s : arc.draws) {
            const auto flat = flatten_state(s);
            for (std::size_t q = 0; q < m; ++q) series[q].push_back(flat[q].second);
        }
        for (std::size_t q = 0; q < m; ++q) {
            arc.scalar_names.push_back(names[q].first);
            double mean = 0.0;
            for (double v : series[q]) mean += v;
            arc.scalar_mean.push_back(mean / series[q].size());
            arc.scalar_mcse.push_back(batch_means_mcse(series[q]));
        }
    }
    arc.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return arc;
}

}  // namespace mlsn
