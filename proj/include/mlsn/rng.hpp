#pragma once

#include <cstdint>
#include <vector>

namespace mlsn {

// Standard normal CDF, |error| < 1e-12 over the full range.
double norm_cdf(double x);

// Standard normal quantile (Wichura's AS241 rational approximation).
double norm_quantile(double p);

double log_norm_pdf(double x, double mean, double var);
double log_ig_pdf(double x, double shape, double scale);
double log_gamma_pdf(double x, double shape, double rate);
double log_dirichlet_pdf(const std::vector<double>& w, const std::vector<double>& a);

// Deterministic RNG with hand-rolled distributions so that runs are
// bit-reproducible for a fixed seed regardless of the standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    // Independent substream derived from (seed, index); used for parallel chains.
    Rng substream(std::uint64_t index) const;

    std::uint64_t next_u64();
    double uniform();                  // (0,1)
    double normal();                   // N(0,1)
    double normal(double mean, double sd);
    double exponential(double rate);
    double gamma(double shape, double rate);
    double inv_gamma(double shape, double scale);
    double beta(double a, double b);
    std::vector<double> dirichlet(const std::vector<double>& alpha);
    int categorical(const std::vector<double>& probs);
    int categorical_from_log(const std::vector<double>& log_weights);

    // N(mean,1) truncated to (0,inf) or (-inf,0].  Inverse-CDF in the body,
    // exponential-proposal rejection in the deep tail where the CDF underflows.
    double trunc_normal(double mean, bool positive);

private:
    std::uint64_t state_[2];
    std::uint64_t seed_;
    double std_trunc_lower(double a);  // N(0,1) | X > a
};

}  // namespace mlsn
