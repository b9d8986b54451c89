#include "mlsn/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mlsn {

double norm_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

// AS241 (Wichura 1988), relative error below 1e-15 away from the endpoints.
double norm_quantile(double p) {
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    if (p >= 1.0) return std::numeric_limits<double>::infinity();
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                     6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                   1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                 1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
               (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                     3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                   5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
                 4.2313330701600911252e1) * r + 1.0);
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                    2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                  3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
                4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
              (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                    1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                  6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
                2.05319162663775882187e0) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                    1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                  2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
                5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
              (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                    1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                  1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                5.99832206555887937690e-1) * r + 1.0);
    }
    return (q < 0.0) ? -val : val;
}

double log_norm_pdf(double x, double mean, double var) {
    const double d = x - mean;
    return -0.5 * std::log(2.0 * M_PI * var) - 0.5 * d * d / var;
}

double log_ig_pdf(double x, double shape, double scale) {
    if (x <= 0.0) return -std::numeric_limits<double>::infinity();
    return shape * std::log(scale) - std::lgamma(shape) - (shape + 1.0) * std::log(x) - scale / x;
}

double log_gamma_pdf(double x, double shape, double rate) {
    if (x <= 0.0) return -std::numeric_limits<double>::infinity();
    return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

double log_dirichlet_pdf(const std::vector<double>& w, const std::vector<double>& a) {
    double lp = 0.0, asum = 0.0;
    for (std::size_t c = 0; c < w.size(); ++c) {
        if (w[c] <= 0.0) return -std::numeric_limits<double>::infinity();
        lp += (a[c] - 1.0) * std::log(w[c]) - std::lgamma(a[c]);
        asum += a[c];
    }
    return lp + std::lgamma(asum);
}

namespace {
std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t s = seed;
    state_[0] = splitmix64(s);
    state_[1] = splitmix64(s);
    if (state_[0] == 0 && state_[1] == 0) state_[0] = 1;
}

Rng Rng::substream(std::uint64_t index) const {
    std::uint64_t s = seed_ ^ (0xd1b54a32d192ed03ULL * (index + 1));
    return Rng(splitmix64(s));
}

// xorshift128+
std::uint64_t Rng::next_u64() {
    std::uint64_t x = state_[0];
    const std::uint64_t y = state_[1];
    state_[0] = y;
    x ^= x << 23;
    state_[1] = x ^ y ^ (x >> 17) ^ (y >> 26);
    return state_[1] + y;
}

double Rng::uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

double Rng::normal() {
    // Box-Muller, first coordinate only.
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double Rng::normal(double mean, double sd) { return mean + sd * normal(); }

double Rng::exponential(double rate) { return -std::log(uniform()) / rate; }

// Marsaglia-Tsang squeeze; shape < 1 handled by boosting.
double Rng::gamma(double shape, double rate) {
    if (shape <= 0.0 || rate <= 0.0) throw std::invalid_argument("gamma: nonpositive parameter");
    if (shape < 1.0) {
        const double g = gamma(shape + 1.0, 1.0);
        const double u = uniform();
        return g * std::pow(u, 1.0 / shape) / rate;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
    }
}

double Rng::inv_gamma(double shape, double scale) { return 1.0 / gamma(shape, scale); }

double Rng::beta(double a, double b) {
    const double x = gamma(a, 1.0);
    const double y = gamma(b, 1.0);
    return x / (x + y);
}

std::vector<double> Rng::dirichlet(const std::vector<double>& alpha) {
    std::vector<double> w(alpha.size());
    double s = 0.0;
    for (std::size_t c = 0; c < alpha.size(); ++c) {
        w[c] = gamma(alpha[c], 1.0);
        s += w[c];
    }
    for (double& v : w) v /= s;
    return w;
}

int Rng::categorical(const std::vector<double>& probs) {
    const double u = uniform();
    double acc = 0.0;
    for (std::size_t c = 0; c < probs.size(); ++c) {
        acc += probs[c];
        if (u <= acc) return static_cast<int>(c);
    }
    return static_cast<int>(probs.size()) - 1;
}

int Rng::categorical_from_log(const std::vector<double>& log_weights) {
    const double m = *std::max_element(log_weights.begin(), log_weights.end());
    std::vector<double> p(log_weights.size());
    double s = 0.0;
    for (std::size_t c = 0; c < p.size(); ++c) {
        p[c] = std::exp(log_weights[c] - m);
        s += p[c];
    }
    for (double& v : p) v /= s;
    return categorical(p);
}

// Robert (1995) exponential-proposal sampler for the deep tail.
double Rng::std_trunc_lower(double a) {
    if (a <= 5.0) {
        const double tail = norm_cdf(-a);  // P(Z > a)
        return -norm_quantile(uniform() * tail);
    }
    const double lambda = 0.5 * (a + std::sqrt(a * a + 4.0));
    for (;;) {
        const double x = a + exponential(lambda);
        const double diff = x - lambda;
        if (std::log(uniform()) <= -0.5 * diff * diff) return x;
    }
}

double Rng::trunc_normal(double mean, bool positive) {
    if (positive) {
        const double z = mean + std_trunc_lower(-mean);
        return z > 0.0 ? z : std::numeric_limits<double>::min();
    }
    const double z = -(-mean + std_trunc_lower(mean));
    return z <= 0.0 ? z : 0.0;
}

}  // namespace mlsn
