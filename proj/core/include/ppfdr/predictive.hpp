#pragma once

// Posterior-predictive scoring: conjugate Normal-Inverse-Gamma updating with
// a Student-t predictive, plus the Dirichlet process, Pitman-Yor and
// mixture-of-DP predictive rules.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ppfdr {

//! Hyperparameters of NIG(mu0, nu, alpha, beta) on (mu, sigma^2):
//! sigma^2 ~ InvGamma(alpha, beta) and mu | sigma^2 ~ N(mu0, sigma^2 / nu).
struct NigParams {
    double mu0 = 0.0;
    double nu = 1e-4;
    double alpha = 0.01;
    double beta = 0.01;

    //! Throws InvalidInput unless nu, alpha, beta > 0 and mu0 is finite.
    void validate() const;

    friend bool operator==(const NigParams&, const NigParams&) = default;
};

//! Location-scale Student-t. scale is the square root of the squared
//! scale parameter, not the standard deviation.
struct StudentTPredictive {
    double dof = 1.0;
    double loc = 0.0;
    double scale = 1.0;

    void validate() const;

    friend bool operator==(const StudentTPredictive&, const StudentTPredictive&) = default;
};

//! Conjugate update of prior with data. Empty data returns prior unchanged.
NigParams nig_update(const NigParams& prior, std::span<const double> data);

//! Student-t predictive of a new observation under posterior post:
//! dof = 2 alpha, loc = mu0, scale^2 = beta (nu + 1) / (nu alpha).
StudentTPredictive posterior_predictive(const NigParams& post);

//! P(X <= x) under pred.
double t_cdf(const StudentTPredictive& pred, double x);

enum class TailMode {
    //! r = F(x*): large values flag upper-tail outliers.
    upper,
    //! r = |2F(x*) - 1|: large values flag either tail.
    two_sided,
};

//! Outlier probability r = P(X* > X | data) of x_star under pred.
double score(const StudentTPredictive& pred, double x_star, TailMode tail = TailMode::upper);

using Cdf = std::function<double(double)>;

//! DP(alpha, G0) posterior predictive given observations.
struct DpPredictive {
    double concentration = 1.0;
    Cdf base_cdf;
    std::vector<double> observations;

    void validate() const;
};

//! (alpha G0(x) + #{X_i <= x}) / (alpha + n).
double dp_cdf(const DpPredictive& pred, double x);

//! Pitman-Yor predictive with discount sigma and strength theta.
//! Admissible: sigma in [0, 1] with theta > -sigma, or sigma < 0 with
//! theta = m |sigma| for a positive integer m.
struct PyPredictive {
    double discount = 0.0;
    double strength = 1.0;
    Cdf base_cdf;
    std::vector<double> unique_values;
    std::vector<std::size_t> counts;

    //! Tabulates ties in data into unique_values/counts.
    static PyPredictive from_observations(double discount, double strength, Cdf base, std::span<const double> data);

    std::size_t total_count() const;
    void validate() const;
};

//! (theta + sigma k)/(theta + n) G0(x) + sum_{X'_i <= x} (n_i - sigma)/(theta + n).
double py_cdf(const PyPredictive& pred, double x);

struct MdpAtom {
    double theta = 1.0;
    double weight = 1.0;
};

//! Finite-support mixing measure H over the DP concentration.
struct MdpMixing {
    std::vector<MdpAtom> atoms;

    void validate() const;
};

//! P(next draw is new | n draws, k distinct) = sum_h w_h theta_h^k / (theta_h)_n,
//! with (theta)_n the ascending factorial.
double mdp_new_prob(const MdpMixing& mix, std::size_t n, std::size_t k);

} // namespace ppfdr
