#pragma once

// Independent reference implementations used only by tests. Each one takes a
// different route from the library code it checks: quadrature instead of
// the incomplete beta, a plain scan in long double instead of the tuned
// selectors, exhaustive enumeration instead of the closed-form rule.

#include "ppfdr/bfdr.hpp"
#include "ppfdr/decision.hpp"
#include "ppfdr/predictive.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

namespace ppfdr::oracle {

inline long double standard_t_density(long double z, long double dof) {
    long double logNorm = std::lgamma((dof + 1.0L) / 2.0L) - std::lgamma(dof / 2.0L) -
                          0.5L * std::log(dof * 3.141592653589793238462643383279502884L);
    return std::exp(logNorm - (dof + 1.0L) / 2.0L * std::log1p(z * z / dof));
}

//! P(T <= z) by adaptive Gauss-Kronrod on the density. Integrates the
//! shorter side so the answer never loses digits to cancellation.
inline double standard_t_cdf_quadrature(double z, double dof) {
    using boost::math::quadrature::gauss_kronrod;
    auto f = [dof](long double u) { return standard_t_density(u, dof); };
    long double az = std::fabs(z);
    long double mass;
    long double error = 0;
    if (az <= 1.0L) {
        long double center = gauss_kronrod<long double, 61>::integrate(f, 0.0L, az, 15, 1e-18L, &error);
        mass = 0.5L - center;  // upper tail beyond |z|
    } else {
        // u = |z| s^-p maps the tail onto (0, 1]; p >= 2/dof keeps the
        // transformed integrand bounded for very heavy tails.
        long double p = std::max(1.0L, 2.0L / static_cast<long double>(dof));
        auto g = [&](long double s) {
            if (s <= 0.0L) {
                return 0.0L;
            }
            long double u = az * std::pow(s, -p);
            return f(u) * az * p * std::pow(s, -p - 1.0L);
        };
        mass = gauss_kronrod<long double, 61>::integrate(g, 0.0L, 1.0L, 15, 1e-18L, &error);
    }
    return static_cast<double>(z >= 0 ? 1.0L - mass : mass);
}

inline double t_cdf_quadrature(const StudentTPredictive& pred, double x) {
    return standard_t_cdf_quadrature((x - pred.loc) / pred.scale, pred.dof);
}

//! Scan from the top of the grid and return the first eta whose long-double
//! criterion is negative. Also reports the criterion value at the answer's
//! neighbour so callers can recognise genuine near-ties.
struct ScanResult {
    std::optional<std::int64_t> index;
    //! Smallest |criterion| seen over the nonempty grid points scanned.
    long double closest_to_zero = std::numeric_limits<long double>::infinity();
};

inline ScanResult exhaustive_scan(const std::vector<double>& scores, double q, double a, std::int64_t k) {
    ScanResult result;
    for (std::int64_t l = k; l >= 0; --l) {
        double eta = grid_point(l, k);
        long double total = 0.0L;
        std::size_t selected = 0;
        for (double s : scores) {
            if (s <= eta) {
                long double d = static_cast<long double>(s) - static_cast<long double>(q);
                long double magnitude = a == 0.0 ? (d == 0 ? 0.0L : 1.0L) : std::pow(std::fabs(d), (long double)a);
                total += d < 0 ? -magnitude : (d > 0 ? magnitude : 0.0L);
                ++selected;
            }
        }
        if (selected == 0) {
            break;
        }
        result.closest_to_zero = std::min(result.closest_to_zero, std::fabs(total));
        if (total < 0.0L) {
            result.index = l;
            return result;
        }
    }
    return result;
}

//! Minimum expected loss over all 2^m decision vectors.
inline double enumerated_min_loss(const ScoreBatch& rates, const LossParams& params) {
    std::size_t m = rates.size();
    double best = std::numeric_limits<double>::infinity();
    DecisionVector flags(m);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        for (std::size_t j = 0; j < m; ++j) {
            flags[j] = ((mask >> j) & 1u) != 0;
        }
        best = std::min(best, expected_loss(rates, flags, params));
    }
    return best;
}

//! Empirical P(X <= x) under the NIG posterior predictive by ancestral
//! sampling: sigma^2 ~ InvGamma(alpha, beta), mu ~ N(mu0, sigma^2 / nu),
//! X ~ N(mu, sigma^2).
struct McCdf {
    double estimate;
    double standard_error;
};

inline McCdf nig_predictive_cdf_mc(const NigParams& post, double x, std::size_t draws, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::gamma_distribution<double> precision(post.alpha, 1.0 / post.beta);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::size_t below = 0;
    for (std::size_t i = 0; i < draws; ++i) {
        double variance = 1.0 / precision(rng);
        double mu = post.mu0 + std::sqrt(variance / post.nu) * normal(rng);
        double value = mu + std::sqrt(variance) * normal(rng);
        below += value <= x;
    }
    double p = static_cast<double>(below) / static_cast<double>(draws);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(draws))};
}

//! Posterior means of mu and sigma^2 by brute-force quadrature of
//! prior x likelihood on a (mu, log sigma^2) grid.
struct GridPosterior {
    double mean_mu;
    double mean_variance;
};

inline GridPosterior nig_grid_posterior(const NigParams& prior, const std::vector<double>& data, double mu_lo,
                                        double mu_hi, double logv_lo, double logv_hi, int points) {
    long double mass = 0, muMass = 0, varMass = 0;
    double dmu = (mu_hi - mu_lo) / points;
    double dlv = (logv_hi - logv_lo) / points;
    // Log density up to a constant; subtract a running max for stability.
    std::vector<long double> logs;
    logs.reserve(static_cast<std::size_t>(points) * points);
    long double peak = -std::numeric_limits<long double>::infinity();
    for (int i = 0; i < points; ++i) {
        double mu = mu_lo + (i + 0.5) * dmu;
        for (int j = 0; j < points; ++j) {
            double logv = logv_lo + (j + 0.5) * dlv;
            long double v = std::exp((long double)logv);
            // InvGamma(alpha, beta) on v with Jacobian v for d(log v).
            long double lp = -(prior.alpha + 1) * std::log(v) - prior.beta / v + std::log(v);
            lp += -0.5L * std::log(v / prior.nu) - prior.nu * (mu - prior.mu0) * (mu - prior.mu0) / (2 * v);
            for (double x : data) {
                lp += -0.5L * std::log(v) - (x - mu) * (x - mu) / (2 * v);
            }
            logs.push_back(lp);
            peak = std::max(peak, lp);
        }
    }
    std::size_t idx = 0;
    for (int i = 0; i < points; ++i) {
        double mu = mu_lo + (i + 0.5) * dmu;
        for (int j = 0; j < points; ++j) {
            double logv = logv_lo + (j + 0.5) * dlv;
            long double w = std::exp(logs[idx++] - peak);
            mass += w;
            muMass += w * mu;
            varMass += w * std::exp((long double)logv);
        }
    }
    return {static_cast<double>(muMass / mass), static_cast<double>(varMass / mass)};
}

//! Uniform scores with a share of exact grid points and repeated values.
inline std::vector<double> tricky_scores(std::mt19937_64& rng, std::size_t m, std::int64_t k) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::int64_t> grid(0, k);
    std::vector<double> scores(m);
    for (std::size_t j = 0; j < m; ++j) {
        double u = unit(rng);
        if (u < 0.1) {
            scores[j] = grid_point(grid(rng), k);
        } else if (u < 0.15 && j > 0) {
            scores[j] = scores[j - 1];
        } else {
            scores[j] = unit(rng);
        }
    }
    return scores;
}

} // namespace ppfdr::oracle
