#include "ppfdr/predictive.hpp"

#include "ppfdr/error.hpp"
#include "ppfdr/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace ppfdr {

void NigParams::validate() const {
    detail::require(std::isfinite(mu0), "NIG mu0 must be finite");
    detail::require(nu > 0.0 && std::isfinite(nu), "NIG nu must be positive");
    detail::require(alpha > 0.0 && std::isfinite(alpha), "NIG alpha must be positive");
    detail::require(beta > 0.0 && std::isfinite(beta), "NIG beta must be positive");
}

void StudentTPredictive::validate() const {
    detail::require(dof > 0.0, "t predictive dof must be positive");
    detail::require(std::isfinite(loc), "t predictive loc must be finite");
    detail::require(scale > 0.0 && std::isfinite(scale), "t predictive scale must be positive");
}

NigParams nig_update(const NigParams& prior, std::span<const double> data) {
    prior.validate();
    if (data.empty()) {
        return prior;
    }
    for (double x : data) {
        detail::require(std::isfinite(x), "nig_update: data contains a non-finite value");
    }
    double n = static_cast<double>(data.size());
    double mean = std::accumulate(data.begin(), data.end(), 0.0) / n;
    double sumSquares = 0.0;
    for (double x : data) {
        double dx = x - mean;
        sumSquares += dx * dx;
    }
    double shift = mean - prior.mu0;

    NigParams post;
    post.nu = prior.nu + n;
    post.mu0 = (prior.nu * prior.mu0 + n * mean) / post.nu;
    post.alpha = prior.alpha + 0.5 * n;
    post.beta = prior.beta + 0.5 * sumSquares + 0.5 * (n * prior.nu / post.nu) * shift * shift;
    return post;
}

StudentTPredictive posterior_predictive(const NigParams& post) {
    post.validate();
    StudentTPredictive pred;
    pred.dof = 2.0 * post.alpha;
    pred.loc = post.mu0;
    pred.scale = std::sqrt(post.beta * (post.nu + 1.0) / (post.nu * post.alpha));
    return pred;
}

double t_cdf(const StudentTPredictive& pred, double x) {
    detail::require(!std::isnan(x), "t_cdf: x is NaN");
    return standard_t_cdf((x - pred.loc) / pred.scale, pred.dof);
}

double score(const StudentTPredictive& pred, double x_star, TailMode tail) {
    double f = t_cdf(pred, x_star);
    if (tail == TailMode::two_sided) {
        return std::fabs(2.0 * f - 1.0);
    }
    return f;
}

void DpPredictive::validate() const {
    detail::require(concentration > 0.0, "DP concentration must be positive");
    detail::require(static_cast<bool>(base_cdf), "DP base measure CDF is missing");
}

double dp_cdf(const DpPredictive& pred, double x) {
    pred.validate();
    double atoms = static_cast<double>(std::count_if(pred.observations.begin(), pred.observations.end(),
                                                     [x](double xi) { return xi <= x; }));
    double n = static_cast<double>(pred.observations.size());
    return (pred.concentration * pred.base_cdf(x) + atoms) / (pred.concentration + n);
}

PyPredictive PyPredictive::from_observations(double discount, double strength, Cdf base,
                                             std::span<const double> data) {
    std::map<double, std::size_t> tally;
    for (double x : data) {
        detail::require(std::isfinite(x), "Pitman-Yor data contains a non-finite value");
        ++tally[x];
    }
    PyPredictive pred;
    pred.discount = discount;
    pred.strength = strength;
    pred.base_cdf = std::move(base);
    for (const auto& [value, count] : tally) {
        pred.unique_values.push_back(value);
        pred.counts.push_back(count);
    }
    pred.validate();
    return pred;
}

std::size_t PyPredictive::total_count() const {
    return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

void PyPredictive::validate() const {
    detail::require(static_cast<bool>(base_cdf), "Pitman-Yor base measure CDF is missing");
    detail::require(unique_values.size() == counts.size(), "Pitman-Yor unique values and counts differ in length");
    detail::require(std::all_of(counts.begin(), counts.end(), [](std::size_t c) { return c >= 1; }),
                    "Pitman-Yor counts must all be at least 1");
    bool standardRegime = discount >= 0.0 && discount <= 1.0 && strength > -discount;
    bool negativeRegime = false;
    if (discount < 0.0 && strength > 0.0) {
        double multiple = strength / std::fabs(discount);
        double nearest = std::round(multiple);
        negativeRegime = nearest >= 1.0 && std::fabs(multiple - nearest) <= 1e-9 * std::max(1.0, nearest);
    }
    detail::require(standardRegime || negativeRegime,
                    "Pitman-Yor parameters must satisfy sigma in [0,1], theta > -sigma, or sigma < 0 with "
                    "theta = m|sigma| for a positive integer m");
}

double py_cdf(const PyPredictive& pred, double x) {
    pred.validate();
    double n = static_cast<double>(pred.total_count());
    double k = static_cast<double>(pred.unique_values.size());
    double denom = pred.strength + n;
    double value = (pred.strength + pred.discount * k) / denom * pred.base_cdf(x);
    for (std::size_t i = 0; i < pred.unique_values.size(); ++i) {
        if (pred.unique_values[i] <= x) {
            value += (static_cast<double>(pred.counts[i]) - pred.discount) / denom;
        }
    }
    return value;
}

void MdpMixing::validate() const {
    detail::require(!atoms.empty(), "MDP mixing measure needs at least one atom");
    double total = 0.0;
    for (const auto& atom : atoms) {
        detail::require(atom.theta > 0.0 && std::isfinite(atom.theta), "MDP atom theta must be positive");
        detail::require(atom.weight > 0.0, "MDP atom weight must be positive");
        total += atom.weight;
    }
    detail::require(std::fabs(total - 1.0) <= 1e-9, "MDP atom weights must sum to 1");
}

double mdp_new_prob(const MdpMixing& mix, std::size_t n, std::size_t k) {
    mix.validate();
    detail::require(k <= n, "mdp_new_prob requires k <= n");
    double value = 0.0;
    for (const auto& atom : mix.atoms) {
        // theta^k / (theta)_n with (theta)_n = Gamma(theta + n) / Gamma(theta)
        double logTerm = static_cast<double>(k) * std::log(atom.theta) -
                         (std::lgamma(atom.theta + static_cast<double>(n)) - std::lgamma(atom.theta));
        value += atom.weight * std::exp(logTerm);
    }
    return value;
}

} // namespace ppfdr
