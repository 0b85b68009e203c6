#include "ppfdr/decision.hpp"

#include "ppfdr/error.hpp"

#include <cmath>

namespace ppfdr {

void LossParams::validate() const {
    detail::require(c1 >= 0.0 && std::isfinite(c1), "loss penalty c1 must be nonnegative");
    detail::require(c2 >= 0.0 && std::isfinite(c2), "loss penalty c2 must be nonnegative");
}

double loss_eval(const DecisionVector& flags, const std::vector<bool>& outlier_truth, const LossParams& params) {
    params.validate();
    detail::require(flags.size() == outlier_truth.size(), "loss_eval: flags and truth differ in length");
    double loss = 0.0;
    for (std::size_t j = 0; j < flags.size(); ++j) {
        double truth = outlier_truth[j] ? 1.0 : 0.0;
        if (flags[j]) {
            loss += params.c2 - truth;
        } else {
            loss += params.c1 * truth;
        }
    }
    return loss;
}

double expected_loss(const ScoreBatch& rates, const DecisionVector& flags, const LossParams& params) {
    params.validate();
    detail::require(flags.size() == rates.size(), "expected_loss: flags and scores differ in length");
    double loss = 0.0;
    for (std::size_t j = 0; j < flags.size(); ++j) {
        if (flags[j]) {
            loss += params.c2 - rates[j];
        } else {
            loss += params.c1 * rates[j];
        }
    }
    return loss;
}

DecisionVector bayes_rule(const ScoreBatch& rates, const LossParams& params) {
    params.validate();
    return flags_above(rates, params.c2 / (1.0 + params.c1));
}

double c_algebra(double eta, double c1) {
    detail::require(c1 >= 0.0, "c_algebra: c1 must be nonnegative");
    return (1.0 + c1) * eta;
}

double c_algebra_inv(double c2, double eta) {
    detail::require(eta != 0.0, "c_algebra_inv: eta must be nonzero");
    return c2 / eta - 1.0;
}

std::string to_string(ScoreOrientation orientation) {
    return orientation == ScoreOrientation::null_score ? "null_score" : "raw_score";
}

ScoreOrientation parse_orientation(const std::string& name) {
    if (name == "null_score" || name == "null") {
        return ScoreOrientation::null_score;
    }
    if (name == "raw_score" || name == "raw") {
        return ScoreOrientation::raw_score;
    }
    throw InvalidInput("unknown orientation '" + name + "' (expected null_score or raw_score)");
}

CoupledThreshold coupled_threshold(const ScoreBatch& rates, const BfdrConfig& config, double c1,
                                   ScoreOrientation orientation) {
    detail::require(c1 >= 0.0 && !std::isnan(c1), "coupled rule: c1 must be nonnegative");
    CoupledThreshold out;
    if (orientation == ScoreOrientation::null_score) {
        out.selector = gbfdr(rates.complement(), config);
        if (out.selector.feasible()) {
            out.eta_r = 1.0 - *out.selector.eta;
        }
    } else {
        out.selector = gbfdr(rates, config);
        out.eta_r = out.selector.eta;
    }
    if (out.eta_r) {
        out.cut = *out.eta_r / (1.0 + c1);
    }
    return out;
}

DecisionVector flags_above(const ScoreBatch& rates, std::optional<double> cut) {
    DecisionVector flags(rates.size(), false);
    if (!cut) {
        return flags;
    }
    for (std::size_t j = 0; j < rates.size(); ++j) {
        flags[j] = rates[j] > *cut;
    }
    return flags;
}

DecisionVector bfdr_coupled_rule(const ScoreBatch& rates, const BfdrConfig& config, double c1,
                                 ScoreOrientation orientation) {
    return flags_above(rates, coupled_threshold(rates, config, c1, orientation).cut);
}

} // namespace ppfdr
