#pragma once

#include "ppfdr/bfdr.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ppfdr {

//! c1 penalizes false negatives, c2 penalizes each discovery.
struct LossParams {
    double c1 = 0.0;
    double c2 = 0.0;

    void validate() const;
};

using DecisionVector = std::vector<bool>;

//! -sum d_j I_j + c1 sum (1 - d_j) I_j + c2 sum d_j
double loss_eval(const DecisionVector& flags, const std::vector<bool>& outlier_truth, const LossParams& params);

//! Posterior-predictive expected loss: -sum d_j r_j + c1 sum (1 - d_j) r_j + c2 sum d_j
double expected_loss(const ScoreBatch& rates, const DecisionVector& flags, const LossParams& params);

//! d_j = I(r_j > c2 / (1 + c1)).
DecisionVector bayes_rule(const ScoreBatch& rates, const LossParams& params);

//! c2 = (1 + c1) eta
double c_algebra(double eta, double c1);
//! c1 = c2 / eta - 1. Throws InvalidInput for eta == 0.
double c_algebra_inv(double c2, double eta);

//! Which quantity the selector consumes.
enum class ScoreOrientation {
    //! Selector runs on s_j = 1 - r_j; eta_r = 1 - eta_s.
    null_score,
    //! Selector runs on r_j directly; eta_r = eta_s.
    raw_score,
};

std::string to_string(ScoreOrientation orientation);
ScoreOrientation parse_orientation(const std::string& name);

struct CoupledThreshold {
    ThresholdResult selector;
    //! Selector threshold mapped into r-space. Empty when infeasible.
    std::optional<double> eta_r;
    //! Flag cut eta_r / (1 + c1). Empty when infeasible.
    std::optional<double> cut;
};

CoupledThreshold coupled_threshold(const ScoreBatch& rates, const BfdrConfig& config, double c1,
                                   ScoreOrientation orientation = ScoreOrientation::null_score);

//! I(r_j > cut); all false when cut is empty.
DecisionVector flags_above(const ScoreBatch& rates, std::optional<double> cut);

//! Flags r_j > eta_r / (1 + c1) with eta_r chosen by BFDR(q; a) on the same
//! batch. An infeasible selector flags nothing.
DecisionVector bfdr_coupled_rule(const ScoreBatch& rates, const BfdrConfig& config, double c1,
                                 ScoreOrientation orientation = ScoreOrientation::null_score);

} // namespace ppfdr
