#pragma once

// Lagged detection over an m x T panel: trailing-window NIG fits, per
// timestep scoring, per timestep BFDR(q; a) thresholds, fixed-eta
// baselines and confusion-matrix metrics.

#include "ppfdr/bfdr.hpp"
#include "ppfdr/decision.hpp"
#include "ppfdr/matrix.hpp"
#include "ppfdr/predictive.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ppfdr {

struct DetectConfig {
    NigParams prior{0.0, 1e-4, 0.01, 0.01};
    //! a, k and algorithm are used for every q; bfdr.q is used only when
    //! q_grid is empty.
    BfdrConfig bfdr{0.2, 2.0, 10000, SelectorAlgorithm::cumulative};
    std::vector<double> q_grid;
    double c1 = 0.0;
    std::vector<double> baseline_etas;
    ScoreOrientation orientation = ScoreOrientation::null_score;
    TailMode tail = TailMode::upper;
    unsigned threads = 0;

    std::vector<double> levels() const;
    void validate() const;
};

//! q_grid = {2^-first, ..., 2^-last}.
std::vector<double> dyadic_levels(int first, int last);

//! r_{j,t} = score(posterior_predictive(nig_update(prior, X_{j,t-lag..t-1})), X_{j,t})
//! for t = lag..T-1. Column c of the result is timestep lag + c.
Matrix<double> lagged_scores(const Matrix<double>& values, const NigParams& prior, std::size_t lag,
                             TailMode tail = TailMode::upper, unsigned threads = 1);

struct Confusion {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;

    std::int64_t total() const { return tp + fp + fn + tn; }

    friend bool operator==(const Confusion&, const Confusion&) = default;
};

//! Zero-denominator conventions: precision is 1 with no flags, recall is 1
//! with no true outliers, balanced accuracy averages only the defined rates.
struct Metrics {
    double precision = 1.0;
    double recall = 1.0;
    double accuracy = 1.0;
    double balanced_accuracy = 1.0;
};

Metrics compute_metrics(const Confusion& confusion);
Confusion confusion_of(const DecisionVector& flags, const std::vector<bool>& truth);

enum class DetectMethod {
    bfdr,
    fixed,
};

std::string to_string(DetectMethod method);

struct MethodRun {
    DetectMethod method = DetectMethod::bfdr;
    //! q for bfdr runs, the fixed selector-space eta for baselines.
    double level = 0.0;
    //! Selector-space threshold per timestep; constant for baselines.
    std::vector<std::optional<double>> eta_s;
    //! Grid index of eta_s; empty for baselines and infeasible timesteps.
    std::vector<std::optional<std::int64_t>> index;
    std::vector<std::optional<double>> eta_r;
    Matrix<std::uint8_t> flags;
    std::vector<Confusion> confusion;
    std::vector<Metrics> metrics;
};

struct DetectionReport {
    //! Timestep of score column 0.
    std::size_t first_timestep = 0;
    std::size_t series = 0;
    std::size_t timesteps = 0;
    bool has_truth = false;
    std::vector<MethodRun> runs;

    const MethodRun* find(DetectMethod method, double level) const;
};

//! truth may be null, in which case confusion/metrics are left empty.
DetectionReport detect(const Matrix<double>& scores, const Matrix<std::uint8_t>* truth, const DetectConfig& config,
                       std::size_t first_timestep = 0);

struct PairedDifference {
    double level = 0.0;
    //! BFDR(q) minus fixed eta = q, per timestep.
    std::vector<Metrics> difference;
};

std::vector<PairedDifference> paired_differences(const DetectionReport& report);

//! Writes thresholds.csv, flags.csv and, with truth, metrics.csv and diff.csv
//! into directory. Returns the written file names.
std::vector<std::string> metric_series(const DetectionReport& report, const std::filesystem::path& directory);

} // namespace ppfdr
