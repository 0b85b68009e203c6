#include "ppfdr/pipeline.hpp"

#include "ppfdr/csv.hpp"
#include "ppfdr/error.hpp"
#include "ppfdr/parallel.hpp"

#include <cmath>
#include <fstream>

namespace ppfdr {

std::vector<double> DetectConfig::levels() const {
    return q_grid.empty() ? std::vector<double>{bfdr.q} : q_grid;
}

void DetectConfig::validate() const {
    prior.validate();
    for (double q : levels()) {
        BfdrConfig probe = bfdr;
        probe.q = q;
        probe.validate();
    }
    detail::require(c1 >= 0.0 && std::isfinite(c1), "DetectConfig: c1 must be nonnegative");
    for (double eta : baseline_etas) {
        detail::require(eta > 0.0 && eta < 1.0, "DetectConfig: baseline etas must lie in (0, 1)");
    }
}

std::vector<double> dyadic_levels(int first, int last) {
    detail::require(first >= 1 && last >= first, "dyadic levels need 1 <= first <= last");
    std::vector<double> levels;
    for (int v = first; v <= last; ++v) {
        levels.push_back(std::ldexp(1.0, -v));
    }
    return levels;
}

Matrix<double> lagged_scores(const Matrix<double>& values, const NigParams& prior, std::size_t lag, TailMode tail,
                             unsigned threads) {
    prior.validate();
    detail::require(lag >= 1, "lagged_scores: lag must be at least 1");
    detail::require(values.cols() > lag, "lagged_scores: need more timesteps than the lag");
    std::size_t horizon = values.cols() - lag;
    Matrix<double> scores(values.rows(), horizon);
    parallel_for(values.rows(), threads, [&](std::size_t j) {
        auto series = values.row(j);
        for (std::size_t c = 0; c < horizon; ++c) {
            std::size_t t = lag + c;
            double observed = series[t];
            detail::require(std::isfinite(observed), "lagged_scores: non-finite observation in series " +
                                                         std::to_string(j) + " at t=" + std::to_string(t));
            NigParams post = nig_update(prior, series.subspan(t - lag, lag));
            scores(j, c) = score(posterior_predictive(post), observed, tail);
        }
    });
    return scores;
}

Metrics compute_metrics(const Confusion& confusion) {
    Metrics metrics;
    double tp = static_cast<double>(confusion.tp);
    double fp = static_cast<double>(confusion.fp);
    double fn = static_cast<double>(confusion.fn);
    double tn = static_cast<double>(confusion.tn);
    double total = tp + fp + fn + tn;
    metrics.precision = tp + fp > 0.0 ? tp / (tp + fp) : 1.0;
    metrics.recall = tp + fn > 0.0 ? tp / (tp + fn) : 1.0;
    metrics.accuracy = total > 0.0 ? (tp + tn) / total : 1.0;
    bool hasPositives = tp + fn > 0.0;
    bool hasNegatives = tn + fp > 0.0;
    if (hasPositives && hasNegatives) {
        metrics.balanced_accuracy = 0.5 * (tp / (tp + fn) + tn / (tn + fp));
    } else if (hasPositives) {
        metrics.balanced_accuracy = tp / (tp + fn);
    } else if (hasNegatives) {
        metrics.balanced_accuracy = tn / (tn + fp);
    }
    return metrics;
}

Confusion confusion_of(const DecisionVector& flags, const std::vector<bool>& truth) {
    detail::require(flags.size() == truth.size(), "confusion_of: flags and truth differ in length");
    Confusion c;
    for (std::size_t j = 0; j < flags.size(); ++j) {
        if (flags[j]) {
            truth[j] ? ++c.tp : ++c.fp;
        } else {
            truth[j] ? ++c.fn : ++c.tn;
        }
    }
    return c;
}

std::string to_string(DetectMethod method) {
    return method == DetectMethod::bfdr ? "bfdr" : "fixed";
}

const MethodRun* DetectionReport::find(DetectMethod method, double level) const {
    for (const auto& run : runs) {
        if (run.method == method && run.level == level) {
            return &run;
        }
    }
    return nullptr;
}

namespace {

MethodRun makeRun(DetectMethod method, double level, std::size_t series, std::size_t timesteps, bool withTruth) {
    MethodRun run;
    run.method = method;
    run.level = level;
    run.eta_s.resize(timesteps);
    run.index.resize(timesteps);
    run.eta_r.resize(timesteps);
    run.flags = Matrix<std::uint8_t>(series, timesteps);
    if (withTruth) {
        run.confusion.resize(timesteps);
        run.metrics.resize(timesteps);
    }
    return run;
}

void record(MethodRun& run, std::size_t t, const DecisionVector& flags, const Matrix<std::uint8_t>* truth) {
    for (std::size_t j = 0; j < flags.size(); ++j) {
        run.flags(j, t) = flags[j] ? 1 : 0;
    }
    if (truth != nullptr) {
        std::vector<bool> column(flags.size());
        for (std::size_t j = 0; j < flags.size(); ++j) {
            column[j] = (*truth)(j, t) != 0;
        }
        run.confusion[t] = confusion_of(flags, column);
        run.metrics[t] = compute_metrics(run.confusion[t]);
    }
}

} // namespace

DetectionReport detect(const Matrix<double>& scores, const Matrix<std::uint8_t>* truth, const DetectConfig& config,
                       std::size_t first_timestep) {
    config.validate();
    detail::require(scores.rows() >= 1 && scores.cols() >= 1, "detect: score matrix is empty");
    if (truth != nullptr) {
        detail::require(truth->rows() == scores.rows() && truth->cols() == scores.cols(),
                        "detect: truth matrix is " + std::to_string(truth->rows()) + "x" +
                            std::to_string(truth->cols()) + " but scores are " + std::to_string(scores.rows()) +
                            "x" + std::to_string(scores.cols()));
    }

    DetectionReport report;
    report.first_timestep = first_timestep;
    report.series = scores.rows();
    report.timesteps = scores.cols();
    report.has_truth = truth != nullptr;

    std::vector<double> levels = config.levels();
    for (double q : levels) {
        report.runs.push_back(makeRun(DetectMethod::bfdr, q, scores.rows(), scores.cols(), report.has_truth));
    }
    for (double eta : config.baseline_etas) {
        report.runs.push_back(makeRun(DetectMethod::fixed, eta, scores.rows(), scores.cols(), report.has_truth));
    }

    parallel_for(scores.cols(), config.threads, [&](std::size_t t) {
        ScoreBatch batch(scores.column(t));
        for (auto& run : report.runs) {
            if (run.method == DetectMethod::bfdr) {
                BfdrConfig selector = config.bfdr;
                selector.q = run.level;
                CoupledThreshold threshold = coupled_threshold(batch, selector, config.c1, config.orientation);
                run.eta_s[t] = threshold.selector.eta;
                run.index[t] = threshold.selector.index;
                run.eta_r[t] = threshold.eta_r;
                record(run, t, flags_above(batch, threshold.cut), truth);
            } else {
                double etaR = config.orientation == ScoreOrientation::null_score ? 1.0 - run.level : run.level;
                run.eta_s[t] = run.level;
                run.eta_r[t] = etaR;
                record(run, t, flags_above(batch, etaR / (1.0 + config.c1)), truth);
            }
        }
    });
    return report;
}

std::vector<PairedDifference> paired_differences(const DetectionReport& report) {
    std::vector<PairedDifference> out;
    if (!report.has_truth) {
        return out;
    }
    for (const auto& run : report.runs) {
        if (run.method != DetectMethod::bfdr) {
            continue;
        }
        const MethodRun* baseline = report.find(DetectMethod::fixed, run.level);
        if (baseline == nullptr) {
            continue;
        }
        PairedDifference diff;
        diff.level = run.level;
        diff.difference.resize(run.metrics.size());
        for (std::size_t t = 0; t < run.metrics.size(); ++t) {
            const Metrics& lhs = run.metrics[t];
            const Metrics& rhs = baseline->metrics[t];
            diff.difference[t] = Metrics{lhs.precision - rhs.precision, lhs.recall - rhs.recall,
                                         lhs.accuracy - rhs.accuracy, lhs.balanced_accuracy - rhs.balanced_accuracy};
        }
        out.push_back(std::move(diff));
    }
    return out;
}

namespace {

std::ofstream openCsv(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw InvalidInput("cannot open '" + path.string() + "' for writing");
    }
    return out;
}

std::string optionalField(const std::optional<double>& value) {
    return value ? csv::format_double(*value) : std::string();
}

} // namespace

std::vector<std::string> metric_series(const DetectionReport& report, const std::filesystem::path& directory) {
    std::vector<std::string> written;
    using csv::format_double;

    {
        auto out = openCsv(directory / "thresholds.csv");
        out << "t,method,level,eta_s,eta_r,feasible\n";
        for (std::size_t t = 0; t < report.timesteps; ++t) {
            for (const auto& run : report.runs) {
                out << report.first_timestep + t << ',' << to_string(run.method) << ','
                    << format_double(run.level) << ',' << optionalField(run.eta_s[t]) << ','
                    << optionalField(run.eta_r[t]) << ',' << (run.eta_r[t] ? 1 : 0) << '\n';
            }
        }
        written.push_back("thresholds.csv");
    }
    {
        // Sparse: one row per flagged cell.
        auto out = openCsv(directory / "flags.csv");
        out << "method,level,t,series\n";
        for (const auto& run : report.runs) {
            std::string prefix = to_string(run.method) + ',' + format_double(run.level) + ',';
            for (std::size_t t = 0; t < report.timesteps; ++t) {
                for (std::size_t j = 0; j < report.series; ++j) {
                    if (run.flags(j, t)) {
                        out << prefix << report.first_timestep + t << ',' << j << '\n';
                    }
                }
            }
        }
        written.push_back("flags.csv");
    }
    if (!report.has_truth) {
        return written;
    }
    {
        auto out = openCsv(directory / "metrics.csv");
        out << "t,q,method,precision,recall,accuracy,balanced_accuracy,tp,fp,fn,tn\n";
        for (const auto& run : report.runs) {
            for (std::size_t t = 0; t < report.timesteps; ++t) {
                const Metrics& m = run.metrics[t];
                const Confusion& c = run.confusion[t];
                out << report.first_timestep + t << ',' << format_double(run.level) << ',' << to_string(run.method)
                    << ',' << format_double(m.precision) << ',' << format_double(m.recall) << ','
                    << format_double(m.accuracy) << ',' << format_double(m.balanced_accuracy) << ',' << c.tp << ','
                    << c.fp << ',' << c.fn << ',' << c.tn << '\n';
            }
        }
        written.push_back("metrics.csv");
    }
    {
        auto out = openCsv(directory / "diff.csv");
        out << "t,q,precision,recall,accuracy,balanced_accuracy\n";
        for (const auto& diff : paired_differences(report)) {
            for (std::size_t t = 0; t < diff.difference.size(); ++t) {
                const Metrics& d = diff.difference[t];
                out << report.first_timestep + t << ',' << format_double(diff.level) << ','
                    << format_double(d.precision) << ',' << format_double(d.recall) << ','
                    << format_double(d.accuracy) << ',' << format_double(d.balanced_accuracy) << '\n';
            }
        }
        written.push_back("diff.csv");
    }
    return written;
}

} // namespace ppfdr
