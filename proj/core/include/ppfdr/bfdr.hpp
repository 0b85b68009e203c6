#pragma once

// Threshold selection by Bayesian FDR and its signed-power generalization
// BFDR(q; a). The selector searches the grid K = {0, 1/k, ..., 1} for the
// largest eta whose selected set {j : s_j <= eta} satisfies
//
//     sum_j sign(s_j - q) |s_j - q|^a I(s_j <= eta) < 0.
//
// a = 1 is the classic rule "mean of selected scores < q". Three algorithms
// are provided with identical semantics: a top-down loop over the grid, a
// dense replication-matrix evaluation of every grid column, and a
// sort-and-prefix-sum pass that is O(m log m + k).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ppfdr {

enum class SelectorAlgorithm {
    looped,
    vectorized,
    cumulative,
};

std::string to_string(SelectorAlgorithm algorithm);
SelectorAlgorithm parse_selector_algorithm(const std::string& name);

struct BfdrConfig {
    double q = 0.2;
    double a = 1.0;
    std::int64_t k = 10000;
    SelectorAlgorithm algorithm = SelectorAlgorithm::looped;
    //! Upper bound on the dense working set of the vectorized algorithm.
    std::size_t memory_budget_bytes = std::size_t{1} << 30;

    void validate() const;

    friend bool operator==(const BfdrConfig&, const BfdrConfig&) = default;
};

//! A nonempty batch of scores in [0, 1].
class ScoreBatch {
public:
    explicit ScoreBatch(std::vector<double> scores);

    std::span<const double> scores() const { return m_Scores; }
    std::size_t size() const { return m_Scores.size(); }
    double operator[](std::size_t j) const { return m_Scores[j]; }

    //! The batch {1 - s_j}.
    ScoreBatch complement() const;

private:
    std::vector<double> m_Scores;
};

//! Selected grid point. feasible() iff index is set; eta == index / k.
struct ThresholdResult {
    std::optional<std::int64_t> index;
    std::optional<double> eta;

    bool feasible() const { return index.has_value(); }

    static ThresholdResult at(std::int64_t index, std::int64_t k);
    static ThresholdResult infeasible() { return {}; }

    friend bool operator==(const ThresholdResult&, const ThresholdResult&) = default;
};

//! Grid value K_l = l / k. Every algorithm compares scores against exactly
//! this expression.
inline double grid_point(std::int64_t l, std::int64_t k) {
    return static_cast<double>(l) / static_cast<double>(k);
}

//! sign(x) |x|^a with sign(0) = 0, so zero maps to zero for every a >= 0.
double signed_power(double x, double a);

//! Largest eta in K with nonempty S(eta) = {s_j <= eta} and mean over
//! S(eta) below q (evaluated as sum (s_j - q) < 0).
ThresholdResult classic_bfdr(const ScoreBatch& batch, double q, std::int64_t k);

ThresholdResult gbfdr_looped(const ScoreBatch& batch, const BfdrConfig& config);

//! Materializes the m x (k+1) replication matrix and selection mask.
//! Throws CapacityError if the working set exceeds config.memory_budget_bytes.
ThresholdResult gbfdr_vectorized(const ScoreBatch& batch, const BfdrConfig& config);

ThresholdResult gbfdr_cumulative(const ScoreBatch& batch, const BfdrConfig& config);

//! Dispatches on config.algorithm.
ThresholdResult gbfdr(const ScoreBatch& batch, const BfdrConfig& config);

//! Bytes needed by gbfdr_vectorized for m scores and resolution k.
std::size_t vectorized_working_set_bytes(std::size_t m, std::int64_t k);

struct McFdrInverse {
    //! Mean selected threshold over the feasible draws; empty if none were.
    std::optional<double> mean_eta;
    double standard_error = 0.0;
    std::size_t draws = 0;
    std::size_t feasible_draws = 0;
    //! Mean with infeasible draws counted as eta = 0.
    double mean_eta_zero_filled = 0.0;
};

//! Monte Carlo estimate of E[FDR^{-1}(q; gamma)] where gamma_j ~ Bernoulli(r_j)
//! independently. Each draw selects the largest grid eta such that the
//! realized FDR sum_{1-r_j <= eta} (1 - gamma_j) / #{1-r_j <= eta} is below q.
McFdrInverse mc_fdr_inverse(std::span<const double> rates, double q, std::size_t draws, std::int64_t k,
                            std::uint64_t seed);

struct MomentCheck {
    //! sum_j sign(s_j - q) |s_j - q|^a I(s_j <= eta)
    double criterion = 0.0;
    //! Central difference in q of sum_j |s_j - q|^(a+1) I(s_j <= eta).
    double finite_difference = 0.0;
    //! Step actually used after kink avoidance.
    double step = 0.0;
    //! (a + 1) sum_j |s_j - q|^a I(s_j <= eta); the natural magnitude of both sides.
    double scale = 0.0;

    //! finite_difference / criterion; -(a + 1) analytically.
    double ratio() const { return finite_difference / criterion; }
};

//! Pairs the selection criterion with a finite difference of the (a+1)-th
//! absolute moment sum. The step is shrunk so that no selected score lies
//! within two steps of q; throws InvalidInput if that needs a step < 1e-10.
MomentCheck moment_derivative_check(const ScoreBatch& batch, double q, double a, double eta, double step = 1e-6);

} // namespace ppfdr
