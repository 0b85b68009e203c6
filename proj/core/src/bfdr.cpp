#include "ppfdr/bfdr.hpp"

#include "ppfdr/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace ppfdr {

std::string to_string(SelectorAlgorithm algorithm) {
    switch (algorithm) {
    case SelectorAlgorithm::looped:
        return "looped";
    case SelectorAlgorithm::vectorized:
        return "vectorized";
    case SelectorAlgorithm::cumulative:
        return "cumulative";
    }
    return "unknown";
}

SelectorAlgorithm parse_selector_algorithm(const std::string& name) {
    if (name == "looped") {
        return SelectorAlgorithm::looped;
    }
    if (name == "vectorized") {
        return SelectorAlgorithm::vectorized;
    }
    if (name == "cumulative") {
        return SelectorAlgorithm::cumulative;
    }
    throw InvalidInput("unknown selector algorithm '" + name + "' (expected looped, vectorized or cumulative)");
}

void BfdrConfig::validate() const {
    detail::require(q > 0.0 && q < 1.0, "BFDR q must lie in (0, 1)");
    detail::require(a >= 0.0 && std::isfinite(a), "BFDR exponent a must be nonnegative");
    detail::require(k >= 1, "BFDR grid resolution k must be at least 1");
}

ScoreBatch::ScoreBatch(std::vector<double> scores) : m_Scores(std::move(scores)) {
    detail::require(!m_Scores.empty(), "score batch must be nonempty");
    for (double s : m_Scores) {
        detail::require(s >= 0.0 && s <= 1.0, "score batch entries must lie in [0, 1]");
    }
}

ScoreBatch ScoreBatch::complement() const {
    std::vector<double> out(m_Scores.size());
    std::transform(m_Scores.begin(), m_Scores.end(), out.begin(), [](double s) { return 1.0 - s; });
    return ScoreBatch(std::move(out));
}

ThresholdResult ThresholdResult::at(std::int64_t index, std::int64_t k) {
    return ThresholdResult{index, grid_point(index, k)};
}

double signed_power(double x, double a) {
    if (x == 0.0) {
        return 0.0;
    }
    if (a == 0.0) {
        return x > 0.0 ? 1.0 : -1.0;
    }
    if (a == 1.0) {
        return x;
    }
    if (a == 2.0) {
        return x * std::fabs(x);
    }
    return std::copysign(std::pow(std::fabs(x), a), x);
}

ThresholdResult classic_bfdr(const ScoreBatch& batch, double q, std::int64_t k) {
    detail::require(q > 0.0 && q < 1.0, "BFDR q must lie in (0, 1)");
    detail::require(k >= 1, "BFDR grid resolution k must be at least 1");
    auto scores = batch.scores();
    for (std::int64_t l = k; l >= 0; --l) {
        double eta = grid_point(l, k);
        std::size_t selected = 0;
        double excess = 0.0;
        for (double s : scores) {
            if (s <= eta) {
                ++selected;
                excess += s - q;
            }
        }
        // mean < q, rearranged to avoid dividing
        if (selected > 0 && excess < 0.0) {
            return ThresholdResult::at(l, k);
        }
    }
    return ThresholdResult::infeasible();
}

ThresholdResult gbfdr_looped(const ScoreBatch& batch, const BfdrConfig& config) {
    config.validate();
    auto scores = batch.scores();
    for (std::int64_t l = config.k; l >= 0; --l) {
        double eta = grid_point(l, config.k);
        double criterion = 0.0;
        for (double s : scores) {
            if (s <= eta) {
                criterion += signed_power(s - config.q, config.a);
            }
        }
        if (criterion < 0.0) {
            return ThresholdResult::at(l, config.k);
        }
    }
    return ThresholdResult::infeasible();
}

std::size_t vectorized_working_set_bytes(std::size_t m, std::int64_t k) {
    std::size_t columns = static_cast<std::size_t>(k) + 1;
    constexpr std::size_t perCell = sizeof(double) + sizeof(std::uint8_t);
    if (m != 0 && columns > std::numeric_limits<std::size_t>::max() / perCell / m) {
        return std::numeric_limits<std::size_t>::max();
    }
    return m * columns * perCell + columns * sizeof(double);
}

ThresholdResult gbfdr_vectorized(const ScoreBatch& batch, const BfdrConfig& config) {
    config.validate();
    std::size_t m = batch.size();
    std::size_t columns = static_cast<std::size_t>(config.k) + 1;
    std::size_t needed = vectorized_working_set_bytes(m, config.k);
    if (needed > config.memory_budget_bytes) {
        throw CapacityError("vectorized BFDR needs " + std::to_string(needed) + " bytes for a " +
                            std::to_string(m) + " x " + std::to_string(columns) + " working set; budget is " +
                            std::to_string(config.memory_budget_bytes));
    }

    std::vector<double> grid(columns);
    for (std::size_t l = 0; l < columns; ++l) {
        grid[l] = grid_point(static_cast<std::int64_t>(l), config.k);
    }

    // R = r 1^T and Psi_jl = I(r_j <= K_l), both m x (k+1) row-major. R is
    // overwritten in the same sweep by sign(R.Psi - q Psi) . |R.Psi - q Psi|^a
    // so each cell is touched once while it is still in cache.
    // Buffers persist per thread: above glibc's mmap threshold a fresh
    // allocation page-faults the whole working set on every call.
    thread_local std::vector<double> replicated;
    thread_local std::vector<std::uint8_t> mask;
    replicated.resize(m * columns);
    mask.resize(m * columns);
    auto scores = batch.scores();
    double q = config.q;
    double a = config.a;
    for (std::size_t j = 0; j < m; ++j) {
        double* row = replicated.data() + j * columns;
        std::uint8_t* maskRow = mask.data() + j * columns;
        double r = scores[j];
        for (std::size_t l = 0; l < columns; ++l) {
            maskRow[l] = r <= grid[l] ? 1 : 0;
            double psi = static_cast<double>(maskRow[l]);
            row[l] = signed_power(r * psi - q * psi, a);
        }
    }

    // 1^T [...]: column sums accumulated in row (score index) order.
    std::vector<double> criterion(columns, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        const double* row = replicated.data() + j * columns;
        for (std::size_t l = 0; l < columns; ++l) {
            criterion[l] += row[l];
        }
    }

    for (std::size_t l = columns; l-- > 0;) {
        if (criterion[l] < 0.0) {
            return ThresholdResult::at(static_cast<std::int64_t>(l), config.k);
        }
    }
    return ThresholdResult::infeasible();
}

ThresholdResult gbfdr_cumulative(const ScoreBatch& batch, const BfdrConfig& config) {
    config.validate();
    std::vector<double> sorted(batch.scores().begin(), batch.scores().end());
    std::sort(sorted.begin(), sorted.end());

    std::vector<double> prefix(sorted.size() + 1, 0.0);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        prefix[i + 1] = prefix[i] + signed_power(sorted[i] - config.q, config.a);
    }

    // Walk the grid downward while tracking how many sorted scores are <= eta.
    std::size_t count = sorted.size();
    for (std::int64_t l = config.k; l >= 0; --l) {
        double eta = grid_point(l, config.k);
        while (count > 0 && sorted[count - 1] > eta) {
            --count;
        }
        if (prefix[count] < 0.0) {
            return ThresholdResult::at(l, config.k);
        }
        if (count == 0) {
            break;
        }
    }
    return ThresholdResult::infeasible();
}

ThresholdResult gbfdr(const ScoreBatch& batch, const BfdrConfig& config) {
    switch (config.algorithm) {
    case SelectorAlgorithm::looped:
        return gbfdr_looped(batch, config);
    case SelectorAlgorithm::vectorized:
        return gbfdr_vectorized(batch, config);
    case SelectorAlgorithm::cumulative:
        return gbfdr_cumulative(batch, config);
    }
    throw InvalidInput("unknown selector algorithm");
}

McFdrInverse mc_fdr_inverse(std::span<const double> rates, double q, std::size_t draws, std::int64_t k,
                            std::uint64_t seed) {
    detail::require(!rates.empty(), "mc_fdr_inverse needs at least one rate");
    detail::require(draws >= 1, "mc_fdr_inverse needs at least one draw");
    detail::require(q > 0.0 && q < 1.0, "mc_fdr_inverse q must lie in (0, 1)");
    detail::require(k >= 1, "mc_fdr_inverse grid resolution k must be at least 1");
    for (double r : rates) {
        detail::require(r >= 0.0 && r <= 1.0, "mc_fdr_inverse rates must lie in [0, 1]");
    }

    // Rank by null score 1 - r so that S(eta) is a prefix of the ordering.
    std::size_t m = rates.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t lhs, std::size_t rhs) { return 1.0 - rates[lhs] < 1.0 - rates[rhs]; });
    std::vector<double> nullScores(m);
    for (std::size_t i = 0; i < m; ++i) {
        nullScores[i] = 1.0 - rates[order[i]];
    }
    std::vector<std::size_t> selectedAt(static_cast<std::size_t>(k) + 1);
    for (std::int64_t l = 0; l <= k; ++l) {
        double eta = grid_point(l, k);
        selectedAt[static_cast<std::size_t>(l)] = static_cast<std::size_t>(
            std::upper_bound(nullScores.begin(), nullScores.end(), eta) - nullScores.begin());
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::size_t> falseBefore(m + 1, 0);
    double sum = 0.0;
    double sumSquares = 0.0;
    McFdrInverse result;
    result.draws = draws;
    for (std::size_t draw = 0; draw < draws; ++draw) {
        for (std::size_t i = 0; i < m; ++i) {
            bool outlier = unit(rng) < rates[order[i]];
            falseBefore[i + 1] = falseBefore[i] + (outlier ? 0 : 1);
        }
        for (std::int64_t l = k; l >= 0; --l) {
            std::size_t selected = selectedAt[static_cast<std::size_t>(l)];
            if (selected == 0) {
                break;
            }
            // realized FDR = false / selected < q
            if (static_cast<double>(falseBefore[selected]) < q * static_cast<double>(selected)) {
                double eta = grid_point(l, k);
                sum += eta;
                sumSquares += eta * eta;
                ++result.feasible_draws;
                break;
            }
        }
    }
    result.mean_eta_zero_filled = sum / static_cast<double>(draws);
    if (result.feasible_draws > 0) {
        double n = static_cast<double>(result.feasible_draws);
        double mean = sum / n;
        result.mean_eta = mean;
        double variance = n > 1.0 ? std::max(0.0, (sumSquares - n * mean * mean) / (n - 1.0)) : 0.0;
        result.standard_error = std::sqrt(variance / n);
    }
    return result;
}

MomentCheck moment_derivative_check(const ScoreBatch& batch, double q, double a, double eta, double step) {
    detail::require(a >= 0.0 && std::isfinite(a), "moment check exponent a must be nonnegative");
    detail::require(step > 0.0, "moment check step must be positive");
    detail::require(std::isfinite(q), "moment check q must be finite");

    std::vector<double> selected;
    for (double s : batch.scores()) {
        if (s <= eta) {
            selected.push_back(s);
        }
    }

    // |s - q|^(a+1) has a kink at s = q; keep every selected score at least
    // two steps away from the differencing stencil's center.
    double closest = std::numeric_limits<double>::infinity();
    for (double s : selected) {
        closest = std::min(closest, std::fabs(s - q));
    }
    if (closest < 2.0 * step) {
        step = closest / 4.0;
        if (step < 1e-10) {
            throw InvalidInput("moment check: q lies on a kink of the moment sum (a selected score equals q)");
        }
    }

    MomentCheck check;
    check.step = step;
    auto moment = [&](double center) {
        double total = 0.0;
        for (double s : selected) {
            total += std::pow(std::fabs(s - center), a + 1.0);
        }
        return total;
    };
    double magnitude = 0.0;
    for (double s : selected) {
        check.criterion += signed_power(s - q, a);
        magnitude += std::pow(std::fabs(s - q), a);
    }
    check.scale = (a + 1.0) * magnitude;
    check.finite_difference = (moment(q + step) - moment(q - step)) / (2.0 * step);
    return check;
}

} // namespace ppfdr
