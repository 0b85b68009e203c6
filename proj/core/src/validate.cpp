#include "ppfdr/validate.hpp"

#include "ppfdr/bfdr.hpp"
#include "ppfdr/csv.hpp"
#include "ppfdr/decision.hpp"
#include "ppfdr/error.hpp"
#include "ppfdr/predictive.hpp"
#include "ppfdr/simgen.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace ppfdr {

namespace {

struct Sizes {
    std::size_t selector_batches;
    std::size_t mc_draws;
    std::size_t moment_batches;
    std::size_t bayes_instances;
    std::size_t loss_draws;
};

Sizes sizesFor(ValidationLevel level) {
    if (level == ValidationLevel::full) {
        return {1000, 20000, 500, 100, 200000};
    }
    return {120, 4000, 60, 15, 20000};
}

// Uniform scores with occasional exact grid points and duplicates, which
// are where comparison-order bugs surface.
std::vector<double> randomScores(std::mt19937_64& rng, std::size_t m, std::int64_t k) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::int64_t> gridIndex(0, k);
    std::vector<double> scores(m);
    for (std::size_t j = 0; j < m; ++j) {
        double u = unit(rng);
        if (u < 0.1) {
            scores[j] = grid_point(gridIndex(rng), k);
        } else if (u < 0.15 && j > 0) {
            scores[j] = scores[j - 1];
        } else {
            scores[j] = unit(rng);
        }
    }
    return scores;
}

std::string describe(const ThresholdResult& result) {
    return result.index ? std::to_string(*result.index) : std::string("none");
}

CheckResult selectorEquivalence(std::uint64_t seed, std::size_t batches) {
    std::mt19937_64 rng(substream_seed(seed, 1));
    const std::size_t sizes[] = {10, 1000};
    const double exponents[] = {0.0, 0.5, 1.0, 2.0};
    const double levels[] = {0.2, 0.05, std::ldexp(1.0, -10)};
    const std::int64_t grids[] = {100, 1000};
    for (std::size_t b = 0; b < batches; ++b) {
        std::size_t m = sizes[b % 2];
        double a = exponents[(b / 2) % 4];
        double q = levels[(b / 8) % 3];
        std::int64_t k = grids[(b / 24) % 2];
        ScoreBatch batch(randomScores(rng, m, k));
        BfdrConfig config{q, a, k, SelectorAlgorithm::looped};
        auto looped = gbfdr_looped(batch, config);
        auto vectorized = gbfdr_vectorized(batch, config);
        auto cumulative = gbfdr_cumulative(batch, config);
        if (!(looped == vectorized) || !(looped == cumulative)) {
            std::ostringstream detail;
            detail << "batch " << b << " (m=" << m << ", a=" << a << ", q=" << q << ", k=" << k
                   << "): looped " << describe(looped) << ", vectorized " << describe(vectorized) << ", cumulative "
                   << describe(cumulative);
            return {"selector_equivalence", false, detail.str()};
        }
    }
    return {"selector_equivalence", true, std::to_string(batches) + " batches identical"};
}

CheckResult classicReduction(std::uint64_t seed, std::size_t batches) {
    std::mt19937_64 rng(substream_seed(seed, 2));
    const double levels[] = {0.2, 0.05, std::ldexp(1.0, -10)};
    for (std::size_t b = 0; b < batches; ++b) {
        std::size_t m = b % 2 == 0 ? 10 : 1000;
        double q = levels[b % 3];
        std::int64_t k = b % 4 < 2 ? 100 : 1000;
        ScoreBatch batch(randomScores(rng, m, k));
        auto general = gbfdr(batch, BfdrConfig{q, 1.0, k, SelectorAlgorithm::looped});
        auto classic = classic_bfdr(batch, q, k);
        if (!(general == classic)) {
            return {"classic_reduction", false,
                    "batch " + std::to_string(b) + ": a=1 gives " + describe(general) + ", classic gives " +
                        describe(classic)};
        }
    }
    return {"classic_reduction", true, std::to_string(batches) + " batches identical"};
}

CheckResult fdrInverseIdentity(std::uint64_t seed, std::size_t draws) {
    const std::size_t m = 50;
    const double q = 0.2;
    const std::int64_t k = 100;
    std::mt19937_64 rng(substream_seed(seed, 3));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> rates(m);
    for (auto& r : rates) {
        r = unit(rng);
    }
    auto deterministic = gbfdr(ScoreBatch(rates).complement(), BfdrConfig{q, 1.0, k, SelectorAlgorithm::looped});
    auto mc = mc_fdr_inverse(rates, q, draws, k, substream_seed(seed, 4));
    std::ostringstream detail;
    detail << "deterministic " << (deterministic.eta ? csv::format_double(*deterministic.eta) : "none");
    if (!deterministic.eta || !mc.mean_eta) {
        detail << ", monte carlo feasible draws " << mc.feasible_draws;
        return {"fdr_inverse_identity", false, detail.str()};
    }
    double gap = std::fabs(*mc.mean_eta - *deterministic.eta);
    double bound = 3.0 * mc.standard_error + 1.0 / static_cast<double>(k);
    detail << ", monte carlo " << *mc.mean_eta << " (se " << mc.standard_error << ", " << mc.feasible_draws << "/"
           << mc.draws << " feasible), gap " << gap << " vs bound " << bound;
    return {"fdr_inverse_identity", gap <= bound, detail.str()};
}

CheckResult momentIdentity(std::uint64_t seed, std::size_t batches) {
    std::mt19937_64 rng(substream_seed(seed, 5));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double exponents[] = {0.5, 1.0, 2.0, 3.0};
    double worst = 0.0;
    std::size_t tested = 0;
    for (std::size_t b = 0; b < batches; ++b) {
        std::vector<double> scores(50);
        for (auto& s : scores) {
            s = unit(rng);
        }
        ScoreBatch batch(scores);
        double a = exponents[b % 4];
        double q = 0.05 + 0.3 * unit(rng);
        double eta = 0.2 + 0.8 * unit(rng);
        MomentCheck check;
        try {
            check = moment_derivative_check(batch, q, a, eta);
        } catch (const InvalidInput&) {
            continue;
        }
        if (check.scale == 0.0) {
            continue;
        }
        ++tested;
        double error = std::fabs(check.finite_difference + (a + 1.0) * check.criterion) / check.scale;
        worst = std::max(worst, error);
    }
    std::ostringstream detail;
    detail << tested << " batches, worst relative error " << worst;
    return {"moment_identity", tested > 0 && worst <= 1e-5, detail.str()};
}

CheckResult bayesOptimality(std::uint64_t seed, std::size_t instances) {
    std::mt19937_64 rng(substream_seed(seed, 6));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t m = 12;
    for (std::size_t i = 0; i < instances; ++i) {
        std::vector<double> rates(m);
        for (auto& r : rates) {
            r = unit(rng);
        }
        ScoreBatch batch(rates);
        LossParams params{2.0 * unit(rng), unit(rng)};
        double ruleLoss = expected_loss(batch, bayes_rule(batch, params), params);
        double best = std::numeric_limits<double>::infinity();
        for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
            DecisionVector flags(m);
            for (std::size_t j = 0; j < m; ++j) {
                flags[j] = ((mask >> j) & 1u) != 0;
            }
            best = std::min(best, expected_loss(batch, flags, params));
        }
        // Ties are equal up to summation order.
        if (ruleLoss > best + 1e-12 * (1.0 + std::fabs(best))) {
            std::ostringstream detail;
            detail << "instance " << i << ": rule loss " << ruleLoss << " above minimum " << best;
            return {"bayes_optimality", false, detail.str()};
        }
    }
    return {"bayes_optimality", true, std::to_string(instances) + " instances at the enumerated minimum"};
}

CheckResult expectedLossLinearity(std::uint64_t seed, std::size_t draws) {
    std::mt19937_64 rng(substream_seed(seed, 7));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t m = 20;
    std::vector<double> rates(m);
    for (auto& r : rates) {
        r = unit(rng);
    }
    ScoreBatch batch(rates);
    LossParams params{0.5, 0.3};
    DecisionVector flags = bayes_rule(batch, params);
    double sum = 0.0;
    double sumSquares = 0.0;
    std::vector<bool> truth(m);
    for (std::size_t d = 0; d < draws; ++d) {
        for (std::size_t j = 0; j < m; ++j) {
            truth[j] = unit(rng) < rates[j];
        }
        double loss = loss_eval(flags, truth, params);
        sum += loss;
        sumSquares += loss * loss;
    }
    double n = static_cast<double>(draws);
    double mean = sum / n;
    double se = std::sqrt(std::max(0.0, sumSquares / n - mean * mean) / n);
    double exact = expected_loss(batch, flags, params);
    std::ostringstream detail;
    detail << "exact " << exact << ", monte carlo " << mean << " (se " << se << ")";
    return {"expected_loss_linearity", std::fabs(mean - exact) <= 3.0 * se, detail.str()};
}

CheckResult nigConjugacy(std::uint64_t seed) {
    std::mt19937_64 rng(substream_seed(seed, 8));
    std::normal_distribution<double> normal(1.5, 2.0);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> data(40);
        for (auto& x : data) {
            x = normal(rng);
        }
        NigParams prior{0.0, 1e-4, 0.01, 0.01};
        NigParams batch = nig_update(prior, data);
        NigParams sequential = prior;
        for (double x : data) {
            sequential = nig_update(sequential, std::span<const double>(&x, 1));
        }
        auto relative = [](double lhs, double rhs) { return std::fabs(lhs - rhs) / std::max(1.0, std::fabs(rhs)); };
        worst = std::max({worst, relative(sequential.mu0, batch.mu0), relative(sequential.nu, batch.nu),
                          relative(sequential.alpha, batch.alpha), relative(sequential.beta, batch.beta)});
    }
    std::ostringstream detail;
    detail << "worst relative gap " << worst;
    return {"nig_conjugacy", worst <= 1e-12, detail.str()};
}

CheckResult tSymmetry(std::uint64_t seed) {
    std::mt19937_64 rng(substream_seed(seed, 9));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        StudentTPredictive pred{0.05 + 60.0 * unit(rng), 10.0 * unit(rng) - 5.0, 0.1 + 5.0 * unit(rng)};
        double d = 20.0 * unit(rng);
        worst = std::max(worst, std::fabs(t_cdf(pred, pred.loc + d) + t_cdf(pred, pred.loc - d) - 1.0));
    }
    std::ostringstream detail;
    detail << "worst |F(loc+d) + F(loc-d) - 1| = " << worst;
    return {"t_symmetry", worst <= 1e-12, detail.str()};
}

} // namespace

std::vector<CheckResult> run_validation(ValidationLevel level, std::uint64_t seed, const CheckObserver& observer) {
    Sizes sizes = sizesFor(level);
    std::vector<CheckResult> results;
    auto run = [&](CheckResult result) {
        if (observer) {
            observer(result);
        }
        results.push_back(std::move(result));
    };
    run(selectorEquivalence(seed, sizes.selector_batches));
    run(classicReduction(seed, sizes.selector_batches));
    run(fdrInverseIdentity(seed, sizes.mc_draws));
    run(momentIdentity(seed, sizes.moment_batches));
    run(bayesOptimality(seed, sizes.bayes_instances));
    run(expectedLossLinearity(seed, sizes.loss_draws));
    run(nigConjugacy(seed));
    run(tSymmetry(seed));
    return results;
}

} // namespace ppfdr
