#include "ppfdr/decision.hpp"
#include "ppfdr/error.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace ppfdr;

TEST(LossEval, Examples) {
    EXPECT_DOUBLE_EQ(loss_eval({true, false}, {true, false}, {1.0, 0.5}), -0.5);
    EXPECT_DOUBLE_EQ(loss_eval({false, false}, {false, false}, {1.0, 0.5}), 0.0);
    EXPECT_DOUBLE_EQ(loss_eval({false}, {true}, {2.0, 1.0}), 2.0);
    EXPECT_THROW(loss_eval({true}, {true, false}, {0, 0}), InvalidInput);
    EXPECT_THROW(loss_eval({true}, {true}, {-1, 0}), InvalidInput);
}

TEST(ExpectedLoss, Examples) {
    EXPECT_NEAR(expected_loss(ScoreBatch({0.9}), {true}, {0.0, 0.5}), -0.4, 1e-15);
    ScoreBatch rates({0.2, 0.7, 0.4});
    EXPECT_NEAR(expected_loss(rates, {false, false, false}, {1.5, 0.3}), 1.5 * 1.3, 1e-15);
}

TEST(ExpectedLoss, MatchesMonteCarloOfRealizedLoss) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> r(15);
    for (auto& x : r) {
        x = unit(rng);
    }
    ScoreBatch rates(r);
    LossParams params{0.7, 0.4};
    DecisionVector flags(r.size());
    for (std::size_t j = 0; j < r.size(); ++j) {
        flags[j] = j % 3 != 0;
    }
    double sum = 0, squares = 0;
    const int draws = 100000;
    std::vector<bool> truth(r.size());
    for (int d = 0; d < draws; ++d) {
        for (std::size_t j = 0; j < r.size(); ++j) {
            truth[j] = unit(rng) < r[j];
        }
        double loss = loss_eval(flags, truth, params);
        sum += loss;
        squares += loss * loss;
    }
    double mean = sum / draws;
    double se = std::sqrt((squares / draws - mean * mean) / draws);
    EXPECT_LE(std::fabs(mean - expected_loss(rates, flags, params)), 3 * se);
}

TEST(BayesRule, Examples) {
    EXPECT_EQ(bayes_rule(ScoreBatch({0.1, 0.9}), {1.0, 1.0}), (DecisionVector{false, true}));
    EXPECT_EQ(bayes_rule(ScoreBatch({0.0, 1e-9, 0.5}), {0.0, 0.0}), (DecisionVector{false, true, true}));
    // Strict inequality at the threshold.
    EXPECT_EQ(bayes_rule(ScoreBatch({0.5}), {1.0, 1.0}), (DecisionVector{false}));
}

TEST(BayesRule, AttainsEnumeratedMinimum) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int instance = 0; instance < 30; ++instance) {
        std::vector<double> r(12);
        for (auto& x : r) {
            x = unit(rng);
        }
        ScoreBatch rates(r);
        LossParams params{3.0 * unit(rng), unit(rng)};
        double rule = expected_loss(rates, bayes_rule(rates, params), params);
        double best = oracle::enumerated_min_loss(rates, params);
        EXPECT_LE(rule, best + 1e-12 * (1 + std::fabs(best))) << instance;
    }
}

TEST(BayesRule, RaisingAScoreNeverUnflags) {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> r(10);
        for (auto& x : r) {
            x = unit(rng);
        }
        LossParams params{unit(rng), unit(rng)};
        auto before = bayes_rule(ScoreBatch(r), params);
        std::size_t j = trial % r.size();
        r[j] += (1.0 - r[j]) * unit(rng);
        auto after = bayes_rule(ScoreBatch(r), params);
        EXPECT_TRUE(!before[j] || after[j]);
    }
}

TEST(CAlgebra, Examples) {
    EXPECT_DOUBLE_EQ(c_algebra(0.2, 1.0), 0.4);
    EXPECT_DOUBLE_EQ(c_algebra(0.37, 0.0), 0.37);
    EXPECT_THROW(c_algebra_inv(0.4, 0.0), InvalidInput);
    EXPECT_THROW(c_algebra(0.2, -1.0), InvalidInput);
}

TEST(CAlgebra, RoundTripExactOnDyadicValues) {
    for (double eta : {0.5, 0.25, 0.125, std::ldexp(1.0, -10)}) {
        for (double c1 : {0.0, 1.0, 3.0, 0.5, 7.0}) {
            EXPECT_EQ(c_algebra_inv(c_algebra(eta, c1), eta), c1);
        }
    }
}

TEST(CAlgebra, RoundTripWithinRoundingOnRandomValues) {
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        double eta = 0.001 + unit(rng);
        double c1 = 10 * unit(rng);
        EXPECT_NEAR(c_algebra_inv(c_algebra(eta, c1), eta), c1, 1e-14 * (1 + c1));
    }
}

TEST(CAlgebra, MonotoneInC1) {
    double previousC2 = -1, previousCut = 2;
    for (double c1 = 0; c1 < 20; c1 += 0.5) {
        double c2 = c_algebra(0.3, c1);
        EXPECT_GT(c2, previousC2);
        previousC2 = c2;
        // null scores {0.01, 0.02, 0.5}: eta_s = 0.4, so eta_r = 0.6
        auto coupled = coupled_threshold(ScoreBatch({0.99, 0.98, 0.5}), BfdrConfig{0.1, 1.0, 10}, c1);
        ASSERT_TRUE(coupled.cut);
        EXPECT_LT(*coupled.cut, previousCut);
        previousCut = *coupled.cut;
    }
}

TEST(Orientation, NamesRoundTrip) {
    EXPECT_EQ(parse_orientation("null_score"), ScoreOrientation::null_score);
    EXPECT_EQ(parse_orientation("raw"), ScoreOrientation::raw_score);
    EXPECT_EQ(parse_orientation(to_string(ScoreOrientation::raw_score)), ScoreOrientation::raw_score);
    EXPECT_THROW(parse_orientation("sideways"), InvalidInput);
}

TEST(CoupledRule, NullScoreOrientation) {
    // r = {0.99, 0.98, 0.5}: null scores {0.01, 0.02, 0.5}, eta_s = 0.4 at q = 0.1,
    // so eta_r = 0.6 and the two confident rates are flagged.
    ScoreBatch rates({0.99, 0.98, 0.5});
    BfdrConfig cfg{0.1, 2.0, 10};
    auto coupled = coupled_threshold(rates, cfg, 0.0);
    ASSERT_TRUE(coupled.eta_r);
    EXPECT_NEAR(*coupled.eta_r, 0.6, 1e-15);
    EXPECT_EQ(bfdr_coupled_rule(rates, cfg, 0.0), (DecisionVector{true, true, false}));
}

TEST(CoupledRule, FlagsAboveEtaR) {
    ScoreBatch rates({0.96, 0.95, 0.2});
    EXPECT_EQ(flags_above(rates, 0.95), (DecisionVector{true, false, false}));
    EXPECT_EQ(flags_above(rates, std::nullopt), (DecisionVector{false, false, false}));
}

TEST(CoupledRule, InfeasibleFlagsNothing) {
    ScoreBatch rates({0.5, 0.4});
    auto flags = bfdr_coupled_rule(rates, BfdrConfig{0.1, 1.0, 100}, 0.0);
    EXPECT_EQ(flags, (DecisionVector{false, false}));
}

TEST(CoupledRule, LargeC1FlagsEverythingPositive) {
    ScoreBatch rates({0.99, 0.3, 0.001, 0.0});
    auto flags = bfdr_coupled_rule(rates, BfdrConfig{0.2, 1.0, 100}, 1e12);
    EXPECT_EQ(flags, (DecisionVector{true, true, true, false}));
}

TEST(CoupledRule, RawOrientationUsesSelectorEtaDirectly) {
    ScoreBatch rates({0.01, 0.02, 0.5});
    auto coupled = coupled_threshold(rates, BfdrConfig{0.1, 2.0, 10}, 0.0, ScoreOrientation::raw_score);
    ASSERT_TRUE(coupled.eta_r);
    EXPECT_NEAR(*coupled.eta_r, 0.4, 1e-15);
    EXPECT_EQ(flags_above(rates, coupled.cut), (DecisionVector{false, false, true}));
}
