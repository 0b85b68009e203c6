#include "ppfdr/error.hpp"
#include "ppfdr/predictive.hpp"
#include "ppfdr/special_functions.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace ppfdr;

namespace {

const NigParams kDiffuse{0.0, 1e-4, 0.01, 0.01};

double relGap(double lhs, double rhs) {
    return std::fabs(lhs - rhs) / std::max(1.0, std::fabs(rhs));
}

Cdf standardNormal() {
    return [](double x) { return standard_normal_cdf(x); };
}

} // namespace

TEST(NigUpdate, EmptyDataReturnsPrior) {
    EXPECT_EQ(nig_update(kDiffuse, {}), kDiffuse);
}

TEST(NigUpdate, ThreePointExample) {
    std::vector<double> data{1, 2, 3};
    NigParams post = nig_update(kDiffuse, data);
    EXPECT_NEAR(post.mu0, 1.9999333355554816, 1e-15);
    EXPECT_NEAR(post.nu, 3.0001, 1e-15);
    EXPECT_NEAR(post.alpha, 1.51, 1e-15);
    EXPECT_NEAR(post.beta, 1.0101999933335555, 1e-15);
}

TEST(NigUpdate, ConstantDataAtPriorMean) {
    std::vector<double> data{5, 5, 5, 5};
    NigParams post = nig_update({5, 10, 2, 2}, data);
    EXPECT_EQ(post, (NigParams{5, 14, 4, 2}));
}

TEST(NigUpdate, GridBayesOracleAgrees) {
    // Proper prior so the (mu, log sigma^2) grid captures all the mass.
    NigParams prior{0.5, 1.0, 3.0, 2.0};
    std::vector<double> data{1.2, 0.4, 2.1, 1.7, 0.9};
    NigParams post = nig_update(prior, data);
    auto grid = oracle::nig_grid_posterior(prior, data, -3.0, 5.0, -5.0, 4.0, 800);
    EXPECT_NEAR(grid.mean_mu, post.mu0, 1e-4);
    EXPECT_NEAR(grid.mean_variance, post.beta / (post.alpha - 1.0), 1e-3);
}

TEST(NigUpdate, SequentialEqualsBatch) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> normal(3.0, 1.5);
    std::vector<double> data(60);
    for (auto& x : data) {
        x = normal(rng);
    }
    NigParams batch = nig_update(kDiffuse, data);
    for (std::size_t split : {0ul, 1ul, 17ul, 59ul, 60ul}) {
        NigParams twoStep = nig_update(nig_update(kDiffuse, std::span(data).first(split)),
                                       std::span(data).subspan(split));
        EXPECT_LE(relGap(twoStep.mu0, batch.mu0), 1e-12);
        EXPECT_LE(relGap(twoStep.nu, batch.nu), 1e-12);
        EXPECT_LE(relGap(twoStep.alpha, batch.alpha), 1e-12);
        EXPECT_LE(relGap(twoStep.beta, batch.beta), 1e-12);
    }
}

TEST(NigUpdate, RejectsInvalid) {
    std::vector<double> bad{1.0, std::nan("")};
    EXPECT_THROW(nig_update(kDiffuse, bad), InvalidInput);
    EXPECT_THROW(nig_update({0, 0, 1, 1}, {}), InvalidInput);
    EXPECT_THROW(nig_update({0, 1, -1, 1}, {}), InvalidInput);
    EXPECT_THROW(nig_update({0, 1, 1, 0}, {}), InvalidInput);
    EXPECT_THROW(nig_update({std::numeric_limits<double>::infinity(), 1, 1, 1}, {}), InvalidInput);
}

TEST(PosteriorPredictive, ParameterMapping) {
    auto pred = posterior_predictive({0, 1, 1, 1});
    EXPECT_EQ(pred.dof, 2.0);
    EXPECT_EQ(pred.loc, 0.0);
    EXPECT_NEAR(pred.scale * pred.scale, 2.0, 1e-15);

    std::vector<double> data{1, 2, 3};
    auto fromData = posterior_predictive(nig_update(kDiffuse, data));
    EXPECT_NEAR(fromData.dof, 3.02, 1e-15);
    EXPECT_NEAR(fromData.loc, 1.9999333355554816, 1e-15);
    EXPECT_NEAR(fromData.scale * fromData.scale, 0.8920013909764941, 1e-14);
}

TEST(TCdf, CenterAndCauchy) {
    StudentTPredictive pred{4.0, 1.3, 0.7};
    EXPECT_DOUBLE_EQ(t_cdf(pred, 1.3), 0.5);
    EXPECT_DOUBLE_EQ(t_cdf({1.0, 0.0, 1.0}, 1.0), 0.75);
    EXPECT_NEAR(t_cdf({30.0, 0.0, 1.0}, 2.0), oracle::t_cdf_quadrature({30.0, 0.0, 1.0}, 2.0), 1e-10);
}

TEST(TCdf, SymmetryAboutLocation) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        StudentTPredictive pred{0.1 + 50 * unit(rng), 20 * unit(rng) - 10, 0.01 + 4 * unit(rng)};
        double x = pred.loc + 30 * (unit(rng) - 0.5);
        EXPECT_NEAR(t_cdf(pred, x) + t_cdf(pred, 2 * pred.loc - x), 1.0, 1e-12);
    }
}

TEST(TCdf, MatchesPosteriorMonteCarlo) {
    std::vector<double> data{0.3, -0.2, 1.1, 0.7, 0.5, 0.9, -0.4, 0.1};
    NigParams post = nig_update({0.0, 0.5, 2.0, 1.0}, data);
    auto pred = posterior_predictive(post);
    for (double x : {-1.0, 0.4, 2.0}) {
        auto mc = oracle::nig_predictive_cdf_mc(post, x, 400000, 99);
        EXPECT_LE(std::fabs(t_cdf(pred, x) - mc.estimate), 3.0 * mc.standard_error + 1e-12) << x;
    }
}

TEST(Score, EdgesAndMonotonicity) {
    StudentTPredictive pred{2.0, 0.0, 1.0};
    EXPECT_DOUBLE_EQ(score(pred, 0.0), 0.5);
    EXPECT_EQ(score(pred, std::numeric_limits<double>::infinity()), 1.0);
    EXPECT_NEAR(score(pred, 10.0), oracle::t_cdf_quadrature(pred, 10.0), 1e-10);
    double previous = 0.0;
    for (double x = -50; x <= 50; x += 0.25) {
        double r = score(pred, x);
        EXPECT_GE(r, previous);
        previous = r;
    }
}

TEST(Score, TwoSidedFoldsBothTails) {
    StudentTPredictive pred{5.0, 2.0, 1.5};
    EXPECT_DOUBLE_EQ(score(pred, 2.0, TailMode::two_sided), 0.0);
    double up = score(pred, 2.0 + 3.0, TailMode::two_sided);
    double down = score(pred, 2.0 - 3.0, TailMode::two_sided);
    EXPECT_NEAR(up, down, 1e-14);
    EXPECT_NEAR(up, 2.0 * t_cdf(pred, 5.0) - 1.0, 1e-14);
}

TEST(DpCdf, Examples) {
    DpPredictive empty{1.0, standardNormal(), {}};
    EXPECT_DOUBLE_EQ(dp_cdf(empty, 0.7), standard_normal_cdf(0.7));
    DpPredictive pred{1.0, standardNormal(), {0.0, 0.0}};
    EXPECT_NEAR(dp_cdf(pred, 0.0), (0.5 + 2.0) / 3.0, 1e-15);
    EXPECT_NEAR(dp_cdf(pred, 1e300), 1.0, 1e-15);
    EXPECT_NEAR(dp_cdf(pred, -1e300), 0.0, 1e-15);
}

TEST(DpCdf, NondecreasingWithJumps) {
    DpPredictive pred{2.0, standardNormal(), {-1.0, 0.5, 0.5, 3.0}};
    double previous = 0.0;
    for (double x = -6; x <= 6; x += 0.01) {
        double f = dp_cdf(pred, x);
        EXPECT_GE(f, previous - 1e-15);
        previous = f;
    }
    EXPECT_GT(dp_cdf(pred, 0.5) - dp_cdf(pred, 0.4999999), 2.0 / 6.0 - 1e-6);
}

TEST(PyCdf, Examples) {
    auto pred = PyPredictive::from_observations(0.5, 1.0, standardNormal(), std::vector<double>{0.0, 0.0});
    EXPECT_EQ(pred.unique_values, std::vector<double>{0.0});
    EXPECT_EQ(pred.counts, std::vector<std::size_t>{2});
    EXPECT_NEAR(py_cdf(pred, 0.0), 0.75, 1e-15);

    auto empty = PyPredictive::from_observations(0.3, 2.0, standardNormal(), {});
    EXPECT_DOUBLE_EQ(py_cdf(empty, -0.4), standard_normal_cdf(-0.4));
}

TEST(PyCdf, ZeroDiscountIsDirichletProcess) {
    std::vector<double> data{-0.3, 1.2, 1.2, 0.8, -2.0};
    auto py = PyPredictive::from_observations(0.0, 1.7, standardNormal(), data);
    DpPredictive dp{1.7, standardNormal(), data};
    for (double x = -4; x <= 4; x += 0.05) {
        EXPECT_NEAR(py_cdf(py, x), dp_cdf(dp, x), 1e-15) << x;
    }
}

TEST(PyCdf, LimitsAndValidation) {
    std::vector<double> data{1.0, 2.0, 2.0};
    auto pred = PyPredictive::from_observations(0.4, 0.5, standardNormal(), data);
    EXPECT_NEAR(py_cdf(pred, 1e300), 1.0, 1e-15);
    EXPECT_NEAR(py_cdf(pred, -1e300), 0.0, 1e-15);
    EXPECT_THROW(PyPredictive::from_observations(1.2, 1.0, standardNormal(), data), InvalidInput);
    EXPECT_THROW(PyPredictive::from_observations(0.5, -0.6, standardNormal(), data), InvalidInput);
    // Negative discount needs theta = m |sigma|.
    EXPECT_NO_THROW(PyPredictive::from_observations(-0.5, 1.5, standardNormal(), data));
    EXPECT_THROW(PyPredictive::from_observations(-0.5, 1.2, standardNormal(), data), InvalidInput);
}

TEST(MdpNewProb, Examples) {
    MdpMixing single{{{1.0, 1.0}}};
    EXPECT_DOUBLE_EQ(mdp_new_prob(single, 0, 0), 1.0);
    EXPECT_NEAR(mdp_new_prob(single, 2, 1), 0.5, 1e-15);
    MdpMixing two{{{1.0, 0.5}, {2.0, 0.5}}};
    EXPECT_NEAR(mdp_new_prob(two, 1, 1), 1.0, 1e-15);
}

TEST(MdpNewProb, Validation) {
    EXPECT_THROW(mdp_new_prob(MdpMixing{{{1.0, 0.6}}}, 2, 1), InvalidInput);
    EXPECT_THROW(mdp_new_prob(MdpMixing{{{-1.0, 1.0}}}, 2, 1), InvalidInput);
    EXPECT_THROW(mdp_new_prob(MdpMixing{{{1.0, 1.0}}}, 2, 3), InvalidInput);
    EXPECT_THROW(mdp_new_prob(MdpMixing{}, 2, 1), InvalidInput);
}
