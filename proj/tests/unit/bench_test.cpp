#include "ppfdr/bench.hpp"
#include "ppfdr/error.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

using namespace ppfdr;

TEST(BenchSpec, Presets) {
    auto standard = BenchSpec::standard();
    EXPECT_EQ(standard.replications, 1500u);
    EXPECT_EQ(standard.m, 1000u);
    EXPECT_EQ(standard.a, 2.0);
    EXPECT_EQ(standard.q, 0.2);
    EXPECT_EQ(standard.k_values, std::vector<std::int64_t>{10000});
    EXPECT_EQ(BenchSpec::k_sweep(3).k_values, (std::vector<std::int64_t>{100, 500, 1000, 5000, 10000, 50000}));
}

TEST(BenchSpec, Validation) {
    BenchSpec spec;
    spec.replications = 0;
    EXPECT_THROW(spec.validate(), InvalidInput);
    spec = {};
    spec.k_values.clear();
    EXPECT_THROW(spec.validate(), InvalidInput);
    spec = {};
    spec.memory_budget_bytes = 1000;
    EXPECT_THROW(spec.validate(), CapacityError);
}

TEST(RunBench, SmokeSingleReplication) {
    BenchSpec spec;
    spec.replications = 1;
    spec.k_values = {100};
    spec.warmup = 0;
    auto report = run_bench(spec);
    ASSERT_EQ(report.samples.size(), 2u);
    EXPECT_EQ(report.samples[0].eta_index, report.samples[1].eta_index);
    EXPECT_EQ(report.mismatches, 0u);
    ASSERT_NE(report.find(SelectorAlgorithm::looped, 100), nullptr);
    EXPECT_EQ(report.find(SelectorAlgorithm::looped, 100)->runs, 1u);
}

TEST(RunBench, WorkloadsReproducibleFromSeed) {
    BenchSpec spec;
    spec.replications = 6;
    spec.m = 200;
    spec.k_values = {100, 1000};
    spec.warmup = 1;
    auto first = run_bench(spec);
    auto second = run_bench(spec);
    ASSERT_EQ(first.samples.size(), second.samples.size());
    for (std::size_t i = 0; i < first.samples.size(); ++i) {
        EXPECT_EQ(first.samples[i].eta_index, second.samples[i].eta_index);
        EXPECT_EQ(first.samples[i].method, second.samples[i].method);
    }
    spec.seed += 1;
    auto other = run_bench(spec);
    bool anyDifferent = false;
    for (std::size_t i = 0; i < first.samples.size(); ++i) {
        anyDifferent |= first.samples[i].eta_index != other.samples[i].eta_index;
    }
    EXPECT_TRUE(anyDifferent);
}

TEST(Summarize, Statistics) {
    std::vector<BenchSample> samples{{SelectorAlgorithm::looped, 10, 0, 1.0, 1},
                                     {SelectorAlgorithm::looped, 10, 1, 2.0, 1},
                                     {SelectorAlgorithm::looped, 10, 2, 6.0, 1},
                                     {SelectorAlgorithm::vectorized, 10, 0, 4.0, 1}};
    auto summaries = summarize(samples);
    ASSERT_EQ(summaries.size(), 2u);
    const auto& looped = summaries[0];
    EXPECT_EQ(looped.runs, 3u);
    EXPECT_DOUBLE_EQ(looped.total, 9.0);
    EXPECT_DOUBLE_EQ(looped.mean, 3.0);
    EXPECT_DOUBLE_EQ(looped.median, 2.0);
    EXPECT_NEAR(looped.sd, std::sqrt(7.0), 1e-15);
    EXPECT_EQ(summaries[1].sd, 0.0);
    EXPECT_EQ(summaries[1].dispersion(), 0.0);
}

TEST(BucketByEta, GroupsByReturnedIndex) {
    BenchReport report;
    report.samples = {{SelectorAlgorithm::looped, 10, 0, 1.0, 1},
                      {SelectorAlgorithm::looped, 10, 1, 3.0, 1},
                      {SelectorAlgorithm::looped, 10, 2, 5.0, 10},
                      {SelectorAlgorithm::looped, 10, 3, 5.0, std::nullopt}};
    auto buckets = bucket_by_eta(report, 10);
    ASSERT_EQ(buckets.size(), 2u);
    EXPECT_EQ(buckets[0].runs, 2u);
    EXPECT_DOUBLE_EQ(buckets[0].mean_seconds, 2.0);
    EXPECT_DOUBLE_EQ(buckets[1].lower, 0.9);  // eta = 1 lands in the last bucket
}

TEST(LoglogSlope, RecoversPowerLaw) {
    std::vector<double> x{100, 500, 1000, 5000}, y;
    for (double v : x) {
        y.push_back(3e-7 * std::pow(v, 1.2));
    }
    EXPECT_NEAR(loglog_slope(x, y), 1.2, 1e-12);
    EXPECT_THROW(loglog_slope(std::vector<double>{1.0}, std::vector<double>{1.0}), InvalidInput);
    EXPECT_THROW(loglog_slope(std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 2.0}), InvalidInput);
}

TEST(WriteBench, EmitsCsvs) {
    BenchSpec spec;
    spec.replications = 2;
    spec.m = 50;
    spec.k_values = {100};
    spec.warmup = 0;
    auto report = run_bench(spec);
    auto dir = std::filesystem::temp_directory_path() / "ppfdr_bench_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    auto files = write_bench(report, dir);
    for (const auto& f : files) {
        EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
    }
    std::filesystem::remove_all(dir);
}
