#pragma once

// Wall-clock comparison of the looped and vectorized selectors on seeded
// uniform batches, with an equality gate on every replication.

#include "ppfdr/bfdr.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace ppfdr {

struct BenchSpec {
    std::size_t replications = 1500;
    std::size_t m = 1000;
    double a = 2.0;
    double q = 0.2;
    std::vector<std::int64_t> k_values{10000};
    std::uint64_t seed = 20240601;
    std::size_t warmup = 5;
    std::size_t memory_budget_bytes = std::size_t{2} << 30;

    //! 1500 replications, m = 1000, a = 2, q = 0.2, k = 10000.
    static BenchSpec standard();
    //! k in {100, 500, 1000, 5000, 10000, 50000}.
    static BenchSpec k_sweep(std::size_t replications);

    void validate() const;

    friend bool operator==(const BenchSpec&, const BenchSpec&) = default;
};

struct BenchSample {
    SelectorAlgorithm method = SelectorAlgorithm::looped;
    std::int64_t k = 0;
    std::size_t replication = 0;
    double seconds = 0.0;
    std::optional<std::int64_t> eta_index;
};

struct BenchSummary {
    SelectorAlgorithm method = SelectorAlgorithm::looped;
    std::int64_t k = 0;
    std::size_t runs = 0;
    double total = 0.0;
    double mean = 0.0;
    double sd = 0.0;
    double median = 0.0;

    double dispersion() const { return mean > 0.0 ? sd / mean : 0.0; }
};

struct EtaBucket {
    SelectorAlgorithm method = SelectorAlgorithm::looped;
    std::int64_t k = 0;
    //! Bucket covers eta in [lower, upper); the last bucket also holds eta = 1.
    double lower = 0.0;
    double upper = 0.0;
    std::size_t runs = 0;
    double mean_seconds = 0.0;
};

struct BenchReport {
    std::vector<BenchSample> samples;
    std::vector<BenchSummary> summaries;
    std::size_t mismatches = 0;

    const BenchSummary* find(SelectorAlgorithm method, std::int64_t k) const;
};

//! (replication, total) after each replication.
using BenchProgress = std::function<void(std::size_t, std::size_t)>;

//! Throws PropertyFailure on the first replication where the two selectors
//! disagree.
BenchReport run_bench(const BenchSpec& spec, const BenchProgress& progress = {});

std::vector<BenchSummary> summarize(std::span<const BenchSample> samples);
std::vector<EtaBucket> bucket_by_eta(const BenchReport& report, std::size_t buckets = 10);

//! Least-squares slope of log(y) on log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

//! bench.csv, bench_summary.csv and bench_eta_buckets.csv.
std::vector<std::string> write_bench(const BenchReport& report, const std::filesystem::path& directory);

} // namespace ppfdr
