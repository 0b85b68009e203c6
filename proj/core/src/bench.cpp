#include "ppfdr/bench.hpp"

#include "ppfdr/csv.hpp"
#include "ppfdr/error.hpp"
#include "ppfdr/simgen.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>

namespace ppfdr {

BenchSpec BenchSpec::standard() {
    return BenchSpec{};
}

BenchSpec BenchSpec::k_sweep(std::size_t replications) {
    BenchSpec spec;
    spec.replications = replications;
    spec.k_values = {100, 500, 1000, 5000, 10000, 50000};
    return spec;
}

void BenchSpec::validate() const {
    detail::require(replications >= 1, "BenchSpec: replications must be at least 1");
    detail::require(m >= 1, "BenchSpec: m must be at least 1");
    detail::require(!k_values.empty(), "BenchSpec: k_values must be nonempty");
    for (auto k : k_values) {
        BfdrConfig probe{q, a, k, SelectorAlgorithm::vectorized, memory_budget_bytes};
        probe.validate();
        if (vectorized_working_set_bytes(m, k) > memory_budget_bytes) {
            throw CapacityError("BenchSpec: k = " + std::to_string(k) + " needs " +
                                std::to_string(vectorized_working_set_bytes(m, k)) +
                                " bytes for the vectorized selector, over the budget of " +
                                std::to_string(memory_budget_bytes));
        }
    }
}

const BenchSummary* BenchReport::find(SelectorAlgorithm method, std::int64_t k) const {
    for (const auto& summary : summaries) {
        if (summary.method == method && summary.k == k) {
            return &summary;
        }
    }
    return nullptr;
}

namespace {

constexpr SelectorAlgorithm kMethods[] = {SelectorAlgorithm::looped, SelectorAlgorithm::vectorized};

ScoreBatch benchBatch(const BenchSpec& spec, std::int64_t k, std::size_t replication) {
    // Workloads depend on (seed, k, replication) only, never on timing order.
    std::uint64_t stream = (static_cast<std::uint64_t>(k) << 24) ^ replication;
    std::mt19937_64 rng(substream_seed(spec.seed, stream));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> scores(spec.m);
    for (auto& s : scores) {
        s = unit(rng);
    }
    return ScoreBatch(std::move(scores));
}

double timed(const ScoreBatch& batch, const BfdrConfig& config, ThresholdResult& out) {
    auto start = std::chrono::steady_clock::now();
    out = gbfdr(batch, config);
    auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(stop - start).count();
}

} // namespace

BenchReport run_bench(const BenchSpec& spec, const BenchProgress& progress) {
    spec.validate();
    BenchReport report;
    std::size_t total = spec.replications * spec.k_values.size();
    std::size_t done = 0;
    for (auto k : spec.k_values) {
        BfdrConfig config{spec.q, spec.a, k, SelectorAlgorithm::looped, spec.memory_budget_bytes};
        ScoreBatch warm = benchBatch(spec, k, spec.replications);
        for (auto method : kMethods) {
            config.algorithm = method;
            for (std::size_t w = 0; w < spec.warmup; ++w) {
                ThresholdResult ignored;
                timed(warm, config, ignored);
            }
        }
        for (std::size_t rep = 0; rep < spec.replications; ++rep) {
            ScoreBatch batch = benchBatch(spec, k, rep);
            ThresholdResult results[2];
            double seconds[2];
            for (int i = 0; i < 2; ++i) {
                config.algorithm = kMethods[i];
                seconds[i] = timed(batch, config, results[i]);
            }
            if (!(results[0] == results[1])) {
                ++report.mismatches;
                throw PropertyFailure("bench: looped and vectorized selectors disagree at k = " + std::to_string(k) +
                                      ", replication " + std::to_string(rep));
            }
            for (int i = 0; i < 2; ++i) {
                report.samples.push_back(BenchSample{kMethods[i], k, rep, seconds[i], results[i].index});
            }
            if (progress) {
                progress(++done, total);
            }
        }
    }
    report.summaries = summarize(report.samples);
    return report;
}

std::vector<BenchSummary> summarize(std::span<const BenchSample> samples) {
    std::map<std::pair<int, std::int64_t>, std::vector<double>> groups;
    for (const auto& sample : samples) {
        groups[{static_cast<int>(sample.method), sample.k}].push_back(sample.seconds);
    }
    std::vector<BenchSummary> out;
    for (auto& [key, times] : groups) {
        BenchSummary summary;
        summary.method = static_cast<SelectorAlgorithm>(key.first);
        summary.k = key.second;
        summary.runs = times.size();
        summary.total = std::accumulate(times.begin(), times.end(), 0.0);
        summary.mean = summary.total / static_cast<double>(times.size());
        double squares = 0.0;
        for (double t : times) {
            squares += (t - summary.mean) * (t - summary.mean);
        }
        summary.sd = times.size() > 1 ? std::sqrt(squares / static_cast<double>(times.size() - 1)) : 0.0;
        std::sort(times.begin(), times.end());
        std::size_t mid = times.size() / 2;
        summary.median = times.size() % 2 == 1 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
        out.push_back(summary);
    }
    return out;
}

std::vector<EtaBucket> bucket_by_eta(const BenchReport& report, std::size_t buckets) {
    detail::require(buckets >= 1, "bucket_by_eta needs at least one bucket");
    std::map<std::tuple<int, std::int64_t, std::size_t>, std::pair<std::size_t, double>> acc;
    for (const auto& sample : report.samples) {
        if (!sample.eta_index) {
            continue;
        }
        double eta = grid_point(*sample.eta_index, sample.k);
        auto bucket = std::min(buckets - 1, static_cast<std::size_t>(eta * static_cast<double>(buckets)));
        auto& slot = acc[{static_cast<int>(sample.method), sample.k, bucket}];
        ++slot.first;
        slot.second += sample.seconds;
    }
    std::vector<EtaBucket> out;
    for (const auto& [key, slot] : acc) {
        auto [method, k, bucket] = key;
        EtaBucket b;
        b.method = static_cast<SelectorAlgorithm>(method);
        b.k = k;
        b.lower = static_cast<double>(bucket) / static_cast<double>(buckets);
        b.upper = static_cast<double>(bucket + 1) / static_cast<double>(buckets);
        b.runs = slot.first;
        b.mean_seconds = slot.second / static_cast<double>(slot.first);
        out.push_back(b);
    }
    return out;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    detail::require(x.size() == y.size() && x.size() >= 2, "loglog_slope needs two or more paired points");
    double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        detail::require(x[i] > 0.0 && y[i] > 0.0, "loglog_slope needs positive values");
        double lx = std::log(x[i]);
        double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double denominator = n * sxx - sx * sx;
    detail::require(denominator > 0.0, "loglog_slope needs at least two distinct x values");
    return (n * sxy - sx * sy) / denominator;
}

std::vector<std::string> write_bench(const BenchReport& report, const std::filesystem::path& directory) {
    using csv::format_double;
    auto open = [&](const char* name) {
        std::ofstream out(directory / name);
        if (!out) {
            throw InvalidInput("cannot open '" + (directory / name).string() + "' for writing");
        }
        return out;
    };
    {
        auto out = open("bench.csv");
        out << "method,k,replication,seconds,eta_index\n";
        for (const auto& s : report.samples) {
            out << to_string(s.method) << ',' << s.k << ',' << s.replication << ',' << format_double(s.seconds)
                << ',' << (s.eta_index ? std::to_string(*s.eta_index) : std::string()) << '\n';
        }
    }
    {
        auto out = open("bench_summary.csv");
        out << "method,k,runs,total,mean,sd,median,sd_over_mean\n";
        for (const auto& s : report.summaries) {
            out << to_string(s.method) << ',' << s.k << ',' << s.runs << ',' << format_double(s.total) << ','
                << format_double(s.mean) << ',' << format_double(s.sd) << ',' << format_double(s.median) << ','
                << format_double(s.dispersion()) << '\n';
        }
    }
    {
        auto out = open("bench_eta_buckets.csv");
        out << "method,k,eta_lower,eta_upper,runs,mean_seconds\n";
        for (const auto& b : bucket_by_eta(report)) {
            out << to_string(b.method) << ',' << b.k << ',' << format_double(b.lower) << ','
                << format_double(b.upper) << ',' << b.runs << ',' << format_double(b.mean_seconds) << '\n';
        }
    }
    return {"bench.csv", "bench_summary.csv", "bench_eta_buckets.csv"};
}

} // namespace ppfdr
