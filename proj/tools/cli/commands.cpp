#include "commands.hpp"

#include "ppfdr/bench.hpp"
#include "ppfdr/csv.hpp"
#include "ppfdr/error.hpp"
#include "ppfdr/parallel.hpp"
#include "ppfdr/pipeline.hpp"
#include "ppfdr/serialization.hpp"
#include "ppfdr/simgen.hpp"
#include "ppfdr/validate.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#ifndef PPFDR_VERSION
#define PPFDR_VERSION "unknown"
#endif

namespace ppfdr::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Flags whose values were given explicitly, keyed by their JSON pointer in
// the resolved config. Lets a config file supply the base and flags
// override only what was typed.
class Overrides {
public:
    void bind(CLI::Option* option, std::string pointer) { m_Bound.emplace_back(option, std::move(pointer)); }

    json apply(json base, const json& flags) const {
        for (const auto& [option, pointer] : m_Bound) {
            if (option->count() > 0) {
                json::json_pointer at(pointer);
                base[at] = flags.at(at);
            }
        }
        return base;
    }

private:
    std::vector<std::pair<CLI::Option*, std::string>> m_Bound;
};

json readJson(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open '" + path.string() + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& error) {
        throw InvalidInput("'" + path.string() + "' is not valid JSON: " + error.what());
    }
}

fs::path normalized(const fs::path& path) {
    return fs::absolute(path).lexically_normal();
}

std::pair<double, double> parsePair(const std::string& text, const std::string& flag) {
    auto parts = csv::split(text);
    if (parts.size() != 2) {
        throw InvalidInput(flag + " expects START,END but got '" + text + "'");
    }
    return {csv::parse_double(parts[0]), csv::parse_double(parts[1])};
}

std::string joinLevels(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += (i ? "," : "") + csv::format_double(values[i]);
    }
    return out;
}

std::string flag(const std::string& name, const std::string& value) {
    return "--" + name + "=" + value;
}

std::string flag(const std::string& name, double value) {
    return flag(name, csv::format_double(value));
}

template <typename Int>
    requires std::is_integral_v<Int>
std::string flag(const std::string& name, Int value) {
    return flag(name, std::to_string(value));
}

void addOutput(CLI::App* sub, std::string& outDir) {
    sub->add_option("--out,-o", outDir, std::string("Output directory (default: $") + kOutputDirEnv + " or ./ppfdr-out)");
}

fs::path resolveOutput(const std::string& outDir, const std::optional<std::string>& envOutputDir) {
    if (!outDir.empty()) {
        return normalized(outDir);
    }
    if (envOutputDir && !envOutputDir->empty()) {
        return normalized(*envOutputDir);
    }
    return normalized("ppfdr-out");
}

// Help and version text, already rendered by the parser.
struct EarlyExit {
    std::string text;
};

const char* tailName(TailMode tail) {
    return tail == TailMode::upper ? "upper" : "two_sided";
}

} // namespace

std::vector<double> parse_level_list(const std::string& text) {
    auto dyadic = [&](std::string_view term) -> std::optional<int> {
        if (term.substr(0, 3) != "2^-") {
            return std::nullopt;
        }
        double exponent = csv::parse_double(term.substr(3));
        if (exponent != std::floor(exponent) || exponent < 1 || exponent > 1000) {
            throw InvalidInput("level exponent in '" + std::string(term) + "' must be a positive integer");
        }
        return static_cast<int>(exponent);
    };
    std::vector<double> levels;
    auto range = text.find("..");
    if (range != std::string::npos) {
        auto first = dyadic(std::string_view(text).substr(0, range));
        auto last = dyadic(std::string_view(text).substr(range + 2));
        if (!first || !last) {
            throw InvalidInput("level range '" + text + "' must look like 2^-1..2^-15");
        }
        return dyadic_levels(*first, *last);
    }
    for (auto term : csv::split(text)) {
        if (auto exponent = dyadic(term)) {
            levels.push_back(std::ldexp(1.0, -*exponent));
        } else {
            levels.push_back(csv::parse_double(term));
        }
    }
    if (levels.empty()) {
        throw InvalidInput("empty level list");
    }
    return levels;
}

Invocation parse_invocation(const std::vector<std::string>& args, const std::optional<std::string>& env_output_dir) {
    CLI::App app{"Posterior-predictive outlier scoring with BFDR(q; a) thresholds", "ppfdr"};
    app.require_subcommand(1);
    std::string outDir;

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Generate a nonstationary panel with injected outliers");
    SimSpec sim;
    std::string simSpecFile, sdInlier, sdOutlier, simMode = to_string(sim.outlier_mode);
    unsigned simThreads = 0;
    Overrides simFlags;
    simulate->add_option("--spec", simSpecFile, "JSON SimSpec used as the base; flags override it");
    simFlags.bind(simulate->add_option("--m", sim.m, "Number of series"), "/m");
    simFlags.bind(simulate->add_option("--t", sim.t_len, "Number of timesteps"), "/t_len");
    simFlags.bind(simulate->add_option("--lag", sim.lag, "Scoring lag"), "/lag");
    simFlags.bind(simulate->add_option("--rate", sim.outlier_rate, "Outlier probability per cell"), "/outlier_rate");
    simFlags.bind(simulate->add_option("--base-amplitude", sim.mean.base_amplitude, "Mean amplitude at t=0"),
                  "/base_amplitude");
    simFlags.bind(simulate->add_option("--amplitude-growth", sim.mean.amplitude_growth, "Amplitude added by t=T"),
                  "/amplitude_growth");
    simFlags.bind(simulate->add_option("--frequency", sim.mean.frequency, "Cycles over the horizon"), "/frequency");
    simFlags.bind(simulate->add_option("--sd-inlier", sdInlier, "Inlier sd ramp START,END"), "/sd_inlier");
    simFlags.bind(simulate->add_option("--sd-outlier", sdOutlier, "Outlier sd ramp START,END"), "/sd_outlier");
    simFlags.bind(simulate->add_option("--seed", sim.seed, "Master seed"), "/seed");
    simFlags.bind(simulate->add_option("--mode", simMode, "recentered or literal"), "/outlier_mode");
    simulate->add_option("--threads", simThreads, "Worker threads (0 = all cores)");
    addOutput(simulate, outDir);

    // detect
    auto* detectCmd = app.add_subcommand("detect", "Score a panel and flag outliers per timestep");
    DetectConfig det;
    std::string detConfigFile, dataFile, truthFile, qGrid, baselines, algorithm = to_string(det.bfdr.algorithm);
    std::string orientation = to_string(det.orientation), tail = tailName(det.tail);
    std::size_t lag = 30;
    Overrides detFlags;
    detectCmd->add_option("--config", detConfigFile, "JSON DetectConfig used as the base; flags override it");
    detectCmd->add_option("--data", dataFile, "Observations CSV (series x timesteps)")->required();
    detectCmd->add_option("--truth", truthFile, "Outlier indicator CSV; enables metrics");
    detectCmd->add_option("--lag", lag, "Trailing window length");
    detFlags.bind(detectCmd->add_option("--q", det.bfdr.q, "Single target level when no grid is given"), "/bfdr/q");
    detFlags.bind(detectCmd->add_option("--q-grid", qGrid, "Levels, e.g. 2^-1..2^-15 or 0.1,0.05"), "/q_grid");
    detFlags.bind(detectCmd->add_option("--a", det.bfdr.a, "Signed-power exponent"), "/bfdr/a");
    detFlags.bind(detectCmd->add_option("--k", det.bfdr.k, "Grid resolution"), "/bfdr/k");
    detFlags.bind(detectCmd->add_option("--algorithm", algorithm, "looped, vectorized or cumulative"),
                  "/bfdr/algorithm");
    detFlags.bind(detectCmd->add_option("--memory-budget", det.bfdr.memory_budget_bytes,
                                        "Byte cap for the vectorized working set"),
                  "/bfdr/memory_budget_bytes");
    detFlags.bind(detectCmd->add_option("--c1", det.c1, "False-negative penalty"), "/c1");
    detFlags.bind(detectCmd->add_option("--baseline-etas", baselines, "Fixed selector-space thresholds"),
                  "/baseline_etas");
    detFlags.bind(detectCmd->add_option("--orientation", orientation, "null_score or raw_score"), "/orientation");
    detFlags.bind(detectCmd->add_option("--tail", tail, "upper or two_sided"), "/tail");
    detFlags.bind(detectCmd->add_option("--mu0", det.prior.mu0, "NIG prior mean"), "/prior/mu0");
    detFlags.bind(detectCmd->add_option("--nu", det.prior.nu, "NIG prior mean precision weight"), "/prior/nu");
    detFlags.bind(detectCmd->add_option("--alpha", det.prior.alpha, "NIG prior shape"), "/prior/alpha");
    detFlags.bind(detectCmd->add_option("--beta", det.prior.beta, "NIG prior rate"), "/prior/beta");
    detFlags.bind(detectCmd->add_option("--threads", det.threads, "Worker threads (0 = all cores)"), "/threads");
    addOutput(detectCmd, outDir);

    // bench
    auto* benchCmd = app.add_subcommand("bench", "Time the looped and vectorized selectors");
    BenchSpec bench;
    std::string benchSpecFile, kValues;
    bool paper = false;
    std::size_t sweep = 0;
    Overrides benchFlags;
    benchCmd->add_option("--spec", benchSpecFile, "JSON BenchSpec used as the base; flags override it");
    auto* paperFlag = benchCmd->add_flag("--paper", paper, "1500 replications, m=1000, a=2, q=0.2, k=10000");
    benchCmd->add_option("--sweep", sweep, "k in {100,...,50000} with this many replications each")
        ->excludes(paperFlag);
    benchFlags.bind(benchCmd->add_option("--replications", bench.replications, "Timed runs per (method, k)"),
                    "/replications");
    benchFlags.bind(benchCmd->add_option("--m", bench.m, "Scores per batch"), "/m");
    benchFlags.bind(benchCmd->add_option("--a", bench.a, "Signed-power exponent"), "/a");
    benchFlags.bind(benchCmd->add_option("--q", bench.q, "Target level"), "/q");
    benchFlags.bind(benchCmd->add_option("--k", kValues, "Comma list of grid resolutions"), "/k_values");
    benchFlags.bind(benchCmd->add_option("--seed", bench.seed, "Master seed"), "/seed");
    benchFlags.bind(benchCmd->add_option("--warmup", bench.warmup, "Untimed runs per (method, k)"), "/warmup");
    benchFlags.bind(
        benchCmd->add_option("--memory-budget", bench.memory_budget_bytes, "Byte cap for the vectorized working set"),
        "/memory_budget_bytes");
    addOutput(benchCmd, outDir);

    // validate
    auto* validateCmd = app.add_subcommand("validate", "Run the selector and decision property suites");
    bool quick = false;
    bool full = false;
    std::uint64_t validateSeed = 1;
    auto* quickFlag = validateCmd->add_flag("--quick", quick, "Reduced sizes (default)");
    validateCmd->add_flag("--full", full, "Full Monte Carlo draw counts")->excludes(quickFlag);
    validateCmd->add_option("--seed", validateSeed, "Master seed");
    addOutput(validateCmd, outDir);

    app.set_version_flag("--version", PPFDR_VERSION);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::Success& early) {
        std::ostringstream text;
        app.exit(early, text, text);
        throw EarlyExit{text.str()};
    }

    Invocation inv;
    inv.output_dir = resolveOutput(outDir, env_output_dir);
    if (simulate->parsed()) {
        inv.subcommand = "simulate";
        if (!sdInlier.empty()) {
            auto [a, b] = parsePair(sdInlier, "--sd-inlier");
            sim.sd_inlier = {a, b};
        }
        if (!sdOutlier.empty()) {
            auto [a, b] = parsePair(sdOutlier, "--sd-outlier");
            sim.sd_outlier = {a, b};
        }
        sim.outlier_mode = parse_outlier_mode(simMode);
        json resolved = sim;
        if (!simSpecFile.empty()) {
            resolved = simFlags.apply(json(readJson(simSpecFile).get<SimSpec>()), resolved);
        }
        SimSpec spec = resolved.get<SimSpec>();
        spec.validate();
        inv.config = spec;
        inv.settings["threads"] = simThreads;
    } else if (detectCmd->parsed()) {
        inv.subcommand = "detect";
        if (!qGrid.empty()) {
            det.q_grid = parse_level_list(qGrid);
        }
        if (!baselines.empty()) {
            det.baseline_etas = parse_level_list(baselines);
        }
        det.bfdr.algorithm = parse_selector_algorithm(algorithm);
        det.orientation = parse_orientation(orientation);
        json resolved = det;
        resolved["tail"] = tail;
        if (!detConfigFile.empty()) {
            resolved = detFlags.apply(json(readJson(detConfigFile).get<DetectConfig>()), resolved);
        }
        DetectConfig config = resolved.get<DetectConfig>();
        config.validate();
        detail::require(lag >= 1, "--lag must be at least 1");
        inv.config = config;
        inv.inputs["data"] = normalized(dataFile).string();
        inv.inputs["truth"] = truthFile.empty() ? json(nullptr) : json(normalized(truthFile).string());
        inv.settings["lag"] = lag;
    } else if (benchCmd->parsed()) {
        inv.subcommand = "bench";
        if (!kValues.empty()) {
            bench.k_values.clear();
            for (auto term : csv::split(kValues)) {
                double k = csv::parse_double(term);
                detail::require(k == std::floor(k) && k >= 1, "--k values must be positive integers");
                bench.k_values.push_back(static_cast<std::int64_t>(k));
            }
        }
        json base = paper ? json(BenchSpec::standard()) : json(BenchSpec{});
        if (sweep > 0) {
            base = BenchSpec::k_sweep(sweep);
        }
        if (!benchSpecFile.empty()) {
            base = readJson(benchSpecFile).get<BenchSpec>();
        }
        BenchSpec spec = benchFlags.apply(base, json(bench)).get<BenchSpec>();
        spec.validate();
        inv.config = spec;
    } else {
        inv.subcommand = "validate";
        inv.config = {{"level", full ? "full" : "quick"}, {"seed", validateSeed}};
    }
    return inv;
}

json manifest_of(const Invocation& invocation, const std::vector<std::string>& outputs) {
    json seed = nullptr;
    if (invocation.config.is_object() && invocation.config.contains("seed")) {
        seed = invocation.config.at("seed");
    }
    return json{{"tool", "ppfdr"},
                {"version", PPFDR_VERSION},
                {"subcommand", invocation.subcommand},
                {"seed", seed},
                {"config", invocation.config},
                {"inputs", invocation.inputs},
                {"settings", invocation.settings},
                {"output_dir", invocation.output_dir.string()},
                {"outputs", outputs}};
}

Invocation invocation_of(const json& manifest) {
    try {
        Invocation inv;
        inv.subcommand = manifest.at("subcommand").get<std::string>();
        inv.config = manifest.at("config");
        inv.inputs = manifest.value("inputs", json::object());
        inv.settings = manifest.value("settings", json::object());
        inv.output_dir = manifest.at("output_dir").get<std::string>();
        return inv;
    } catch (const json::exception& error) {
        throw InvalidInput(std::string("malformed manifest: ") + error.what());
    }
}

std::vector<std::string> manifest_to_args(const json& manifest) {
    Invocation inv = invocation_of(manifest);
    std::vector<std::string> args{inv.subcommand};
    if (inv.subcommand == "simulate") {
        auto spec = inv.config.get<SimSpec>();
        args.insert(args.end(),
                    {flag("m", spec.m), flag("t", spec.t_len), flag("lag", spec.lag), flag("rate", spec.outlier_rate),
                     flag("base-amplitude", spec.mean.base_amplitude),
                     flag("amplitude-growth", spec.mean.amplitude_growth), flag("frequency", spec.mean.frequency),
                     flag("sd-inlier", joinLevels({spec.sd_inlier.start, spec.sd_inlier.end})),
                     flag("sd-outlier", joinLevels({spec.sd_outlier.start, spec.sd_outlier.end})),
                     flag("seed", spec.seed), flag("mode", to_string(spec.outlier_mode)),
                     flag("threads", inv.settings.value("threads", 0u))});
    } else if (inv.subcommand == "detect") {
        auto config = inv.config.get<DetectConfig>();
        args.push_back(flag("data", inv.inputs.at("data").get<std::string>()));
        if (inv.inputs.contains("truth") && !inv.inputs.at("truth").is_null()) {
            args.push_back(flag("truth", inv.inputs.at("truth").get<std::string>()));
        }
        args.insert(args.end(),
                    {flag("lag", inv.settings.value("lag", std::size_t{30})), flag("q", config.bfdr.q),
                     flag("a", config.bfdr.a), flag("k", config.bfdr.k),
                     flag("algorithm", to_string(config.bfdr.algorithm)),
                     flag("memory-budget", config.bfdr.memory_budget_bytes), flag("c1", config.c1),
                     flag("orientation", to_string(config.orientation)), flag("tail", tailName(config.tail)),
                     flag("mu0", config.prior.mu0), flag("nu", config.prior.nu), flag("alpha", config.prior.alpha),
                     flag("beta", config.prior.beta), flag("threads", config.threads)});
        if (!config.q_grid.empty()) {
            args.push_back(flag("q-grid", joinLevels(config.q_grid)));
        }
        if (!config.baseline_etas.empty()) {
            args.push_back(flag("baseline-etas", joinLevels(config.baseline_etas)));
        }
    } else if (inv.subcommand == "bench") {
        auto spec = inv.config.get<BenchSpec>();
        std::string ks;
        for (std::size_t i = 0; i < spec.k_values.size(); ++i) {
            ks += (i ? "," : "") + std::to_string(spec.k_values[i]);
        }
        args.insert(args.end(), {flag("replications", spec.replications), flag("m", spec.m), flag("a", spec.a),
                                 flag("q", spec.q), flag("k", ks), flag("seed", spec.seed),
                                 flag("warmup", spec.warmup), flag("memory-budget", spec.memory_budget_bytes)});
    } else if (inv.subcommand == "validate") {
        args.push_back(inv.config.value("level", std::string("quick")) == "full" ? "--full" : "--quick");
        args.push_back(flag("seed", inv.config.value("seed", std::uint64_t{1})));
    } else {
        throw InvalidInput("manifest names unknown subcommand '" + inv.subcommand + "'");
    }
    args.push_back(flag("out", inv.output_dir.string()));
    return args;
}

namespace {

void writeManifest(const Invocation& inv, const std::vector<std::string>& outputs) {
    std::ofstream out(inv.output_dir / "manifest.json");
    if (!out) {
        throw InvalidInput("cannot write manifest into '" + inv.output_dir.string() + "'");
    }
    out << manifest_of(inv, outputs).dump(2) << '\n';
}

int runSimulate(const Invocation& inv, std::ostream& out) {
    auto spec = inv.config.get<SimSpec>();
    unsigned threads = inv.settings.value("threads", 0u);
    SimData data = gen_data(spec, threads);
    csv::write_matrix(inv.output_dir / "data.csv", data.values);
    csv::write_matrix(inv.output_dir / "truth.csv", data.truth);
    {
        std::ofstream signal(inv.output_dir / "signal.csv");
        signal << "t,mu,sd_inlier,sd_outlier\n";
        for (std::size_t t = 0; t < spec.t_len; ++t) {
            signal << t << ',' << csv::format_double(data.signal.mu[t]) << ','
                   << csv::format_double(data.signal.sd_in[t]) << ',' << csv::format_double(data.signal.sd_out[t])
                   << '\n';
        }
    }
    std::size_t outliers = 0;
    for (std::size_t j = 0; j < data.truth.rows(); ++j) {
        for (auto flagged : data.truth.row(j)) {
            outliers += flagged;
        }
    }
    writeManifest(inv, {"data.csv", "truth.csv", "signal.csv"});
    out << "simulated " << spec.m << " series x " << spec.t_len << " timesteps, " << outliers << " outlier cells -> "
        << inv.output_dir.string() << '\n';
    return 0;
}

int runDetect(const Invocation& inv, std::ostream& out, std::ostream& err) {
    auto config = inv.config.get<DetectConfig>();
    auto lag = inv.settings.value("lag", std::size_t{30});
    Matrix<double> values = csv::read_matrix(inv.inputs.at("data").get<std::string>());
    if (values.cols() <= lag) {
        throw InvalidInput("data has " + std::to_string(values.cols()) + " timesteps, need more than the lag of " +
                           std::to_string(lag));
    }
    Matrix<double> scores = lagged_scores(values, config.prior, lag, config.tail, config.threads);

    std::optional<Matrix<std::uint8_t>> truth;
    if (!inv.inputs.contains("truth") || inv.inputs.at("truth").is_null()) {
        err << "warning: no --truth given; metrics.csv and diff.csv are skipped, flags are still written\n";
    } else {
        auto full = csv::read_flag_matrix(inv.inputs.at("truth").get<std::string>());
        if (full.rows() != values.rows() ||
            (full.cols() != values.cols() && full.cols() != scores.cols())) {
            throw InvalidInput("truth is " + std::to_string(full.rows()) + "x" + std::to_string(full.cols()) +
                               " but data is " + std::to_string(values.rows()) + "x" +
                               std::to_string(values.cols()));
        }
        if (full.cols() == scores.cols()) {
            truth = std::move(full);
        } else {
            // Keep only the scored timesteps.
            Matrix<std::uint8_t> sliced(full.rows(), scores.cols());
            for (std::size_t j = 0; j < full.rows(); ++j) {
                for (std::size_t c = 0; c < scores.cols(); ++c) {
                    sliced(j, c) = full(j, lag + c);
                }
            }
            truth = std::move(sliced);
        }
    }

    DetectionReport report = detect(scores, truth ? &*truth : nullptr, config, lag);
    csv::write_matrix(inv.output_dir / "scores.csv", scores, lag);
    std::vector<std::string> outputs{"scores.csv"};
    for (auto& name : metric_series(report, inv.output_dir)) {
        outputs.push_back(name);
    }
    writeManifest(inv, outputs);

    out << "scored " << report.series << " series x " << report.timesteps << " timesteps (t=" << lag << ".."
        << lag + report.timesteps - 1 << ")\n";
    for (const auto& run : report.runs) {
        std::size_t feasible = 0;
        std::size_t flagged = 0;
        for (std::size_t t = 0; t < report.timesteps; ++t) {
            feasible += run.eta_r[t].has_value();
        }
        for (std::size_t j = 0; j < report.series; ++j) {
            for (auto f : run.flags.row(j)) {
                flagged += f;
            }
        }
        out << "  " << to_string(run.method) << " level=" << csv::format_double(run.level) << " feasible=" << feasible
            << " flags=" << flagged;
        if (report.has_truth) {
            double precision = 0.0, recall = 0.0, balanced = 0.0;
            for (const auto& m : run.metrics) {
                precision += m.precision;
                recall += m.recall;
                balanced += m.balanced_accuracy;
            }
            double n = static_cast<double>(run.metrics.size());
            out << std::setprecision(4) << " mean_precision=" << precision / n << " mean_recall=" << recall / n
                << " mean_balanced_accuracy=" << balanced / n << std::setprecision(6);
        }
        out << '\n';
    }
    return 0;
}

int runBench(const Invocation& inv, std::ostream& out, std::ostream& err) {
    auto spec = inv.config.get<BenchSpec>();
    std::size_t lastDecile = 0;
    BenchReport report = run_bench(spec, [&](std::size_t done, std::size_t total) {
        std::size_t decile = done * 10 / total;
        if (decile != lastDecile) {
            lastDecile = decile;
            err << "bench: " << decile * 10 << "%\n";
        }
    });
    auto outputs = write_bench(report, inv.output_dir);
    writeManifest(inv, outputs);

    out << "method,k,runs,total_s,mean_s,sd_s,median_s,sd/mean\n";
    for (const auto& s : report.summaries) {
        out << to_string(s.method) << ',' << s.k << ',' << s.runs << ',' << s.total << ',' << s.mean << ',' << s.sd
            << ',' << s.median << ',' << s.dispersion() << '\n';
    }
    if (spec.k_values.size() >= 2) {
        for (auto method : {SelectorAlgorithm::looped, SelectorAlgorithm::vectorized}) {
            std::vector<double> ks, medians;
            for (auto k : spec.k_values) {
                ks.push_back(static_cast<double>(k));
                medians.push_back(report.find(method, k)->median);
            }
            out << to_string(method) << " log-log slope of median time vs k: " << loglog_slope(ks, medians) << '\n';
        }
    }
    out << "mismatches: " << report.mismatches << '\n';
    return 0;
}

int runValidate(const Invocation& inv, std::ostream& out) {
    auto level = inv.config.value("level", std::string("quick")) == "full" ? ValidationLevel::full
                                                                           : ValidationLevel::quick;
    auto seed = inv.config.value("seed", std::uint64_t{1});
    auto results = run_validation(level, seed, [&](const CheckResult& r) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
    });
    {
        std::ofstream csvOut(inv.output_dir / "validation.csv");
        csvOut << "check,passed,detail\n";
        for (const auto& r : results) {
            std::string detail = r.detail;
            std::replace(detail.begin(), detail.end(), ',', ';');
            csvOut << r.name << ',' << (r.passed ? 1 : 0) << ',' << detail << '\n';
        }
    }
    writeManifest(inv, {"validation.csv"});
    bool passed = std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
    return passed ? 0 : 2;
}

} // namespace

int execute(const Invocation& invocation, std::ostream& out, std::ostream& err) {
    std::error_code ec;
    fs::create_directories(invocation.output_dir, ec);
    if (ec || !fs::is_directory(invocation.output_dir)) {
        throw InvalidInput("cannot create output directory '" + invocation.output_dir.string() + "'");
    }
    if (invocation.subcommand == "simulate") {
        return runSimulate(invocation, out);
    }
    if (invocation.subcommand == "detect") {
        return runDetect(invocation, out, err);
    }
    if (invocation.subcommand == "bench") {
        return runBench(invocation, out, err);
    }
    if (invocation.subcommand == "validate") {
        return runValidate(invocation, out);
    }
    throw InvalidInput("unknown subcommand '" + invocation.subcommand + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        std::vector<std::string> effective = args;
        if (!args.empty() && args[0] == "--from-manifest") {
            if (args.size() != 2 && !(args.size() == 4 && (args[2] == "--out" || args[2] == "-o"))) {
                throw InvalidInput("usage: ppfdr --from-manifest FILE [--out DIR]");
            }
            json manifest = readJson(args[1]);
            if (args.size() == 4) {
                manifest["output_dir"] = normalized(args[3]).string();
            }
            effective = manifest_to_args(manifest);
        }
        const char* env = std::getenv(kOutputDirEnv);
        Invocation inv = parse_invocation(effective, env ? std::optional<std::string>(env) : std::nullopt);
        return execute(inv, out, err);
    } catch (const EarlyExit& early) {
        out << early.text;
        return 0;
    } catch (const CLI::ParseError& error) {
        err << "error: " << error.what() << '\n';
        return 1;
    } catch (const InvalidInput& error) {
        err << "error: " << error.what() << '\n';
        return 1;
    } catch (const CapacityError& error) {
        err << "error: " << error.what() << '\n';
        return 1;
    } catch (const PropertyFailure& error) {
        err << "property failure: " << error.what() << '\n';
        return 2;
    } catch (const std::exception& error) {
        err << "internal error: " << error.what() << '\n';
        return 2;
    }
}

} // namespace ppfdr::cli
