#include "ppfdr/serialization.hpp"

#include "ppfdr/error.hpp"

#include <array>

namespace ppfdr {

using nlohmann::json;

namespace {

// Missing keys keep the value already in the target, so partial records
// layer over defaults.
template <typename T>
void readIf(const json& j, const char* key, T& target) {
    if (!j.is_object()) {
        throw InvalidInput(std::string("expected a JSON object while reading '") + key + "'");
    }
    auto it = j.find(key);
    if (it != j.end() && !it->is_null()) {
        try {
            it->get_to(target);
        } catch (const json::exception& error) {
            throw InvalidInput(std::string("bad value for '") + key + "': " + error.what());
        }
    }
}

} // namespace

void to_json(json& j, const NigParams& value) {
    j = json{{"mu0", value.mu0}, {"nu", value.nu}, {"alpha", value.alpha}, {"beta", value.beta}};
}

void from_json(const json& j, NigParams& value) {
    readIf(j, "mu0", value.mu0);
    readIf(j, "nu", value.nu);
    readIf(j, "alpha", value.alpha);
    readIf(j, "beta", value.beta);
}

void to_json(json& j, const StudentTPredictive& value) {
    j = json{{"dof", value.dof}, {"loc", value.loc}, {"scale", value.scale}};
}

void from_json(const json& j, StudentTPredictive& value) {
    readIf(j, "dof", value.dof);
    readIf(j, "loc", value.loc);
    readIf(j, "scale", value.scale);
}

void to_json(json& j, const ThresholdResult& value) {
    j = json{{"eta", value.eta ? json(*value.eta) : json(nullptr)},
             {"index", value.index ? json(*value.index) : json(nullptr)},
             {"feasible", value.feasible()}};
}

void from_json(const json& j, ThresholdResult& value) {
    value = ThresholdResult::infeasible();
    if (j.contains("index") && !j.at("index").is_null()) {
        value.index = j.at("index").get<std::int64_t>();
    }
    if (j.contains("eta") && !j.at("eta").is_null()) {
        value.eta = j.at("eta").get<double>();
    }
    if (value.index.has_value() != value.eta.has_value()) {
        throw InvalidInput("threshold record must set both eta and index or neither");
    }
}

void to_json(json& j, const BfdrConfig& value) {
    j = json{{"q", value.q},
             {"a", value.a},
             {"k", value.k},
             {"algorithm", to_string(value.algorithm)},
             {"memory_budget_bytes", value.memory_budget_bytes}};
}

void from_json(const json& j, BfdrConfig& value) {
    readIf(j, "q", value.q);
    readIf(j, "a", value.a);
    readIf(j, "k", value.k);
    std::string algorithm = to_string(value.algorithm);
    readIf(j, "algorithm", algorithm);
    value.algorithm = parse_selector_algorithm(algorithm);
    readIf(j, "memory_budget_bytes", value.memory_budget_bytes);
}

void to_json(json& j, const SimSpec& value) {
    j = json{{"m", value.m},
             {"t_len", value.t_len},
             {"lag", value.lag},
             {"outlier_rate", value.outlier_rate},
             {"base_amplitude", value.mean.base_amplitude},
             {"amplitude_growth", value.mean.amplitude_growth},
             {"frequency", value.mean.frequency},
             {"sd_inlier", {value.sd_inlier.start, value.sd_inlier.end}},
             {"sd_outlier", {value.sd_outlier.start, value.sd_outlier.end}},
             {"seed", value.seed},
             {"outlier_mode", to_string(value.outlier_mode)}};
}

void from_json(const json& j, SimSpec& value) {
    readIf(j, "m", value.m);
    readIf(j, "t_len", value.t_len);
    readIf(j, "lag", value.lag);
    readIf(j, "outlier_rate", value.outlier_rate);
    readIf(j, "base_amplitude", value.mean.base_amplitude);
    readIf(j, "amplitude_growth", value.mean.amplitude_growth);
    readIf(j, "frequency", value.mean.frequency);
    std::array<double, 2> ramp{value.sd_inlier.start, value.sd_inlier.end};
    readIf(j, "sd_inlier", ramp);
    value.sd_inlier = {ramp[0], ramp[1]};
    ramp = {value.sd_outlier.start, value.sd_outlier.end};
    readIf(j, "sd_outlier", ramp);
    value.sd_outlier = {ramp[0], ramp[1]};
    readIf(j, "seed", value.seed);
    std::string mode = to_string(value.outlier_mode);
    readIf(j, "outlier_mode", mode);
    value.outlier_mode = parse_outlier_mode(mode);
}

void to_json(json& j, const DetectConfig& value) {
    j = json{{"prior", value.prior},
             {"bfdr", value.bfdr},
             {"q_grid", value.q_grid},
             {"c1", value.c1},
             {"baseline_etas", value.baseline_etas},
             {"orientation", to_string(value.orientation)},
             {"tail", value.tail == TailMode::upper ? "upper" : "two_sided"},
             {"threads", value.threads}};
}

void from_json(const json& j, DetectConfig& value) {
    readIf(j, "prior", value.prior);
    readIf(j, "bfdr", value.bfdr);
    readIf(j, "q_grid", value.q_grid);
    readIf(j, "c1", value.c1);
    readIf(j, "baseline_etas", value.baseline_etas);
    std::string orientation = to_string(value.orientation);
    readIf(j, "orientation", orientation);
    value.orientation = parse_orientation(orientation);
    std::string tail = value.tail == TailMode::upper ? "upper" : "two_sided";
    readIf(j, "tail", tail);
    if (tail == "upper") {
        value.tail = TailMode::upper;
    } else if (tail == "two_sided") {
        value.tail = TailMode::two_sided;
    } else {
        throw InvalidInput("unknown tail mode '" + tail + "' (expected upper or two_sided)");
    }
    readIf(j, "threads", value.threads);
}

void to_json(json& j, const BenchSpec& value) {
    j = json{{"replications", value.replications},
             {"m", value.m},
             {"a", value.a},
             {"q", value.q},
             {"k_values", value.k_values},
             {"seed", value.seed},
             {"warmup", value.warmup},
             {"memory_budget_bytes", value.memory_budget_bytes}};
}

void from_json(const json& j, BenchSpec& value) {
    readIf(j, "replications", value.replications);
    readIf(j, "m", value.m);
    readIf(j, "a", value.a);
    readIf(j, "q", value.q);
    readIf(j, "k_values", value.k_values);
    readIf(j, "seed", value.seed);
    readIf(j, "warmup", value.warmup);
    readIf(j, "memory_budget_bytes", value.memory_budget_bytes);
}

} // namespace ppfdr
