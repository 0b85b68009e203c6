#pragma once

// Flat JSON records for the library's value types.

#include "ppfdr/bench.hpp"
#include "ppfdr/bfdr.hpp"
#include "ppfdr/pipeline.hpp"
#include "ppfdr/predictive.hpp"
#include "ppfdr/simgen.hpp"

#include <nlohmann/json.hpp>

namespace ppfdr {

void to_json(nlohmann::json& j, const NigParams& value);
void from_json(const nlohmann::json& j, NigParams& value);

void to_json(nlohmann::json& j, const StudentTPredictive& value);
void from_json(const nlohmann::json& j, StudentTPredictive& value);

//! {"eta": x|null, "index": l|null, "feasible": bool}
void to_json(nlohmann::json& j, const ThresholdResult& value);
void from_json(const nlohmann::json& j, ThresholdResult& value);

void to_json(nlohmann::json& j, const BfdrConfig& value);
void from_json(const nlohmann::json& j, BfdrConfig& value);

void to_json(nlohmann::json& j, const SimSpec& value);
void from_json(const nlohmann::json& j, SimSpec& value);

void to_json(nlohmann::json& j, const DetectConfig& value);
void from_json(const nlohmann::json& j, DetectConfig& value);

void to_json(nlohmann::json& j, const BenchSpec& value);
void from_json(const nlohmann::json& j, BenchSpec& value);

} // namespace ppfdr
