#pragma once

// Subcommand parsing and execution for the ppfdr tool. Kept out of main()
// so tests can drive the whole flag -> manifest -> flag cycle in-process.

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ppfdr::cli {

inline constexpr const char* kOutputDirEnv = "PPFDR_OUTPUT_DIR";

//! A fully resolved command: every default is filled in, so the manifest
//! written from it reproduces the run.
struct Invocation {
    std::string subcommand;
    nlohmann::json config;
    nlohmann::json inputs = nlohmann::json::object();
    nlohmann::json settings = nlohmann::json::object();
    std::filesystem::path output_dir;

    friend bool operator==(const Invocation&, const Invocation&) = default;
};

//! args excludes the program name. env_output_dir stands in for the
//! environment variable. Throws InvalidInput on bad flags or values.
Invocation parse_invocation(const std::vector<std::string>& args,
                            const std::optional<std::string>& env_output_dir = std::nullopt);

nlohmann::json manifest_of(const Invocation& invocation, const std::vector<std::string>& outputs = {});
Invocation invocation_of(const nlohmann::json& manifest);

//! Flags that parse back to the manifest's invocation.
std::vector<std::string> manifest_to_args(const nlohmann::json& manifest);

//! Expands "2^-1..2^-15", "2^-4", or a comma list of decimals.
std::vector<double> parse_level_list(const std::string& text);

//! Runs a parsed invocation and writes its outputs plus manifest.json.
//! Returns the exit code.
int execute(const Invocation& invocation, std::ostream& out, std::ostream& err);

//! Full front end: 0 success, 1 invalid input, 2 property failure.
//! Accepts "--from-manifest FILE [--out DIR]" in place of a subcommand.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ppfdr::cli
