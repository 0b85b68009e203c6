#pragma once

// Property suites behind `ppfdr validate`.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ppfdr {

enum class ValidationLevel {
    quick,
    full,
};

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

using CheckObserver = std::function<void(const CheckResult&)>;

std::vector<CheckResult> run_validation(ValidationLevel level, std::uint64_t seed, const CheckObserver& observer = {});

} // namespace ppfdr
