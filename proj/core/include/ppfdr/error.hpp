#pragma once

#include <stdexcept>
#include <string>

namespace ppfdr {

//! Raised when an argument violates a documented precondition or type
//! invariant. The CLI maps this to exit code 1.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

//! The dense threshold search would need more memory than its budget allows.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

//! An internal correctness gate failed (e.g. two selector implementations
//! disagreeing). The CLI maps this to exit code 2.
class PropertyFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {
inline void require(bool condition, const std::string& message) {
    if (!condition) {
        throw InvalidInput(message);
    }
}
} // namespace detail

} // namespace ppfdr
