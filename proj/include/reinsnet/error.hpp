#pragma once

#include <stdexcept>
#include <string>

namespace reinsnet {

// Raised for every violated precondition or malformed input. The CLI maps it
// to exit code 2.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

inline void require(bool condition, const std::string& message) {
    if (!condition) throw ValidationError(message);
}

}  // namespace reinsnet
