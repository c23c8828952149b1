#pragma once

#include <stdexcept>
#include <string>

namespace tfad {

// Unreadable/ill-formed input data; the CLI maps this to exit code 3.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite training loss; the CLI maps this to exit code 4.
struct DivergenceError : std::runtime_error {
    explicit DivergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tfad
