#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace permci {

// Enumeration, corner evaluation or similar would exceed a configured cap.
class resource_limit_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// No marginal level can bring the joint non-coverage down to the target.
class infeasible_adjustment_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Non-finite input where a finite value is required.
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// CSV / input failure, with 1-based row and column coordinates when known
// (0 means "not applicable", e.g. a missing column).
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& msg, std::size_t row = 0, std::size_t col = 0)
        : std::runtime_error(msg), row(row), col(col) {}

    std::size_t row;
    std::size_t col;
};

} // namespace permci
