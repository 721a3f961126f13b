#pragma once

#include <stdexcept>

namespace memcell {

// Bad configuration, pattern, or input data. Maps to status/exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Solver or integration failure. Maps to status/exit code 2.
struct SimulationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace memcell
