#pragma once

#include <stdexcept>
#include <string>

namespace qhdlab {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Density (or |psi|^2) at or below the vacuum floor where a division by
// sqrt(rho) is required. Reaching vacuum is a detected event, never a
// silent division.
struct VacuumError : Error {
    explicit VacuumError(const std::string& msg) : Error(msg) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

} // namespace qhdlab
