#pragma once

#include <stdexcept>
#include <string>

namespace oacm {

struct CompatibilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PositivityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when a trajectory leaves the representable range; carries the last
// valid time so callers can report where the blow-up was detected.
struct BlowupError : std::runtime_error {
    BlowupError(const std::string& what, double t_last)
        : std::runtime_error(what + " (last valid time t=" + std::to_string(t_last) + ")"),
          t(t_last) {}
    double t;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace oacm
