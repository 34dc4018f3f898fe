#pragma once

#include <stdexcept>
#include <string>

namespace vvlab {

// Maps to exit code 1 / VVLAB_ERR_CONFIG.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Maps to exit code 2 / VVLAB_ERR_BLOWUP. Carries where the integration died.
struct BlowupError : std::runtime_error {
    double t;
    double dt;
    BlowupError(double t_, double dt_)
        : std::runtime_error("non-finite field detected at t=" + std::to_string(t_) +
                             " (dt=" + std::to_string(dt_) + ")"),
          t(t_), dt(dt_) {}
};

// Maps to exit code 3 / VVLAB_ERR_IO. Carries the offending path.
struct IoError : std::runtime_error {
    std::string path;
    IoError(const std::string& what, std::string path_)
        : std::runtime_error(what + ": " + path_), path(std::move(path_)) {}
};

} // namespace vvlab
