#pragma once

#include <stdexcept>
#include <string>

namespace tocgeo {

// Integrator failed to meet its accuracy contract (trace drift, step-halving
// disagreement). CLI maps this to exit code 3.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Bad configuration file or CLI input. CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& where, const std::string& what)
        : std::runtime_error(where + ": " + what), where_(where) {}
    const std::string& where() const { return where_; }

private:
    std::string where_;
};

}  // namespace tocgeo
