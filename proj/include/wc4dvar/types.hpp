#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace wc4dvar {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Invalid configuration or mismatched dimensions.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Non-finite values produced during time integration.
class BlowupError : public std::runtime_error {
public:
    BlowupError(const std::string& msg, int step)
        : std::runtime_error(msg + " at step " + std::to_string(step)), step_(step) {}
    int step() const { return step_; }

private:
    int step_;
};

/// A matrix expected to be symmetric positive definite failed its certificate.
class NotSpdError : public std::runtime_error {
public:
    explicit NotSpdError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Breakdown inside an iterative or direct numerical routine.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw ConfigError(msg);
}

}  // namespace wc4dvar
